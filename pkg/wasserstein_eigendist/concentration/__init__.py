"""
Concentration of Lipschitz functions and of the distance along the coupling.
"""

from .concentration_bounds import (
    lipschitz_norm,
    contraction_check,
    jump_bound,
    sigma_moments,
    concentration_params,
    exp_moment_bound,
    distance_exp_moment_bound,
    bernstein_tail,
    function_tail_bound,
    function_tail_scale,
    distance_tail_bound,
)
from .tail_simulation import (
    sample_endpoints,
    simulate_function_tail,
    simulate_distance_tail,
    empirical_log_mgf,
)

__all__ = [
    'lipschitz_norm',
    'contraction_check',
    'jump_bound',
    'sigma_moments',
    'concentration_params',
    'exp_moment_bound',
    'distance_exp_moment_bound',
    'bernstein_tail',
    'function_tail_bound',
    'function_tail_scale',
    'distance_tail_bound',
    'sample_endpoints',
    'simulate_function_tail',
    'simulate_distance_tail',
    'empirical_log_mgf',
]
