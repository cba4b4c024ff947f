"""
Chain families with closed-form eigendistances.
"""

from .example_chains import (
    lazy_torus,
    rho_L,
    kappa_L,
    parity_metric,
    kappa_parity,
    kappa_parity_remark,
    spin_flip,
    weighted_hamming,
    hamming,
    gamblers_ruin,
    harmonic_h,
    ruin_tau_comparison,
    random_lazy_chain,
    random_metric,
    build_example,
)

__all__ = [
    'lazy_torus',
    'rho_L',
    'kappa_L',
    'parity_metric',
    'kappa_parity',
    'kappa_parity_remark',
    'spin_flip',
    'weighted_hamming',
    'hamming',
    'gamblers_ruin',
    'harmonic_h',
    'ruin_tau_comparison',
    'random_lazy_chain',
    'random_metric',
    'build_example',
]
