"""
Wasserstein Eigendistances

A package for computing Wasserstein eigendistances of finite Markov chains: the metrics rho
with W_p(rho) = (1 - kappa) rho, the optimal couplings they induce, and the concentration
bounds that follow from them.
"""

try:
    from _version import __version__
except ImportError:
    __version__ = "unknown"

from .models import MarkovChain, PseudoMetric, Tolerances, EigendistanceResult, CouplingOperator, Partition
from .markov_core import validate_chain, validate_metric
from .ot_solver import solve_transport
from .wasserstein_map import apply_W
from .eigendistance import iterate_F, iterate_maximal, sandwich_from_eigenfunction, verify_eigendistance
from .coupling import extract_coupling, symmetrize, coupling_irreducible
from .structure import find_lumpable_partition, quotient_chain

__all__ = [
    'MarkovChain',
    'PseudoMetric',
    'Tolerances',
    'EigendistanceResult',
    'CouplingOperator',
    'Partition',
    'validate_chain',
    'validate_metric',
    'solve_transport',
    'apply_W',
    'iterate_F',
    'iterate_maximal',
    'sandwich_from_eigenfunction',
    'verify_eigendistance',
    'extract_coupling',
    'symmetrize',
    'coupling_irreducible',
    'find_lumpable_partition',
    'quotient_chain',
]
