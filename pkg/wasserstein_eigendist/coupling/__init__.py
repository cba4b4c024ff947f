"""
Coupling operators: construction, symmetrization, irreducibility and simulation.
"""

from .coupling_builder import (
    extract_coupling,
    symmetrize,
    coupling_irreducible,
    invariant_partition,
    pair_irreducibility_graph,
    invariant_pair_set,
    fiber_pairs,
    marginal_error,
    eigenrelation_error,
    export_coupling,
    load_coupling,
)
from .coupled_simulation import simulate_coupled, PairSampler

__all__ = [
    'extract_coupling',
    'symmetrize',
    'coupling_irreducible',
    'invariant_partition',
    'pair_irreducibility_graph',
    'invariant_pair_set',
    'fiber_pairs',
    'marginal_error',
    'eigenrelation_error',
    'export_coupling',
    'load_coupling',
    'simulate_coupled',
    'PairSampler',
]
