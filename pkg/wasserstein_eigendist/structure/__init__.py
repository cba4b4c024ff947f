"""
Lumpability, quotient chains and product constructions.
"""

from .lumpability import (
    is_lumpable,
    lumpability_deviation,
    find_lumpable_partition,
    enumerate_lumpable_partitions,
    coarsest_lumpable_refinement,
    quotient_chain,
    zero_set_partition,
)
from .product_chains import product_chain, tensor_metric, projection_partition

__all__ = [
    'is_lumpable',
    'lumpability_deviation',
    'find_lumpable_partition',
    'enumerate_lumpable_partitions',
    'coarsest_lumpable_refinement',
    'quotient_chain',
    'zero_set_partition',
    'product_chain',
    'tensor_metric',
    'projection_partition',
]
