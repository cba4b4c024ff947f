"""
Exact discrete optimal transport.
"""

from .network_simplex import solve_transport, verify_plan
from .vertex_enumeration import enumerate_basic_solutions, spanning_trees

__all__ = [
    'solve_transport',
    'verify_plan',
    'enumerate_basic_solutions',
    'spanning_trees',
]
