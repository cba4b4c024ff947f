"""
Eigendistance fixed-point solvers and checks.
"""

from .eigendistance_solver import (
    lambda_scale,
    iterate_F,
    iterate_maximal,
    eigenfunction_bracket,
    sandwich_from_eigenfunction,
    verify_eigendistance,
    result_from_metric,
    p_root_transfer,
)

__all__ = [
    'lambda_scale',
    'iterate_F',
    'iterate_maximal',
    'eigenfunction_bracket',
    'sandwich_from_eigenfunction',
    'verify_eigendistance',
    'result_from_metric',
    'p_root_transfer',
]
