"""
Core chain and metric validation.
"""

from .markov_core import (
    validate_chain,
    check_laziness,
    validate_metric,
    indicator_metric,
    alpha_metric,
)

__all__ = [
    'validate_chain',
    'check_laziness',
    'validate_metric',
    'indicator_metric',
    'alpha_metric',
]
