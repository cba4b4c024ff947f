"""
The Wasserstein operator on pseudo-metrics.
"""

from .wasserstein_map import apply_W, pair_lipschitz_check, coarse_ricci_curvature, sup_contraction_gap

__all__ = [
    'apply_W',
    'pair_lipschitz_check',
    'coarse_ricci_curvature',
    'sup_contraction_gap',
]
