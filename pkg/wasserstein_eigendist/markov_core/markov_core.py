"""
Validation of transition matrices and distance matrices, plus the metrics every
computation starts from (the discrete metric and the alpha metric).
"""

import logging
import warnings
from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions import (
    LazinessWarning,
    NegativeEntry,
    NotSquare,
    RowSumViolation,
    ValidationError,
    AsymmetryError,
    NonzeroDiagonal,
    TriangleViolation,
)
from ..models import MarkovChain, PseudoMetric

logger = logging.getLogger(__name__)

ROW_SUM_TOL = 1e-12
ENTRY_TOL = 1e-12
DEFAULT_METRIC_TOL = 1e-9


def _as_square(matrix) -> np.ndarray:
    try:
        array = np.asarray(matrix, dtype=float)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"Matrix is not a rectangular array of numbers: {e}") from e
    if array.ndim != 2 or array.shape[0] != array.shape[1] or array.shape[0] < 1:
        raise NotSquare(array.shape)
    if not np.all(np.isfinite(array)):
        raise ValidationError("Matrix contains non-finite entries")
    return array


def validate_chain(matrix, labels: Optional[Sequence[str]] = None) -> MarkovChain:
    """
    Build a MarkovChain after checking that the matrix is row-stochastic.

    Args:
        matrix: n x n transition probabilities, row x is the law P^x
        labels: optional state names (defaults to "0".."n-1")

    Returns:
        MarkovChain

    Raises:
        NotSquare, NegativeEntry, RowSumViolation
    """
    array = _as_square(matrix)
    n = array.shape[0]

    bad = np.argwhere((array < -ENTRY_TOL) | (array > 1.0 + ENTRY_TOL))
    if bad.size:
        row, col = (int(v) for v in bad[0])
        if array[row, col] < 0:
            raise NegativeEntry(row, col, float(array[row, col]))
        raise ValidationError(f"Entry {array[row, col]!r} at ({row}, {col}) exceeds 1")

    deviation = array.sum(axis=1) - 1.0
    worst = int(np.argmax(np.abs(deviation)))
    if abs(deviation[worst]) > ROW_SUM_TOL:
        raise RowSumViolation(worst, float(deviation[worst]))

    if labels is not None and len(labels) not in (0, n):
        raise ValidationError(f"Got {len(labels)} labels for {n} states")

    return MarkovChain(matrix=np.clip(array, 0.0, 1.0), labels=list(labels or []))


def check_laziness(chain: MarkovChain, warn: bool = True) -> Tuple[bool, float]:
    """
    Check the sufficient non-degeneracy condition min_x P(x,x) > 1/2.

    The check is advisory: a failing chain triggers a LazinessWarning and computations proceed.

    Returns:
        (holds, min_selfloop)
    """
    min_selfloop = float(np.min(np.diag(chain.matrix)))
    holds = min_selfloop > 0.5
    if not holds and warn:
        warnings.warn(
            f"min self-loop probability {min_selfloop:.6g} is not above 1/2; "
            "fixed-point iterations may collapse to the zero metric",
            LazinessWarning,
            stacklevel=2,
        )
    return holds, min_selfloop


def validate_metric(matrix, metric_tol: float = DEFAULT_METRIC_TOL) -> PseudoMetric:
    """
    Build a PseudoMetric after checking symmetry, zero diagonal, nonnegativity and the
    triangle inequality.

    The triangle slack is relative: metric_tol times the largest entry.

    Raises:
        NotSquare, NegativeEntry, NonzeroDiagonal, AsymmetryError, TriangleViolation
    """
    d = _as_square(matrix)
    n = d.shape[0]
    top = float(d.max()) if d.size else 0.0
    slack = metric_tol * max(top, 0.0)
    absolute = max(slack, ENTRY_TOL)

    negative = np.argwhere(d < 0)
    if negative.size:
        row, col = (int(v) for v in negative[0])
        raise NegativeEntry(row, col, float(d[row, col]))

    diag = np.abs(np.diag(d))
    if diag.max() > absolute:
        x = int(np.argmax(diag))
        raise NonzeroDiagonal(x, float(d[x, x]))

    asym = np.abs(d - d.T)
    if asym.max() > absolute:
        x, y = (int(v) for v in np.unravel_index(np.argmax(asym), asym.shape))
        raise AsymmetryError(min(x, y), max(x, y), float(asym[x, y]))

    if n >= 3:
        # through[x, z, y] = d(x,z) + d(z,y)
        through = d[:, :, None] + d[None, :, :]
        excess = d[:, None, :] - through
        worst = float(excess.max())
        if worst > slack:
            x, z, y = (int(v) for v in np.unravel_index(np.argmax(excess), excess.shape))
            raise TriangleViolation((x, z, y), worst)

    clean = 0.5 * (d + d.T)
    np.fill_diagonal(clean, 0.0)
    return PseudoMetric(clean)


def indicator_metric(n: int) -> PseudoMetric:
    """The discrete metric 1_{x != y}."""
    return PseudoMetric(1.0 - np.eye(n))


def alpha_metric(chain: MarkovChain) -> PseudoMetric:
    """
    alpha(x,y) = 1 - sum_z min(P(x,z), P(y,z)), one minus the overlap of the two rows.

    This is the image of the discrete metric under W_1.
    """
    P = chain.matrix
    overlap = np.minimum(P[:, None, :], P[None, :, :]).sum(axis=2)
    alpha = np.clip(1.0 - overlap, 0.0, None)
    alpha = 0.5 * (alpha + alpha.T)
    np.fill_diagonal(alpha, 0.0)
    return PseudoMetric(alpha)
