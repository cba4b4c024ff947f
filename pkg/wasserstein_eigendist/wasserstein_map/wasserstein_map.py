"""
The operator W_p on pseudo-metrics.

W_p(rho)(x, y) is the p-Wasserstein distance between the rows P^x and P^y when the
ground cost is rho^p. Only unordered pairs x < y are solved; the output is
symmetric by construction and its triangle inequality is checked, not imposed.
"""

import logging
from typing import Optional, Sequence, Tuple

import numpy as np

from ..exceptions import PairSolveError, SolverError, ValidationError
from ..markov_core import alpha_metric, validate_metric
from ..models import MarkovChain, PseudoMetric, Tolerances, TransportInstance, WpResult
from ..ot_solver import solve_transport
from ..utils import ordered_map

logger = logging.getLogger(__name__)


def _check_inputs(chain: MarkovChain, rho: PseudoMetric, p: float) -> None:
    if rho.n != chain.n:
        raise ValidationError(f"Metric has {rho.n} states, chain has {chain.n}")
    if not p >= 1.0:
        raise ValidationError(f"Exponent p must be at least 1, got {p!r}")


def apply_W(
    chain: MarkovChain,
    rho: PseudoMetric,
    p: float = 1.0,
    keep_plans: bool = False,
    tolerances: Optional[Tolerances] = None,
    workers: Optional[int] = None,
) -> WpResult:
    """
    Evaluate W_p(rho) for every pair of states.

    Args:
        chain: the Markov chain
        rho: the ground pseudo-metric
        p: Wasserstein exponent, at least 1
        keep_plans: store the optimal plan of every pair x < y
        tolerances: metric_tol is used for the triangle check of the output
        workers: thread count for the per-pair solves (EIGENDIST_THREADS by default)

    Returns:
        WpResult

    Raises:
        PairSolveError: a transport solve failed, the pair is attached
        TriangleViolation: the output is not a pseudo-metric within metric_tol
    """
    _check_inputs(chain, rho, p)
    tolerances = tolerances or Tolerances()
    n = chain.n
    P = chain.matrix
    cost = np.power(rho.matrix, p)
    pairs = [(x, y) for x in range(n) for y in range(x + 1, n)]

    def solve(pair: Tuple[int, int]):
        x, y = pair
        try:
            return solve_transport(TransportInstance(P[x], P[y], cost))
        except SolverError as e:
            raise PairSolveError(pair, e) from e

    plans = ordered_map(solve, pairs, workers)

    out = np.zeros((n, n))
    for (x, y), plan in zip(pairs, plans):
        out[x, y] = out[y, x] = max(plan.value, 0.0) ** (1.0 / p)

    metric = validate_metric(out, tolerances.metric_tol)
    logger.debug("Applied W_%g to a %d-state metric (%d pairs)", p, n, len(pairs))
    return WpResult(
        metric=metric,
        p=p,
        plans=dict(zip(pairs, plans)) if keep_plans else None,
    )


def pair_lipschitz_check(
    chain: MarkovChain,
    rho: PseudoMetric,
    p: float = 1.0,
    samples: int = 200,
    seed: int = 0,
    quadruples: Optional[Sequence[Tuple[int, int, int, int]]] = None,
) -> float:
    """
    Largest excess of |W_p(rho)^p(x1,y1) - W_p(rho)^p(x2,y2)| over alpha(x1,x2) + alpha(y1,y2).

    Quadruples are drawn uniformly from the seed unless given explicitly. A value at
    or below zero means the bound holds on every quadruple.
    """
    _check_inputs(chain, rho, p)
    if rho.max_entry > 1.0 + 1e-12:
        raise ValidationError("pair_lipschitz_check needs rho bounded by 1; rescale it first")

    W = np.power(apply_W(chain, rho, p).metric.matrix, p)
    alpha = alpha_metric(chain).matrix
    if quadruples is None:
        rng = np.random.default_rng(seed)
        quads = rng.integers(0, chain.n, size=(samples, 4))
    else:
        quads = np.asarray(quadruples, dtype=int).reshape(-1, 4)
    x1, y1, x2, y2 = quads.T
    excess = np.abs(W[x1, y1] - W[x2, y2]) - (alpha[x1, x2] + alpha[y1, y2])
    return float(excess.max())


def coarse_ricci_curvature(chain: MarkovChain, rho: PseudoMetric, p: float = 1.0) -> np.ndarray:
    """
    Pairwise curvature kappa(x,y) = 1 - W_p(rho)(x,y) / rho(x,y).

    Entries where rho vanishes (the diagonal included) are NaN. The matrix is constant
    off the zero set exactly when rho is an eigendistance.
    """
    W = apply_W(chain, rho, p).metric.matrix
    d = rho.matrix
    positive = d > 1e-12 * max(rho.max_entry, 0.0)
    kappa = np.full(d.shape, np.nan)
    kappa[positive] = 1.0 - W[positive] / d[positive]
    return kappa


def sup_contraction_gap(chain: MarkovChain, rho1: PseudoMetric, rho2: PseudoMetric, p: float = 1.0) -> float:
    """||W_p(rho1)^p - W_p(rho2)^p||_inf - ||rho1^p - rho2^p||_inf, nonpositive up to solver precision."""
    image1 = np.power(apply_W(chain, rho1, p).metric.matrix, p)
    image2 = np.power(apply_W(chain, rho2, p).metric.matrix, p)
    before = np.abs(np.power(rho1.matrix, p) - np.power(rho2.matrix, p)).max()
    after = np.abs(image1 - image2).max()
    return float(after - before)
