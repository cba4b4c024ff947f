"""
Monte Carlo harness comparing empirical tails with the concentration bounds.

Expectations E_x f(X_T) are computed exactly by matrix powers; only the tail
frequencies are sampled.
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from ..coupling import simulate_coupled
from ..exceptions import ConcentrationError, ValidationError
from ..models import CouplingOperator, MarkovChain, PseudoMetric, TailReport
from ..utils import ordered_map
from .concentration_bounds import (
    distance_tail_bound,
    function_tail_bound,
    function_tail_scale,
    jump_bound,
    lipschitz_norm,
)

logger = logging.getLogger(__name__)

CHUNK_SIZE = 10_000
DEFAULT_R_GRID = tuple(np.arange(1, 11) * 0.5)
POSITIVE_DEVIATION = 1e-12


def _endpoint_chunk(cumulative: np.ndarray, x0: int, T: int, size: int, seed_seq) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    n = cumulative.shape[0]
    states = np.full(size, x0, dtype=np.int64)
    for _ in range(T):
        u = rng.random(size)
        states = np.minimum((u[:, None] >= cumulative[states]).sum(axis=1), n - 1)
    return states


def sample_endpoints(chain: MarkovChain, x0: int, T: int, samples: int, seed: int = 0,
                     workers: Optional[int] = None) -> np.ndarray:
    """States X_T of independent runs from x0; chunked seeds keep results thread-count independent."""
    if T < 0 or samples < 1:
        raise ValidationError("T must be nonnegative and samples positive")
    if not 0 <= x0 < chain.n:
        raise ValidationError(f"Start state {x0} is outside the {chain.n} states")
    cumulative = np.cumsum(chain.matrix, axis=1)
    sizes = [min(CHUNK_SIZE, samples - offset) for offset in range(0, samples, CHUNK_SIZE)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))
    chunks = ordered_map(
        lambda job: _endpoint_chunk(cumulative, x0, T, job[0], job[1]),
        list(zip(sizes, seeds)),
        workers,
    )
    return np.concatenate(chunks)


def _exceedance(deviations: np.ndarray, thresholds: np.ndarray):
    freq = (deviations[None, :] > thresholds[:, None]).mean(axis=1)
    stderr = np.sqrt(freq * (1.0 - freq) / deviations.size)
    return freq, stderr


def simulate_function_tail(
    chain: MarkovChain,
    f,
    rho: PseudoMetric,
    kappa: float,
    x0: int,
    T: int,
    samples: int,
    seed: int = 0,
    r_grid: Optional[Sequence[float]] = None,
    strict: bool = True,
    workers: Optional[int] = None,
) -> TailReport:
    """
    Empirical P_x(f(X_T) - E_x f(X_T) > r * scale) next to function_tail_bound.

    Raises:
        ValidationError: f is not rho-Lipschitz
        ConcentrationError: strict and the bound plus four standard errors is exceeded
    """
    f = np.asarray(f, dtype=float)
    lip = lipschitz_norm(f, rho)
    if not math.isfinite(lip):
        raise ValidationError("f separates states at rho-distance zero")
    J = jump_bound(chain, rho)
    r = np.asarray(r_grid if r_grid is not None else DEFAULT_R_GRID, dtype=float)

    exact_mean = float(chain.apply(f, T)[x0])
    endpoints = sample_endpoints(chain, x0, T, samples, seed, workers)
    deviations = f[endpoints] - exact_mean
    scale = function_tail_scale(lip, J, kappa, T)
    thresholds = r * scale if scale > 0 else np.full_like(r, POSITIVE_DEVIATION)
    empirical, stderr = _exceedance(deviations, thresholds)
    bound = np.array([function_tail_bound(lip, J, kappa, T, value) for value in r])

    report = TailReport(
        r=r, empirical=empirical, bound=bound, mc_stderr=stderr,
        extra={'T': T, 'x0': x0, 'lip_norm': lip, 'J': J, 'kappa': kappa,
               'exact_mean': exact_mean, 'sample_mean': float(f[endpoints].mean())},
    )
    _check_domination(report, strict, "function")
    return report


def simulate_distance_tail(
    chain: MarkovChain,
    coupling: CouplingOperator,
    x0: int,
    y0: int,
    T: int,
    samples: int,
    seed: int = 0,
    r_grid: Optional[Sequence[float]] = None,
    strict: bool = True,
    workers: Optional[int] = None,
) -> TailReport:
    """
    Empirical P(|rho(X_T,Y_T) - (1-kappa)^T rho(x0,y0)| >= J r) along the coupling,
    next to distance_tail_bound. Both the closed-form centering and the sample mean
    of rho(X_T,Y_T) are reported.
    """
    if coupling.p != 1.0:
        raise ValidationError("Distance tails are stated for p = 1 couplings")
    rho = coupling.rho
    J = jump_bound(chain, rho)
    r = np.asarray(r_grid if r_grid is not None else DEFAULT_R_GRID, dtype=float)
    kappa = coupling.kappa

    simulation = simulate_coupled(coupling, x0, y0, T, samples, seed, workers=workers)
    center = (1.0 - kappa) ** T * float(rho.matrix[x0, y0])
    deviations = np.abs(simulation.final_rho - center)
    thresholds = r * J if J > 0 else np.full_like(r, POSITIVE_DEVIATION)
    # the event is |.| >= J r; compare against a slightly lowered threshold
    empirical, stderr = _exceedance(deviations, thresholds * (1.0 - 1e-12) - 1e-15)
    bound = np.array([distance_tail_bound(J, kappa, T, value) for value in r])

    report = TailReport(
        r=r, empirical=empirical, bound=bound, mc_stderr=stderr,
        extra={'T': T, 'x0': x0, 'y0': y0, 'J': J, 'kappa': kappa,
               'center_formula': center, 'center_sample': float(simulation.final_rho.mean())},
    )
    _check_domination(report, strict, "distance")
    return report


def _check_domination(report: TailReport, strict: bool, kind: str) -> None:
    if report.dominated:
        logger.debug("Empirical %s tail is dominated by the bound", kind)
        return
    message = f"Empirical {kind} tail exceeds the bound by more than four standard errors"
    if strict:
        raise ConcentrationError(message)
    logger.warning(message)


def empirical_log_mgf(chain: MarkovChain, f, x0: int, T: int, samples: int, seed: int = 0,
                      lam: float = 1.0, workers: Optional[int] = None) -> float:
    """Monte Carlo estimate of log E_x exp(lam (f(X_T) - E_x f(X_T)))."""
    f = np.asarray(f, dtype=float)
    exact_mean = float(chain.apply(f, T)[x0])
    endpoints = sample_endpoints(chain, x0, T, samples, seed, workers)
    exponents = lam * (f[endpoints] - exact_mean)
    top = exponents.max()
    return float(top + np.log(np.mean(np.exp(exponents - top))))
