"""
Fixed-point computations for Wasserstein eigendistances.

An eigendistance is a pseudo-metric rho with W_p(rho) = (1 - kappa) rho. Three
iterations are provided:

- iterate_F: the normalized iteration rho -> W_p(rho / lambda(rho)), where lambda is
  the largest ratio of rho against a reference metric
- iterate_maximal: plain iteration of W_p from the discrete metric, which decreases to
  the largest fixed point with kappa = 0 (possibly the zero metric)
- sandwich_from_eigenfunction: iteration of lambda^{-1/p} W_p inside the bracket built
  from a nonnegative eigenfunction h of P
"""

import dataclasses
import logging
import warnings
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import (
    DegenerateInput,
    DegenerateLimit,
    InvalidReference,
    MonotonicityViolation,
    NotAnEigenfunction,
    ParameterWarning,
    SandwichViolation,
    ValidationError,
    VerificationFailure,
    ZeroSetViolation,
)
from ..markov_core import check_laziness, indicator_metric
from ..models import EigenCheck, EigendistanceResult, MarkovChain, PseudoMetric, Tolerances
from ..wasserstein_map import apply_W

logger = logging.getLogger(__name__)

COLLAPSE_TOL = 1e-12
ZERO_LIMIT_TOL = 1e-8
POSITIVE_REL_TOL = 1e-12
EIGENFUNCTION_TOL = 1e-10


def _offdiag(n: int) -> np.ndarray:
    return ~np.eye(n, dtype=bool)


def _worst_pair(values: np.ndarray) -> Tuple[int, int]:
    x, y = np.unravel_index(int(np.argmax(values)), values.shape)
    return (int(min(x, y)), int(max(x, y)))


def _image(chain, rho, p, tolerances, workers) -> np.ndarray:
    return apply_W(chain, rho, p, tolerances=tolerances, workers=workers).metric.matrix


def lambda_scale(rho: PseudoMetric, reference: PseudoMetric) -> float:
    """
    Largest ratio rho(x,y) / reference(x,y) over off-diagonal pairs where the reference is positive.

    Raises:
        DegenerateInput: rho vanishes on every pair the reference charges
        InvalidReference: rho is positive somewhere the reference vanishes
    """
    if rho.n != reference.n:
        raise ValidationError(f"Metric has {rho.n} states, reference has {reference.n}")
    d, ref = rho.matrix, reference.matrix
    off = _offdiag(rho.n)
    charged = off & (ref > 0)
    uncharged = off & ~(ref > 0)
    if np.any(d[uncharged] > POSITIVE_REL_TOL * max(rho.max_entry, 0.0)):
        raise InvalidReference("Metric is positive on a pair where the reference vanishes")
    if not charged.any() or not np.any(d[charged] > 0):
        raise DegenerateInput("Metric vanishes on every pair charged by the reference")
    return float((d[charged] / ref[charged]).max())


def _finish(chain, raw: np.ndarray, p, tolerances, workers, **fields) -> EigendistanceResult:
    """Normalize a raw fixed point to max 1 and measure kappa and the residual there."""
    scale = float(raw.max())
    rho = PseudoMetric(raw / scale)
    image = _image(chain, rho, p, tolerances, workers)
    kappa = fields.pop('kappa', None)
    if kappa is None:
        kappa = 1.0 - float(image.max())
    residual = float(np.abs(image - (1.0 - kappa) * rho.matrix).max())
    return EigendistanceResult(rho=rho, kappa=kappa, p=p, residual=residual, scale=scale, **fields)


def iterate_F(
    chain: MarkovChain,
    p: float = 1.0,
    init: Optional[PseudoMetric] = None,
    reference: Optional[PseudoMetric] = None,
    tolerances: Optional[Tolerances] = None,
    workers: Optional[int] = None,
) -> EigendistanceResult:
    """
    Iterate rho_{k+1} = W_p(rho_k / lambda(rho_k)) until the sup-norm change is at most fp_tol.

    The map is scale invariant, so init only matters up to a positive factor.

    Args:
        chain: the Markov chain
        p: Wasserstein exponent
        init: starting metric (discrete metric by default)
        reference: metric defining lambda; must satisfy W_p(reference) <= reference
        tolerances: fp_tol, max_iter and metric_tol are used
        workers: thread count for apply_W

    Returns:
        EigendistanceResult, with converged=False when max_iter was reached

    Raises:
        DegenerateInput: init is the zero metric
        InvalidReference: reference is not a supersolution of W_p
        DegenerateLimit: the iterates collapsed to zero
    """
    tolerances = tolerances or Tolerances()
    n = chain.n
    check_laziness(chain)
    init = init or indicator_metric(n)
    if reference is None:
        reference = indicator_metric(n)
    else:
        excess = _image(chain, reference, p, tolerances, workers) - reference.matrix
        if excess.max() > tolerances.metric_tol * max(reference.max_entry, 1.0):
            raise InvalidReference(
                f"W_p(reference) exceeds the reference by {excess.max():.3e} at pair {_worst_pair(excess)}"
            )
    if init.is_degenerate:
        raise DegenerateInput("Initial metric is identically zero")
    if n < 2:
        raise DegenerateInput("A single-state chain has no nonzero metric")

    rho = init.scaled(1.0 / lambda_scale(init, reference))
    trace: List[float] = []
    converged = False
    iteration = 0
    for iteration in range(1, tolerances.max_iter + 1):
        try:
            scale = lambda_scale(rho, reference)
        except DegenerateInput:
            scale = 0.0
        if scale < COLLAPSE_TOL:
            raise DegenerateLimit(iteration, scale)
        image = apply_W(chain, rho.scaled(1.0 / scale), p, tolerances=tolerances, workers=workers).metric
        change = float(np.abs(image.matrix - rho.matrix).max())
        trace.append(change)
        logger.debug("F iteration %d: lambda=%.12g change=%.3e", iteration, scale, change)
        rho = image
        if change <= tolerances.fp_tol:
            converged = True
            break

    if rho.is_degenerate:
        raise DegenerateLimit(iteration, 0.0)
    if converged:
        logger.info("F iteration converged after %d steps", iteration)
    else:
        logger.warning("F iteration did not converge within %d steps (last change %.3e)",
                       tolerances.max_iter, trace[-1] if trace else float('nan'))
    return _finish(chain, rho.matrix, p, tolerances, workers,
                   iterations=iteration, converged=converged, trace=trace, method="F")


def iterate_maximal(
    chain: MarkovChain,
    p: float = 1.0,
    tolerances: Optional[Tolerances] = None,
    workers: Optional[int] = None,
) -> EigendistanceResult:
    """
    Iterate rho_{k+1} = W_p(rho_k) from the discrete metric without normalization.

    The sequence is non-increasing and converges to the maximal fixed point of W_p.
    A limit at or below 1e-8 is reported with degenerate=True.

    Raises:
        MonotonicityViolation: an iterate increased by more than ot_tol
    """
    tolerances = tolerances or Tolerances()
    n = chain.n
    rho = indicator_metric(n)
    trace: List[float] = []
    converged = False
    iteration = 0
    for iteration in range(1, tolerances.max_iter + 1):
        image = apply_W(chain, rho, p, tolerances=tolerances, workers=workers).metric
        difference = image.matrix - rho.matrix
        if difference.max() > tolerances.ot_tol:
            raise MonotonicityViolation(iteration, _worst_pair(difference), float(difference.max()))
        change = float(np.abs(difference).max())
        trace.append(change)
        logger.debug("Maximal iteration %d: max=%.12g change=%.3e", iteration, image.max_entry, change)
        rho = image
        if change <= tolerances.fp_tol:
            converged = True
            break

    if not converged:
        logger.warning("Maximal iteration did not converge within %d steps", tolerances.max_iter)

    top = rho.max_entry
    if top <= ZERO_LIMIT_TOL:
        logger.info("Maximal fixed point is the zero metric (max entry %.3e)", top)
        return EigendistanceResult(
            rho=PseudoMetric(np.zeros((n, n))), kappa=0.0, p=p, residual=0.0,
            iterations=iteration, converged=converged, trace=trace,
            scale=top, degenerate=True, method="maximal",
        )
    return _finish(chain, rho.matrix, p, tolerances, workers, kappa=0.0,
                   iterations=iteration, converged=converged, trace=trace, method="maximal")


def eigenfunction_bracket(h: np.ndarray, p: float = 1.0) -> Tuple[PseudoMetric, PseudoMetric]:
    """Lower and upper bracket |h(x)-h(y)|^{1/p} and 1_{x!=y} (h(x)+h(y))^{1/p}."""
    h = np.asarray(h, dtype=float)
    lower = np.power(np.abs(h[:, None] - h[None, :]), 1.0 / p)
    upper = np.power(h[:, None] + h[None, :], 1.0 / p)
    np.fill_diagonal(upper, 0.0)
    return PseudoMetric(lower), PseudoMetric(upper)


def sandwich_from_eigenfunction(
    chain: MarkovChain,
    h,
    lambda_eig: float,
    p: float = 1.0,
    tolerances: Optional[Tolerances] = None,
    workers: Optional[int] = None,
) -> EigendistanceResult:
    """
    Eigendistance bracketed by a nonnegative eigenfunction P h = lambda h.

    Iterates rho -> lambda^{-1/p} W_p(rho) from the upper bracket; the iterates decrease
    and stay above the lower bracket. The limit has curvature 1 - lambda^{1/p}.
    A constant h gives an empty lower bracket and falls back to iterate_F with the
    upper bracket as reference.

    Raises:
        NotAnEigenfunction: h is negative, identically zero or not an eigenfunction
        SandwichViolation: an iterate left the bracket
    """
    tolerances = tolerances or Tolerances()
    h = np.asarray(h, dtype=float)
    if h.shape != (chain.n,):
        raise NotAnEigenfunction(f"h has shape {h.shape}, expected ({chain.n},)")
    if np.any(h < 0):
        raise NotAnEigenfunction(f"h must be nonnegative, min is {h.min():.3e}")
    if not np.any(h > 0):
        raise NotAnEigenfunction("h is identically zero")
    if not lambda_eig > 0:
        raise NotAnEigenfunction(f"Eigenvalue must be positive, got {lambda_eig!r}")
    miss = float(np.abs(chain.matrix @ h - lambda_eig * h).max())
    if miss > EIGENFUNCTION_TOL:
        raise NotAnEigenfunction(f"||P h - lambda h|| = {miss:.3e} exceeds {EIGENFUNCTION_TOL:.0e}")

    lower, upper = eigenfunction_bracket(h, p)
    if lower.max_entry <= POSITIVE_REL_TOL * upper.max_entry:
        warnings.warn("Constant eigenfunction gives an empty lower bracket; using the F iteration",
                      ParameterWarning, stacklevel=2)
        result = iterate_F(chain, p, init=upper, reference=upper, tolerances=tolerances, workers=workers)
        return dataclasses.replace(result, method="sandwich")

    factor = lambda_eig ** (-1.0 / p)
    gap_tol = max(tolerances.ot_tol, tolerances.metric_tol * upper.max_entry)
    rho = upper
    trace: List[float] = []
    converged = False
    iteration = 0
    for iteration in range(1, tolerances.max_iter + 1):
        image = apply_W(chain, rho, p, tolerances=tolerances, workers=workers).metric.scaled(factor)
        below = lower.matrix - image.matrix
        if below.max() > gap_tol:
            raise SandwichViolation(iteration, _worst_pair(below), float(below.max()))
        above = image.matrix - rho.matrix
        if above.max() > gap_tol:
            raise SandwichViolation(iteration, _worst_pair(above), float(above.max()))
        change = float(np.abs(above).max())
        trace.append(change)
        logger.debug("Sandwich iteration %d: change=%.3e", iteration, change)
        rho = image
        if change <= tolerances.fp_tol:
            converged = True
            break

    if not converged:
        logger.warning("Sandwich iteration did not converge within %d steps", tolerances.max_iter)
    kappa = 1.0 - lambda_eig ** (1.0 / p)
    return _finish(chain, rho.matrix, p, tolerances, workers, kappa=kappa,
                   iterations=iteration, converged=converged, trace=trace, method="sandwich")


def verify_eigendistance(
    chain: MarkovChain,
    rho: PseudoMetric,
    p: float = 1.0,
    tolerances: Optional[Tolerances] = None,
    workers: Optional[int] = None,
) -> EigenCheck:
    """
    Measure how well rho satisfies W_p(rho) = (1 - kappa) rho.

    kappa_hat comes from the largest ratio W_p(rho)/rho over pairs with
    rho > 1e-12 * max; the zero set of rho is checked separately.

    Raises:
        DegenerateInput: rho is identically zero
        ZeroSetViolation: W_p(rho) is positive where rho vanishes
    """
    tolerances = tolerances or Tolerances()
    if rho.is_degenerate:
        raise DegenerateInput("Cannot verify the zero metric")
    d = rho.matrix
    image = _image(chain, rho, p, tolerances, workers)
    off = _offdiag(rho.n)
    positive = off & (d > POSITIVE_REL_TOL * rho.max_entry)
    zero = off & ~positive

    zero_set_max = float(image[zero].max()) if zero.any() else 0.0
    if zero_set_max > tolerances.ot_tol:
        masked = np.where(zero, image, -np.inf)
        raise ZeroSetViolation(_worst_pair(masked), zero_set_max)

    kappa_hat = 1.0 - float((image[positive] / d[positive]).max())
    residual = float(np.abs(image - (1.0 - kappa_hat) * d).max())
    return EigenCheck(kappa_hat=kappa_hat, residual=residual, zero_set_max=zero_set_max)


def result_from_metric(
    chain: MarkovChain,
    rho: PseudoMetric,
    p: float = 1.0,
    tolerances: Optional[Tolerances] = None,
) -> EigendistanceResult:
    """Wrap a known eigendistance (a closed form, say) as a normalized result."""
    check = verify_eigendistance(chain, rho, p, tolerances)
    scale = rho.max_entry
    return EigendistanceResult(
        rho=rho.normalized(), kappa=check.kappa_hat, p=p, residual=check.residual / scale,
        iterations=0, converged=True, scale=scale, method="verified",
    )


def p_root_transfer(
    chain: MarkovChain,
    result: EigendistanceResult,
    p: float,
    tolerances: Optional[Tolerances] = None,
    workers: Optional[int] = None,
) -> EigendistanceResult:
    """
    Turn an eigendistance at p = 1 into one at exponent p.

    rho^{1/p} satisfies W_p(rho^{1/p}) = (1 - kappa)^{1/p} rho^{1/p}, so the new curvature
    is 1 - (1 - kappa)^{1/p}. The relation is checked against residual_tol.

    Raises:
        ValidationError: result was not computed at p = 1
        VerificationFailure: the transferred relation misses residual_tol
    """
    tolerances = tolerances or Tolerances()
    if result.p != 1.0:
        raise ValidationError(f"p_root_transfer starts from a p = 1 eigendistance, got p = {result.p}")
    if not p >= 1.0:
        raise ValidationError(f"Exponent p must be at least 1, got {p!r}")
    if result.degenerate or result.rho.is_degenerate:
        raise DegenerateInput("Cannot transfer the zero metric")

    rho_p = result.rho.power(1.0 / p)
    kappa_p = 1.0 - (1.0 - result.kappa) ** (1.0 / p)
    image = _image(chain, rho_p, p, tolerances, workers)
    residual = float(np.abs(image - (1.0 - kappa_p) * rho_p.matrix).max())
    if residual > tolerances.residual_tol:
        raise VerificationFailure(residual, tolerances.residual_tol)
    return dataclasses.replace(
        result, rho=rho_p, kappa=kappa_p, p=p, residual=residual,
        scale=result.scale ** (1.0 / p), method="p_root",
    )
