"""
Concentration bounds for chains with a 1-Wasserstein eigendistance rho.

The one-step quantities are the maximal jump J (largest rho-distance reachable in one
step) and the fluctuation moments sigma^(n). They feed exponential-moment bounds for
Lipschitz functions and for rho itself along the optimal coupling, and from those the
Bernstein-type tail bounds.
"""

import logging
import math
from typing import Optional

import numpy as np

from ..exceptions import DivergentTail, ValidationError
from ..models import ConcentrationParams, MarkovChain, PseudoMetric

logger = logging.getLogger(__name__)

DEFAULT_N_MAX = 20
DIVERGENT_REMAINDER = 1e3
POSITIVE_REL_TOL = 1e-12


def lipschitz_norm(f, rho: PseudoMetric) -> float:
    """
    max |f(x) - f(y)| / rho(x, y) over pairs with rho > 0.

    Returns inf when f separates two states at rho-distance zero.
    """
    f = np.asarray(f, dtype=float)
    if f.shape != (rho.n,):
        raise ValidationError(f"f has shape {f.shape}, expected ({rho.n},)")
    diff = np.abs(f[:, None] - f[None, :])
    d = rho.matrix
    positive = d > POSITIVE_REL_TOL * rho.max_entry
    off = ~np.eye(rho.n, dtype=bool)
    zero = off & ~positive
    if np.any(diff[zero] > POSITIVE_REL_TOL * max(np.abs(f).max(), 1.0)):
        return math.inf
    if not positive.any():
        return 0.0
    return float((diff[positive] / d[positive]).max())


def contraction_check(chain: MarkovChain, rho: PseudoMetric, kappa: float, f) -> float:
    """||P f||_Lip - (1 - kappa) ||f||_Lip, at most about 1e-10 for an eigendistance."""
    before = lipschitz_norm(f, rho)
    after = lipschitz_norm(chain.apply(f), rho)
    return float(after - (1.0 - kappa) * before)


def jump_bound(chain: MarkovChain, rho: PseudoMetric) -> float:
    """J = max over x and over y with P(x, y) > 0 of rho(x, y)."""
    reachable = chain.matrix > 0
    return float(np.where(reachable, rho.matrix, 0.0).max())


def sigma_moments(chain: MarkovChain, rho: PseudoMetric, n_max: int = DEFAULT_N_MAX) -> np.ndarray:
    """
    sigma^(n) = max_x sum_z P(x,z) (sum_z' rho(z,z') P(x,z'))^n for n = 2..n_max.
    """
    if n_max < 2:
        raise ValidationError("n_max must be at least 2")
    P = chain.matrix
    spread = P @ rho.matrix            # spread[x, z] = sum_z' P(x,z') rho(z',z)
    orders = np.arange(2, n_max + 1)
    moments = (P[:, :, None] * np.power(spread[:, :, None], orders)).sum(axis=1)
    return moments.max(axis=0)


def concentration_params(
    chain: MarkovChain,
    rho: PseudoMetric,
    kappa: float,
    f=None,
    n_max: int = DEFAULT_N_MAX,
) -> ConcentrationParams:
    """Collect J and sigma^(2..n_max), plus the Lipschitz norm of f when given."""
    params = ConcentrationParams(
        J=jump_bound(chain, rho),
        sigma=sigma_moments(chain, rho, n_max),
        kappa=kappa,
        p=1.0,
    )
    if f is not None:
        params = params.with_lip_norm(lipschitz_norm(f, rho))
    return params


def _denominators(kappa: float, orders: np.ndarray) -> np.ndarray:
    if kappa > 0:
        return 1.0 - (1.0 - kappa) ** orders
    return np.ones_like(orders, dtype=float)


def _series_bound(sigma: np.ndarray, kappa: float, x: float, y: float, T: int) -> float:
    """sum_{n=2}^{N} x^n sigma_n / (den_n n!) plus a tail majorant in y = 2 J x, times T when kappa = 0."""
    n_max = len(sigma) + 1
    orders = np.arange(2, n_max + 1)
    factorials = np.array([math.factorial(int(k)) for k in orders], dtype=float)
    dens = _denominators(kappa, orders)
    partial = float(np.sum(np.power(x, orders) * sigma / (dens * factorials)))

    next_order = n_max + 1
    remainder = math.exp(y) * y ** next_order / math.factorial(next_order)
    remainder /= float(_denominators(kappa, np.array([next_order]))[0])
    if remainder > DIVERGENT_REMAINDER:
        raise DivergentTail(remainder)
    total = partial + remainder
    if kappa <= 0:
        total *= T
    return total


def exp_moment_bound(params: ConcentrationParams, T: int = 1, lam: float = 1.0) -> float:
    """
    Upper bound on log E_x exp(lam (f(X_T) - E_x f(X_T))).

    For kappa > 0 the bound does not depend on T; for kappa = 0 it grows linearly in T.

    Raises:
        ValidationError: no finite Lipschitz norm is attached to params
        DivergentTail: the series remainder exceeds 1e3
    """
    if params.lip_norm is None or not math.isfinite(params.lip_norm):
        raise ValidationError("exp_moment_bound needs a finite Lipschitz norm in params")
    if T < 1:
        raise ValidationError("T must be at least 1")
    x = abs(lam) * params.lip_norm
    return _series_bound(params.sigma, params.kappa, x, 2.0 * params.J * x, T)


def distance_exp_moment_bound(params: ConcentrationParams, lam: float = 1.0, T: int = 1) -> float:
    """Upper bound on log E exp(lam (rho(X_T,Y_T) - E rho(X_T,Y_T))) along the optimal coupling."""
    if T < 1:
        raise ValidationError("T must be at least 1")
    x = 2.0 * abs(lam)
    return 2.0 * _series_bound(params.sigma, params.kappa, x, 2.0 * params.J * x, T)


def bernstein_tail(alpha: float, beta: float, r: float) -> float:
    """exp(-r^2 / 2 / (alpha + r / 3)), the bound on P(+-Z >= r beta)."""
    if not (alpha > 0 and beta > 0):
        raise ValidationError("alpha and beta must be positive")
    if r < 0:
        raise ValidationError("r must be nonnegative")
    return math.exp(-0.5 * r * r / (alpha + r / 3.0))


def function_tail_bound(lip_norm: float, J: float, kappa: float, T: int, r: float) -> float:
    """
    Bound on P_x((f(X_T) - E_x f(X_T)) / scale > r), scale = ||f|| J for kappa > 0
    and ||f|| J sqrt(T) for kappa = 0.
    """
    if not math.isfinite(J) or not math.isfinite(lip_norm):
        raise ValidationError("J and the Lipschitz norm must be finite")
    if kappa > 0:
        return math.exp(-r * r / (8.0 / (kappa * (2.0 - kappa)) + 4.0 * r / 3.0))
    return math.exp(-r * r / (8.0 + 4.0 * r / (3.0 * math.sqrt(T))))


def function_tail_scale(lip_norm: float, J: float, kappa: float, T: int) -> float:
    """Deviation of f(X_T) corresponding to r = 1 in function_tail_bound."""
    scale = lip_norm * J
    return scale if kappa > 0 else scale * math.sqrt(T)


def distance_tail_bound(J: float, kappa: float, T: int, r: float) -> float:
    """Bound on P(|rho(X_T,Y_T) - (1-kappa)^T rho(x,y)| >= J r); not capped at 1."""
    if not math.isfinite(J):
        raise ValidationError("J must be finite")
    if kappa > 0:
        return 2.0 * math.exp(-r * r / (64.0 / (kappa * (2.0 - kappa)) + 8.0 * r / 3.0))
    return 2.0 * math.exp(-r * r / (64.0 * T + 8.0 * r / 3.0))
