from dataclasses import dataclass, field
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class ConcentrationParams:
    """
    Class to hold the one-step quantities entering the exponential-moment bounds.

    sigma[k] is the moment of order k + 2, so sigma covers orders 2..n_max.
    """
    J: float
    sigma: np.ndarray
    kappa: float
    p: float = 1.0
    lip_norm: Optional[float] = None

    def __post_init__(self):
        sigma = np.array(self.sigma, dtype=float)
        sigma.setflags(write=False)
        object.__setattr__(self, 'sigma', sigma)

    @property
    def n_max(self) -> int:
        return len(self.sigma) + 1

    def sigma_of(self, order: int) -> float:
        return float(self.sigma[order - 2])

    def with_lip_norm(self, lip_norm: float) -> 'ConcentrationParams':
        return ConcentrationParams(self.J, self.sigma, self.kappa, self.p, lip_norm)

    def to_dict(self) -> dict:
        return {
            'J': self.J,
            'sigma': self.sigma.tolist(),
            'kappa': self.kappa,
            'p': self.p,
            'lip_norm': self.lip_norm,
        }


@dataclass(frozen=True)
class TailReport:
    """Empirical exceedance frequencies next to the bound, ready for plotting."""
    r: np.ndarray
    empirical: np.ndarray
    bound: np.ndarray
    mc_stderr: np.ndarray
    extra: dict = field(default_factory=dict)

    @property
    def dominated(self) -> bool:
        """Bound + 4 standard errors covers the empirical curve everywhere."""
        return bool(np.all(self.empirical <= self.bound + 4.0 * self.mc_stderr + 1e-12))

    def to_dict(self) -> dict:
        out = {
            'r': np.asarray(self.r).tolist(),
            'empirical': np.asarray(self.empirical).tolist(),
            'bound': np.asarray(self.bound).tolist(),
            'mc_stderr': np.asarray(self.mc_stderr).tolist(),
        }
        out.update(self.extra)
        return out
