from dataclasses import dataclass, field
from typing import List

from .pseudo_metric import PseudoMetric


@dataclass(frozen=True)
class EigendistanceResult:
    """Class to hold a computed eigendistance and the diagnostics of the iteration that found it."""
    rho: PseudoMetric            # normalized so that the max entry is 1 (zero when degenerate)
    kappa: float
    p: float
    residual: float              # sup |W_p(rho) - (1-kappa) rho|
    iterations: int
    converged: bool
    trace: List[float] = field(default_factory=list)
    scale: float = 1.0           # max entry of the raw fixed point, rho * scale recovers it
    degenerate: bool = False
    method: str = "F"

    @property
    def raw_rho(self) -> PseudoMetric:
        return self.rho.scaled(self.scale)

    def to_dict(self) -> dict:
        return {
            'rho': self.rho.matrix.tolist(),
            'kappa': self.kappa,
            'p': self.p,
            'residual': self.residual,
            'iterations': self.iterations,
            'converged': self.converged,
            'trace': list(self.trace),
            'scale': self.scale,
            'degenerate': self.degenerate,
            'method': self.method,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'EigendistanceResult':
        return cls(
            rho=PseudoMetric(data['rho']),
            kappa=float(data['kappa']),
            p=float(data['p']),
            residual=float(data['residual']),
            iterations=int(data['iterations']),
            converged=bool(data['converged']),
            trace=[float(t) for t in data.get('trace', [])],
            scale=float(data.get('scale', 1.0)),
            degenerate=bool(data.get('degenerate', False)),
            method=data.get('method', 'F'),
        )


@dataclass(frozen=True)
class EigenCheck:
    """Outcome of verifying W_p(rho) = (1 - kappa) rho for a given rho."""
    kappa_hat: float
    residual: float
    zero_set_max: float = 0.0

    def to_dict(self) -> dict:
        return {'kappa_hat': self.kappa_hat, 'residual': self.residual, 'zero_set_max': self.zero_set_max}
