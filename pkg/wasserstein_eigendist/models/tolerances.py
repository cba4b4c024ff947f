from dataclasses import dataclass, asdict

from ..exceptions import ValidationError


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by the solver, the W_p map and the fixed-point iterations."""
    metric_tol: float = 1e-9      # relative triangle-inequality slack
    fp_tol: float = 1e-11         # sup-norm change that stops an iteration
    ot_tol: float = 1e-10         # marginal / duality-gap threshold
    max_iter: int = 10000
    residual_tol: float = 1e-8    # eigenrelation residual accepted after an iteration

    def __post_init__(self):
        for name in ('metric_tol', 'fp_tol', 'ot_tol', 'residual_tol'):
            if not getattr(self, name) > 0:
                raise ValidationError(f"Tolerance {name} must be strictly positive")
        if int(self.max_iter) < 1:
            raise ValidationError("max_iter must be at least 1")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> 'Tolerances':
        known = {k: data[k] for k in cls.__dataclass_fields__ if k in data}
        return cls(**known)
