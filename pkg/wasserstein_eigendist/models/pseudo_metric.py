from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PseudoMetric:
    """Class to hold a symmetric, nonnegative distance matrix with zero diagonal."""
    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def max_entry(self) -> float:
        return float(self.matrix.max()) if self.matrix.size else 0.0

    @property
    def is_degenerate(self) -> bool:
        """True when the metric vanishes identically."""
        return self.max_entry <= 0.0

    def is_proper(self, rel_tol: float = 1e-8) -> bool:
        """True when every off-diagonal entry exceeds rel_tol times the maximum."""
        if self.n < 2:
            return True
        off = self.matrix[~np.eye(self.n, dtype=bool)]
        return bool(off.min() > rel_tol * self.max_entry)

    def normalized(self) -> 'PseudoMetric':
        """Rescale so that the maximal entry is 1 (degenerate metrics are returned unchanged)."""
        top = self.max_entry
        if top <= 0.0:
            return self
        return PseudoMetric(self.matrix / top)

    def scaled(self, factor: float) -> 'PseudoMetric':
        return PseudoMetric(self.matrix * factor)

    def power(self, exponent: float) -> 'PseudoMetric':
        """Entrywise power; rho**(1/p) of a metric is again a metric."""
        return PseudoMetric(np.power(self.matrix, exponent))

    def to_dict(self) -> dict:
        return {'matrix': self.matrix.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> 'PseudoMetric':
        return cls(matrix=np.asarray(data['matrix'], dtype=float))
