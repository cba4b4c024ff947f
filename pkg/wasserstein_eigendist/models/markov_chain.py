from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np


@dataclass(frozen=True)
class MarkovChain:
    """Class to hold a finite Markov chain: row x of the matrix is the law P^x."""
    matrix: np.ndarray
    labels: List[str] = field(default_factory=list)

    def __post_init__(self):
        matrix = np.array(self.matrix, dtype=float)
        matrix.setflags(write=False)
        object.__setattr__(self, 'matrix', matrix)
        labels = list(self.labels) if self.labels else [str(i) for i in range(matrix.shape[0])]
        object.__setattr__(self, 'labels', labels)

    @property
    def n(self) -> int:
        """Number of states."""
        return self.matrix.shape[0]

    def row(self, x: int) -> np.ndarray:
        """The one-step law P^x."""
        return self.matrix[x]

    def apply(self, f: np.ndarray, steps: int = 1) -> np.ndarray:
        """Return P^steps f computed by repeated matrix-vector products."""
        values = np.asarray(f, dtype=float)
        for _ in range(steps):
            values = self.matrix @ values
        return values

    def to_dict(self) -> dict:
        """Convert the chain to the chain JSON layout."""
        return {
            'labels': list(self.labels),
            'matrix': self.matrix.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'MarkovChain':
        """Create a chain from a dictionary without validating it (see markov_core.validate_chain)."""
        labels: Optional[list] = data.get('labels')
        return cls(matrix=np.asarray(data['matrix'], dtype=float), labels=labels or [])
