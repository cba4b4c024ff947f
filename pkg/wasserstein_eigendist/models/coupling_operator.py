from dataclasses import dataclass
from typing import List, Tuple

import numpy as np
from scipy import sparse

from .pseudo_metric import PseudoMetric


@dataclass(frozen=True)
class CouplingOperator:
    """
    Class to hold a Markov kernel on ordered pairs of states.

    The pair (x, y) is stored as the flat index x * n + y, so the kernel is an
    (n*n) x (n*n) sparse row-stochastic matrix whose row (x, y) is a coupling of
    P^x and P^y.
    """
    n: int
    kernel: sparse.csr_matrix
    kappa: float
    p: float
    rho: PseudoMetric
    symmetric: bool = False

    def __post_init__(self):
        kernel = sparse.csr_matrix(self.kernel)
        kernel.sort_indices()
        object.__setattr__(self, 'kernel', kernel)

    def index(self, x: int, y: int) -> int:
        return x * self.n + y

    def pair(self, index: int) -> Tuple[int, int]:
        return divmod(int(index), self.n)

    def row(self, x: int, y: int) -> List[Tuple[Tuple[int, int], float]]:
        """Sparse law of the next pair from (x, y) as ((u, v), mass) records."""
        i = self.index(x, y)
        start, end = self.kernel.indptr[i], self.kernel.indptr[i + 1]
        return [
            (self.pair(j), float(m))
            for j, m in zip(self.kernel.indices[start:end], self.kernel.data[start:end])
        ]

    def row_matrix(self, x: int, y: int) -> np.ndarray:
        """Law of the next pair from (x, y) as a dense n x n coupling matrix."""
        return self.kernel.getrow(self.index(x, y)).toarray().reshape(self.n, self.n)

    def rho_power(self) -> np.ndarray:
        """rho^p as a flat vector over pairs."""
        return np.power(self.rho.matrix, self.p).ravel()

    def transpose_permutation(self) -> sparse.csr_matrix:
        """Permutation matrix sending pair (x, y) to (y, x)."""
        idx = np.arange(self.n * self.n)
        swapped = (idx % self.n) * self.n + idx // self.n
        return sparse.csr_matrix((np.ones_like(idx, dtype=float), (idx, swapped)), shape=(self.n ** 2,) * 2)


@dataclass(frozen=True)
class CoupledSimulation:
    """Monte Carlo summary of the pair chain: E rho^p(X_t, Y_t) per step and the law of rho(X_T, Y_T)."""
    mean_rho_p: np.ndarray       # index t = 0..T
    stderr: np.ndarray
    final_rho: np.ndarray        # one entry per sample
    tail_counts: np.ndarray
    bin_edges: np.ndarray

    @property
    def steps(self) -> int:
        return len(self.mean_rho_p) - 1

    def to_dict(self) -> dict:
        return {
            'mean_rho_p': self.mean_rho_p.tolist(),
            'stderr': self.stderr.tolist(),
            'tail_counts': self.tail_counts.tolist(),
            'bin_edges': self.bin_edges.tolist(),
        }
