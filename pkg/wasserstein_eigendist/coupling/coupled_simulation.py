"""
Monte Carlo simulation of the pair chain defined by a coupling operator.
"""

import logging
from typing import Optional, Tuple

import numpy as np

from ..exceptions import ValidationError
from ..models import CoupledSimulation, CouplingOperator
from ..utils import ordered_map

logger = logging.getLogger(__name__)

CHUNK_SIZE = 10_000


class PairSampler:
    """Inverse-CDF sampler over the rows of a sparse kernel, vectorized across samples."""

    def __init__(self, coupling: CouplingOperator):
        kernel = coupling.kernel
        self.indptr = kernel.indptr
        self.indices = kernel.indices
        empty = self.indptr[1:] == self.indptr[:-1]
        if np.any(empty):
            raise ValidationError(f"Kernel row {int(np.argmax(empty))} is empty")
        self.cumulative = np.cumsum(kernel.data)
        padded = np.concatenate([[0.0], self.cumulative])
        self.row_base = padded[self.indptr[:-1]]
        self.row_mass = padded[self.indptr[1:]] - self.row_base

    def step(self, states: np.ndarray, rng: np.random.Generator) -> np.ndarray:
        target = self.row_base[states] + rng.random(states.size) * self.row_mass[states]
        position = np.searchsorted(self.cumulative, target, side='right')
        position = np.clip(position, self.indptr[states], self.indptr[states + 1] - 1)
        return self.indices[position]


def _run_chunk(sampler: PairSampler, rho_p: np.ndarray, rho: np.ndarray, start: int,
               T: int, size: int, seed_seq: np.random.SeedSequence) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    rng = np.random.default_rng(seed_seq)
    states = np.full(size, start, dtype=np.int64)
    sums = np.zeros(T + 1)
    squares = np.zeros(T + 1)
    values = rho_p[states]
    sums[0], squares[0] = values.sum(), (values ** 2).sum()
    for t in range(1, T + 1):
        states = sampler.step(states, rng)
        values = rho_p[states]
        sums[t] = values.sum()
        squares[t] = (values ** 2).sum()
    return sums, squares, rho[states]


def simulate_coupled(
    coupling: CouplingOperator,
    x0: int,
    y0: int,
    T: int,
    samples: int,
    seed: int = 0,
    bins: int = 20,
    workers: Optional[int] = None,
) -> CoupledSimulation:
    """
    Run the pair chain from (x0, y0) for T steps.

    Samples are split into fixed chunks, each with its own child of SeedSequence(seed),
    so results depend on the seed and not on the number of threads.

    Returns:
        CoupledSimulation with the mean and standard error of rho^p(X_t, Y_t) for
        t = 0..T and a histogram of rho(X_T, Y_T)
    """
    if T < 1 or samples < 1:
        raise ValidationError("T and samples must both be at least 1")
    n = coupling.n
    if not (0 <= x0 < n and 0 <= y0 < n):
        raise ValidationError(f"Start pair ({x0}, {y0}) is outside the {n} states")

    sampler = PairSampler(coupling)
    rho = coupling.rho.matrix.ravel()
    rho_p = coupling.rho_power()
    start = coupling.index(x0, y0)
    sizes = [min(CHUNK_SIZE, samples - offset) for offset in range(0, samples, CHUNK_SIZE)]
    seeds = np.random.SeedSequence(seed).spawn(len(sizes))

    chunks = ordered_map(
        lambda job: _run_chunk(sampler, rho_p, rho, start, T, job[0], job[1]),
        list(zip(sizes, seeds)),
        workers,
    )
    sums = sum(chunk[0] for chunk in chunks)
    squares = sum(chunk[1] for chunk in chunks)
    final = np.concatenate([chunk[2] for chunk in chunks])

    mean = sums / samples
    if samples > 1:
        variance = np.maximum(squares - samples * mean ** 2, 0.0) / (samples - 1)
    else:
        variance = np.zeros_like(mean)
    stderr = np.sqrt(variance / samples)

    top = max(float(coupling.rho.max_entry), 1e-300)
    counts, edges = np.histogram(final, bins=bins, range=(0.0, top))
    logger.debug("Simulated %d coupled paths of length %d from (%d, %d)", samples, T, x0, y0)
    return CoupledSimulation(mean_rho_p=mean, stderr=stderr, final_rho=final,
                             tail_counts=counts, bin_edges=edges)
