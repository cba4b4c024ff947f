"""
Small chains shared by the test modules.
"""

import numpy as np

from ..example_chains import random_lazy_chain
from ..markov_core import validate_chain
from ..structure import find_lumpable_partition


def two_state_chain(a: float = 0.3, b: float = 0.2):
    """P = [[1-a, a], [b, 1-b]]; its eigendistance has kappa = a + b."""
    return validate_chain([[1 - a, a], [b, 1 - b]])


def lazy_path_chain(n: int = 4, hold: float = 0.6):
    """Lazy walk on a path with reflecting ends."""
    P = np.zeros((n, n))
    step = (1.0 - hold) / 2.0
    for x in range(n):
        P[x, x] = hold
        P[x, max(x - 1, 0)] += step
        P[x, min(x + 1, n - 1)] += step
    return validate_chain(P)


def random_stochastic(n: int, seed: int = 0, hold: float = 0.6):
    rng = np.random.default_rng(seed)
    rest = rng.random((n, n))
    np.fill_diagonal(rest, 0.0)
    rest = (1.0 - hold) * rest / rest.sum(axis=1, keepdims=True)
    return validate_chain(rest + hold * np.eye(n))


def path_metric(n: int):
    idx = np.arange(n)
    return np.abs(idx[:, None] - idx[None, :]).astype(float)


def certified_lazy_chains(count: int = 25):
    """Random lazy chains on 4-6 states with no nontrivial lumpable partition, as (seed, chain)."""
    chains = []
    for seed in range(count):
        chain = random_lazy_chain(4 + seed % 3, seed=seed)
        if find_lumpable_partition(chain) is None:
            chains.append((seed, chain))
    return chains
