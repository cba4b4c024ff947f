"""
Lumpable partitions of a finite chain.

A partition is (strongly) lumpable when every state of a block sends the same mass to
each block. For a finite state space these partitions are exactly the P-homomorphisms,
and a chain with none besides the trivial ones is algebraically irreducible.
"""

import logging
from typing import Iterator, List, Optional, Tuple

import networkx as nx
import numpy as np

from ..exceptions import BudgetExceeded, NotLumpable, ValidationError
from ..markov_core import validate_chain
from ..models import MarkovChain, Partition, PseudoMetric

logger = logging.getLogger(__name__)

LUMP_TOL = 1e-12
EXHAUSTIVE_MAX_STATES = 12
ZERO_SET_REL_TOL = 1e-10


def lumpability_deviation(chain: MarkovChain, partition: Partition) -> Tuple[int, float]:
    """Block with the largest spread of block-aggregated rows, and that spread."""
    if partition.n != chain.n:
        raise ValidationError(f"Partition covers {partition.n} states, chain has {chain.n}")
    aggregated = chain.matrix @ partition.indicator()
    worst_block, worst = 0, 0.0
    for index, block in enumerate(partition.blocks):
        rows = aggregated[list(block)]
        spread = float(np.abs(rows - rows[0]).max())
        if spread > worst:
            worst_block, worst = index, spread
    return worst_block, worst


def is_lumpable(chain: MarkovChain, partition: Partition, tol: float = LUMP_TOL) -> bool:
    """True when sum_{z in B'} P(x,z) is the same for all x in a block, for every block B'."""
    return lumpability_deviation(chain, partition)[1] <= tol


def _lumpable_labels(matrix: np.ndarray, labels: np.ndarray, k: int, tol: float) -> bool:
    indicator = np.zeros((labels.size, k))
    indicator[np.arange(labels.size), labels] = 1.0
    aggregated = matrix @ indicator
    _, first = np.unique(labels, return_index=True)
    return bool(np.abs(aggregated - aggregated[first[labels]]).max() <= tol)


def _restricted_growth(n: int, k: int) -> Iterator[np.ndarray]:
    """Set partitions of n states into exactly k blocks, as restricted growth strings."""
    labels = np.zeros(n, dtype=int)

    def extend(position: int, used: int):
        if position == n:
            if used == k:
                yield labels.copy()
            return
        if used + (n - position) < k:
            return
        for label in range(min(used + 1, k)):
            labels[position] = label
            yield from extend(position + 1, max(used, label + 1))

    if n >= 1:
        labels[0] = 0
        yield from extend(1, 1)


def enumerate_lumpable_partitions(
    chain: MarkovChain,
    max_states: int = EXHAUSTIVE_MAX_STATES,
    tol: float = LUMP_TOL,
) -> Iterator[Partition]:
    """
    Yield every nontrivial lumpable partition, coarsest first (2 blocks, then 3, ...).

    Raises:
        BudgetExceeded: the chain has more than max_states states
    """
    n = chain.n
    if n > max_states:
        raise BudgetExceeded(n, max_states)
    for k in range(2, n):
        for labels in _restricted_growth(n, k):
            if _lumpable_labels(chain.matrix, labels, k, tol):
                yield Partition.from_labels(labels.tolist())


def _split_block(rows: np.ndarray, block: List[int], tol: float) -> List[List[int]]:
    groups: List[List[int]] = []
    representatives: List[np.ndarray] = []
    for state, row in zip(block, rows):
        for group, rep in zip(groups, representatives):
            if np.abs(row - rep).max() <= tol:
                group.append(state)
                break
        else:
            groups.append([state])
            representatives.append(row)
    return groups


def coarsest_lumpable_refinement(chain: MarkovChain, partition: Partition, tol: float = LUMP_TOL) -> Partition:
    """Split blocks by their aggregated rows until the partition is lumpable."""
    current = partition
    while True:
        aggregated = chain.matrix @ current.indicator()
        blocks: List[List[int]] = []
        for block in current.blocks:
            block = list(block)
            blocks.extend(_split_block(aggregated[block], block, tol))
        refined = Partition(tuple(tuple(b) for b in blocks))
        if refined.num_blocks == current.num_blocks:
            return refined
        current = refined


def find_lumpable_partition(
    chain: MarkovChain,
    mode: str = "exhaustive",
    max_states: int = EXHAUSTIVE_MAX_STATES,
    tol: float = LUMP_TOL,
) -> Optional[Partition]:
    """
    Search for a nontrivial lumpable partition.

    In exhaustive mode None certifies that the chain is algebraically irreducible.
    Heuristic mode refines {B, E minus B} for every singleton and pair seed B and may
    miss partitions, so its None certifies nothing.

    Raises:
        BudgetExceeded: exhaustive mode on more than max_states states
    """
    n = chain.n
    if mode == "exhaustive":
        found = next(enumerate_lumpable_partitions(chain, max_states, tol), None)
        logger.info("Exhaustive lumpability search on %d states: %s", n,
                    "found %d blocks" % found.num_blocks if found else "none, chain is irreducible")
        return found
    if mode != "heuristic":
        raise ValidationError(f"Unknown search mode {mode!r}")

    seeds = [(x,) for x in range(n)] + [(x, y) for x in range(n) for y in range(x + 1, n)]
    for seed in seeds:
        rest = tuple(s for s in range(n) if s not in seed)
        if not rest:
            continue
        refined = coarsest_lumpable_refinement(chain, Partition((seed, rest)), tol)
        if not refined.is_trivial:
            logger.info("Heuristic lumpability search found %d blocks from seed %s", refined.num_blocks, seed)
            return refined
    logger.info("Heuristic lumpability search found nothing (not a certificate)")
    return None


def quotient_chain(chain: MarkovChain, partition: Partition, tol: float = LUMP_TOL) -> MarkovChain:
    """
    The chain on blocks, Q(B, B') = sum_{z in B'} P(x, z) for any x in B.

    Raises:
        NotLumpable: the partition is not lumpable
    """
    block, deviation = lumpability_deviation(chain, partition)
    if deviation > tol:
        raise NotLumpable(block, deviation)
    aggregated = chain.matrix @ partition.indicator()
    representatives = [b[0] for b in partition.blocks]
    labels = ["{" + ",".join(chain.labels[s] for s in b) + "}" for b in partition.blocks]
    return validate_chain(aggregated[representatives], labels)


def zero_set_partition(rho: PseudoMetric, rel_tol: float = ZERO_SET_REL_TOL) -> Partition:
    """Classes of the relation rho(x, y) <= rel_tol * max rho."""
    n = rho.n
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    threshold = rel_tol * rho.max_entry
    close = np.argwhere(rho.matrix <= threshold)
    graph.add_edges_from((int(x), int(y)) for x, y in close if x < y)
    return Partition(tuple(tuple(sorted(c)) for c in nx.connected_components(graph)))
