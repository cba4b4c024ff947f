"""
Coupling operators realizing an eigendistance.

The kernel of the pair chain at (x, y) is the optimal plan between P^x and P^y for
the cost rho^p; at (x, x) it is P^x pushed onto the diagonal. With these choices

    sum_{u,v} K((x,y),(u,v)) rho^p(u,v) = (1 - kappa)^p rho^p(x,y).
"""

import logging
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np
from networkx.utils import UnionFind
from scipy import sparse

from ..exceptions import EigenrelationViolation, MarginalViolation
from ..models import (
    CouplingOperator,
    EigendistanceResult,
    MarkovChain,
    Partition,
    PseudoMetric,
    Tolerances,
    WpResult,
)
from ..wasserstein_map import apply_W

logger = logging.getLogger(__name__)

REACHABILITY_MASS = 1e-14

Pair = Tuple[int, int]


def marginal_error(coupling: CouplingOperator, chain: MarkovChain) -> Tuple[Pair, float]:
    """Worst pair and deviation of the kernel's two marginals from P^x and P^y."""
    n = coupling.n
    pairs = np.arange(n * n)
    ones = np.ones(n * n)
    first_of = sparse.csr_matrix((ones, (pairs, pairs // n)), shape=(n * n, n))
    second_of = sparse.csr_matrix((ones, (pairs, pairs % n)), shape=(n * n, n))
    first = np.abs((coupling.kernel @ first_of).toarray() - np.repeat(chain.matrix, n, axis=0))
    second = np.abs((coupling.kernel @ second_of).toarray() - np.tile(chain.matrix, (n, 1)))
    worst = np.maximum(first.max(axis=1), second.max(axis=1))
    index = int(np.argmax(worst))
    return coupling.pair(index), float(worst[index])


def eigenrelation_error(coupling: CouplingOperator) -> Tuple[Pair, float]:
    """Worst pair and miss of K rho^p = (1 - kappa)^p rho^p."""
    rho_p = coupling.rho_power()
    miss = np.abs(coupling.kernel @ rho_p - (1.0 - coupling.kappa) ** coupling.p * rho_p)
    index = int(np.argmax(miss))
    return coupling.pair(index), float(miss[index])


def extract_coupling(
    chain: MarkovChain,
    eig: EigendistanceResult,
    wp: Optional[WpResult] = None,
    tolerances: Optional[Tolerances] = None,
    workers: Optional[int] = None,
) -> CouplingOperator:
    """
    Assemble the coupling operator from the per-pair optimal plans.

    Args:
        chain: the Markov chain
        eig: the eigendistance the coupling should realize
        wp: W_p evaluation of eig.rho with plans kept; computed when omitted
        tolerances: ot_tol bounds the marginal error, residual_tol the eigenrelation miss

    Raises:
        MarginalViolation, EigenrelationViolation
    """
    tolerances = tolerances or Tolerances()
    n = chain.n
    if wp is None or wp.plans is None:
        wp = apply_W(chain, eig.rho, eig.p, keep_plans=True, tolerances=tolerances, workers=workers)

    rows: List[np.ndarray] = []
    cols: List[np.ndarray] = []
    data: List[np.ndarray] = []
    for x in range(n):
        support = np.flatnonzero(chain.matrix[x] > 0)
        rows.append(np.full(support.size, x * n + x))
        cols.append(support * n + support)
        data.append(chain.matrix[x, support])
    for (x, y), plan in sorted(wp.plans.items()):
        u, v = np.nonzero(plan.plan)
        mass = plan.plan[u, v]
        rows.append(np.full(u.size, x * n + y))
        cols.append(u * n + v)
        data.append(mass)
        rows.append(np.full(u.size, y * n + x))
        cols.append(v * n + u)
        data.append(mass)

    kernel = sparse.csr_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(n * n, n * n),
    )
    coupling = CouplingOperator(n=n, kernel=kernel, kappa=eig.kappa, p=eig.p, rho=eig.rho)

    pair, deviation = marginal_error(coupling, chain)
    if deviation > tolerances.ot_tol:
        raise MarginalViolation(pair, deviation)
    pair, miss = eigenrelation_error(coupling)
    if miss > tolerances.residual_tol:
        raise EigenrelationViolation(pair, miss)
    logger.debug("Extracted coupling with %d nonzeros, eigenrelation miss %.3e", kernel.nnz, miss)
    return coupling


def symmetrize(coupling: CouplingOperator) -> CouplingOperator:
    """Q((x,y), A) = (K((x,y), A) + K((y,x), A^T)) / 2."""
    if coupling.symmetric:
        return coupling
    swap = coupling.transpose_permutation()
    kernel = 0.5 * (coupling.kernel + swap @ coupling.kernel @ swap)
    kernel.eliminate_zeros()
    return CouplingOperator(
        n=coupling.n, kernel=kernel, kappa=coupling.kappa, p=coupling.p,
        rho=coupling.rho, symmetric=True,
    )


def pair_irreducibility_graph(coupling: CouplingOperator, threshold: float = REACHABILITY_MASS) -> nx.DiGraph:
    """Directed graph on unordered off-diagonal pairs with an edge wherever the kernel moves mass."""
    n = coupling.n
    graph = nx.DiGraph()
    graph.add_nodes_from((x, y) for x in range(n) for y in range(x + 1, n))
    kernel = coupling.kernel.tocoo()
    for i, j, mass in zip(kernel.row, kernel.col, kernel.data):
        if mass <= threshold:
            continue
        x, y = coupling.pair(i)
        u, v = coupling.pair(j)
        if x == y or u == v:
            continue
        source, target = (min(x, y), max(x, y)), (min(u, v), max(u, v))
        if source != target:
            graph.add_edge(source, target)
    return graph


def _closed_partition(graph: nx.DiGraph, n: int, seed: Pair) -> Partition:
    """Finest partition identifying the seed pair whose same-block pairs only move to same-block pairs."""
    blocks = UnionFind(range(n))
    blocks.union(*seed)
    changed = True
    while changed:
        changed = False
        for x, y in graph.nodes:
            if blocks[x] != blocks[y]:
                continue
            for u, v in graph.successors((x, y)):
                if blocks[u] != blocks[v]:
                    blocks.union(u, v)
                    changed = True
    return Partition(tuple(tuple(block) for block in blocks.to_sets()))


def invariant_partition(coupling: CouplingOperator) -> Optional[Partition]:
    """
    A nontrivial partition whose pairs D_phi the coupling never leaves, if one exists.

    The pairs identified by such a partition are closed under the kernel, so the
    partition is lumpable for the chain the coupling belongs to. None means every
    off-diagonal pair eventually reaches pairs split by any nontrivial partition.
    """
    graph = pair_irreducibility_graph(coupling)
    for seed in sorted(graph.nodes):
        partition = _closed_partition(graph, coupling.n, seed)
        if partition.num_blocks > 1:
            return partition
    return None


def coupling_irreducible(coupling: CouplingOperator) -> Tuple[bool, List[List[Pair]]]:
    """
    Decide whether the coupling is irreducible outside the diagonal.

    The coupling is reducible when some nontrivial partition has its identified pairs
    closed under the kernel (see invariant_partition). Pairs that no other pair moves
    into, which basic optimal plans routinely leave behind, do not make it reducible.

    Returns:
        (irreducible, classes) where classes are the strongly connected components of the
        pair graph, each sorted, ordered by their first pair
    """
    graph = pair_irreducibility_graph(coupling)
    classes = sorted(sorted(component) for component in nx.strongly_connected_components(graph))
    witness = invariant_partition(coupling)
    logger.debug("Pair graph has %d nodes in %d strongly connected classes, invariant partition %s",
                 graph.number_of_nodes(), len(classes), witness.blocks if witness else None)
    return witness is None, classes


def invariant_pair_set(
    coupling: CouplingOperator,
    pairs: Iterable[Pair],
    include_diagonal: bool = True,
    threshold: float = REACHABILITY_MASS,
) -> bool:
    """True when the kernel never moves mass from the given pairs to pairs outside them."""
    n = coupling.n
    inside = np.zeros(n * n, dtype=bool)
    for x, y in pairs:
        inside[coupling.index(x, y)] = inside[coupling.index(y, x)] = True
    if include_diagonal:
        inside[np.arange(n) * n + np.arange(n)] = True
    leak = coupling.kernel[np.flatnonzero(inside)][:, np.flatnonzero(~inside)]
    return bool(leak.nnz == 0 or leak.data.max() <= threshold)


def fiber_pairs(labels: Sequence[int]) -> List[Pair]:
    """Pairs x < y with the same label, e.g. the pairs identified by a lumpable partition."""
    labels = np.asarray(labels)
    n = labels.size
    return [(x, y) for x in range(n) for y in range(x + 1, n) if labels[x] == labels[y]]


def export_coupling(coupling: CouplingOperator) -> List[Dict]:
    """Sparse kernel as {'from': [x, y], 'to': [u, v], 'mass': m} records in row-major order."""
    kernel = coupling.kernel.tocoo()
    order = np.lexsort((kernel.col, kernel.row))
    return [
        {
            'from': list(coupling.pair(kernel.row[k])),
            'to': list(coupling.pair(kernel.col[k])),
            'mass': float(kernel.data[k]),
        }
        for k in order
    ]


def load_coupling(
    records: Iterable[Dict],
    n: int,
    kappa: float = 0.0,
    p: float = 1.0,
    rho: Optional[PseudoMetric] = None,
    symmetric: bool = False,
) -> CouplingOperator:
    """Rebuild a CouplingOperator from exported records."""
    rows, cols, data = [], [], []
    for record in records:
        x, y = record['from']
        u, v = record['to']
        rows.append(x * n + y)
        cols.append(u * n + v)
        data.append(float(record['mass']))
    kernel = sparse.csr_matrix((data, (rows, cols)), shape=(n * n, n * n))
    return CouplingOperator(
        n=n, kernel=kernel, kappa=kappa, p=p,
        rho=rho if rho is not None else PseudoMetric(np.zeros((n, n))),
        symmetric=symmetric,
    )
