"""
Brute-force oracle for small transportation problems.

Every vertex of the transportation polytope is the flow on some spanning tree of the
complete bipartite graph K_{m,k}. The trees of a shape are enumerated once and each
tree's flow is stored as a linear map of (mu, nu), so one instance is evaluated
against all trees with a single tensor product.
"""

import logging
from functools import lru_cache
from itertools import combinations
from typing import Tuple

import numpy as np

from ..exceptions import SizeCap, ValidationError
from ..models import TransportInstance

logger = logging.getLogger(__name__)

MAX_CELLS = 16
FEASIBILITY_TOL = 1e-12


def _is_spanning_tree(edges, m: int, k: int) -> bool:
    parent = list(range(m + k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, j in edges:
        ri, rj = find(i), find(m + j)
        if ri == rj:
            return False
        parent[ri] = rj
    return True


def _flow_map(edges, m: int, k: int) -> np.ndarray:
    """Rows give each edge's flow as coefficients on the supply vector (mu, nu)."""
    remaining = np.eye(m + k)
    alive = set(range(len(edges)))
    degree = np.zeros(m + k, dtype=int)
    for i, j in edges:
        degree[i] += 1
        degree[m + j] += 1
    flows = np.zeros((len(edges), m + k))
    while alive:
        for e in sorted(alive):
            i, j = edges[e]
            a, b = i, m + j
            if degree[a] == 1:
                leaf, other = a, b
            elif degree[b] == 1:
                leaf, other = b, a
            else:
                continue
            flows[e] = remaining[leaf]
            remaining[other] = remaining[other] - remaining[leaf]
            degree[a] -= 1
            degree[b] -= 1
            alive.discard(e)
            break
    return flows


@lru_cache(maxsize=None)
def spanning_trees(m: int, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    All spanning trees of K_{m,k} with their flow maps.

    Returns:
        (edges, maps) with edges of shape (T, m+k-1, 2) and maps of shape (T, m+k-1, m+k)
    """
    cells = [(i, j) for i in range(m) for j in range(k)]
    trees = [
        edges for edges in combinations(cells, m + k - 1)
        if _is_spanning_tree(edges, m, k)
    ]
    edges = np.array(trees, dtype=int).reshape(len(trees), m + k - 1, 2)
    maps = np.stack([_flow_map(tree, m, k) for tree in trees])
    edges.setflags(write=False)
    maps.setflags(write=False)
    logger.debug("Enumerated %d spanning trees of K_{%d,%d}", len(trees), m, k)
    return edges, maps


def enumerate_basic_solutions(instance: TransportInstance) -> Tuple[float, np.ndarray]:
    """
    Minimum of the objective over all vertices of the transportation polytope.

    Args:
        instance: transport instance with m * k <= 16

    Returns:
        (value, plan) of a best vertex

    Raises:
        SizeCap: the instance is too large to enumerate
    """
    mu, nu, cost = instance.mu, instance.nu, instance.cost
    m, k = cost.shape
    if m * k > MAX_CELLS:
        raise SizeCap(m * k, MAX_CELLS)
    if mu.size != m or nu.size != k:
        raise ValidationError("Marginals do not match the cost shape")

    edges, maps = spanning_trees(m, k)
    supply = np.concatenate([mu, nu])
    flows = maps @ supply
    feasible = np.all(flows >= -FEASIBILITY_TOL, axis=1)
    if not feasible.any():
        raise ValidationError("No feasible basic solution; marginals must have equal mass")

    values = (flows * cost[edges[..., 0], edges[..., 1]]).sum(axis=1)
    values = np.where(feasible, values, np.inf)
    best = int(np.argmin(values))

    plan = np.zeros((m, k))
    plan[edges[best, :, 0], edges[best, :, 1]] = np.clip(flows[best], 0.0, None)
    return float(values[best]), plan
