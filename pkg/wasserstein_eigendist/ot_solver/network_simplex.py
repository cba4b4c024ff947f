"""
Exact solver for the discrete transportation problem.

The solver runs the primal network simplex on the complete bipartite graph between
the supports of mu (rows) and nu (columns):

- initial basis from the northwest-corner rule (m + k - 1 arcs forming a staircase)
- dual potentials from the spanning tree with u[0] = 0
- entering arc chosen by Bland's rule (lowest flat index with negative reduced cost)
- leaving arc is the smallest flow on the backward arcs of the cycle, lowest index on ties

Zero-mass atoms are removed before pivoting and reinserted afterwards as zero rows or
columns with dual values that keep the dual solution feasible.
"""

import logging
from collections import deque
from typing import List, Optional, Tuple

import numpy as np

from ..exceptions import NumericalFailure, ValidationError
from ..models import PlanCheck, TransportInstance, TransportPlan

logger = logging.getLogger(__name__)

MASS_TOL = 1e-12
REDUCED_COST_REL_TOL = 1e-12


def _check_instance(instance: TransportInstance) -> None:
    mu, nu, cost = instance.mu, instance.nu, instance.cost
    if cost.shape != (mu.size, nu.size):
        raise ValidationError(f"Cost shape {cost.shape} does not match marginals ({mu.size}, {nu.size})")
    if mu.size == 0 or nu.size == 0:
        raise ValidationError("Marginals must be nonempty")
    if np.any(mu < 0) or np.any(nu < 0):
        raise ValidationError("Marginals must be nonnegative")
    if not np.all(np.isfinite(cost)):
        raise ValidationError("Cost matrix contains non-finite entries")
    if abs(mu.sum() - 1.0) > MASS_TOL or abs(nu.sum() - 1.0) > MASS_TOL:
        raise ValidationError(f"Marginals must both sum to 1, got {mu.sum()!r} and {nu.sum()!r}")


def _northwest_corner(mu: np.ndarray, nu: np.ndarray) -> Tuple[List[Tuple[int, int]], List[float]]:
    m, k = mu.size, nu.size
    a, b = mu.copy(), nu.copy()
    arcs: List[Tuple[int, int]] = []
    flows: List[float] = []
    i = j = 0
    for _ in range(m + k - 1):
        f = min(a[i], b[j])
        arcs.append((i, j))
        flows.append(f)
        a[i] -= f
        b[j] -= f
        if i == m - 1:
            j += 1
        elif j == k - 1:
            i += 1
        elif a[i] == 0.0:
            # ties advance the row
            i += 1
        else:
            j += 1
    return arcs, flows


class _SpanningTree:
    """Basis tree over m row nodes (0..m-1) and k column nodes (m..m+k-1)."""

    def __init__(self, m: int, k: int, arcs: List[Tuple[int, int]], flows: List[float]):
        self.m, self.k = m, k
        self.flow = {arc: flow for arc, flow in zip(arcs, flows)}
        self.parent = np.full(m + k, -1, dtype=int)
        self.depth = np.zeros(m + k, dtype=int)

    def rebuild(self, cost: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Recompute parents, depths and the duals u_i + v_j = c_ij on basic arcs."""
        m, k = self.m, self.k
        adjacency = [[] for _ in range(m + k)]
        for i, j in self.flow:
            adjacency[i].append(m + j)
            adjacency[m + j].append(i)

        potential = np.zeros(m + k)
        seen = np.zeros(m + k, dtype=bool)
        self.parent[:] = -1
        self.depth[:] = 0
        seen[0] = True
        queue = deque([0])
        while queue:
            node = queue.popleft()
            for other in adjacency[node]:
                if seen[other]:
                    continue
                seen[other] = True
                self.parent[other] = node
                self.depth[other] = self.depth[node] + 1
                if other >= m:
                    potential[other] = cost[node, other - m] - potential[node]
                else:
                    potential[other] = cost[other, node - m] - potential[node]
                queue.append(other)
        if not seen.all():
            raise NumericalFailure("Basis does not span the bipartite graph")
        return potential[:m], potential[m:]

    def _arc(self, a: int, b: int) -> Tuple[int, int]:
        return (a, b - self.m) if a < self.m else (b, a - self.m)

    def path(self, row: int, col: int) -> List[Tuple[int, int]]:
        """Arcs on the tree path from row node to column node, in path order."""
        a, b = row, self.m + col
        head, tail = [], []
        while self.depth[a] > self.depth[b]:
            head.append(self._arc(a, self.parent[a]))
            a = self.parent[a]
        while self.depth[b] > self.depth[a]:
            tail.append(self._arc(b, self.parent[b]))
            b = self.parent[b]
        while a != b:
            head.append(self._arc(a, self.parent[a]))
            tail.append(self._arc(b, self.parent[b]))
            a, b = self.parent[a], self.parent[b]
        return head + tail[::-1]


def _solve_reduced(mu: np.ndarray, nu: np.ndarray, cost: np.ndarray, max_pivots: int):
    m, k = mu.size, nu.size
    arcs, flows = _northwest_corner(mu, nu)
    tree = _SpanningTree(m, k, arcs, flows)
    tol = REDUCED_COST_REL_TOL * max(1.0, float(np.abs(cost).max()))

    pivots = 0
    while True:
        u, v = tree.rebuild(cost)
        reduced = cost - u[:, None] - v[None, :]
        for i, j in tree.flow:
            reduced[i, j] = 0.0
        candidates = np.flatnonzero(reduced.ravel() < -tol)
        if candidates.size == 0:
            break
        if pivots >= max_pivots:
            raise NumericalFailure(f"Network simplex exceeded {max_pivots} pivots", iterations=pivots)

        i_in, j_in = divmod(int(candidates[0]), k)
        cycle = tree.path(i_in, j_in)
        backward = cycle[0::2]
        forward = cycle[1::2]
        leaving = min(backward, key=lambda arc: (tree.flow[arc], arc[0] * k + arc[1]))
        theta = tree.flow[leaving]

        for arc in backward:
            tree.flow[arc] = max(tree.flow[arc] - theta, 0.0)
        for arc in forward:
            tree.flow[arc] += theta
        del tree.flow[leaving]
        tree.flow[(i_in, j_in)] = theta
        pivots += 1

    plan = np.zeros((m, k))
    for (i, j), f in tree.flow.items():
        plan[i, j] = max(f, 0.0)
    return plan, u, v, pivots


def solve_transport(instance: TransportInstance, max_pivots: Optional[int] = None) -> TransportPlan:
    """
    Solve min sum plan * cost over couplings of instance.mu and instance.nu.

    Args:
        instance: marginals and cost matrix
        max_pivots: pivot cap, defaults to a generous multiple of the instance size

    Returns:
        TransportPlan with an optimal basic plan, its value and dual potentials

    Raises:
        ValidationError: malformed instance
        NumericalFailure: the pivot cap was reached
    """
    _check_instance(instance)
    mu, nu, cost = instance.mu, instance.nu, instance.cost
    rows = np.flatnonzero(mu > 0)
    cols = np.flatnonzero(nu > 0)
    sub_cost = cost[np.ix_(rows, cols)]
    if max_pivots is None:
        max_pivots = 50 * rows.size * cols.size * (rows.size + cols.size) + 100

    sub_plan, sub_u, sub_v, pivots = _solve_reduced(mu[rows], nu[cols], sub_cost, max_pivots)

    m, k = cost.shape
    plan = np.zeros((m, k))
    plan[np.ix_(rows, cols)] = sub_plan
    u = np.zeros(m)
    v = np.zeros(k)
    u[rows] = sub_u
    v[cols] = sub_v
    pruned_rows = np.setdiff1d(np.arange(m), rows)
    pruned_cols = np.setdiff1d(np.arange(k), cols)
    if pruned_rows.size:
        u[pruned_rows] = (cost[np.ix_(pruned_rows, cols)] - sub_v[None, :]).min(axis=1)
    if pruned_cols.size:
        v[pruned_cols] = (cost[:, pruned_cols] - u[:, None]).min(axis=0)

    value = float((plan * cost).sum())
    logger.debug("Solved %dx%d transport (support %dx%d) in %d pivots, value=%.12g",
                 m, k, rows.size, cols.size, pivots, value)
    return TransportPlan(plan=plan, value=value, u=u, v=v, pivots=pivots)


def verify_plan(plan: TransportPlan, instance: TransportInstance) -> PlanCheck:
    """
    Measure how far a plan is from being a certified optimum of the instance.

    Returns:
        PlanCheck with the worst marginal deviation, the primal minus dual objective
        and the worst dual constraint violation max(u_i + v_j - c_ij, 0)
    """
    if plan.plan.shape != instance.cost.shape:
        raise ValidationError(f"Plan shape {plan.plan.shape} does not match cost shape {instance.cost.shape}")
    row_err = np.abs(plan.plan.sum(axis=1) - instance.mu).max()
    col_err = np.abs(plan.plan.sum(axis=0) - instance.nu).max()
    negative = max(0.0, -float(plan.plan.min()))
    primal = float((plan.plan * instance.cost).sum())
    dual = float(instance.mu @ plan.u + instance.nu @ plan.v)
    infeasibility = float((plan.u[:, None] + plan.v[None, :] - instance.cost).max())
    return PlanCheck(
        marginal_err=float(max(row_err, col_err, negative)),
        duality_gap=primal - dual,
        dual_infeasibility=max(infeasibility, 0.0),
    )
