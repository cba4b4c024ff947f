"""
Generators for the chain families with known eigendistances.

- lazy random walk on the cycle Z/LZ with the sine metric and the parity metric
- independent spin flips on {0,1}^n with weighted Hamming metrics
- gambler's ruin with absorbing ends and its harmonic functions
- random lazy chains, generically without lumpable partitions
"""

import logging
import math
import warnings
from typing import Dict, List, Optional, Sequence

import networkx as nx
import numpy as np
from scipy import linalg
from scipy.sparse.csgraph import shortest_path

from ..exceptions import OddTorus, ParameterRange, ParameterWarning, SizeCap, UnreachableAbsorber, ValidationError
from ..markov_core import validate_chain
from ..models import ExampleFamily, ExampleSpec, GeneratedExample, MarkovChain, PseudoMetric
from ..structure import product_chain, tensor_metric

logger = logging.getLogger(__name__)

SPIN_MAX_SITES = 12


def _check_q(q: float, upper_inclusive: bool = False) -> None:
    valid = 0 < q <= 0.5 if upper_inclusive else 0 < q < 0.5
    if not valid:
        interval = "(0, 1/2]" if upper_inclusive else "(0, 1/2)"
        raise ParameterRange(f"q must lie in {interval}, got {q!r}")


# Lazy torus

def lazy_torus(L: int, q: float) -> MarkovChain:
    """Walk on Z/LZ: stay with probability r = 1 - 2q, step to each neighbor with probability q."""
    if L < 3:
        raise ParameterRange(f"Torus needs L >= 3, got {L}")
    _check_q(q)
    P = np.zeros((L, L))
    states = np.arange(L)
    P[states, states] = 1.0 - 2.0 * q
    P[states, (states + 1) % L] += q
    P[states, (states - 1) % L] += q
    return validate_chain(P)


def rho_L(L: int) -> PseudoMetric:
    """Sine metric sin(((x - y) mod L) pi / L)."""
    if L < 4:
        raise ParameterRange(f"The sine metric needs L >= 4, got {L}")
    states = np.arange(L)
    distance = np.sin(((states[:, None] - states[None, :]) % L) * math.pi / L)
    distance = np.abs(distance)
    np.fill_diagonal(distance, 0.0)
    return PseudoMetric(distance)


def kappa_L(L: int, r: float) -> float:
    """(1 - r)(1 - cos(2 pi / L)); the sine metric realizes it when r > q = (1 - r) / 2."""
    if L < 4:
        raise ParameterRange(f"The sine metric needs L >= 4, got {L}")
    q = (1.0 - r) / 2.0
    if not r > q:
        warnings.warn(f"r={r} does not exceed q={q}; the sine metric need not be an eigendistance",
                      ParameterWarning, stacklevel=2)
    return (1.0 - r) * (1.0 - math.cos(2.0 * math.pi / L))


def parity_metric(L: int) -> PseudoMetric:
    """1_{x - y odd} on an even torus."""
    if L % 2:
        raise OddTorus(L)
    states = np.arange(L)
    return PseudoMetric(((states[:, None] - states[None, :]) % 2).astype(float))


def kappa_parity(q: float, r: Optional[float] = None) -> float:
    """1 - |2q - r| with r = 1 - 2q unless given."""
    r = 1.0 - 2.0 * q if r is None else r
    return 1.0 - abs(2.0 * q - r)


def kappa_parity_remark(q: float, r: Optional[float] = None) -> Dict[str, float]:
    """
    Both readings of the parity curvature.

    'formula' is 1 - |2q - r|; 'contraction' is |2q - r|, the factor multiplying the
    metric, which is the number that vanishes at r = 1/2, q = 1/4.
    """
    r = 1.0 - 2.0 * q if r is None else r
    return {'formula': kappa_parity(q, r), 'contraction': abs(2.0 * q - r)}


# Spin flips

def _bits(n: int) -> np.ndarray:
    """bits[s, i] is coordinate i of state s, coordinate 0 being the most significant bit."""
    states = np.arange(2 ** n)
    return (states[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1


def spin_flip(n: int, q: float) -> MarkovChain:
    """Product of n independent two-state chains, each flipping with probability q."""
    if n < 1:
        raise ParameterRange(f"Need at least one spin, got {n}")
    if n > SPIN_MAX_SITES:
        raise SizeCap(n, SPIN_MAX_SITES)
    _check_q(q)
    site = np.array([[1.0 - q, q], [q, 1.0 - q]])
    P = np.ones((1, 1))
    for _ in range(n):
        P = np.kron(P, site)
    labels = ["".join(str(b) for b in row) for row in _bits(n)]
    return validate_chain(P, labels)


def weighted_hamming(a: Sequence[float]) -> PseudoMetric:
    """rho_a(x, y) = sum_i a_i 1_{x_i != y_i}; zero weights give a pseudo-metric."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 1 or a.size < 1 or np.any(a < 0):
        raise ParameterRange("Weights must be a nonempty vector of nonnegative numbers")
    if a.size > SPIN_MAX_SITES:
        raise SizeCap(a.size, SPIN_MAX_SITES)
    bits = _bits(a.size)
    differ = bits[:, None, :] != bits[None, :, :]
    return PseudoMetric((differ * a).sum(axis=2))


def hamming(n: int) -> PseudoMetric:
    return weighted_hamming(np.ones(n))


# Gambler's ruin

def gamblers_ruin(N: int, q: float) -> MarkovChain:
    """Walk on {0..N} absorbed at 0 and N; interior states step by +-1 with probability q each."""
    if N < 2:
        raise ParameterRange(f"Need N >= 2, got {N}")
    _check_q(q, upper_inclusive=True)
    P = np.zeros((N + 1, N + 1))
    P[0, 0] = P[N, N] = 1.0
    for x in range(1, N):
        P[x, x - 1] = P[x, x + 1] = q
        P[x, x] = 1.0 - 2.0 * q
    return validate_chain(P)


def harmonic_h(chain: MarkovChain, A1: Sequence[int], A2: Sequence[int]) -> np.ndarray:
    """
    h(x) = P_x(hit A1 before A2), solved from P h = h off A1 and A2 with h = 1 on A1, 0 on A2.

    Raises:
        ValidationError: A1 and A2 overlap or are empty
        UnreachableAbsorber: some state reaches neither set
    """
    A1, A2 = sorted(set(A1)), sorted(set(A2))
    if not A1 or not A2 or set(A1) & set(A2):
        raise ValidationError("A1 and A2 must be nonempty and disjoint")
    n = chain.n
    boundary = set(A1) | set(A2)
    interior = [x for x in range(n) if x not in boundary]

    graph = nx.DiGraph()
    graph.add_nodes_from(range(n))
    graph.add_edges_from((int(x), int(y)) for x, y in np.argwhere(chain.matrix > 0))
    stuck = [x for x in interior if not (nx.descendants(graph, x) & boundary)]
    if stuck:
        raise UnreachableAbsorber(stuck)

    h = np.zeros(n)
    h[A1] = 1.0
    if interior:
        P = chain.matrix
        system = np.eye(len(interior)) - P[np.ix_(interior, interior)]
        rhs = P[np.ix_(interior, A1)].sum(axis=1)
        h[interior] = linalg.solve(system, rhs)
    return h


def ruin_tau_comparison(chain: MarkovChain, rho: PseudoMetric, A1: Sequence[int], A2: Sequence[int]) -> List[Dict]:
    """
    For x in A1 and y outside A1, report rho(x, y) next to P_y(tau_1 <= tau_2) = h(y)
    and the lower bracket |h(x) - h(y)|. Nothing is asserted.
    """
    h = harmonic_h(chain, A1, A2)
    rows = []
    for x in sorted(set(A1)):
        for y in range(chain.n):
            if y in A1:
                continue
            rows.append({
                'x': x, 'y': y,
                'rho': float(rho.matrix[x, y]),
                'hit_probability': float(h[y]),
                'lower_bracket': float(abs(h[x] - h[y])),
            })
    return rows


# Random chains

def random_lazy_chain(n: int, seed: int = 0, min_selfloop: float = 0.6) -> MarkovChain:
    """Diagonal at least min_selfloop, the remaining mass of each row spread by a Dirichlet draw."""
    if n < 1:
        raise ParameterRange(f"Need n >= 1, got {n}")
    if not 0.5 < min_selfloop < 1.0:
        raise ParameterRange(f"min_selfloop must lie in (1/2, 1), got {min_selfloop!r}")
    rng = np.random.default_rng(seed)
    P = (1.0 - min_selfloop) * rng.dirichlet(np.ones(n), size=n)
    P[np.arange(n), np.arange(n)] += min_selfloop
    P /= P.sum(axis=1, keepdims=True)
    return validate_chain(P)


def random_metric(n: int, seed: int = 0) -> PseudoMetric:
    """Shortest-path closure of random positive edge weights; a proper metric."""
    rng = np.random.default_rng(seed)
    weights = rng.uniform(0.5, 1.5, size=(n, n))
    weights = np.triu(weights, 1)
    weights = weights + weights.T
    return PseudoMetric(shortest_path(weights, method='FW', directed=False))


# Dispatch

def build_example(spec: ExampleSpec) -> GeneratedExample:
    """Build the chain of an ExampleSpec, with the closed-form metric and curvature when known."""
    params = dict(spec.params)
    family = spec.family
    if family is ExampleFamily.LAZY_TORUS:
        L, q = int(params['L']), float(params['q'])
        chain = lazy_torus(L, q)
        if params.get('metric', 'sine') == 'parity':
            return GeneratedExample(chain, parity_metric(L), kappa_parity(q))
        if L < 4:
            return GeneratedExample(chain)
        return GeneratedExample(chain, rho_L(L), kappa_L(L, 1.0 - 2.0 * q))
    if family is ExampleFamily.SPIN_FLIP:
        n, q = int(params['n']), float(params['q'])
        weights = params.get('a') or [1.0] * n
        if len(weights) != n:
            raise ParameterRange(f"Expected {n} weights, got {len(weights)}")
        return GeneratedExample(spin_flip(n, q), weighted_hamming(weights), 2.0 * q)
    if family is ExampleFamily.ABSORBING_RUIN:
        return GeneratedExample(gamblers_ruin(int(params['N']), float(params.get('q', 0.5))), kappa=0.0)
    if family is ExampleFamily.RANDOM_LAZY:
        chain = random_lazy_chain(int(params['n']), int(params.get('seed', 0)),
                                  float(params.get('min_selfloop', 0.6)))
        return GeneratedExample(chain)
    if family is ExampleFamily.PRODUCT:
        left = build_example(ExampleSpec.from_dict(params['left']))
        right = build_example(ExampleSpec.from_dict(params['right']))
        chain = product_chain(left.chain, right.chain)
        if left.metric is None or right.metric is None or left.kappa is None or right.kappa is None:
            return GeneratedExample(chain)
        a, b = float(params.get('a', 1.0)), float(params.get('b', 1.0))
        metric = tensor_metric(left.metric, right.metric, a, b, 1.0)
        if math.isclose(left.kappa, right.kappa, rel_tol=0.0, abs_tol=1e-12):
            return GeneratedExample(chain, metric, left.kappa)
        # unequal curvatures: the tensor metric is only an eigendistance when one weight is zero
        if b == 0:
            return GeneratedExample(chain, metric, left.kappa)
        if a == 0:
            return GeneratedExample(chain, metric, right.kappa)
        return GeneratedExample(chain, metric)
    raise ValidationError(f"Unknown family {family!r}")
