"""
Products of independent chains and the tensorized metrics on them.

State (a, b) of the product is stored at index a * n_B + b.
"""

import logging
import warnings

import numpy as np

from ..exceptions import ParameterRange, ParameterWarning
from ..models import MarkovChain, Partition, PseudoMetric

logger = logging.getLogger(__name__)


def product_chain(chain_a: MarkovChain, chain_b: MarkovChain) -> MarkovChain:
    """P((a,b),(a',b')) = P_A(a,a') P_B(b,b')."""
    labels = [f"({la},{lb})" for la in chain_a.labels for lb in chain_b.labels]
    return MarkovChain(matrix=np.kron(chain_a.matrix, chain_b.matrix), labels=labels)


def tensor_metric(rho_x: PseudoMetric, rho_y: PseudoMetric, a: float = 1.0, b: float = 1.0, p: float = 1.0) -> PseudoMetric:
    """
    rho((x,y),(u,v)) = (a rho_X(x,u)^p + b rho_Y(y,v)^p)^{1/p}.

    With a = 0 or b = 0 the result is a pullback and vanishes across fibers.
    """
    if a < 0 or b < 0:
        raise ParameterRange(f"Weights must be nonnegative, got a={a}, b={b}")
    if a == 0 and b == 0:
        warnings.warn("Both weights are zero; the tensor metric is identically zero", ParameterWarning, stacklevel=2)
    ones_x = np.ones((rho_x.n, rho_x.n))
    ones_y = np.ones((rho_y.n, rho_y.n))
    combined = a * np.kron(np.power(rho_x.matrix, p), ones_y) + b * np.kron(ones_x, np.power(rho_y.matrix, p))
    return PseudoMetric(np.power(combined, 1.0 / p))


def projection_partition(n_a: int, n_b: int, coordinate: int = 0) -> Partition:
    """Fibers of the projection of the product onto its first (0) or second (1) coordinate."""
    if coordinate not in (0, 1):
        raise ParameterRange(f"coordinate must be 0 or 1, got {coordinate}")
    states = np.arange(n_a * n_b)
    labels = states // n_b if coordinate == 0 else states % n_b
    return Partition.from_labels(labels.tolist())
