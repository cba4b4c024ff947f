from dataclasses import dataclass

import numpy as np


def _frozen(values) -> np.ndarray:
    array = np.array(values, dtype=float)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class TransportInstance:
    """Class to hold one discrete transportation problem: marginals mu, nu and a cost matrix."""
    mu: np.ndarray
    nu: np.ndarray
    cost: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, 'mu', _frozen(self.mu))
        object.__setattr__(self, 'nu', _frozen(self.nu))
        object.__setattr__(self, 'cost', _frozen(self.cost))

    @property
    def shape(self):
        return self.cost.shape

    def scaled(self, factor: float) -> 'TransportInstance':
        return TransportInstance(self.mu, self.nu, self.cost * factor)

    def to_dict(self) -> dict:
        return {'mu': self.mu.tolist(), 'nu': self.nu.tolist(), 'cost': self.cost.tolist()}

    @classmethod
    def from_dict(cls, data: dict) -> 'TransportInstance':
        return cls(mu=data['mu'], nu=data['nu'], cost=data['cost'])


@dataclass(frozen=True)
class TransportPlan:
    """Class to hold an optimal coupling, its objective value and the dual potentials."""
    plan: np.ndarray
    value: float
    u: np.ndarray
    v: np.ndarray
    pivots: int = 0

    def __post_init__(self):
        object.__setattr__(self, 'plan', _frozen(self.plan))
        object.__setattr__(self, 'u', _frozen(self.u))
        object.__setattr__(self, 'v', _frozen(self.v))

    @property
    def duals(self):
        return self.u, self.v

    def transpose(self) -> 'TransportPlan':
        """The plan for the swapped instance (nu, mu, cost^T)."""
        return TransportPlan(self.plan.T, self.value, self.v, self.u, self.pivots)

    def to_dict(self) -> dict:
        return {
            'plan': self.plan.tolist(),
            'value': self.value,
            'u': self.u.tolist(),
            'v': self.v.tolist(),
            'pivots': self.pivots,
        }

    @classmethod
    def from_dict(cls, data: dict) -> 'TransportPlan':
        return cls(
            plan=data['plan'],
            value=float(data['value']),
            u=data['u'],
            v=data['v'],
            pivots=int(data.get('pivots', 0)),
        )


@dataclass(frozen=True)
class PlanCheck:
    """Result of checking a plan against its instance."""
    marginal_err: float
    duality_gap: float
    dual_infeasibility: float

    def within(self, tol: float) -> bool:
        return max(self.marginal_err, abs(self.duality_gap), self.dual_infeasibility) <= tol

    def to_dict(self) -> dict:
        return {
            'marginal_err': self.marginal_err,
            'duality_gap': self.duality_gap,
            'dual_infeasibility': self.dual_infeasibility,
        }
