from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple

from .pseudo_metric import PseudoMetric
from .transport import TransportPlan


@dataclass(frozen=True)
class WpResult:
    """Class to hold the image W_p(rho) and, optionally, the per-pair optimal plans (keys x < y)."""
    metric: PseudoMetric
    p: float
    plans: Optional[Dict[Tuple[int, int], TransportPlan]] = field(default=None, compare=False)

    def plan_for(self, x: int, y: int) -> TransportPlan:
        """Plan coupling P^x (rows) with P^y (columns); the transpose is returned for x > y."""
        if self.plans is None:
            raise KeyError("Plans were not kept for this evaluation")
        if x < y:
            return self.plans[(x, y)]
        return self.plans[(y, x)].transpose()
