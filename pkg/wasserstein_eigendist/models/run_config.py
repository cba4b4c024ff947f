from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from .tolerances import Tolerances


@dataclass(frozen=True)
class RunConfig:
    """Class to hold one command-line invocation after argument parsing."""
    subcommand: str
    chain_path: Optional[str] = None
    metric_path: Optional[str] = None
    p: float = 1.0
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    samples: int = 10000
    out: Optional[str] = None
    fmt: str = "json"
    options: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            'subcommand': self.subcommand,
            'chain_path': self.chain_path,
            'metric_path': self.metric_path,
            'p': self.p,
            'tolerances': self.tolerances.to_dict(),
            'seed': self.seed,
            'samples': self.samples,
            'out': self.out,
            'format': self.fmt,
            'options': dict(self.options),
        }
