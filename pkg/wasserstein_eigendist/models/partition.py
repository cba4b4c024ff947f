from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from ..exceptions import InvalidPartition


@dataclass(frozen=True)
class Partition:
    """Class to hold a partition of the states {0..n-1} into disjoint nonempty blocks."""
    blocks: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        canonical = tuple(sorted((tuple(sorted(set(b))) for b in self.blocks), key=lambda b: b[0] if b else -1))
        object.__setattr__(self, 'blocks', canonical)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Sequence[int]], n: int) -> 'Partition':
        """Build and validate a partition of range(n)."""
        blocks = [list(b) for b in blocks]
        if any(len(b) == 0 for b in blocks):
            raise InvalidPartition("Partition blocks must be nonempty")
        seen: List[int] = [s for b in blocks for s in b]
        if len(seen) != len(set(seen)):
            raise InvalidPartition("Partition blocks overlap")
        if sorted(seen) != list(range(n)):
            raise InvalidPartition(f"Partition blocks do not cover the {n} states")
        return cls(tuple(tuple(b) for b in blocks))

    @classmethod
    def from_labels(cls, assignment: Sequence[int]) -> 'Partition':
        """Build a partition from a block label per state."""
        groups = {}
        for state, label in enumerate(assignment):
            groups.setdefault(label, []).append(state)
        return cls(tuple(tuple(g) for g in groups.values()))

    @classmethod
    def singletons(cls, n: int) -> 'Partition':
        return cls(tuple((i,) for i in range(n)))

    @classmethod
    def one_block(cls, n: int) -> 'Partition':
        return cls((tuple(range(n)),))

    @property
    def n(self) -> int:
        return sum(len(b) for b in self.blocks)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @property
    def is_trivial(self) -> bool:
        """Singletons or a single block."""
        return self.num_blocks in (1, self.n)

    def labels(self) -> np.ndarray:
        """Block index of every state."""
        out = np.empty(self.n, dtype=int)
        for index, block in enumerate(self.blocks):
            out[list(block)] = index
        return out

    def indicator(self) -> np.ndarray:
        """n x k matrix whose column j is the indicator of block j."""
        ind = np.zeros((self.n, self.num_blocks))
        ind[np.arange(self.n), self.labels()] = 1.0
        return ind

    def to_dict(self) -> dict:
        return {'blocks': [list(b) for b in self.blocks]}

    @classmethod
    def from_dict(cls, data: dict) -> 'Partition':
        blocks = data['blocks']
        return cls.from_blocks(blocks, sum(len(b) for b in blocks))
