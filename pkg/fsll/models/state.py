from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Tuple

from fsll.core.exceptions import DomainError
from fsll.models.basis import LocalBasis
from fsll.models.table import DenseTable
from fsll.schemas.variables import VariableSpec


class SparseTheta:
    """
    Nonzero parameters theta_y keyed by flat basis index y.

    theta_0 is never stored and a value of exactly 0 deletes the entry.
    """

    def __init__(self, entries: Dict[int, float] = None):
        self._entries: Dict[int, float] = {}
        for y, value in (entries or {}).items():
            self.set(y, value)

    def get(self, y: int) -> float:
        return self._entries.get(int(y), 0.0)

    def set(self, y: int, value: float) -> None:
        y = int(y)
        if y == 0:
            raise DomainError("theta_0 is fixed to 0 and never stored")
        if value == 0.0:
            self._entries.pop(y, None)
        else:
            self._entries[y] = float(value)

    def __contains__(self, y: int) -> bool:
        return int(y) in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self._entries))

    def items(self) -> List[Tuple[int, float]]:
        return sorted(self._entries.items())

    def support(self) -> List[int]:
        return sorted(self._entries)

    @property
    def k(self) -> int:
        return len(self._entries)

    def copy(self) -> "SparseTheta":
        return SparseTheta(dict(self._entries))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SparseTheta) and self._entries == other._entries

    def __repr__(self) -> str:
        return f"SparseTheta(k={self.k})"


@dataclass
class ModelState:
    """
    FSLL model: sparse parameters plus the cached normalized density p_theta.

    ``updates_since_refresh`` counts incremental updates since p was last
    recomputed from theta.
    """
    spec: VariableSpec
    theta: SparseTheta
    p: DenseTable
    bases: List[LocalBasis]
    updates_since_refresh: int = field(default=0)

    @property
    def basis_count(self) -> int:
        return self.theta.k
