from dataclasses import dataclass

import numpy as np

from fsll.core.exceptions import DomainError, IndexOutOfRangeError
from fsll.schemas.variables import VariableSpec


@dataclass
class Dataset:
    """
    Sample vectors over ``spec``, one row per sample.

    Rows are stored as an (N, n) int64 array.
    """
    spec: VariableSpec
    rows: np.ndarray

    def __post_init__(self) -> None:
        rows = np.asarray(self.rows, dtype=np.int64)
        if rows.ndim == 1 and self.spec.n == 1:
            rows = rows.reshape(-1, 1)
        if rows.ndim != 2 or rows.shape[1] != self.spec.n:
            raise DomainError(f"rows must have shape (N, {self.spec.n})")
        if rows.shape[0] < 1:
            raise DomainError("a dataset needs at least one row")
        cards = np.asarray(self.spec.cards, dtype=np.int64)
        if np.any(rows < 0) or np.any(rows >= cards):
            raise IndexOutOfRangeError("a sample component lies outside its cardinality")
        self.rows = rows

    @property
    def n_samples(self) -> int:
        return self.rows.shape[0]

    def __len__(self) -> int:
        return self.n_samples
