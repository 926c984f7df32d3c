from dataclasses import dataclass
from enum import Enum

import numpy as np

from fsll.core.exceptions import DomainError
from fsll.schemas.variables import VariableSpec


class TableKind(str, Enum):
    DISTRIBUTION = "distribution"
    COEFFICIENTS = "coefficients"


DISTRIBUTION_TOLERANCE = 1e-12


@dataclass
class DenseTable:
    """
    Flat array of |X| reals indexed mixed-radix over ``spec``.

    Instances hold p_theta, p_d, the dual tables and the regularizer table.
    """
    spec: VariableSpec
    values: np.ndarray
    kind: TableKind = TableKind.COEFFICIENTS

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or self.values.shape[0] != self.spec.size:
            raise DomainError(
                f"table length {self.values.size} does not match |X| = {self.spec.size}"
            )

    def __len__(self) -> int:
        return self.values.shape[0]

    def grid(self) -> np.ndarray:
        """View of the values with one numpy axis per variable (X_0 last)."""
        return self.values.reshape(self.spec.shape)

    def is_distribution(self, tol: float = DISTRIBUTION_TOLERANCE) -> bool:
        return bool(np.all(self.values >= 0.0) and abs(self.values.sum() - 1.0) <= tol)

    def copy(self) -> "DenseTable":
        return DenseTable(self.spec, self.values.copy(), self.kind)

    @classmethod
    def uniform(cls, spec: VariableSpec) -> "DenseTable":
        return cls(spec, np.full(spec.size, 1.0 / spec.size), TableKind.DISTRIBUTION)

    @classmethod
    def distribution(cls, spec: VariableSpec, values: np.ndarray) -> "DenseTable":
        table = cls(spec, values, TableKind.DISTRIBUTION)
        if not table.is_distribution(1e-9):
            raise DomainError("values are not a probability distribution")
        return table


@dataclass
class RegularizerTable:
    """Description-length penalties r_y(N) for every flat y."""
    spec: VariableSpec
    values: np.ndarray
    n_samples: int

    def __getitem__(self, y: int) -> float:
        return float(self.values[y])


@dataclass
class DualTable:
    """Expectations <Phi_y> indexed by the flat basis index y."""
    spec: VariableSpec
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (self.spec.size,):
            raise DomainError("dual table length does not match |X|")

    def __getitem__(self, y: int) -> float:
        return float(self.values[y])
