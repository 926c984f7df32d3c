from dataclasses import dataclass, field
from typing import List

import numpy as np

from fsll.core.exceptions import DomainError


@dataclass
class BmParams:
    """
    Fully connected Boltzmann machine over n binary variables.

    ``weights`` is n x n with theta_ij stored for i < j (zero elsewhere);
    ``biases`` holds theta_in. The flat vector layout is the upper-triangle
    weights in row-major order followed by the biases.
    """
    n: int
    weights: np.ndarray
    biases: np.ndarray

    def __post_init__(self) -> None:
        self.weights = np.triu(np.asarray(self.weights, dtype=np.float64), k=1)
        self.biases = np.asarray(self.biases, dtype=np.float64)
        if self.weights.shape != (self.n, self.n) or self.biases.shape != (self.n,):
            raise DomainError("parameter shapes do not match n")
        if not (np.all(np.isfinite(self.weights)) and np.all(np.isfinite(self.biases))):
            raise DomainError("Boltzmann machine parameters must be finite")

    @classmethod
    def zeros(cls, n: int) -> "BmParams":
        return cls(n, np.zeros((n, n)), np.zeros(n))

    @property
    def parameter_count(self) -> int:
        return self.n * (self.n + 1) // 2

    def symmetric(self) -> np.ndarray:
        """Symmetric coupling matrix with zero diagonal."""
        return self.weights + self.weights.T

    def to_vector(self) -> np.ndarray:
        rows, cols = np.triu_indices(self.n, k=1)
        return np.concatenate([self.weights[rows, cols], self.biases])

    @classmethod
    def from_vector(cls, n: int, vector: np.ndarray) -> "BmParams":
        rows, cols = np.triu_indices(n, k=1)
        pairs = rows.size
        weights = np.zeros((n, n))
        weights[rows, cols] = vector[:pairs]
        return cls(n, weights, np.array(vector[pairs:pairs + n]))

    def copy(self) -> "BmParams":
        return BmParams(self.n, self.weights.copy(), self.biases.copy())


@dataclass
class BmMoments:
    """<X_i X_j> for i != j and <X_i> on the diagonal (X_i^2 = X_i for binary X_i)."""
    n: int
    second: np.ndarray

    def to_vector(self) -> np.ndarray:
        rows, cols = np.triu_indices(self.n, k=1)
        return np.concatenate([self.second[rows, cols], np.diag(self.second)])


@dataclass
class BmFitResult:
    params: BmParams
    kl_history: List[float] = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
