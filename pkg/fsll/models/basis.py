from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class LocalBasis:
    """
    The card x card +-1 matrix of local basis functions of one variable.

    Row j holds phi_j evaluated at x = 0 .. card-1; row 0 is all ones.
    """
    card: int
    matrix: np.ndarray
    is_wht: bool

    def row(self, j: int) -> np.ndarray:
        return self.matrix[j]
