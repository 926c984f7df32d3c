"""
Local bases and the dimension-by-dimension dual transform.

The dual table <Phi_y>_p is computed from any dense table p by applying the
local transform of each variable in turn, i = 0 .. n-1. A table reshaped to
(outer, |X_i|, inner) with inner = prod_{j<i} |X_j| exposes the |X_i| strided
entries of every fixed setting of the other coordinates along axis 1.
"""

import logging
import math
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import numpy as np

from fsll.core.config import settings
from fsll.core.exceptions import DomainError
from fsll.models.basis import LocalBasis
from fsll.models.table import DenseTable, DualTable, TableKind
from fsll.schemas.variables import VariableSpec
from fsll.services.mixed_radix_service import unpack, unpack_many

logger = logging.getLogger(__name__)

# consecutive binary variables contracted together in one H_{2^g} pass
FUSED_BINARY_AXES = 3


def _is_power_of_two(m: int) -> bool:
    return m >= 1 and (m & (m - 1)) == 0


def _hadamard(m: int) -> np.ndarray:
    h = np.ones((1, 1))
    while h.shape[0] < m:
        h = np.block([[h, h], [h, -h]])
    return h


@lru_cache(maxsize=None)
def local_basis(card: int) -> LocalBasis:
    """
    Local basis matrix of a variable with ``card`` values.

    Powers of two get the Walsh-Hadamard matrix built by the doubling
    recursion; other cardinalities get row 0 all ones and, for j > 0,
    +1 on the diagonal and -1 elsewhere.

    Raises:
        DomainError: If card < 2
    """
    if card < 2:
        raise DomainError(f"cardinality must be >= 2, got {card}")
    if _is_power_of_two(card):
        matrix = _hadamard(card)
        is_wht = True
    else:
        matrix = -np.ones((card, card))
        matrix[0, :] = 1.0
        np.fill_diagonal(matrix[1:, 1:], 1.0)
        is_wht = False
    matrix.setflags(write=False)
    return LocalBasis(card=card, matrix=matrix, is_wht=is_wht)


def bases_for(spec: VariableSpec) -> List[LocalBasis]:
    return [local_basis(card) for card in spec.cards]


def _butterfly(block: np.ndarray) -> None:
    """In-place unnormalized WHT along axis 1 of a contiguous (outer, m, inner) array."""
    outer, m, inner = block.shape
    h = 1
    while h < m:
        view = block.reshape(outer, m // (2 * h), 2, h, inner)
        upper = view[:, :, 0]
        lower = view[:, :, 1]
        saved = upper.copy()
        upper += lower
        np.subtract(saved, lower, out=lower)
        h *= 2


def fast_wht_inplace(segment: np.ndarray) -> np.ndarray:
    """
    Replace ``segment`` by H_m @ segment with the O(m log m) butterfly.

    Raises:
        DomainError: If the length is not a power of two or the array is not contiguous
    """
    if segment.ndim != 1 or not _is_power_of_two(segment.shape[0]):
        raise DomainError("WHT length must be a power of two")
    if not segment.flags.c_contiguous:
        raise DomainError("WHT needs a contiguous segment")
    _butterfly(segment.reshape(1, segment.shape[0], 1))
    return segment


def _split(spec: VariableSpec, axis: int, count: int = 1) -> Tuple[int, int, int]:
    card = math.prod(spec.cards[axis:axis + count])
    inner = spec.strides[axis]
    outer = spec.size // (card * inner)
    return outer, card, inner


def _apply(src: np.ndarray, dst: np.ndarray, shape: Tuple[int, int, int], basis: LocalBasis) -> None:
    outer, card, inner = shape
    src3 = src.reshape(shape)
    dst3 = dst.reshape(shape)
    if card == 2:
        # H_2 multiplied directly
        np.add(src3[:, 0, :], src3[:, 1, :], out=dst3[:, 0, :])
        np.subtract(src3[:, 0, :], src3[:, 1, :], out=dst3[:, 1, :])
    elif basis.is_wht and card >= settings.WHT_THRESHOLD:
        np.copyto(dst3, src3)
        _butterfly(dst3)
    elif inner == 1:
        np.matmul(src.reshape(outer, card), basis.matrix.T, out=dst.reshape(outer, card))
    else:
        np.matmul(basis.matrix, src3, out=dst3)


def _local_transform(src: np.ndarray, dst: np.ndarray, spec: VariableSpec, axis: int, basis: LocalBasis) -> None:
    _apply(src, dst, _split(spec, axis), basis)


def transform_plan(spec: VariableSpec, bases: Sequence[LocalBasis]) -> List[Tuple[Tuple[int, int, int], LocalBasis]]:
    """
    Passes of a dual transform as ((outer, card, inner), basis) pairs.

    Up to ``FUSED_BINARY_AXES`` consecutive binary variables share one pass:
    for bits x_i .. x_{i+g-1} packed with x_i fastest, the product of their
    H_2 bases is H_{2^g}.
    """
    plan = []
    axis = 0
    while axis < spec.n:
        count = 1
        if bases[axis].card == 2:
            while count < FUSED_BINARY_AXES and axis + count < spec.n and bases[axis + count].card == 2:
                count += 1
        basis = local_basis(2 ** count) if count > 1 else bases[axis]
        plan.append((_split(spec, axis, count), basis))
        axis += count
    return plan


def _check_axis(spec: VariableSpec, axis: int, basis: LocalBasis) -> None:
    if not 0 <= axis < spec.n:
        raise DomainError(f"axis {axis} out of range for {spec.n} variables")
    if basis.card != spec.cards[axis]:
        raise DomainError(f"basis for {basis.card} values applied to a variable with {spec.cards[axis]}")


def local_transform_pass(table: DenseTable, axis: int, basis: LocalBasis) -> DenseTable:
    """
    Apply the local transform of variable ``axis`` to every strided slice.

    Returns a new coefficient table; the input is not modified.
    """
    _check_axis(table.spec, axis, basis)
    out = np.empty_like(table.values)
    _local_transform(table.values, out, table.spec, axis, basis)
    return DenseTable(table.spec, out, TableKind.COEFFICIENTS)


class TransformWorkspace:
    """
    Two |X|-sized buffers reused across dual transforms.

    A transform's result lives in one buffer and stays valid until the next
    transform through the same workspace.
    """

    def __init__(self, spec: VariableSpec):
        self.spec = spec
        self._front = np.empty(spec.size)
        self._back = np.empty(spec.size)

    def run(self, values: np.ndarray, bases: Sequence[LocalBasis]) -> np.ndarray:
        src = values
        dst = self._back if np.shares_memory(values, self._front) else self._front
        for shape, basis in transform_plan(self.spec, bases):
            _apply(src, dst, shape, basis)
            src = dst
            dst = self._back if dst is self._front else self._front
        return src

    @property
    def nbytes(self) -> int:
        return self._front.nbytes + self._back.nbytes


def dual_transform(
    table: DenseTable,
    bases: Sequence[LocalBasis],
    workspace: Optional[TransformWorkspace] = None,
) -> DualTable:
    """
    Compute out[y] = sum_x table[x] * Phi_y(x) for every y.

    Args:
        table: Dense table over the joint space
        bases: One local basis per variable
        workspace: Optional reusable buffers; without one the result is freshly allocated

    Returns:
        Dual table indexed by y

    Raises:
        DomainError: If the bases do not match the table's spec
    """
    spec = table.spec
    if len(bases) != spec.n:
        raise DomainError(f"expected {spec.n} local bases, got {len(bases)}")
    for axis, basis in enumerate(bases):
        _check_axis(spec, axis, basis)
    if workspace is None:
        workspace = TransformWorkspace(spec)
    elif workspace.spec != spec:
        raise DomainError("workspace belongs to a different spec")
    return DualTable(spec, workspace.run(table.values, bases))


def basis_signs(y: int, spec: VariableSpec, bases: Sequence[LocalBasis]) -> np.ndarray:
    """
    Phi_y as a +-1 array broadcastable over ``spec.shape``.

    Only axes with y_i != 0 have full extent, so the array has
    prod_{i: y_i != 0} |X_i| entries.
    """
    signs = np.ones((1,) * spec.n)
    for i, digit in enumerate(unpack(y, spec)):
        if digit == 0:
            continue
        shape = [1] * spec.n
        shape[spec.numpy_axis(i)] = spec.cards[i]
        signs = signs * bases[i].matrix[digit].reshape(shape)
    return signs


def basis_vector(y: int, spec: VariableSpec, bases: Sequence[LocalBasis]) -> np.ndarray:
    """Phi_y(x) for every flat x."""
    return np.broadcast_to(basis_signs(y, spec, bases), spec.shape).ravel()


def brute_force_dual(table: DenseTable, y: int) -> float:
    """Direct O(|X| n) evaluation of sum_x table[x] * Phi_y(x)."""
    spec = table.spec
    bases = bases_for(spec)
    y_digits = unpack(y, spec)
    x_digits = unpack_many(np.arange(spec.size), spec)
    phi = np.ones(spec.size)
    for i, digit in enumerate(y_digits):
        phi *= bases[i].matrix[digit][x_digits[:, i]]
    return float(np.dot(table.values, phi))
