"""
Mixed-radix index arithmetic and empirical distributions.

x_0 is the fastest-varying digit: flat = sum_i x_i * prod_{j<i} |X_j|.
"""

from typing import Iterator, List, Sequence, Tuple

import numpy as np

from fsll.core.config import settings
from fsll.core.exceptions import CapacityError, IndexOutOfRangeError
from fsll.models.dataset import Dataset
from fsll.models.table import DenseTable, TableKind
from fsll.schemas.variables import VariableSpec


def pack(indices: Sequence[int], spec: VariableSpec) -> int:
    """
    Map per-variable values to the flat index.

    Raises:
        IndexOutOfRangeError: If a component is outside its cardinality
    """
    if len(indices) != spec.n:
        raise IndexOutOfRangeError(f"expected {spec.n} components, got {len(indices)}")
    flat = 0
    for value, card, stride in zip(indices, spec.cards, spec.strides):
        value = int(value)
        if not 0 <= value < card:
            raise IndexOutOfRangeError(f"component {value} outside [0, {card})")
        flat += value * stride
    return flat


def unpack(flat: int, spec: VariableSpec) -> List[int]:
    """
    Map a flat index back to per-variable values.

    Raises:
        IndexOutOfRangeError: If flat is outside [0, |X|)
    """
    flat = int(flat)
    if not 0 <= flat < spec.size:
        raise IndexOutOfRangeError(f"flat index {flat} outside [0, {spec.size})")
    digits = []
    for card in spec.cards:
        flat, digit = divmod(flat, card)
        digits.append(digit)
    return digits


def pack_many(rows: np.ndarray, spec: VariableSpec) -> np.ndarray:
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, spec.n)
    cards = np.asarray(spec.cards, dtype=np.int64)
    if np.any(rows < 0) or np.any(rows >= cards):
        raise IndexOutOfRangeError("a component lies outside its cardinality")
    return rows @ np.asarray(spec.strides, dtype=np.int64)


def unpack_many(flat: np.ndarray, spec: VariableSpec) -> np.ndarray:
    """Digits of every flat index, shape (len(flat), n), column i holding x_i."""
    flat = np.asarray(flat, dtype=np.int64).ravel()
    if flat.size and (flat.min() < 0 or flat.max() >= spec.size):
        raise IndexOutOfRangeError("flat index out of range")
    digits = np.unravel_index(flat, spec.shape)
    return np.stack(digits[::-1], axis=1)


def digit_support(y: int, spec: VariableSpec) -> int:
    """Number of nonzero digits of y, i.e. the order of Phi_y."""
    return sum(1 for d in unpack(y, spec) if d != 0)


def empirical_distribution(data: Dataset) -> DenseTable:
    """
    Empirical distribution p_d of a dataset.

    Counts are accumulated as integers and divided once by N.
    """
    flat = pack_many(data.rows, data.spec)
    counts = np.bincount(flat, minlength=data.spec.size)
    return DenseTable(data.spec, counts / data.n_samples, TableKind.DISTRIBUTION)


def check_enumerable(n: int) -> None:
    """
    Raises:
        CapacityError: If 2^n binary states are too many to enumerate
    """
    if n > settings.ENUMERATION_MAX_VARIABLES:
        raise CapacityError(
            f"exact enumeration over 2^{n} states exceeds the limit of "
            f"{settings.ENUMERATION_MAX_VARIABLES} variables"
        )


def binary_state_blocks(n: int) -> Iterator[Tuple[slice, np.ndarray]]:
    """
    Every binary state of n variables in blocks of ``ENUMERATION_CHUNK``.

    Yields (slice of flat indices, (rows, n) int64 bits) with bit i of the
    flat index being x_i.
    """
    check_enumerable(n)
    total = 1 << n
    shifts = np.arange(n, dtype=np.int64)
    for start in range(0, total, settings.ENUMERATION_CHUNK):
        stop = min(start + settings.ENUMERATION_CHUNK, total)
        index = np.arange(start, stop, dtype=np.int64)
        yield slice(start, stop), (index[:, None] >> shifts) & 1
