"""
Tests for mixed-radix indexing, datasets and empirical distributions.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from fsll.core.exceptions import DomainError, IndexOutOfRangeError
from fsll.models.dataset import Dataset
from fsll.schemas.variables import VariableSpec
from fsll.services.mixed_radix_service import (
    digit_support,
    empirical_distribution,
    pack,
    pack_many,
    unpack,
    unpack_many,
)


def test_pack_first_variable_fastest():
    """Test that x_0 is the fastest-varying digit."""
    spec = VariableSpec(cards=[2, 3])
    assert pack([1, 0], spec) == 1
    assert pack([0, 1], spec) == 2
    assert pack([1, 2], spec) == 5
    assert unpack(5, spec) == [1, 2]
    assert spec.strides == (1, 2)
    assert spec.shape == (3, 2)


def test_pack_unpack_cover_every_index(mixed_spec):
    """Test that unpack inverts pack over the whole space."""
    seen = set()
    for flat in range(mixed_spec.size):
        digits = unpack(flat, mixed_spec)
        assert pack(digits, mixed_spec) == flat
        seen.add(tuple(digits))
    assert len(seen) == mixed_spec.size


def test_pack_rejects_out_of_range():
    """Test range errors of pack and unpack."""
    spec = VariableSpec(cards=[2, 3])
    with pytest.raises(IndexOutOfRangeError):
        pack([2, 0], spec)
    with pytest.raises(IndexOutOfRangeError):
        pack([0, -1], spec)
    with pytest.raises(IndexOutOfRangeError):
        pack([0], spec)
    with pytest.raises(IndexOutOfRangeError):
        unpack(6, spec)
    with pytest.raises(IndexOutOfRangeError):
        unpack_many(np.array([0, 6]), spec)


def test_vectorised_forms_match_scalar(mixed_spec):
    """Test pack_many / unpack_many against the scalar functions."""
    flat = np.arange(mixed_spec.size)
    digits = unpack_many(flat, mixed_spec)
    assert digits.shape == (mixed_spec.size, mixed_spec.n)
    for index in (0, 1, 7, 23, mixed_spec.size - 1):
        assert list(digits[index]) == unpack(index, mixed_spec)
    np.testing.assert_array_equal(pack_many(digits, mixed_spec), flat)


def test_digit_support():
    """Test the order of a basis index."""
    spec = VariableSpec(cards=[3, 2, 4])
    assert digit_support(0, spec) == 0
    assert digit_support(pack([2, 0, 0], spec), spec) == 1
    assert digit_support(pack([1, 1, 3], spec), spec) == 3


def test_variable_spec_validation():
    """Test that invalid cardinalities are rejected."""
    with pytest.raises(ValidationError):
        VariableSpec(cards=[])
    with pytest.raises(ValidationError):
        VariableSpec(cards=[2, 1])
    with pytest.raises(ValidationError):
        VariableSpec(cards=[2] * 40)
    assert VariableSpec.binary(3).is_binary
    assert not VariableSpec(cards=[2, 3]).is_binary
    assert VariableSpec(cards=[2, 3]).header() == "# cards: 2,3"


def test_dataset_validation():
    """Test dataset shape and range checks."""
    spec = VariableSpec(cards=[2, 3])
    with pytest.raises(IndexOutOfRangeError):
        Dataset(spec, np.array([[0, 3]]))
    with pytest.raises(DomainError):
        Dataset(spec, np.array([[0, 1, 0]]))
    with pytest.raises(DomainError):
        Dataset(spec, np.zeros((0, 2)))
    assert len(Dataset(spec, np.array([[1, 2], [0, 0]]))) == 2


def test_empirical_distribution():
    """Test counting of samples into a table."""
    spec = VariableSpec(cards=[2, 3])
    data = Dataset(spec, np.array([[0, 0], [1, 0], [1, 0], [0, 2]]))
    p_d = empirical_distribution(data)
    expected = np.zeros(6)
    expected[0] = 0.25
    expected[1] = 0.5
    expected[4] = 0.25
    np.testing.assert_array_equal(p_d.values, expected)
    assert p_d.is_distribution()
