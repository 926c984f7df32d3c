"""
Tests for local bases and the dual transform.
"""

import time

import numpy as np
import pytest

from fsll.core.exceptions import DomainError
from fsll.models.table import DenseTable
from fsll.schemas.variables import VariableSpec
from fsll.services.transform_service import (
    TransformWorkspace,
    bases_for,
    basis_signs,
    basis_vector,
    brute_force_dual,
    dual_transform,
    fast_wht_inplace,
    local_basis,
    local_transform_pass,
    transform_plan,
)


def test_local_basis_small_cards():
    """Test the binary, ternary and four-valued bases."""
    np.testing.assert_array_equal(local_basis(2).matrix, [[1, 1], [1, -1]])
    np.testing.assert_array_equal(local_basis(3).matrix, [[1, 1, 1], [-1, 1, -1], [-1, -1, 1]])
    h4 = local_basis(4).matrix
    np.testing.assert_array_equal(h4 @ h4.T, 4 * np.eye(4))
    assert local_basis(4).is_wht
    assert not local_basis(5).is_wht
    np.testing.assert_array_equal(local_basis(5).row(0), np.ones(5))


def test_local_basis_rejects_single_value():
    """Test that a one-valued variable has no basis."""
    with pytest.raises(DomainError):
        local_basis(1)


def test_fast_wht_matches_matrix(rng):
    """Test the butterfly against multiplication by H_m."""
    for m in (2, 8, 64):
        v = rng.normal(size=m)
        expected = local_basis(m).matrix @ v
        np.testing.assert_allclose(fast_wht_inplace(v.copy()), expected, atol=1e-12)
    with pytest.raises(DomainError):
        fast_wht_inplace(np.ones(6))


@pytest.mark.parametrize(
    "cards",
    [[2, 2, 2, 2, 2], [3, 3, 3], [2, 3, 4, 2], [5, 2], [32, 2], [2, 64]],
)
def test_dual_transform_matches_brute_force(cards, make_distribution):
    """Test the fast transform at every y for several random tables."""
    spec = VariableSpec(cards=cards)
    bases = bases_for(spec)
    for _ in range(9):
        table = make_distribution(spec)
        dual = dual_transform(table, bases)
        brute = np.array([brute_force_dual(table, y) for y in range(spec.size)])
        np.testing.assert_allclose(dual.values, brute, rtol=0, atol=1e-10)
        assert dual[0] == pytest.approx(1.0, abs=1e-12)


def test_dual_of_uniform_binary_table():
    """Test that the uniform distribution has zero expectation for every y > 0."""
    spec = VariableSpec.binary(6)
    dual = dual_transform(DenseTable.uniform(spec), bases_for(spec))
    assert dual[0] == pytest.approx(1.0)
    np.testing.assert_allclose(dual.values[1:], 0.0, atol=1e-14)


def test_local_transform_pass_leaves_input(mixed_spec, make_distribution):
    """Test that a single pass returns a new table and keeps the input."""
    table = make_distribution(mixed_spec)
    before = table.values.copy()
    out = local_transform_pass(table, 1, local_basis(3))
    np.testing.assert_array_equal(table.values, before)
    assert out.values.shape == before.shape
    with pytest.raises(DomainError):
        local_transform_pass(table, 1, local_basis(2))
    with pytest.raises(DomainError):
        local_transform_pass(table, 4, local_basis(2))


def test_workspace_reuse(mixed_spec, make_distribution):
    """Test that a workspace gives the same result as a fresh transform."""
    bases = bases_for(mixed_spec)
    workspace = TransformWorkspace(mixed_spec)
    assert workspace.nbytes == 2 * 8 * mixed_spec.size
    first = make_distribution(mixed_spec)
    second = make_distribution(mixed_spec)
    expected = dual_transform(second, bases).values.copy()
    dual_transform(first, bases, workspace)
    np.testing.assert_allclose(dual_transform(second, bases, workspace).values, expected, atol=1e-15)
    with pytest.raises(DomainError):
        dual_transform(first, bases, TransformWorkspace(VariableSpec.binary(2)))
    with pytest.raises(DomainError):
        dual_transform(first, bases[:-1])


def test_basis_signs_product_rule(mixed_spec):
    """Test that the broadcast signs equal Phi_y at every x."""
    bases = bases_for(mixed_spec)
    for y in (1, 5, 17, mixed_spec.size - 1):
        signs = basis_signs(y, mixed_spec, bases)
        assert signs.ndim == mixed_spec.n
        phi = basis_vector(y, mixed_spec, bases)
        assert set(np.unique(phi)) <= {-1.0, 1.0}
        indicator = np.zeros(mixed_spec.size)
        table = DenseTable(mixed_spec, indicator)
        for x in (0, 3, 20, mixed_spec.size - 1):
            indicator[:] = 0.0
            indicator[x] = 1.0
            assert phi[x] == brute_force_dual(table, y)


def test_basis_signs_only_spans_used_axes():
    """Test that unused variables keep extent 1."""
    spec = VariableSpec(cards=[2, 3, 4])
    signs = basis_signs(1, spec, bases_for(spec))
    # only x_0 is used; it is the last numpy axis
    assert signs.shape == (1, 1, 2)


@pytest.mark.slow
def test_transform_large_binary_space(rng):
    """Test that a 22-variable transform is fast and correct at sampled y."""
    spec = VariableSpec.binary(22)
    values = rng.random(spec.size)
    table = DenseTable(spec, values / values.sum())
    bases = bases_for(spec)
    started = time.perf_counter()
    dual = dual_transform(table, bases)
    elapsed = time.perf_counter() - started
    assert elapsed < 2.0
    x = np.arange(spec.size, dtype=np.int64)
    for y in (1, 2 ** 21, 12345, spec.size - 1):
        # binary Phi_y(x) = (-1)^popcount(x & y)
        parity = np.zeros(spec.size, dtype=np.int64)
        for i in range(spec.n):
            if (y >> i) & 1:
                parity ^= (x >> i) & 1
        assert dual[y] == pytest.approx(float(np.dot(table.values, 1 - 2 * parity)), abs=1e-10)


def test_kronecker_products_of_local_bases_have_full_rank():
    """Test that products of two local bases are independent for cards up to 6."""
    for a in range(2, 7):
        for b in range(2, 7):
            product = np.kron(local_basis(a).matrix, local_basis(b).matrix)
            assert np.linalg.matrix_rank(product) == a * b


@pytest.mark.parametrize("n", [6, 7])
def test_binary_transform_is_an_involution_up_to_size(n, rng):
    """Test that transforming twice multiplies by |X|, also when reusing the workspace."""
    spec = VariableSpec.binary(n)
    bases = bases_for(spec)
    values = rng.normal(size=spec.size)
    workspace = TransformWorkspace(spec)
    once = dual_transform(DenseTable(spec, values), bases, workspace)
    # the input aliases one of the workspace buffers here
    twice = dual_transform(DenseTable(spec, once.values), bases, workspace)
    np.testing.assert_allclose(twice.values, spec.size * values, atol=1e-10)
    fresh = dual_transform(DenseTable(spec, dual_transform(DenseTable(spec, values), bases).values), bases)
    np.testing.assert_allclose(fresh.values, spec.size * values, atol=1e-10)


def test_fused_binary_passes_match_single_axis_passes(rng):
    """Test that grouped Hadamard passes equal one pass per variable."""
    spec = VariableSpec(cards=[2, 2, 2, 2, 3, 2, 2, 2, 2])
    bases = bases_for(spec)
    plan = transform_plan(spec, bases)
    assert [basis.card for _, basis in plan] == [8, 2, 3, 8, 2]
    table = DenseTable(spec, rng.random(spec.size))
    step = table
    for axis, basis in enumerate(bases):
        step = local_transform_pass(step, axis, basis)
    np.testing.assert_allclose(dual_transform(table, bases).values, step.values, atol=1e-12)


@pytest.mark.slow
def test_transform_time_grows_log_linearly(rng):
    """Test that one more binary variable costs at most 2.6x, n = 16 .. 22."""
    timings = []
    for n in range(16, 23):
        spec = VariableSpec.binary(n)
        bases = bases_for(spec)
        table = DenseTable(spec, rng.random(spec.size))
        workspace = TransformWorkspace(spec)
        dual_transform(table, bases, workspace)
        runs = []
        for _ in range(5):
            started = time.perf_counter()
            dual_transform(table, bases, workspace)
            runs.append(time.perf_counter() - started)
        timings.append(min(runs))
    ratios = [later / earlier for earlier, later in zip(timings, timings[1:])]
    assert max(ratios) <= 2.6, ratios
    assert timings[-1] < 2.0
