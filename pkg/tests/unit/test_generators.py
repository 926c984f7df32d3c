"""
Tests for the Ising and Bayesian-network generators and the sampler.
"""

import math

import numpy as np
import pytest

from fsll.core.config import settings
from fsll.core.exceptions import CapacityError, DomainError
from fsll.models.table import DenseTable
from fsll.schemas.generators import BayesNetSpec, IsingGridSpec
from fsll.schemas.variables import VariableSpec
from fsll.services import generator_service
from fsll.services.mixed_radix_service import empirical_distribution


def test_ising_edges():
    """Test 4-neighbour adjacency without wrap-around."""
    assert generator_service.ising_edges(IsingGridSpec(rows=2, cols=2)) == [(0, 1), (0, 2), (1, 3), (2, 3)]
    assert len(generator_service.ising_edges(IsingGridSpec(rows=5, cols=4))) == 31


def test_ising_two_spins():
    """Test the 1 x 2 grid against direct evaluation."""
    p = generator_service.ising_true_distribution(IsingGridSpec(rows=1, cols=2))
    weights = np.exp([0.5, -0.5, -0.5, 0.5])
    np.testing.assert_allclose(p.values, weights / weights.sum(), rtol=1e-14)


def test_ising_spin_flip_symmetry():
    """Test invariance under x -> 1 - x, which maps flat index i to |X| - 1 - i."""
    p = generator_service.ising_true_distribution(IsingGridSpec(rows=3, cols=3))
    np.testing.assert_allclose(p.values, p.values[::-1], rtol=1e-12)
    assert p.is_distribution()
    entropy = -float(np.sum(p.values * np.log(p.values)))
    assert entropy < 9 * math.log(2)


def test_ising_capacity():
    """Test that an oversized grid is refused."""
    with pytest.raises(CapacityError):
        generator_service.ising_true_distribution(IsingGridSpec(rows=6, cols=5))


def test_bayes_net_edge_counts():
    """Test the two- and three-parent schedules on 20 nodes."""
    two = generator_service.random_bayes_net(20, "bn2", seed=7)
    three = generator_service.random_bayes_net(20, "bn3", seed=7)
    assert generator_service.bn_edge_count(two) == 37
    assert generator_service.bn_edge_count(three) == 54
    assert two.parents[0] == [] and two.parents[1] == [0]
    assert sorted(three.parents[2]) == [0, 1]
    for node, parents in enumerate(three.parents):
        assert all(parent < node for parent in parents)


def test_bayes_net_is_deterministic():
    """Test that a seed fixes structure and tables."""
    assert generator_service.random_bayes_net(10, "bn3", 3) == generator_service.random_bayes_net(10, "bn3", 3)
    assert generator_service.random_bayes_net(10, "bn3", 3) != generator_service.random_bayes_net(10, "bn3", 4)


def test_bayes_net_too_small():
    """Test that the schedule needs enough nodes."""
    with pytest.raises(DomainError):
        generator_service.random_bayes_net(2, "bn2", 0)
    with pytest.raises(DomainError):
        generator_service.random_bayes_net(3, "bn3", 0)


def test_bayes_net_conditionals_recovered():
    """Test that every CPT row is recovered from the joint by marginalization."""
    net = generator_service.random_bayes_net(8, "bn3", 11)
    joint = generator_service.bn_true_distribution(net)
    assert joint.is_distribution()
    assert np.all(joint.values > 0.0)
    for node in range(net.n):
        np.testing.assert_allclose(
            generator_service.bn_conditional(net, joint, node), np.asarray(net.cpts[node]), atol=1e-12
        )


def test_independent_and_copy_networks():
    """Test two hand-built networks."""
    uniform = BayesNetSpec(n=3, parents=[[], [], []], cpts=[[[0.5, 0.5]]] * 3)
    np.testing.assert_allclose(generator_service.bn_true_distribution(uniform).values, 1.0 / 8)
    copy = BayesNetSpec(n=2, parents=[[], [0]], cpts=[[[0.5, 0.5]], [[1.0, 0.0], [0.0, 1.0]]])
    np.testing.assert_allclose(generator_service.true_distribution(copy).values, [0.5, 0.0, 0.0, 0.5])


def test_bayes_net_spec_validation():
    """Test structural checks of a network spec."""
    with pytest.raises(ValueError):
        BayesNetSpec(n=2, parents=[[], [1]], cpts=[[[0.5, 0.5]], [[0.5, 0.5], [0.5, 0.5]]])
    with pytest.raises(ValueError):
        BayesNetSpec(n=1, parents=[[]], cpts=[[[0.6, 0.6]]])


def test_sample_point_mass():
    """Test that a point mass yields identical rows."""
    spec = VariableSpec(cards=[3, 2])
    values = np.zeros(6)
    values[4] = 1.0
    data = generator_service.sample(DenseTable.distribution(spec, values), 50, 0)
    assert np.all(data.rows == [1, 1])


def test_sample_fair_coin():
    """Test the head frequency of a million fair-coin draws."""
    data = generator_service.sample(DenseTable.uniform(VariableSpec(cards=[2])), 10 ** 6, 5)
    assert 0.498 <= data.rows.mean() <= 0.502


def test_sample_independent_of_threads(monkeypatch):
    """Test that block seeding makes the sample independent of the thread count."""
    dist = generator_service.ising_true_distribution(IsingGridSpec(rows=2, cols=3))
    monkeypatch.setattr(settings, "SAMPLE_BLOCK_ROWS", 100)
    monkeypatch.setattr(settings, "THREADS", 1)
    single = generator_service.sample(dist, 1050, 9)
    monkeypatch.setattr(settings, "THREADS", 4)
    threaded = generator_service.sample(dist, 1050, 9)
    np.testing.assert_array_equal(single.rows, threaded.rows)
    assert not np.array_equal(single.rows, generator_service.sample(dist, 1050, 10).rows)


def test_sample_converges(make_distribution):
    """Test that the empirical distribution approaches the truth as N grows."""
    truth = make_distribution(VariableSpec(cards=[2, 3, 2]))
    errors = [
        np.abs(empirical_distribution(generator_service.sample(truth, n, 1)).values - truth.values).sum()
        for n in (1000, 100_000)
    ]
    assert errors[1] < errors[0]
