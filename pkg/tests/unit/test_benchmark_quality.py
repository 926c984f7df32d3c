"""
Slow end-to-end quality checks on the benchmark distributions.

These fit full-size models and are skipped by ``pytest -m "not slow"``.
"""

import numpy as np
import pytest

from fsll.schemas.boltzmann import PcdConfig
from fsll.schemas.generators import IsingGridSpec
from fsll.schemas.report import ModelKind
from fsll.services import generator_service, run_service

pytestmark = pytest.mark.slow


@pytest.fixture(scope="module")
def ising_truth():
    return generator_service.ising_true_distribution(IsingGridSpec(rows=5, cols=4))


@pytest.mark.parametrize("n_samples, bound", [(100_000, 0.02), (1_000, 0.05)])
def test_fsll_on_ising_grid(ising_truth, n_samples, bound):
    data = generator_service.sample(ising_truth, n_samples, 0)
    model = run_service.fit_model(ModelKind.FSLL, data)
    _, kl_pstar = run_service.score(model, data, ising_truth)
    assert kl_pstar <= bound
    if n_samples == 100_000:
        assert 20 <= model.basis_count <= 80
        assert model.wall_ms <= 120_000


def test_bm_di_on_ising_grid(ising_truth):
    data = generator_service.sample(ising_truth, 100_000, 0)
    model = run_service.fit_model(ModelKind.BM_DI, data)
    _, kl_pstar = run_service.score(model, data, ising_truth)
    assert kl_pstar <= 0.02


def test_fsll_beats_bm_on_three_parent_networks():
    """Test that FSLL represents a three-parent network a pairwise model cannot."""
    fsll_kl, bm_kl, small_basis, large_basis = [], [], [], []
    for seed in (0, 1, 2):
        net = generator_service.random_bayes_net(12, "bn3", seed)
        truth = generator_service.true_distribution(net)
        large = generator_service.sample(truth, 100_000, seed)
        small = generator_service.sample(truth, 1_000, seed)

        fsll = run_service.fit_model(ModelKind.FSLL, large)
        fsll_kl.append(run_service.score(fsll, large, truth)[1])
        large_basis.append(fsll.basis_count)
        small_basis.append(run_service.fit_model(ModelKind.FSLL, small).basis_count)

        bm = run_service.fit_model(ModelKind.BM_DI, large)
        bm_kl.append(run_service.score(bm, large, truth)[1])

    assert np.median(fsll_kl) < 0.5 * np.median(bm_kl)
    assert np.median(large_basis) > np.median(small_basis)


def test_pcd_never_beats_exact_expectations():
    """Test that BM-PCD with its default settings stays finite and behind BM-DI."""
    truth = generator_service.ising_true_distribution(IsingGridSpec(rows=4, cols=3))
    data = generator_service.sample(truth, 100_000, 0)
    di = run_service.fit_model(ModelKind.BM_DI, data)
    pcd = run_service.fit_model(ModelKind.BM_PCD, data, pcd_config=PcdConfig())
    _, di_kl = run_service.score(di, data, truth)
    _, pcd_kl = run_service.score(pcd, data, truth)
    assert np.isfinite(pcd_kl)
    assert pcd_kl >= di_kl
