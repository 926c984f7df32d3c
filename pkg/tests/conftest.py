from typing import Callable

import numpy as np
import pytest

from fsll.models.state import ModelState, SparseTheta
from fsll.models.table import DenseTable
from fsll.schemas.variables import VariableSpec
from fsll.services.model_service import model_from_theta


@pytest.fixture(scope="function")
def rng() -> np.random.Generator:
    """Seeded generator so every test sees the same numbers."""
    return np.random.Generator(np.random.Philox(20160412))


@pytest.fixture(scope="function")
def binary_spec() -> VariableSpec:
    return VariableSpec(cards=[2, 2, 2, 2])


@pytest.fixture(scope="function")
def mixed_spec() -> VariableSpec:
    return VariableSpec(cards=[2, 3, 4, 2])


@pytest.fixture(scope="function")
def make_distribution(rng) -> Callable[[VariableSpec], DenseTable]:
    """Factory for strictly positive random distributions."""
    def make(spec: VariableSpec) -> DenseTable:
        values = rng.random(spec.size) + 0.05
        return DenseTable.distribution(spec, values / values.sum())
    return make


@pytest.fixture(scope="function")
def make_model(rng) -> Callable[[VariableSpec, int], ModelState]:
    """Factory for models with k random nonzero parameters and an exact density."""
    def make(spec: VariableSpec, k: int = 5) -> ModelState:
        ys = rng.choice(np.arange(1, spec.size), size=min(k, spec.size - 1), replace=False)
        theta = SparseTheta({int(y): float(rng.normal(0.0, 0.4)) or 0.1 for y in ys})
        return model_from_theta(spec, theta)
    return make
