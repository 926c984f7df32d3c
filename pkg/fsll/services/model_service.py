"""
FSLL model state: construction, exact density evaluation and the O(|X|)
incremental update of a single parameter.
"""

import logging
import math

import numpy as np
from scipy.special import logsumexp

from fsll.core.exceptions import DomainError
from fsll.models.state import ModelState, SparseTheta
from fsll.models.table import DenseTable, TableKind
from fsll.schemas.variables import VariableSpec
from fsll.services.mixed_radix_service import unpack
from fsll.services.transform_service import bases_for, basis_signs

logger = logging.getLogger(__name__)


def init_model(spec: VariableSpec) -> ModelState:
    """Empty theta and the uniform distribution."""
    return ModelState(spec=spec, theta=SparseTheta(), p=DenseTable.uniform(spec), bases=bases_for(spec))


def log_unnormalized(state: ModelState, x: int) -> float:
    """
    l_theta(x) = sum over stored y of theta_y * Phi_y(x).

    Each Phi_y(x) is the product of local basis entries phi^i_{y_i}(x_i).
    """
    x_digits = unpack(x, state.spec)
    total = 0.0
    for y, value in state.theta.items():
        phi = 1.0
        for i, digit in enumerate(unpack(y, state.spec)):
            if digit:
                phi *= state.bases[i].matrix[digit, x_digits[i]]
        total += value * phi
    return total


def dense_log_density(state: ModelState) -> np.ndarray:
    """l_theta(x) for every flat x."""
    grid = np.zeros(state.spec.shape)
    for y, value in state.theta.items():
        grid += value * basis_signs(y, state.spec, state.bases)
    return grid.ravel()


def log_partition(state: ModelState) -> float:
    """ln Z(theta) by log-sum-exp over the whole space."""
    return float(logsumexp(dense_log_density(state)))


def recompute_density(state: ModelState) -> DenseTable:
    """
    Exact normalized exp(l_theta) over all x.

    The maximum of l_theta is subtracted before exponentiation.
    """
    logits = dense_log_density(state)
    weights = np.exp(logits - logits.max())
    return DenseTable(state.spec, weights / weights.sum(), TableKind.DISTRIBUTION)


def refresh_density(state: ModelState) -> ModelState:
    """Replace the cached p by the exact density, resetting accumulated drift."""
    state.p = recompute_density(state)
    state.updates_since_refresh = 0
    return state


def model_from_theta(spec: VariableSpec, theta: SparseTheta) -> ModelState:
    state = ModelState(spec=spec, theta=theta, p=DenseTable.uniform(spec), bases=bases_for(spec))
    return refresh_density(state)


def apply_update(state: ModelState, y1: int, new_value: float) -> ModelState:
    """
    Set theta_{y1} to ``new_value`` and update p in one O(|X|) pass.

    p is multiplied by c+ = exp(new - old) where Phi_{y1} = +1 and by
    c- = 1/c+ where Phi_{y1} = -1, then divided by the accumulated sum.
    Phi_{y1} is evaluated by the product rule over the axes where y1 has a
    nonzero digit and broadcast over the rest.

    Raises:
        DomainError: If y1 = 0
    """
    if y1 == 0:
        raise DomainError("theta_0 cannot be updated")
    old_value = state.theta.get(y1)
    state.theta.set(y1, new_value)

    c_plus = math.exp(new_value - old_value)
    c_minus = 1.0 / c_plus
    factor = np.where(basis_signs(y1, state.spec, state.bases) > 0, c_plus, c_minus)

    grid = state.p.grid()
    grid *= factor
    total = grid.sum()
    grid /= total
    state.updates_since_refresh += 1
    return state
