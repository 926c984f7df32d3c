"""
MDL cost pieces: the regularizer table, KL divergence and the closed-form
cost changes of single-coordinate candidates.

Moving theta_y alone keeps the model inside a one-parameter exponential
family in which Phi_y is a +-1 variable, so every candidate's KL change is a
difference of Bernoulli divergences: with a = (1 + d)/2 and
q(t) = (1 + t)/2, KL(p_d || p_theta) - const = KL(Bern(a) || Bern(q(theta_bar_y))).
"""

import logging
import math
from typing import Tuple, Union

import numpy as np
from scipy.special import expit, rel_entr

from fsll.core.exceptions import DomainError, NumericDomainError
from fsll.models.state import ModelState
from fsll.models.table import DenseTable, RegularizerTable
from fsll.schemas.variables import VariableSpec

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]


def regularizer(spec: VariableSpec, n_samples: int) -> RegularizerTable:
    """
    r_y(N) = (ln N / 2 + sum_{i: y_i != 0} ln(n (|X_i| - 1))) / N for all y.

    Built by one additive sweep per variable over the table.

    Raises:
        DomainError: If N < 2
    """
    if n_samples < 2:
        raise DomainError(f"the regularizer needs N >= 2, got {n_samples}")
    grid = np.zeros(spec.shape)
    for i, card in enumerate(spec.cards):
        shape = [1] * spec.n
        shape[spec.numpy_axis(i)] = card
        weight = np.full(card, math.log(spec.n * (card - 1)))
        weight[0] = 0.0
        grid = grid + weight.reshape(shape)
    values = (0.5 * math.log(n_samples) + grid.ravel()) / n_samples
    return RegularizerTable(spec=spec, values=values, n_samples=n_samples)


def kl(p: Union[DenseTable, np.ndarray], q: Union[DenseTable, np.ndarray]) -> float:
    """
    KL(p || q) with 0 ln 0 = 0; +inf when q vanishes where p > 0.
    """
    p_values = p.values if isinstance(p, DenseTable) else np.asarray(p, dtype=np.float64)
    q_values = q.values if isinstance(q, DenseTable) else np.asarray(q, dtype=np.float64)
    if p_values.shape != q_values.shape:
        raise DomainError("KL between tables of different size")
    return float(np.sum(rel_entr(p_values, q_values)))


def clamp_d_bar(d_bar: np.ndarray, n_samples: float) -> np.ndarray:
    """Clip empirical expectations into [-1 + 1/(2N), 1 - 1/(2N)]."""
    margin = 1.0 / (2.0 * n_samples)
    return np.clip(d_bar, -1.0 + margin, 1.0 - margin)


def _check_dual(theta_bar0: ArrayLike) -> None:
    if np.any(np.abs(theta_bar0) >= 1.0):
        raise NumericDomainError("a model expectation reached |theta_bar| >= 1; the model table is corrupt")


def _bernoulli_kl(d_bar: ArrayLike, half_plus: ArrayLike, half_minus: ArrayLike) -> ArrayLike:
    a = 0.5 * (1.0 + d_bar)
    b = 0.5 * (1.0 - d_bar)
    return rel_entr(a, half_plus) + rel_entr(b, half_minus)


def _halves(theta_bar0: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    return 0.5 * (1.0 + theta_bar0), 0.5 * (1.0 - theta_bar0)


def append_deltas(theta_bar0: ArrayLike, d_bar: ArrayLike, r_y: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """Vectorised (theta offset, delta) of appending theta_y at its line minimum."""
    _check_dual(theta_bar0)
    plus, minus = _halves(theta_bar0)
    delta = -_bernoulli_kl(d_bar, plus, minus) + r_y
    offset = np.arctanh(d_bar) - np.arctanh(theta_bar0)
    return offset, delta


def adjust_deltas(theta_bar0: ArrayLike, d_bar: ArrayLike) -> Tuple[ArrayLike, ArrayLike]:
    """Vectorised (theta offset, delta) of moving a stored theta_y to its line minimum."""
    return append_deltas(theta_bar0, d_bar, 0.0)


def remove_deltas(theta_bar0: ArrayLike, d_bar: ArrayLike, theta_y0: ArrayLike, r_y: ArrayLike) -> ArrayLike:
    """Vectorised delta of setting a stored theta_y to 0."""
    _check_dual(theta_bar0)
    # theta_bar_y(0) = tanh(u), u = atanh(theta_bar0) - theta_y0; (1 +- tanh u)/2 = expit(+-2u)
    u = np.arctanh(theta_bar0) - theta_y0
    plus, minus = _halves(theta_bar0)
    before = _bernoulli_kl(d_bar, plus, minus)
    after = _bernoulli_kl(d_bar, expit(2.0 * u), expit(-2.0 * u))
    return after - before - r_y


def append_lower_bounds(theta_bar0: ArrayLike, d_bar: ArrayLike, r_y: ArrayLike) -> ArrayLike:
    """-(theta_bar0 - d)^2 / (1 - theta_bar0^2) + r_y, never above the append delta."""
    _check_dual(theta_bar0)
    diff = theta_bar0 - d_bar
    return -(diff * diff) / ((1.0 - theta_bar0) * (1.0 + theta_bar0)) + r_y


def delta_append(theta_bar0: float, d_bar: float, r_y: float) -> Tuple[float, float]:
    """
    Cost change of appending theta_y.

    Returns:
        (new theta offset, delta)

    Raises:
        NumericDomainError: If |theta_bar0| >= 1
    """
    offset, delta = append_deltas(np.float64(theta_bar0), np.float64(d_bar), np.float64(r_y))
    return float(offset), float(delta)


def delta_adjust(theta_bar0: float, d_bar: float) -> Tuple[float, float]:
    offset, delta = adjust_deltas(np.float64(theta_bar0), np.float64(d_bar))
    return float(offset), float(delta)


def delta_remove(theta_bar0: float, d_bar: float, theta_y0: float, r_y: float) -> float:
    if theta_y0 == 0.0:
        raise DomainError("only a stored (nonzero) parameter can be removed")
    return float(remove_deltas(np.float64(theta_bar0), np.float64(d_bar), np.float64(theta_y0), np.float64(r_y)))


def lower_bound_append(theta_bar0: float, d_bar: float, r_y: float) -> float:
    return float(append_lower_bounds(np.float64(theta_bar0), np.float64(d_bar), np.float64(r_y)))


def penalty(state: ModelState, r: RegularizerTable) -> float:
    """Sum of r_y over stored parameters."""
    return float(sum(r.values[y] for y in state.theta.support()))


def description_length(state: ModelState, p_d: DenseTable, r: RegularizerTable) -> float:
    """
    Raw MDL in nats: -N <ln p_theta>_{p_d} + N * sum r_y.

    This is N * cost without the <ln p_d> shift that turns it into a KL.
    """
    n_samples = r.n_samples
    support = np.flatnonzero(p_d.values)
    cross_entropy = -float(np.dot(p_d.values[support], np.log(state.p.values[support])))
    return n_samples * (cross_entropy + penalty(state, r))
