"""
Boltzmann machine baselines.

BM-DI minimizes KL(p_d || p_theta) with BFGS on gradients computed by exact
enumeration of all 2^n states; BM-PCD follows the same gradient with model
moments estimated from persistent Gibbs chains.
"""

import logging
from typing import Dict, Iterator, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize
from scipy.special import entr, expit, logsumexp

from fsll.core.config import settings
from fsll.core.exceptions import DomainError
from fsll.models.boltzmann import BmFitResult, BmMoments, BmParams
from fsll.models.dataset import Dataset
from fsll.models.table import DenseTable, TableKind
from fsll.schemas.boltzmann import ChainInit, PcdConfig
from fsll.schemas.variables import VariableSpec
from fsll.services.mixed_radix_service import binary_state_blocks, check_enumerable, empirical_distribution

logger = logging.getLogger(__name__)


def _state_blocks(n: int) -> Iterator[Tuple[slice, np.ndarray]]:
    for block, bits in binary_state_blocks(n):
        yield block, bits.astype(np.float64)


def _log_weights(params: BmParams) -> np.ndarray:
    """l_theta(x) = sum_{i<j} theta_ij x_i x_j + sum_i theta_in x_i for every state."""
    check_enumerable(params.n)
    logits = np.empty(1 << params.n)
    for block, bits in _state_blocks(params.n):
        logits[block] = bits @ params.biases + np.einsum("si,si->s", bits @ params.weights, bits)
    return logits


def _density(params: BmParams) -> Tuple[np.ndarray, float]:
    logits = _log_weights(params)
    log_z = float(logsumexp(logits))
    return np.exp(logits - log_z), log_z


def _table_moments(n: int, p: np.ndarray) -> BmMoments:
    second = np.zeros((n, n))
    for block, bits in _state_blocks(n):
        second += bits.T @ (bits * p[block, None])
    return BmMoments(n=n, second=second)


def bm_density(params: BmParams) -> DenseTable:
    """
    Exact normalized Boltzmann distribution by enumeration.

    Raises:
        CapacityError: If n exceeds the enumeration limit
    """
    p, _ = _density(params)
    return DenseTable(VariableSpec.binary(params.n), p, TableKind.DISTRIBUTION)


def bm_log_partition(params: BmParams) -> float:
    return float(logsumexp(_log_weights(params)))


def _binary_n(spec: VariableSpec) -> int:
    if not spec.is_binary:
        raise DomainError("Boltzmann machines need an all-binary spec")
    return spec.n


def bm_moments(data: Union[Dataset, DenseTable]) -> BmMoments:
    """Second moments <X_i X_j> (with <X_i> on the diagonal) of a dataset or table."""
    n = _binary_n(data.spec)
    if isinstance(data, Dataset):
        rows = data.rows.astype(np.float64)
        return BmMoments(n=n, second=rows.T @ rows / data.n_samples)
    check_enumerable(n)
    return _table_moments(n, data.values)


def model_moments(params: BmParams) -> BmMoments:
    p, _ = _density(params)
    return _table_moments(params.n, p)


def bm_exact_gradient(params: BmParams, d_moments: BmMoments) -> np.ndarray:
    """
    Gradient of KL(p_d || p_theta): <X_i X_j>_model - <X_i X_j>_data.

    Returns:
        Vector in the ``BmParams.to_vector`` layout (pair weights, then biases)
    """
    if d_moments.n != params.n:
        raise DomainError("moments and parameters disagree on n")
    return model_moments(params).to_vector() - d_moments.to_vector()


def bm_kl(params: BmParams, p_d: DenseTable) -> float:
    """KL(p_d || p_theta) = -H(p_d) - <l_theta>_{p_d} + ln Z."""
    d_moments = bm_moments(p_d)
    entropy = float(np.sum(entr(p_d.values)))
    return -entropy - float(params.to_vector() @ d_moments.to_vector()) + bm_log_partition(params)


def bm_di_minimize(
    p_d: DenseTable,
    tolerance: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> BmFitResult:
    """
    Minimize KL(p_d || p_theta) with BFGS on the exact gradient.

    Args:
        p_d: Empirical distribution over an all-binary spec
        tolerance: Stop when the gradient max-norm falls below it
        max_iter: BFGS iteration cap

    Returns:
        Fit result with the KL after every accepted step
    """
    tolerance = settings.DI_TOLERANCE if tolerance is None else tolerance
    max_iter = settings.DI_MAX_ITER if max_iter is None else max_iter
    n = _binary_n(p_d.spec)
    check_enumerable(n)

    d_vector = bm_moments(p_d).to_vector()
    entropy = float(np.sum(entr(p_d.values)))
    evaluated: Dict[bytes, float] = {}

    def objective(vector: np.ndarray) -> Tuple[float, np.ndarray]:
        params = BmParams.from_vector(n, vector)
        p, log_z = _density(params)
        value = -entropy - float(vector @ d_vector) + log_z
        gradient = _table_moments(n, p).to_vector() - d_vector
        evaluated[vector.tobytes()] = value
        return value, gradient

    x0 = np.zeros(n * (n + 1) // 2)
    history = [objective(x0)[0]]

    def record(xk: np.ndarray) -> None:
        key = xk.tobytes()
        history.append(evaluated[key] if key in evaluated else objective(xk)[0])
        evaluated.clear()

    result = minimize(
        objective,
        x0,
        jac=True,
        method="BFGS",
        callback=record,
        options={"gtol": tolerance, "maxiter": max_iter, "norm": np.inf},
    )
    if not result.success:
        logger.warning("BM-DI stopped before the gradient tolerance: %s", result.message)
    logger.info("BM-DI: n=%d iterations=%d KL=%.6g", n, result.nit, result.fun)
    return BmFitResult(
        params=BmParams.from_vector(n, result.x),
        kl_history=history,
        converged=bool(result.success),
        iterations=int(result.nit),
    )


def bm_di_fit(
    data: Union[Dataset, DenseTable],
    tolerance: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> BmParams:
    """
    BM-DI parameters for a dataset or an empirical distribution.

    Raises:
        DomainError: If a variable is not binary
        CapacityError: If 2^n states cannot be enumerated
    """
    p_d = empirical_distribution(data) if isinstance(data, Dataset) else data
    return bm_di_minimize(p_d, tolerance, max_iter).params


def _make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(seed))


def gibbs_sweep(states: np.ndarray, coupling: np.ndarray, biases: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """One in-place Gibbs sweep over variables 0 .. n-1 of every chain."""
    chains, n = states.shape
    for i in range(n):
        field = states @ coupling[:, i] + biases[i]
        states[:, i] = rng.random(chains) < expit(field)
    return states


def sample_chains(params: BmParams, chains: int, sweeps: int, seed: int = 0) -> np.ndarray:
    """Run ``chains`` Gibbs chains from uniform random states for ``sweeps`` sweeps."""
    rng = _make_rng(seed)
    states = (rng.random((chains, params.n)) < 0.5).astype(np.float64)
    coupling = params.symmetric()
    for _ in range(sweeps):
        gibbs_sweep(states, coupling, params.biases, rng)
    return states


def bm_pcd_fit(data: Dataset, config: Optional[PcdConfig] = None) -> BmParams:
    """
    Persistent contrastive divergence on the KL gradient.

    Every step advances the persistent chains, estimates model moments from
    the current chain states, and moves the parameters by
    learning_rate * (data moments - model moments).
    """
    config = config or PcdConfig()
    n = _binary_n(data.spec)
    rng = _make_rng(config.seed)
    target = bm_moments(data).second

    if config.init == ChainInit.DATA:
        states = data.rows[rng.integers(0, data.n_samples, size=config.chains)].astype(np.float64)
    else:
        states = (rng.random((config.chains, n)) < 0.5).astype(np.float64)

    coupling = np.zeros((n, n))
    biases = np.zeros(n)
    for _ in range(config.burn_in_sweeps):
        gibbs_sweep(states, coupling, biases, rng)

    off_diagonal = ~np.eye(n, dtype=bool)
    for _ in range(config.steps):
        for _ in range(config.sweeps_per_step):
            gibbs_sweep(states, coupling, biases, rng)
        step = config.learning_rate * (target - states.T @ states / config.chains)
        coupling += np.where(off_diagonal, step, 0.0)
        biases += np.diag(step)

    logger.info("BM-PCD: n=%d steps=%d chains=%d", n, config.steps, config.chains)
    return BmParams(n, np.triu(coupling, k=1), biases)
