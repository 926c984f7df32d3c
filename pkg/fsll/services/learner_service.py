"""
Greedy coordinate learner for FSLL models.

Each iteration computes the model's dual table with the fast transform,
evaluates every append / adjust / remove candidate in closed form, and applies
the single best one, until no candidate improves the MDL cost by more than
epsilon.
"""

import logging
import time
from typing import Optional, Tuple, Union

import numpy as np
from scipy.special import rel_entr

from fsll.core.config import settings
from fsll.models.dataset import Dataset
from fsll.models.state import ModelState, SparseTheta
from fsll.models.table import DenseTable, DualTable, RegularizerTable
from fsll.schemas.candidate import CandidateDelta, CandidateKind
from fsll.schemas.fit import FitConfig, FitRecord, FitStatus, FitTrace
from fsll.services import cost_service
from fsll.services.mixed_radix_service import empirical_distribution
from fsll.services.model_service import apply_update, init_model, refresh_density
from fsll.services.transform_service import TransformWorkspace, bases_for, dual_transform
from fsll.utils.system import rss_mb

logger = logging.getLogger(__name__)

_KIND_ORDER = (CandidateKind.APPEND, CandidateKind.ADJUST, CandidateKind.REMOVE)


def cost(state: ModelState, data: Union[Dataset, DenseTable], r: RegularizerTable) -> float:
    """
    cost(theta, N) = KL(p_d || p_theta) + sum of r_y over stored parameters.

    Args:
        state: Model
        data: Dataset or its empirical distribution
        r: Regularizer table of the same spec

    Returns:
        MDL cost in nats per sample
    """
    p_d = empirical_distribution(data) if isinstance(data, Dataset) else data
    return cost_service.kl(p_d, state.p) + cost_service.penalty(state, r)


def _append_pool(
    theta_bar: np.ndarray,
    d_bar: np.ndarray,
    r: np.ndarray,
    free: np.ndarray,
    champion: float,
    prune: bool,
) -> np.ndarray:
    """Flat indices of append candidates that still need an exact evaluation."""
    if not prune:
        return np.flatnonzero(free) + 1
    bounds = cost_service.append_lower_bounds(theta_bar[1:], d_bar[1:], r[1:])
    pool = np.flatnonzero(free & (bounds <= champion))
    seed_count = settings.PRUNE_SEED_CANDIDATES
    if pool.size > seed_count:
        seeds = pool[np.argpartition(bounds[pool], seed_count)[:seed_count]]
        _, seed_deltas = cost_service.append_deltas(theta_bar[seeds + 1], d_bar[seeds + 1], r[seeds + 1])
        champion = min(champion, float(seed_deltas.min()))
        pool = pool[bounds[pool] <= champion]
    return pool + 1


def _finalize(
    y: int,
    kind: CandidateKind,
    theta: SparseTheta,
    theta_bar: np.ndarray,
    d_bar: np.ndarray,
    r: np.ndarray,
) -> CandidateDelta:
    t0, d, r_y = float(theta_bar[y]), float(d_bar[y]), float(r[y])
    if kind == CandidateKind.APPEND:
        offset, delta = cost_service.delta_append(t0, d, r_y)
        return CandidateDelta(
            y=y, kind=kind, new_theta=offset, delta_cost=delta,
            lower_bound=cost_service.lower_bound_append(t0, d, r_y),
        )
    if kind == CandidateKind.ADJUST:
        offset, delta = cost_service.delta_adjust(t0, d)
        return CandidateDelta(y=y, kind=kind, new_theta=theta.get(y) + offset, delta_cost=delta, lower_bound=delta)
    delta = cost_service.delta_remove(t0, d, theta.get(y), r_y)
    return CandidateDelta(y=y, kind=kind, new_theta=0.0, delta_cost=delta, lower_bound=delta)


def scan_candidates(
    theta: SparseTheta,
    theta_bar: DualTable,
    d_bar: DualTable,
    r: RegularizerTable,
    prune: bool = True,
) -> Optional[CandidateDelta]:
    """
    Find the candidate with the lowest cost change.

    The champion starts at delta = 0, so None is returned when no candidate
    strictly improves the cost. Ties go to the smallest y, then to adjust
    before remove. With ``prune`` an append candidate is evaluated exactly
    only if its lower bound does not exceed the champion.
    """
    tb, db, rv = theta_bar.values, d_bar.values, r.values
    support = np.asarray(theta.support(), dtype=np.int64)

    ys = []
    kinds = []
    deltas = []
    champion = 0.0
    if support.size:
        stored = np.array([theta.get(y) for y in support])
        _, adjust = cost_service.adjust_deltas(tb[support], db[support])
        remove = cost_service.remove_deltas(tb[support], db[support], stored, rv[support])
        ys += [support, support]
        kinds += [np.full(support.size, 1), np.full(support.size, 2)]
        deltas += [adjust, remove]
        champion = min(champion, float(adjust.min()), float(remove.min()))

    free = np.ones(tb.size - 1, dtype=bool)
    if support.size:
        free[support - 1] = False
    pool = _append_pool(tb, db, rv, free, champion, prune)
    if pool.size:
        _, append = cost_service.append_deltas(tb[pool], db[pool], rv[pool])
        ys.append(pool)
        kinds.append(np.zeros(pool.size, dtype=np.int64))
        deltas.append(append)

    if not ys:
        return None
    ys = np.concatenate(ys)
    kinds = np.concatenate(kinds)
    deltas = np.concatenate(deltas)
    winner = np.lexsort((kinds, ys, deltas))[0]
    if not deltas[winner] < 0.0:
        return None
    return _finalize(int(ys[winner]), _KIND_ORDER[kinds[winner]], theta, tb, db, rv)


def _kl_on_support(p_d_values: np.ndarray, support: np.ndarray, p: np.ndarray) -> float:
    return float(np.sum(rel_entr(p_d_values, p[support])))


def fit_distribution(
    p_d: DenseTable,
    n_samples: int,
    config: Optional[FitConfig] = None,
) -> Tuple[ModelState, FitTrace]:
    """
    Fit an FSLL model to a target table with nominal sample count N.

    Args:
        p_d: Empirical (or exact) distribution to fit
        n_samples: N used by the regularizer and the d_bar clamp
        config: Learner settings

    Returns:
        Fitted model and its trace
    """
    config = config or FitConfig()
    spec = p_d.spec
    started = time.perf_counter()
    logger.info(
        "fit start: cards=%s |X|=%d N=%d epsilon=%g prune=%s rss=%.1fMiB",
        spec.cards, spec.size, n_samples, config.epsilon, config.prune, rss_mb(),
    )

    bases = bases_for(spec)
    d_bar = DualTable(spec, cost_service.clamp_d_bar(dual_transform(p_d, bases).values, n_samples))
    r = cost_service.regularizer(spec, int(n_samples))
    state = init_model(spec)
    workspace = TransformWorkspace(spec)

    support = np.flatnonzero(p_d.values)
    p_d_support = p_d.values[support]
    penalty = 0.0
    current = _kl_on_support(p_d_support, support, state.p.values)
    trace = FitTrace(initial_cost=current)

    for iteration in range(1, config.max_iters + 1):
        step_started = time.perf_counter()
        theta_bar = dual_transform(state.p, bases, workspace)
        best = scan_candidates(state.theta, theta_bar, d_bar, r, config.prune)
        if best is None or -best.delta_cost <= config.epsilon:
            trace.status = FitStatus.CONVERGED
            break

        if best.kind == CandidateKind.APPEND:
            penalty += r[best.y]
        elif best.kind == CandidateKind.REMOVE:
            penalty -= r[best.y]
        apply_update(state, best.y, best.new_theta)
        if config.refresh_every and state.updates_since_refresh >= config.refresh_every:
            refresh_density(state)

        current = _kl_on_support(p_d_support, support, state.p.values) + penalty
        record = FitRecord(
            iter=iteration,
            y=best.y,
            kind=best.kind,
            delta=best.delta_cost,
            cost=current,
            ms=(time.perf_counter() - step_started) * 1000.0,
        )
        trace.records.append(record)
        logger.debug(
            "iter %d: %s y=%d delta=%.6g cost=%.9g k=%d",
            iteration, best.kind.value, best.y, best.delta_cost, current, state.theta.k,
        )
    else:
        trace.status = FitStatus.ITER_CAPPED
        logger.warning("fit stopped at the iteration cap (%d)", config.max_iters)

    trace.final_cost = current
    trace.wall_ms = (time.perf_counter() - started) * 1000.0
    logger.info(
        "fit done: status=%s k=%d cost=%.9g time=%.0fms rss=%.1fMiB",
        trace.status.value, state.theta.k, current, trace.wall_ms, rss_mb(),
    )
    return state, trace


def fit(data: Dataset, config: Optional[FitConfig] = None) -> Tuple[ModelState, FitTrace]:
    """
    Fit an FSLL model to a dataset.

    Raises:
        DomainError: If the dataset has fewer than two samples
    """
    return fit_distribution(empirical_distribution(data), data.n_samples, config)
