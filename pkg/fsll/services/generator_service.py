"""
Synthetic true distributions and i.i.d. samplers.

Two families are generated: rectangular Ising grids and random binary
Bayesian networks with two or three parents per node. Every distribution is
built exactly by enumerating its 2^n states, then sampled by inverse CDF.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import List, Tuple, Union

import numpy as np
from scipy.special import logsumexp

from fsll.core.config import settings
from fsll.core.exceptions import DomainError
from fsll.models.dataset import Dataset
from fsll.models.table import DenseTable, TableKind
from fsll.schemas.generators import BayesNetSpec, BayesSchedule, IsingGridSpec
from fsll.schemas.variables import VariableSpec
from fsll.services.mixed_radix_service import binary_state_blocks, check_enumerable, unpack_many

logger = logging.getLogger(__name__)

CPT_FLOOR = 1e-3

TruthSpec = Union[IsingGridSpec, BayesNetSpec]


def ising_edges(spec: IsingGridSpec) -> List[Tuple[int, int]]:
    """4-neighbour pairs (i, j), i < j, of a non-periodic grid with i = r * cols + c."""
    edges = []
    for r in range(spec.rows):
        for c in range(spec.cols):
            i = r * spec.cols + c
            if c + 1 < spec.cols:
                edges.append((i, i + 1))
            if r + 1 < spec.rows:
                edges.append((i, i + spec.cols))
    return sorted(edges)


def ising_true_distribution(spec: IsingGridSpec) -> DenseTable:
    """
    p(x) proportional to exp(coupling * sum over edges of s_i s_j), s = 2x - 1.

    Raises:
        CapacityError: If the grid has too many spins to enumerate
    """
    check_enumerable(spec.n)
    edges = np.asarray(ising_edges(spec), dtype=np.int64)
    energy = np.empty(1 << spec.n)
    for block, bits in binary_state_blocks(spec.n):
        spins = 2 * bits - 1
        energy[block] = spec.coupling * np.sum(spins[:, edges[:, 0]] * spins[:, edges[:, 1]], axis=1)
    p = np.exp(energy - logsumexp(energy))
    logger.info("Ising %dx%d: %d edges, coupling %g", spec.rows, spec.cols, len(edges), spec.coupling)
    return DenseTable(VariableSpec.binary(spec.n), p, TableKind.DISTRIBUTION)


def _random_cpt(rng: np.random.Generator, parent_count: int) -> List[List[float]]:
    rows = rng.dirichlet(np.ones(2), size=2 ** parent_count)
    rows = np.maximum(rows, CPT_FLOOR)
    rows /= rows.sum(axis=1, keepdims=True)
    return rows.tolist()


def random_bayes_net(n: int, schedule: Union[BayesSchedule, str], seed: int) -> BayesNetSpec:
    """
    Random binary Bayesian network over nodes 0 .. n-1.

    Node i gets min(i, k) parents, k = 2 or 3 by schedule, drawn uniformly
    without replacement from the lower-indexed nodes. Each CPT row is drawn
    from a flat Dirichlet, floored at CPT_FLOOR and renormalized.

    Raises:
        DomainError: If n is too small to use every parent slot of the schedule
    """
    schedule = BayesSchedule(schedule)
    k = schedule.max_parents
    if n <= k:
        raise DomainError(f"schedule {schedule.value} needs more than {k} nodes, got {n}")
    rng = np.random.Generator(np.random.Philox(seed))
    parents = []
    cpts = []
    for node in range(n):
        count = min(node, k)
        chosen = rng.choice(node, size=count, replace=False).tolist() if count else []
        parents.append([int(p) for p in chosen])
        cpts.append(_random_cpt(rng, count))
    net = BayesNetSpec(n=n, parents=parents, cpts=cpts, seed=seed, schedule=schedule)
    logger.info("Bayes net %s: n=%d edges=%d seed=%d", schedule.value, n, net.edge_count, seed)
    return net


def bn_edge_count(spec: BayesNetSpec) -> int:
    return spec.edge_count


def _parent_config(bits: np.ndarray, parents: List[int]) -> np.ndarray:
    config = np.zeros(bits.shape[0], dtype=np.int64)
    for position, parent in enumerate(parents):
        config |= bits[:, parent] << position
    return config


def bn_true_distribution(spec: BayesNetSpec) -> DenseTable:
    """
    Exact product of the conditional tables over all 2^n states.

    Raises:
        CapacityError: If n is too large to enumerate
    """
    check_enumerable(spec.n)
    with np.errstate(divide="ignore"):
        log_cpts = [np.log(np.asarray(table)) for table in spec.cpts]
    log_p = np.empty(1 << spec.n)
    for block, bits in binary_state_blocks(spec.n):
        total = np.zeros(bits.shape[0])
        for node, parents in enumerate(spec.parents):
            total += log_cpts[node][_parent_config(bits, parents), bits[:, node]]
        log_p[block] = total
    p = np.exp(log_p)
    p /= p.sum()
    return DenseTable(VariableSpec.binary(spec.n), p, TableKind.DISTRIBUTION)


def bn_conditional(spec: BayesNetSpec, joint: DenseTable, node: int) -> np.ndarray:
    """
    p(x_node | parents) recovered from a joint table by marginalization.

    Returns:
        Array of shape (2^|parents|, 2) in the CPT row layout
    """
    if not 0 <= node < spec.n:
        raise DomainError(f"node {node} outside [0, {spec.n})")
    parents = spec.parents[node]
    mass = np.zeros(2 ** (len(parents) + 1))
    for block, bits in binary_state_blocks(spec.n):
        index = 2 * _parent_config(bits, parents) + bits[:, node]
        mass += np.bincount(index, weights=joint.values[block], minlength=mass.size)
    mass = mass.reshape(-1, 2)
    return mass / mass.sum(axis=1, keepdims=True)


def true_distribution(spec: TruthSpec) -> DenseTable:
    if isinstance(spec, IsingGridSpec):
        return ising_true_distribution(spec)
    return bn_true_distribution(spec)


def sample(dist: DenseTable, count: int, seed: int) -> Dataset:
    """
    Draw ``count`` i.i.d. rows by inverse CDF over the flat index.

    Rows are produced in blocks of ``SAMPLE_BLOCK_ROWS``, each with its own
    Philox generator spawned from SeedSequence(seed), so the dataset does not
    depend on ``settings.THREADS``.

    Raises:
        DomainError: If dist is not a distribution or count < 1
    """
    if not dist.is_distribution(1e-9):
        raise DomainError("can only sample from a probability distribution")
    if count < 1:
        raise DomainError(f"sample count must be positive, got {count}")
    cdf = np.cumsum(dist.values)
    cdf /= cdf[-1]
    last = dist.spec.size - 1

    block_rows = settings.SAMPLE_BLOCK_ROWS
    sizes = [min(block_rows, count - start) for start in range(0, count, block_rows)]
    children = np.random.SeedSequence(seed).spawn(len(sizes))

    def draw(job: Tuple[int, np.random.SeedSequence]) -> np.ndarray:
        size, child = job
        rng = np.random.Generator(np.random.Philox(child))
        return np.minimum(np.searchsorted(cdf, rng.random(size), side="right"), last)

    jobs = list(zip(sizes, children))
    if settings.THREADS > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=settings.THREADS) as executor:
            blocks = list(executor.map(draw, jobs))
    else:
        blocks = [draw(job) for job in jobs]

    flat = np.concatenate(blocks)
    logger.info("sampled %d rows over |X|=%d, seed %d", count, dist.spec.size, seed)
    return Dataset(dist.spec, unpack_many(flat, dist.spec))
