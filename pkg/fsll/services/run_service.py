"""
Run service: fit any of the three model kinds, turn a fitted model into a
distribution, and score it against the data and the true distribution.

The command-line layer and the benchmark both go through these functions so
fit-time and evaluation-time numbers come from the same code.
"""

import logging
import time
from dataclasses import dataclass
from typing import Optional, Tuple, Union

from fsll.core.exceptions import DomainError
from fsll.models.boltzmann import BmParams
from fsll.models.dataset import Dataset
from fsll.models.state import ModelState, SparseTheta
from fsll.models.table import DenseTable
from fsll.schemas.boltzmann import PcdConfig
from fsll.schemas.fit import FitConfig, FitTrace
from fsll.schemas.report import ModelKind, RunReport
from fsll.schemas.variables import VariableSpec
from fsll.services import bm_service, io_service
from fsll.services.cost_service import description_length, kl, regularizer
from fsll.services.learner_service import fit_distribution
from fsll.services.mixed_radix_service import empirical_distribution
from fsll.services.model_service import model_from_theta, recompute_density

logger = logging.getLogger(__name__)


@dataclass
class FittedModel:
    """A fitted FSLL model or Boltzmann machine with its fit diagnostics."""
    kind: ModelKind
    spec: VariableSpec
    state: Optional[ModelState] = None
    params: Optional[BmParams] = None
    trace: Optional[FitTrace] = None
    wall_ms: int = 0

    @property
    def basis_count(self) -> int:
        if self.state is not None:
            return self.state.basis_count
        return self.params.parameter_count

    def distribution(self) -> DenseTable:
        """Exact normalized model distribution."""
        if self.state is not None:
            return recompute_density(self.state)
        return bm_service.bm_density(self.params)


def fit_model(
    kind: Union[ModelKind, str],
    data: Dataset,
    fit_config: Optional[FitConfig] = None,
    pcd_config: Optional[PcdConfig] = None,
    di_tolerance: Optional[float] = None,
) -> FittedModel:
    """
    Fit one model kind to a dataset and time it.

    Args:
        kind: Model kind
        data: Training samples
        fit_config: FSLL learner settings
        pcd_config: BM-PCD settings
        di_tolerance: BM-DI gradient tolerance (default ``settings.DI_TOLERANCE``)

    Raises:
        DomainError: If a Boltzmann machine is requested for a non-binary spec
    """
    kind = ModelKind(kind)
    started = time.perf_counter()
    if kind == ModelKind.FSLL:
        state, trace = fit_distribution(empirical_distribution(data), data.n_samples, fit_config)
        model = FittedModel(kind=kind, spec=data.spec, state=state, trace=trace)
    elif kind == ModelKind.BM_DI:
        params = bm_service.bm_di_fit(data, di_tolerance)
        model = FittedModel(kind=kind, spec=data.spec, params=params)
    else:
        params = bm_service.bm_pcd_fit(data, pcd_config)
        model = FittedModel(kind=kind, spec=data.spec, params=params)
    model.wall_ms = int(round((time.perf_counter() - started) * 1000.0))
    return model


def load_model(path) -> FittedModel:
    """Read a model file of either kind."""
    loaded = io_service.read_any_model(path)
    if isinstance(loaded, BmParams):
        trainer = ModelKind(io_service.read_header(path).get("trainer", ModelKind.BM_DI.value))
        return FittedModel(kind=trainer, spec=VariableSpec.binary(loaded.n), params=loaded)
    spec, theta = loaded
    return FittedModel(kind=ModelKind.FSLL, spec=spec, state=model_from_theta(spec, theta))


def save_model(model: FittedModel, path) -> None:
    if model.state is not None:
        io_service.write_model(model.state, path)
    else:
        io_service.write_bm_model(model.params, path, model.kind.value)


def _check_spec(model: FittedModel, spec: VariableSpec, what: str) -> None:
    if model.spec != spec:
        raise DomainError(f"model cards {model.spec.cards} do not match {what} cards {spec.cards}")


def score(
    model: FittedModel,
    data: Dataset,
    truth: Optional[DenseTable] = None,
) -> Tuple[float, Optional[float]]:
    """
    KL(p_d || p_model) and, when the truth is known, KL(p* || p_model).

    Raises:
        DomainError: If the specs of model, data and truth disagree
    """
    _check_spec(model, data.spec, "dataset")
    p_model = model.distribution()
    kl_pd = kl(empirical_distribution(data), p_model)
    kl_pstar = None
    if truth is not None:
        _check_spec(model, truth.spec, "truth")
        kl_pstar = kl(truth, p_model)
    return kl_pd, kl_pstar


def report(
    model: FittedModel,
    data: Dataset,
    dataset_name: str,
    truth: Optional[DenseTable] = None,
    seed: int = 0,
) -> RunReport:
    kl_pd, kl_pstar = score(model, data, truth)
    row = RunReport(
        dataset=dataset_name,
        model=model.kind,
        kl_pd=kl_pd,
        kl_pstar=kl_pstar,
        basis_count=model.basis_count,
        wall_ms=model.wall_ms,
        seed=seed,
    )
    logger.info(
        "%s on %s: KL(p_d)=%.6g KL(p*)=%s basis=%d time=%dms",
        row.model.value, dataset_name, kl_pd,
        "n/a" if kl_pstar is None else f"{kl_pstar:.6g}", row.basis_count, row.wall_ms,
    )
    return row


def raw_description_length(model: FittedModel, data: Dataset) -> float:
    """MDL in nats of an FSLL model on a dataset."""
    if model.state is None:
        raise DomainError("description length is defined for FSLL models only")
    _check_spec(model, data.spec, "dataset")
    return description_length(model.state, empirical_distribution(data), regularizer(data.spec, data.n_samples))


def theta_model(spec: VariableSpec, theta: SparseTheta) -> FittedModel:
    return FittedModel(kind=ModelKind.FSLL, spec=spec, state=model_from_theta(spec, theta))
