from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field, field_validator

from fsll.schemas.boltzmann import PcdConfig
from fsll.schemas.fit import FitConfig
from fsll.schemas.generators import BayesSchedule
from fsll.schemas.report import ModelKind


class BenchPreset(str, Enum):
    DESK = "desk"
    FULL = "full"


class BenchFamily(str, Enum):
    ISING = "ising"
    BN2 = "bn2"
    BN3 = "bn3"


SMALL_SAMPLES = 1_000
LARGE_SAMPLES = 100_000


class BenchDataset(BaseModel):
    """One benchmark dataset: a truth family at one scale and sample size."""
    family: BenchFamily
    n_samples: int = Field(gt=1)
    rows: int = 0
    cols: int = 0
    nodes: int = 0

    model_config = {"frozen": True}

    @property
    def schedule(self) -> Optional[BayesSchedule]:
        if self.family == BenchFamily.ISING:
            return None
        return BayesSchedule(self.family.value)

    @property
    def size_tag(self) -> str:
        return "S" if self.n_samples <= SMALL_SAMPLES else "L"

    def name(self) -> str:
        """Table label such as Ising5x4S or BN20-37L."""
        if self.family == BenchFamily.ISING:
            return f"Ising{self.rows}x{self.cols}{self.size_tag}"
        k = self.schedule.max_parents
        edges = k * self.nodes - k * (k + 1) // 2
        return f"BN{self.nodes}-{edges}{self.size_tag}"


class BenchConfig(BaseModel):
    preset: BenchPreset = BenchPreset.DESK
    seeds: List[int] = Field(default_factory=lambda: [0, 1, 2])
    with_bm_di: bool = False
    parallel: bool = False
    fit: FitConfig = Field(default_factory=FitConfig)
    pcd: PcdConfig = Field(default_factory=PcdConfig)
    di_tolerance: Optional[float] = Field(default=None, gt=0)

    @field_validator("seeds")
    def validate_seeds(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("at least one seed is required")
        return v

    def datasets(self) -> List[BenchDataset]:
        rows, cols, nodes = (4, 3, 12) if self.preset == BenchPreset.DESK else (5, 4, 20)
        out = []
        for family in BenchFamily:
            for n_samples in (SMALL_SAMPLES, LARGE_SAMPLES):
                if family == BenchFamily.ISING:
                    out.append(BenchDataset(family=family, n_samples=n_samples, rows=rows, cols=cols))
                else:
                    out.append(BenchDataset(family=family, n_samples=n_samples, nodes=nodes))
        return out

    def models(self) -> List[ModelKind]:
        if self.preset == BenchPreset.DESK or self.with_bm_di:
            return [ModelKind.FSLL, ModelKind.BM_DI, ModelKind.BM_PCD]
        return [ModelKind.FSLL, ModelKind.BM_PCD]
