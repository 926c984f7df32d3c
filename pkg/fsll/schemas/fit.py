from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from fsll.core.config import settings
from fsll.schemas.candidate import CandidateKind


class FitConfig(BaseModel):
    epsilon: float = Field(default_factory=lambda: settings.DEFAULT_EPSILON, gt=0)
    max_iters: int = Field(default_factory=lambda: settings.DEFAULT_MAX_ITERS, ge=1)
    prune: bool = True
    # 0 disables the periodic exact recomputation of p_theta
    refresh_every: int = Field(default_factory=lambda: settings.REFRESH_EVERY, ge=0)
    # recorded with the run only; the learner is deterministic and draws no random numbers
    seed: int = 0


class FitStatus(str, Enum):
    CONVERGED = "converged"
    ITER_CAPPED = "iter-capped"


class FitRecord(BaseModel):
    iter: int
    y: int
    kind: CandidateKind
    delta: float
    cost: float
    ms: float


class FitTrace(BaseModel):
    records: List[FitRecord] = []
    status: Optional[FitStatus] = None
    initial_cost: Optional[float] = None
    final_cost: Optional[float] = None
    wall_ms: float = 0.0

    @property
    def costs(self) -> List[float]:
        return [record.cost for record in self.records]
