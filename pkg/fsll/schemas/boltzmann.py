from enum import Enum

from pydantic import BaseModel, Field


class ChainInit(str, Enum):
    DATA = "data"
    UNIFORM = "uniform"


class PcdConfig(BaseModel):
    """
    Persistent contrastive divergence settings.

    Defaults are learning rate 0.01, 100 chains and 10,000 steps. Moments are
    estimated from the current chain states only, after ``burn_in_sweeps``
    sweeps at the initial parameters and ``sweeps_per_step`` sweeps per step.
    """
    learning_rate: float = Field(default=0.01, ge=0)
    chains: int = Field(default=100, gt=0)
    steps: int = Field(default=10_000, gt=0)
    seed: int = 0
    sweeps_per_step: int = Field(default=1, gt=0)
    burn_in_sweeps: int = Field(default=0, ge=0)
    init: ChainInit = ChainInit.DATA
