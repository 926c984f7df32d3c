from enum import Enum
from typing import List

from pydantic import BaseModel, Field, model_validator


class BayesSchedule(str, Enum):
    TWO_PARENT = "bn2"
    THREE_PARENT = "bn3"

    @property
    def max_parents(self) -> int:
        return 2 if self == BayesSchedule.TWO_PARENT else 3


class IsingGridSpec(BaseModel):
    """
    Rectangular Ising grid with 4-neighbour, non-periodic couplings.

    Variable i = r * cols + c has spin s_i = 2 x_i - 1.
    """
    rows: int = Field(gt=0)
    cols: int = Field(gt=0)
    coupling: float = 0.5

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def validate_size(self) -> "IsingGridSpec":
        if self.rows * self.cols < 2:
            raise ValueError("an Ising grid needs at least two spins")
        return self

    @property
    def n(self) -> int:
        return self.rows * self.cols


class BayesNetSpec(BaseModel):
    """
    Binary Bayesian network over nodes 0 .. n-1 in topological order.

    ``cpts[i]`` has one row [p(x_i=0), p(x_i=1)] per parent configuration,
    indexed mixed radix with the first listed parent fastest.
    """
    n: int = Field(gt=0)
    parents: List[List[int]]
    cpts: List[List[List[float]]]
    seed: int = 0
    schedule: BayesSchedule = BayesSchedule.TWO_PARENT

    @model_validator(mode="after")
    def validate_structure(self) -> "BayesNetSpec":
        if len(self.parents) != self.n or len(self.cpts) != self.n:
            raise ValueError("one parent list and one CPT per node are required")
        for node, (parents, table) in enumerate(zip(self.parents, self.cpts)):
            if len(set(parents)) != len(parents):
                raise ValueError(f"node {node} lists a parent twice")
            if any(not 0 <= parent < node for parent in parents):
                raise ValueError(f"parents of node {node} must be lower-indexed")
            if len(table) != 2 ** len(parents):
                raise ValueError(f"node {node} needs {2 ** len(parents)} CPT rows")
            for row in table:
                if len(row) != 2 or min(row) < 0.0 or abs(sum(row) - 1.0) > 1e-9:
                    raise ValueError(f"CPT rows of node {node} must be distributions over {{0, 1}}")
        return self

    @property
    def edge_count(self) -> int:
        return sum(len(parents) for parents in self.parents)
