from enum import Enum

from pydantic import BaseModel, model_validator


class CandidateKind(str, Enum):
    APPEND = "append"
    ADJUST = "adjust"
    REMOVE = "remove"


class CandidateDelta(BaseModel):
    """A single-coordinate change with its exact cost change and bound."""
    y: int
    kind: CandidateKind
    new_theta: float
    delta_cost: float
    lower_bound: float

    model_config = {"frozen": True}

    @model_validator(mode="after")
    def validate_remove(self) -> "CandidateDelta":
        if self.kind == CandidateKind.REMOVE and self.new_theta != 0.0:
            raise ValueError("a remove candidate sets theta to 0")
        return self
