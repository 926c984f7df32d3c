import math
from typing import List, Tuple

from pydantic import BaseModel, field_validator

from fsll.core.config import settings


class VariableSpec(BaseModel):
    """
    Ordered cardinalities of the variables X_0, ..., X_{n-1}.

    Flat indices are mixed radix with x_0 the fastest-varying digit, so the
    table reshaped to ``shape`` (C order) has X_0 on the last numpy axis.
    """
    cards: List[int]

    model_config = {"frozen": True}

    @field_validator("cards")
    def validate_cards(cls, v: List[int]) -> List[int]:
        if not v:
            raise ValueError("at least one variable is required")
        for card in v:
            if card < 2:
                raise ValueError(f"every cardinality must be >= 2, got {card}")
        if math.prod(v) > settings.MAX_STATES:
            raise ValueError(f"|X| = {math.prod(v)} exceeds the addressable limit {settings.MAX_STATES}")
        return v

    @property
    def n(self) -> int:
        return len(self.cards)

    @property
    def size(self) -> int:
        return math.prod(self.cards)

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(reversed(self.cards))

    @property
    def strides(self) -> Tuple[int, ...]:
        out = []
        stride = 1
        for card in self.cards:
            out.append(stride)
            stride *= card
        return tuple(out)

    def numpy_axis(self, i: int) -> int:
        """Numpy axis of variable i in the array reshaped to ``shape``."""
        return self.n - 1 - i

    @property
    def is_binary(self) -> bool:
        return all(card == 2 for card in self.cards)

    def header(self) -> str:
        return "# cards: " + ",".join(str(c) for c in self.cards)

    @classmethod
    def binary(cls, n: int) -> "VariableSpec":
        return cls(cards=[2] * n)
