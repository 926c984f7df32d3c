from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field, field_validator


class ModelKind(str, Enum):
    FSLL = "fsll"
    BM_DI = "bm-di"
    BM_PCD = "bm-pcd"


class RunReport(BaseModel):
    """One row of the results table: a fitted model scored on one dataset."""
    dataset: str
    model: ModelKind
    kl_pd: float
    kl_pstar: Optional[float] = None
    basis_count: int = Field(ge=0)
    wall_ms: int = Field(default=0, ge=0)
    seed: int = 0

    @field_validator("kl_pd", "kl_pstar")
    def validate_kl(cls, v: Optional[float]) -> Optional[float]:
        # rounding can leave an exact zero KL slightly negative
        if v is not None and v < 0.0:
            if v < -1e-9:
                raise ValueError(f"KL divergence must be non-negative, got {v}")
            return 0.0
        return v

    @classmethod
    def columns(cls) -> List[str]:
        return ["dataset", "model", "kl_pd", "kl_pstar", "basis_count", "wall_ms", "seed"]

    def as_row(self) -> List[str]:
        kl_pstar = "" if self.kl_pstar is None else format(self.kl_pstar, ".17g")
        return [
            self.dataset,
            self.model.value,
            format(self.kl_pd, ".17g"),
            kl_pstar,
            str(self.basis_count),
            str(self.wall_ms),
            str(self.seed),
        ]

    @classmethod
    def from_row(cls, row: Dict[str, str]) -> "RunReport":
        return cls(
            dataset=row["dataset"],
            model=row["model"],
            kl_pd=float(row["kl_pd"]),
            kl_pstar=float(row["kl_pstar"]) if row["kl_pstar"] else None,
            basis_count=int(row["basis_count"]),
            wall_ms=int(row["wall_ms"]),
            seed=int(row["seed"]),
        )
