from enum import Enum
from typing import Any, Dict, List, Optional

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    SerializerFunctionWrapHandler,
    model_serializer,
    model_validator,
)

from errors import DomainError


class CellClass(str, Enum):
    STABLE_ZERO = "stable0"
    STABLE_ONE = "stable1"
    VARIABLE = "variable"

    @property
    def is_stable(self) -> bool:
        return self is not CellClass.VARIABLE


class CellTrace(BaseModel):
    """Evaluation evidence of one cell: `ones` 1-outputs seen in `k` evaluations."""

    model_config = ConfigDict(frozen=True)

    cell_id: int = Field(..., ge=0, description="cell index")
    k: int = Field(..., gt=0, description="number of evaluations")
    ones: int = Field(..., description="count of 1 outputs")

    @model_validator(mode="after")
    def _ones_within_k(self) -> "CellTrace":
        if not 0 <= self.ones <= self.k:
            raise DomainError(f"cell {self.cell_id}: ones={self.ones} outside [0, k={self.k}]")
        return self

    @property
    def one_frequency(self) -> float:
        return self.ones / self.k

    @property
    def cell_class(self) -> CellClass:
        if self.ones == 0:
            return CellClass.STABLE_ZERO
        if self.ones == self.k:
            return CellClass.STABLE_ONE
        return CellClass.VARIABLE


class CellPartition(BaseModel):
    model_config = ConfigDict(frozen=True)

    stable_zero: List[CellTrace] = Field(default_factory=list, description="all-zero cells")
    stable_one: List[CellTrace] = Field(default_factory=list, description="all-one cells")
    variable: List[CellTrace] = Field(default_factory=list, description="everything else")

    @property
    def n_stable(self) -> int:
        return len(self.stable_zero) + len(self.stable_one)


class ResponseRecord(BaseModel):
    """
    Output for one cell.

    Stable cells carry a single bit and no symbol; Variable cells carry the
    symbol and its Gray word.
    """

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    cell_id: int = Field(..., ge=0, alias="id")
    cell_class: CellClass = Field(..., alias="class")
    symbol: Optional[int] = Field(None, ge=0)
    bits: str = Field(..., pattern=r"^[01]+$")

    @model_validator(mode="after")
    def _shape_matches_class(self) -> "ResponseRecord":
        if self.cell_class is CellClass.VARIABLE:
            if self.symbol is None:
                raise DomainError(f"cell {self.cell_id}: variable record without symbol")
        else:
            expected = "1" if self.cell_class is CellClass.STABLE_ONE else "0"
            if self.symbol is not None or self.bits != expected:
                raise DomainError(
                    f"cell {self.cell_id}: {self.cell_class.value} record must be the single bit {expected}"
                )
        return self

    @model_serializer(mode="wrap")
    def _omit_missing_symbol(self, handler: SerializerFunctionWrapHandler) -> Dict[str, Any]:
        data = handler(self)
        if data.get("symbol") is None:
            data.pop("symbol", None)
        return data
