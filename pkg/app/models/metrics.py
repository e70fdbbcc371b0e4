from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field


class ClassCounts(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_stable0: int = Field(..., ge=0)
    n_stable1: int = Field(..., ge=0)
    n_variable: int = Field(..., ge=0)
    symbol_histogram: List[int] = Field(default_factory=list, description="enrolled Variable cells per symbol")


class SymbolErrorSummary(BaseModel):
    model_config = ConfigDict(frozen=True)

    rate: float = Field(..., ge=0.0, le=1.0)
    adjacent_error_fraction: Optional[float] = Field(
        None, ge=0.0, le=1.0, description="share of symbol errors with |delta| = 1; None without errors"
    )
    n_errors: int = Field(..., ge=0)
    n_cells: int = Field(..., ge=0)


class MetricsReport(BaseModel):
    """One measurement compared against the enrolled benchmark."""

    model_config = ConfigDict(frozen=True)

    t_bits: int = Field(..., ge=1)
    alphabet: int = Field(..., ge=2)
    n_cells: int = Field(..., ge=1)
    key_length: int = Field(..., ge=1, description="bits in the assembled key")
    entropy_per_cell: float = Field(..., ge=0.0, description="combined entropy of the enrolled key")
    effective_key_length: int = Field(..., ge=0)
    symbol_error_rate: float = Field(..., ge=0.0, le=1.0, description="Variable cells only")
    adjacent_error_fraction: Optional[float] = Field(None, ge=0.0, le=1.0)
    bit_error_rate: float = Field(..., ge=0.0, le=1.0, description="all key bits")
    stable_bit_error_rate: Optional[float] = Field(None, ge=0.0, le=1.0)
    variable_bit_error_rate: Optional[float] = Field(None, ge=0.0, le=1.0)
    bias: float = Field(..., ge=0.0, le=1.0, description="fraction of ones in the enrolled key")
    variable_bias: Optional[float] = Field(None, ge=0.0, le=1.0, description="fraction of ones in the Gray bits")
    counts: ClassCounts


class TableRow(BaseModel):
    """One line of the alphabet comparison table."""

    model_config = ConfigDict(frozen=True)

    label: str
    alphabet: int = Field(..., ge=2)
    entropy: float = Field(..., ge=0.0)
    effective_key_length: int = Field(..., ge=0)
    symbol_error_rate: Optional[float] = None
    bit_error_rate: Optional[float] = None
    bias: float = Field(..., ge=0.0, le=1.0)
