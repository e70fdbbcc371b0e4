import math
from enum import Enum
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, field_validator, model_validator

from errors import DomainError, ParameterError


class BetaParams(BaseModel):
    """Shape parameters of the one-probability distribution."""

    model_config = ConfigDict(frozen=True)

    alpha: float = Field(..., description="first shape parameter, exponent of p")
    beta: float = Field(..., description="second shape parameter, exponent of 1 - p")

    @field_validator("alpha", "beta")
    @classmethod
    def _positive_finite(cls, value: float, info: ValidationInfo) -> float:
        if not math.isfinite(value) or value <= 0:
            raise ParameterError(f"{info.field_name} must be positive and finite, got {value!r}")
        return value


class FitMethod(str, Enum):
    MOMENTS = "moments"
    MLE = "mle"
    CENSORED = "censored"


class Censoring(BaseModel):
    """
    Cells whose frequency fell outside the modeled range. `n_below` cells
    count as p < lower and `n_above` as p > upper in the censored likelihood.
    """

    model_config = ConfigDict(frozen=True)

    n_below: int = Field(0, ge=0, description="stable0 cells")
    n_above: int = Field(0, ge=0, description="stable1 cells")
    lower: float = Field(..., gt=0.0, lt=1.0)
    upper: float = Field(..., gt=0.0, lt=1.0)

    @model_validator(mode="after")
    def _ordered(self) -> "Censoring":
        if not self.lower < self.upper:
            raise DomainError(f"censoring bounds must satisfy lower < upper, got ({self.lower!r}, {self.upper!r})")
        return self


class FitReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    params: BetaParams = Field(..., description="fitted shape parameters")
    method: FitMethod = Field(..., description="estimator used")
    sample_count: int = Field(..., ge=2, description="number of samples fitted")
    log_likelihood: Optional[float] = Field(None, description="total log-likelihood, likelihood fits only")
    converged: bool = Field(True, description="estimator reached its tolerance")
    iterations: int = Field(0, ge=0, description="optimizer iterations used")
    gradient_norm: Optional[float] = Field(None, description="score norm at params, MLE only")
