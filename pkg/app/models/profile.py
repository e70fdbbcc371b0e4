from enum import Enum
from typing import Dict, Literal, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from errors import DegenerateRangeError
from .beta import BetaParams
from .cells import CellClass, ResponseRecord


PROFILE_VERSION = 1


class RescalePolicy(str, Enum):
    SMALLEST = "smallest"
    OBSERVED = "observed"


class ExtractionProfile(BaseModel):
    """
    Enrollment artifact. Everything reconstruction needs is stored here so a
    later measurement never re-fits or re-thresholds.
    """

    model_config = ConfigDict(frozen=True)

    version: Literal[1] = PROFILE_VERSION
    t_bits: int = Field(..., ge=1, le=16, description="bits per symbol")
    params: BetaParams
    k: int = Field(..., ge=2, description="evaluations per cell at enrollment")
    min_freq: float
    max_freq: float
    thresholds: Tuple[float, ...]
    stable_map: Dict[int, CellClass] = Field(default_factory=dict)
    enrolled: Dict[int, ResponseRecord] = Field(default_factory=dict)

    @property
    def alphabet(self) -> int:
        return 1 << self.t_bits

    @model_validator(mode="after")
    def _ordered_bounds(self) -> "ExtractionProfile":
        if len(self.thresholds) != self.alphabet - 1:
            raise DegenerateRangeError(
                f"expected {self.alphabet - 1} thresholds for t_bits={self.t_bits}, got {len(self.thresholds)}"
            )
        chain = (self.min_freq, *self.thresholds, self.max_freq)
        if not 0.0 < self.min_freq or not self.max_freq < 1.0:
            raise DegenerateRangeError(f"bounds ({self.min_freq!r}, {self.max_freq!r}) must lie inside (0, 1)")
        if any(lo >= hi for lo, hi in zip(chain, chain[1:])):
            raise DegenerateRangeError("min_freq < thresholds < max_freq must be strictly increasing")
        return self
