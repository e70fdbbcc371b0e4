from statistics import fmean
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

from .beta import BetaParams
from .metrics import MetricsReport
from .profile import ExtractionProfile


class PopulationSpec(BaseModel):
    model_config = ConfigDict(frozen=True)

    n_cells: int = Field(..., ge=1)
    params: BetaParams
    k: int = Field(..., ge=1, description="evaluations per measurement")
    seed: int = Field(0, ge=0, lt=1 << 64)
    repeats: int = Field(2, ge=2, description="one enrollment plus at least one reconstruction")


class ExperimentResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    spec: PopulationSpec
    t_bits: int = Field(..., ge=1)
    profile: ExtractionProfile
    per_repeat: List[MetricsReport] = Field(..., description="one report per reconstruction")
    true_probabilities: List[float] = Field(..., description="ground-truth one-probabilities")

    @property
    def mean_symbol_error_rate(self) -> Optional[float]:
        if not self.per_repeat:
            return None
        return fmean(report.symbol_error_rate for report in self.per_repeat)

    @property
    def mean_bit_error_rate(self) -> Optional[float]:
        if not self.per_repeat:
            return None
        return fmean(report.bit_error_rate for report in self.per_repeat)
