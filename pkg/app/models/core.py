from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import List, Optional

from .beta import FitMethod
from .profile import RescalePolicy


class Command(str, Enum):
    FIT = "fit"
    THRESHOLDS = "thresholds"
    ENROLL = "enroll"
    RECONSTRUCT = "reconstruct"
    EVALUATE = "evaluate"
    SIMULATE = "simulate"
    REPORT = "report"


class ReportFormat(str, Enum):
    TEXT = "text"
    JSON = "json"


@dataclass
class RunConfig:
    """
    Everything one CLI invocation needs.

    ## Parameters
    **command**: *Command* Which workflow to run.

    **traces**: *list of Path* Trace CSV files. `report` takes the enrollment
    traces first and measurement traces after it; other commands take one.

    **out**: *Path* Output file, or output directory for `simulate`.

    The remaining fields are only read by the commands that need them;
    `PipelineManager.validate_configuration` checks which are required.
    """
    command: Command
    traces: List[Path] = field(default_factory=list)
    profile: Optional[Path] = None
    model: Optional[Path] = None
    out: Optional[Path] = None
    bits: Optional[Path] = None
    t_bits: int = 2
    fit_method: FitMethod = FitMethod.MLE
    rescale_policy: RescalePolicy = RescalePolicy.SMALLEST
    alpha: Optional[float] = None
    beta: Optional[float] = None
    cells: Optional[int] = None
    k: Optional[int] = None
    seed: int = 0
    repeats: int = 2
    report_format: ReportFormat = ReportFormat.TEXT
    verbose: bool = False
