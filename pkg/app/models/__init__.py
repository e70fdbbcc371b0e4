from .beta import BetaParams, Censoring, FitMethod, FitReport
from .cells import CellClass, CellPartition, CellTrace, ResponseRecord
from .core import Command, ReportFormat, RunConfig
from .metrics import ClassCounts, MetricsReport, SymbolErrorSummary, TableRow
from .profile import PROFILE_VERSION, ExtractionProfile, RescalePolicy
from .simulation import ExperimentResult, PopulationSpec

__all__ = [
    "BetaParams",
    "Censoring",
    "FitMethod",
    "FitReport",
    "CellClass",
    "CellPartition",
    "CellTrace",
    "ResponseRecord",
    "Command",
    "ReportFormat",
    "RunConfig",
    "ClassCounts",
    "MetricsReport",
    "SymbolErrorSummary",
    "TableRow",
    "PROFILE_VERSION",
    "ExtractionProfile",
    "RescalePolicy",
    "ExperimentResult",
    "PopulationSpec",
]
