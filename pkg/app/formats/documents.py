"""
JSON documents written and read by the CLI.

Field order is fixed by the model definitions and reals are written with
the shortest representation that reads back to the same double, so equal
inputs always produce byte-identical files.
"""
import json
from pathlib import Path
from typing import List, Literal, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from errors import InputOutputError, SchemaError
from models import (
    PROFILE_VERSION,
    BetaParams,
    CellClass,
    ExperimentResult,
    ExtractionProfile,
    FitMethod,
    FitReport,
    MetricsReport,
    PopulationSpec,
    ResponseRecord,
    TableRow,
)


class ModelDocument(BaseModel):
    alpha: float
    beta: float
    method: FitMethod
    sample_count: int
    log_likelihood: Optional[float] = None
    converged: bool = True

    @classmethod
    def from_fit(cls, fit: FitReport) -> "ModelDocument":
        return cls(
            alpha=fit.params.alpha,
            beta=fit.params.beta,
            method=fit.method,
            sample_count=fit.sample_count,
            log_likelihood=fit.log_likelihood,
            converged=fit.converged,
        )

    @property
    def params(self) -> BetaParams:
        return BetaParams(alpha=self.alpha, beta=self.beta)


class ThresholdsDocument(BaseModel):
    t_bits: int
    alphabet: int
    alpha: float
    beta: float
    min_freq: float
    max_freq: float
    thresholds: List[float]


class ProfileDocument(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    version: Literal[1] = PROFILE_VERSION
    t_bits: int
    alphabet: int
    alpha: float
    beta: float
    k: int
    min_freq: float
    max_freq: float
    thresholds: List[float]
    cells: List[ResponseRecord] = Field(default_factory=list)

    @classmethod
    def from_profile(cls, profile: ExtractionProfile) -> "ProfileDocument":
        return cls(
            t_bits=profile.t_bits,
            alphabet=profile.alphabet,
            alpha=profile.params.alpha,
            beta=profile.params.beta,
            k=profile.k,
            min_freq=profile.min_freq,
            max_freq=profile.max_freq,
            thresholds=list(profile.thresholds),
            cells=[profile.enrolled[cell_id] for cell_id in sorted(profile.enrolled)],
        )

    def to_profile(self) -> ExtractionProfile:
        if self.alphabet != 1 << self.t_bits:
            raise SchemaError(f"alphabet {self.alphabet} does not match t_bits={self.t_bits}")
        ids = [cell.cell_id for cell in self.cells]
        if len(set(ids)) != len(ids):
            raise SchemaError("profile lists a cell more than once")
        for cell in self.cells:
            if cell.cell_class is CellClass.VARIABLE and (cell.symbol >= self.alphabet or len(cell.bits) != self.t_bits):
                raise SchemaError(f"cell {cell.cell_id}: symbol/bits do not fit t_bits={self.t_bits}")
        return ExtractionProfile(
            t_bits=self.t_bits,
            params=BetaParams(alpha=self.alpha, beta=self.beta),
            k=self.k,
            min_freq=self.min_freq,
            max_freq=self.max_freq,
            thresholds=tuple(self.thresholds),
            stable_map={cell.cell_id: cell.cell_class for cell in self.cells},
            enrolled={cell.cell_id: cell for cell in self.cells},
        )


class ResponsesDocument(BaseModel):
    version: Literal[1] = PROFILE_VERSION
    t_bits: int
    cells: List[ResponseRecord]


class ExperimentDocument(BaseModel):
    spec: PopulationSpec
    t_bits: int
    profile: ProfileDocument
    per_repeat: List[MetricsReport]
    mean_symbol_error_rate: Optional[float] = None
    mean_bit_error_rate: Optional[float] = None
    true_probabilities: List[float]

    @classmethod
    def from_result(cls, result: ExperimentResult) -> "ExperimentDocument":
        return cls(
            spec=result.spec,
            t_bits=result.t_bits,
            profile=ProfileDocument.from_profile(result.profile),
            per_repeat=result.per_repeat,
            mean_symbol_error_rate=result.mean_symbol_error_rate,
            mean_bit_error_rate=result.mean_bit_error_rate,
            true_probabilities=result.true_probabilities,
        )


class ReportDocument(BaseModel):
    rows: List[TableRow]


DocumentT = TypeVar("DocumentT", bound=BaseModel)


def render_document(document: BaseModel) -> str:
    payload = document.model_dump(mode="json", by_alias=True)
    return json.dumps(payload, indent=2, ensure_ascii=False) + "\n"


def write_document(path: Path, document: BaseModel) -> None:
    try:
        Path(path).write_text(render_document(document), encoding="utf-8")
    except OSError as e:
        raise InputOutputError(f"cannot write {path}: {e}")


def read_document(path: Path, document_type: Type[DocumentT]) -> DocumentT:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise InputOutputError(f"{path} does not exist")
    except OSError as e:
        raise InputOutputError(f"cannot read {path}: {e}")
    except json.JSONDecodeError as e:
        raise SchemaError(f"{path} is not valid JSON: {e}")
    try:
        return document_type.model_validate(payload)
    except ValidationError as e:
        error = e.errors()[0]
        raise SchemaError(f"{path}: {'.'.join(map(str, error['loc']))}: {error['msg']}")


def read_profile(path: Path) -> ExtractionProfile:
    return read_document(path, ProfileDocument).to_profile()


def read_model(path: Path) -> BetaParams:
    return read_document(path, ModelDocument).params
