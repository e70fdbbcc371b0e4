"""
Non-binary response extraction.

Enrollment separates stable cells, restricts the frequency range to
[min_freq, max_freq], fits the beta model (the censored fit also counts the
stable cells as mass outside that range) and places 2^t - 1 thresholds so
every section holds the same probability mass.
Sections are half-open, [T_(i-1), T_i), with the last one closed.
"""
import bisect
import logging
import math
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from errors import (
    ConvergenceError,
    DataError,
    DegenerateRangeError,
    DomainError,
    DuplicateCellError,
    KMismatchError,
    TooFewVariableCellsError,
    UnknownCellError,
)
from models import (
    BetaParams,
    Censoring,
    CellClass,
    CellPartition,
    CellTrace,
    ExtractionProfile,
    FitMethod,
    RescalePolicy,
    ResponseRecord,
)
from .beta_model import beta_cdf, beta_quantile, fit_beta
from .gray_code import gray_encode


logger = logging.getLogger("latchkey")

MAX_T_BITS = 8
MIN_SECTION_MASS = 1e-12


class KeyOrder(str, Enum):
    BY_CELL_ID = "by_cell_id"


def _uniform_k(traces: Sequence[CellTrace]) -> int:
    ks = {trace.k for trace in traces}
    if len(ks) > 1:
        raise KMismatchError(f"traces mix evaluation counts {sorted(ks)}")
    return ks.pop()


def _index_by_cell(traces: Iterable[CellTrace]) -> Dict[int, CellTrace]:
    indexed: Dict[int, CellTrace] = {}
    for trace in traces:
        if trace.cell_id in indexed:
            raise DuplicateCellError(f"cell {trace.cell_id} appears more than once")
        indexed[trace.cell_id] = trace
    return indexed


def classify_cells(traces: Sequence[CellTrace]) -> CellPartition:
    if not traces:
        raise DataError("no traces to classify")
    _uniform_k(traces)
    groups: Dict[CellClass, List[CellTrace]] = {cls: [] for cls in CellClass}
    for trace in traces:
        groups[trace.cell_class].append(trace)
    return CellPartition(
        stable_zero=groups[CellClass.STABLE_ZERO],
        stable_one=groups[CellClass.STABLE_ONE],
        variable=groups[CellClass.VARIABLE],
    )


def rescale_bounds(
    k: int, policy: RescalePolicy, variable_traces: Sequence[CellTrace] = ()
) -> Tuple[float, float]:
    if k < 2:
        raise DegenerateRangeError(f"k={k} leaves no room between all-zero and all-one cells")

    if policy is RescalePolicy.SMALLEST:
        min_freq, max_freq = 1.0 / k, (k - 1.0) / k
        if not min_freq < max_freq:
            raise DegenerateRangeError(f"k={k} gives min_freq = max_freq = {min_freq!r}")
        return min_freq, max_freq

    if not variable_traces:
        raise TooFewVariableCellsError("observed bounds need at least one Variable cell")
    frequencies = [trace.one_frequency for trace in variable_traces]
    return min(frequencies), max(frequencies)


def censoring_for(partition: CellPartition, min_freq: float, max_freq: float) -> Censoring:
    return Censoring(
        n_below=len(partition.stable_zero), n_above=len(partition.stable_one), lower=min_freq, upper=max_freq
    )


def compute_thresholds(
    params: BetaParams, min_freq: float, max_freq: float, t_bits: int
) -> Tuple[float, ...]:
    """
    Thresholds dividing the beta mass between min_freq and max_freq into
    2^t equal sections.
    """
    if not 1 <= t_bits <= MAX_T_BITS:
        raise DomainError(f"t_bits={t_bits} outside [1, {MAX_T_BITS}]")
    if not 0.0 < min_freq < max_freq < 1.0:
        raise DegenerateRangeError(f"need 0 < min_freq < max_freq < 1, got ({min_freq!r}, {max_freq!r})")

    f_min = beta_cdf(min_freq, params)
    span = beta_cdf(max_freq, params) - f_min
    if span < MIN_SECTION_MASS:
        raise DegenerateRangeError(f"beta mass between the bounds is only {span!r}")

    sections = 1 << t_bits
    thresholds = tuple(beta_quantile(f_min + (i + 1) * span / sections, params) for i in range(sections - 1))

    chain = (min_freq, *thresholds, max_freq)
    if any(lo >= hi for lo, hi in zip(chain, chain[1:])):
        raise DegenerateRangeError(f"{sections} sections are too narrow to separate in double precision")
    return thresholds


def map_frequency_to_symbol(freq: float, profile: ExtractionProfile) -> int:
    clamped = min(max(freq, profile.min_freq), profile.max_freq)
    if clamped != freq:
        logger.warning(
            "frequency %r outside [%r, %r], clamped to %r", freq, profile.min_freq, profile.max_freq, clamped
        )
    # ties land in the upper section
    return bisect.bisect_right(profile.thresholds, clamped)


def count_boundaries(profile: ExtractionProfile, k: Optional[int] = None) -> np.ndarray:
    """Smallest one-count m with m/k >= T for every threshold T (k defaults to the enrolled k)."""
    k = profile.k if k is None else k
    bounds = []
    for threshold in profile.thresholds:
        m = math.ceil(threshold * k)
        while m > 0 and (m - 1) / k >= threshold:
            m -= 1
        while m / k < threshold:
            m += 1
        bounds.append(m)
    return np.asarray(bounds, dtype=np.int64)


def symbols_from_counts(ones: np.ndarray, profile: ExtractionProfile) -> np.ndarray:
    """Vectorised `map_frequency_to_symbol` over one-counts measured with `profile.k`."""
    return np.searchsorted(count_boundaries(profile), np.asarray(ones, dtype=np.int64), side="right")


def _variable_record(cell_id: int, freq: float, profile: ExtractionProfile) -> ResponseRecord:
    symbol = map_frequency_to_symbol(freq, profile)
    return ResponseRecord(
        cell_id=cell_id,
        cell_class=CellClass.VARIABLE,
        symbol=symbol,
        bits=str(gray_encode(symbol, profile.t_bits)),
    )


def _stable_record(cell_id: int, bit: str) -> ResponseRecord:
    cell_class = CellClass.STABLE_ONE if bit == "1" else CellClass.STABLE_ZERO
    return ResponseRecord(cell_id=cell_id, cell_class=cell_class, bits=bit)


def extract_response(trace: CellTrace, profile: ExtractionProfile) -> ResponseRecord:
    if trace.k != profile.k:
        raise KMismatchError(f"cell {trace.cell_id}: k={trace.k} but the profile was enrolled with k={profile.k}")
    cell_class = trace.cell_class
    if cell_class is CellClass.VARIABLE:
        return _variable_record(trace.cell_id, trace.one_frequency, profile)
    return _stable_record(trace.cell_id, "1" if cell_class is CellClass.STABLE_ONE else "0")


def enroll(
    traces: Sequence[CellTrace],
    t_bits: int,
    fit_method: FitMethod = FitMethod.MLE,
    rescale_policy: RescalePolicy = RescalePolicy.SMALLEST,
) -> ExtractionProfile:
    partition = classify_cells(traces)
    _index_by_cell(traces)
    k = traces[0].k

    frequencies = np.array([trace.one_frequency for trace in partition.variable], dtype=np.float64)
    if np.unique(frequencies).size < 2:
        raise TooFewVariableCellsError(
            f"{len(partition.variable)} Variable cells with {np.unique(frequencies).size} distinct frequencies; need 2"
        )
    logger.info(
        "classified %d cells: %d stable0, %d stable1, %d variable",
        len(traces),
        len(partition.stable_zero),
        len(partition.stable_one),
        len(partition.variable),
    )

    min_freq, max_freq = rescale_bounds(k, rescale_policy, partition.variable)
    fit = fit_beta(np.clip(frequencies, min_freq, max_freq), fit_method, censoring_for(partition, min_freq, max_freq))
    if not fit.converged:
        raise ConvergenceError(
            f"{fit.method.value} fit did not converge after {fit.iterations} iterations", estimate=fit.params.alpha
        )
    logger.info("fitted alpha=%.6g beta=%.6g (%s)", fit.params.alpha, fit.params.beta, fit.method.value)

    profile = ExtractionProfile(
        t_bits=t_bits,
        params=fit.params,
        k=k,
        min_freq=min_freq,
        max_freq=max_freq,
        thresholds=compute_thresholds(fit.params, min_freq, max_freq, t_bits),
        stable_map={trace.cell_id: trace.cell_class for trace in traces},
    )
    enrolled = {trace.cell_id: extract_response(trace, profile) for trace in traces}
    return profile.model_copy(update={"enrolled": enrolled})


def reconstruct(traces: Sequence[CellTrace], profile: ExtractionProfile) -> List[ResponseRecord]:
    """
    Re-extract with the stored profile. The enrolled class decides the shape
    of each record: enrolled-stable cells give one majority bit, enrolled
    Variable cells give a clamped symbol.
    """
    measured = _index_by_cell(traces)
    unknown = sorted(set(measured) - set(profile.stable_map))
    if unknown:
        raise UnknownCellError(f"cells {unknown[:5]} are not in the profile")
    missing = sorted(set(profile.stable_map) - set(measured))
    if missing:
        raise UnknownCellError(f"no trace for enrolled cells {missing[:5]}")

    records = []
    for cell_id in sorted(measured):
        trace = measured[cell_id]
        if trace.k != profile.k:
            raise KMismatchError(f"cell {cell_id}: k={trace.k} but the profile was enrolled with k={profile.k}")
        if profile.stable_map[cell_id].is_stable:
            if trace.cell_class is CellClass.VARIABLE:
                logger.warning("enrolled-stable cell %d measured %d/%d ones", cell_id, trace.ones, trace.k)
            records.append(_stable_record(cell_id, "1" if 2 * trace.ones >= trace.k else "0"))
        else:
            records.append(_variable_record(cell_id, trace.one_frequency, profile))
    return records


def assemble_key(records: Sequence[ResponseRecord], order: KeyOrder = KeyOrder.BY_CELL_ID) -> str:
    if not records:
        raise DataError("no records to assemble into a key")
    seen = set()
    for record in records:
        if record.cell_id in seen:
            raise DuplicateCellError(f"cell {record.cell_id} appears more than once")
        seen.add(record.cell_id)
    return "".join(record.bits for record in sorted(records, key=lambda record: record.cell_id))
