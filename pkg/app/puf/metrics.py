import math
from collections import Counter
from typing import Dict, Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import entropy

from errors import CellSetMismatchError, DataError, DomainError
from models import (
    CellClass,
    CellTrace,
    ClassCounts,
    ExtractionProfile,
    MetricsReport,
    ResponseRecord,
    SymbolErrorSummary,
    TableRow,
)
from .extraction import assemble_key


def shannon_entropy(counts: Sequence[int]) -> float:
    """Entropy in bits of the empirical distribution given by `counts`."""
    values = np.asarray(counts, dtype=np.float64)
    if values.size == 0 or (values < 0).any():
        raise DomainError(f"counts must be non-negative, got {list(counts)}")
    if values.sum() <= 0:
        raise DomainError("entropy of an all-zero histogram is undefined")
    return float(entropy(values, base=2))


def combined_entropy(stable_counts: Tuple[int, int], symbol_counts: Sequence[int], n_total: int) -> float:
    """Per-cell entropy of a key mixing stable bits and Gray-coded symbols."""
    n_stable = sum(stable_counts)
    n_symbols = sum(symbol_counts)
    if n_stable + n_symbols != n_total or n_total <= 0:
        raise CellSetMismatchError(f"{n_stable} stable + {n_symbols} symbol cells != {n_total} total")

    total = 0.0
    if n_stable:
        total += shannon_entropy(stable_counts) * n_stable / n_total
    if n_symbols:
        total += shannon_entropy(symbol_counts) * n_symbols / n_total
    return total


def effective_key_length(entropy_per_cell: float, n_cells: int) -> int:
    if entropy_per_cell < 0 or n_cells < 1:
        raise DomainError(f"need entropy >= 0 and n_cells >= 1, got ({entropy_per_cell!r}, {n_cells})")
    return int(math.floor(entropy_per_cell * n_cells + 0.5))


def _variable_symbols(records: Iterable[ResponseRecord]) -> Dict[int, int]:
    return {r.cell_id: r.symbol for r in records if r.cell_class is CellClass.VARIABLE}


def symbol_error_rate(
    enrolled: Sequence[ResponseRecord], measured: Sequence[ResponseRecord]
) -> SymbolErrorSummary:
    """Fraction of Variable cells whose measured symbol differs from the benchmark."""
    reference = _variable_symbols(enrolled)
    observed = _variable_symbols(measured)
    if reference.keys() != observed.keys():
        raise CellSetMismatchError(
            f"enrolled and measured responses cover different Variable cells "
            f"({len(reference)} vs {len(observed)})"
        )
    deltas = [abs(observed[cell_id] - symbol) for cell_id, symbol in reference.items()]
    errors = [delta for delta in deltas if delta]
    if not deltas:
        return SymbolErrorSummary(rate=0.0, n_errors=0, n_cells=0)
    return SymbolErrorSummary(
        rate=len(errors) / len(deltas),
        adjacent_error_fraction=(sum(1 for delta in errors if delta == 1) / len(errors)) if errors else None,
        n_errors=len(errors),
        n_cells=len(deltas),
    )


def _bit_array(bits: str) -> np.ndarray:
    array = np.frombuffer(bits.encode("ascii"), dtype=np.uint8) - ord("0")
    if (array > 1).any():
        raise DomainError("bit sequences may only contain '0' and '1'")
    return array


def bit_error_rate(enrolled_bits: str, measured_bits: str) -> float:
    if len(enrolled_bits) != len(measured_bits):
        raise CellSetMismatchError(f"bit sequences differ in length ({len(enrolled_bits)} vs {len(measured_bits)})")
    if not enrolled_bits:
        raise DataError("bit error rate of empty sequences is undefined")
    return float(np.count_nonzero(_bit_array(enrolled_bits) != _bit_array(measured_bits)) / len(enrolled_bits))


def bias(bits: str) -> float:
    if not bits:
        raise DataError("bias of an empty bit sequence is undefined")
    return float(_bit_array(bits).mean())


def combine_rates(components: Sequence[Tuple[float, int]]) -> float:
    """Bit-weighted mean of per-component rates, e.g. [(0.0490, 110), (2.915e-8, 969)]."""
    total_bits = sum(n for _, n in components)
    if total_bits <= 0:
        raise DataError("no bits to combine")
    return sum(rate * n for rate, n in components) / total_bits


def class_counts(profile: ExtractionProfile) -> ClassCounts:
    classes = Counter(profile.stable_map.values())
    histogram = [0] * profile.alphabet
    for record in profile.enrolled.values():
        if record.symbol is not None:
            histogram[record.symbol] += 1
    return ClassCounts(
        n_stable0=classes[CellClass.STABLE_ZERO],
        n_stable1=classes[CellClass.STABLE_ONE],
        n_variable=classes[CellClass.VARIABLE],
        symbol_histogram=histogram,
    )


def _split_bits(records: Sequence[ResponseRecord], profile: ExtractionProfile) -> Tuple[str, str]:
    """Key bits of enrolled-stable cells and of enrolled-Variable cells, each in cell order."""
    ordered = sorted(records, key=lambda record: record.cell_id)
    stable = "".join(r.bits for r in ordered if profile.stable_map[r.cell_id].is_stable)
    variable = "".join(r.bits for r in ordered if not profile.stable_map[r.cell_id].is_stable)
    return stable, variable


def build_metrics_report(profile: ExtractionProfile, measured: Sequence[ResponseRecord]) -> MetricsReport:
    enrolled = list(profile.enrolled.values())
    counts = class_counts(profile)
    n_cells = len(enrolled)
    entropy_per_cell = combined_entropy(
        (counts.n_stable0, counts.n_stable1),
        counts.symbol_histogram if counts.n_variable else [],
        n_cells,
    )
    enrolled_key = assemble_key(enrolled)
    measured_key = assemble_key(measured)
    enrolled_stable, enrolled_variable = _split_bits(enrolled, profile)
    measured_stable, measured_variable = _split_bits(measured, profile)
    symbol_errors = symbol_error_rate(enrolled, measured)

    return MetricsReport(
        t_bits=profile.t_bits,
        alphabet=profile.alphabet,
        n_cells=n_cells,
        key_length=len(enrolled_key),
        entropy_per_cell=entropy_per_cell,
        effective_key_length=effective_key_length(entropy_per_cell, n_cells),
        symbol_error_rate=symbol_errors.rate,
        adjacent_error_fraction=symbol_errors.adjacent_error_fraction,
        bit_error_rate=bit_error_rate(enrolled_key, measured_key),
        stable_bit_error_rate=bit_error_rate(enrolled_stable, measured_stable) if enrolled_stable else None,
        variable_bit_error_rate=bit_error_rate(enrolled_variable, measured_variable) if enrolled_variable else None,
        bias=bias(enrolled_key),
        variable_bias=bias(enrolled_variable) if enrolled_variable else None,
        counts=counts,
    )


def majority_bits(traces: Sequence[CellTrace]) -> str:
    """One bit per cell, '1' when more than half the evaluations were 1."""
    ordered = sorted(traces, key=lambda trace: trace.cell_id)
    return "".join("1" if 2 * trace.ones > trace.k else "0" for trace in ordered)


def binary_baseline(
    enrolled: Sequence[CellTrace], measurements: Sequence[Sequence[CellTrace]] = ()
) -> TableRow:
    """Conventional one-bit-per-cell key, the reference row of the alphabet table."""
    reference = majority_bits(enrolled)
    ones = reference.count("1")
    entropy_per_cell = shannon_entropy([ones, len(reference) - ones])
    ber: Optional[float] = None
    if measurements:
        ber = float(np.mean([bit_error_rate(reference, majority_bits(traces)) for traces in measurements]))
    return TableRow(
        label="binary",
        alphabet=2,
        entropy=entropy_per_cell,
        effective_key_length=effective_key_length(entropy_per_cell, len(reference)),
        bit_error_rate=ber,
        bias=bias(reference),
    )
