"""
Synthetic PUF populations and the enroll-once, measure-many experiment.

One-probabilities are drawn from the beta model by inverse CDF; one-counts
are binomial. Every draw comes from a counter-based substream keyed by
(seed, repeat, cell), so results do not depend on how cells are batched.
"""
import logging
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.special import betaincinv
from scipy.stats import binom

from errors import DomainError
from models import (
    CellTrace,
    ExperimentResult,
    ExtractionProfile,
    FitMethod,
    MetricsReport,
    PopulationSpec,
    RescalePolicy,
)
from .extraction import count_boundaries, enroll, reconstruct
from .metrics import build_metrics_report
from .streams import StreamDomain, block_generator, cell_uniforms, stream_key


logger = logging.getLogger("latchkey")

BERNOULLI_LIMIT = 10_000

TraceSink = Callable[[int, List[CellTrace]], None]


def sample_population(spec: PopulationSpec, cell_ids: Optional[Sequence[int]] = None) -> np.ndarray:
    """One-probabilities for `cell_ids` (all cells by default)."""
    ids = list(range(spec.n_cells)) if cell_ids is None else list(cell_ids)
    if any(not 0 <= cell_id < spec.n_cells for cell_id in ids):
        raise DomainError(f"cell ids must lie in [0, {spec.n_cells})")
    uniforms = cell_uniforms(spec.seed, StreamDomain.POPULATION, ids)
    return betaincinv(spec.params.alpha, spec.params.beta, uniforms)


def evaluate_population(
    probabilities: Sequence[float],
    k: int,
    seed: int,
    repeat_index: int,
    cell_ids: Optional[Sequence[int]] = None,
) -> List[CellTrace]:
    """
    One measurement: k evaluations of every cell. Small k sums Bernoulli
    draws; large k inverts the binomial CDF at one uniform per cell.
    """
    p = np.asarray(probabilities, dtype=np.float64)
    ids = list(range(p.size)) if cell_ids is None else list(cell_ids)
    if len(ids) != p.size:
        raise DomainError(f"{p.size} probabilities for {len(ids)} cell ids")
    if ((p < 0.0) | (p > 1.0) | np.isnan(p)).any():
        raise DomainError("one-probabilities must lie in [0, 1]")

    key = stream_key(seed, StreamDomain.EVALUATION)
    if k <= BERNOULLI_LIMIT:
        ones = np.array(
            [np.count_nonzero(block_generator(key, cell_id, repeat_index).random(k) < prob) for cell_id, prob in zip(ids, p)],
            dtype=np.int64,
        )
    else:
        uniforms = cell_uniforms(seed, StreamDomain.EVALUATION, ids, repeat_index)
        ones = np.where(p >= 1.0, k, 0).astype(np.int64)
        interior = (p > 0.0) & (p < 1.0)
        ones[interior] = binom.ppf(uniforms[interior], k, p[interior]).astype(np.int64)

    return [CellTrace(cell_id=cell_id, k=k, ones=int(m)) for cell_id, m in zip(ids, ones)]


def run_experiment(
    spec: PopulationSpec,
    t_bits: int,
    fit_method: FitMethod = FitMethod.MLE,
    rescale_policy: RescalePolicy = RescalePolicy.SMALLEST,
    on_traces: Optional[TraceSink] = None,
) -> ExperimentResult:
    """Enroll on repeat 0, then reconstruct and score repeats 1 .. repeats-1."""
    probabilities = sample_population(spec)

    enrollment = evaluate_population(probabilities, spec.k, spec.seed, 0)
    if on_traces is not None:
        on_traces(0, enrollment)
    profile = enroll(enrollment, t_bits, fit_method, rescale_policy)

    reports: List[MetricsReport] = []
    for repeat_index in range(1, spec.repeats):
        traces = evaluate_population(probabilities, spec.k, spec.seed, repeat_index)
        if on_traces is not None:
            on_traces(repeat_index, traces)
        report = build_metrics_report(profile, reconstruct(traces, profile))
        logger.debug("repeat %d: SER %.4f BER %.4f", repeat_index, report.symbol_error_rate, report.bit_error_rate)
        reports.append(report)

    return ExperimentResult(
        spec=spec,
        t_bits=t_bits,
        profile=profile,
        per_repeat=reports,
        true_probabilities=probabilities.tolist(),
    )


def predict_symbol_error(
    p: float, profile: ExtractionProfile, enrolled_symbol: int, k: Optional[int] = None
) -> float:
    """
    Probability that a Binomial(k, p) one-count lands outside the section of
    `enrolled_symbol`, using the same count boundaries as the extractor.
    """
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p!r} outside [0, 1]")
    if not 0 <= enrolled_symbol < profile.alphabet:
        raise DomainError(f"symbol {enrolled_symbol} outside [0, {profile.alphabet})")
    k = profile.k if k is None else k

    bounds = count_boundaries(profile, k)
    lower = 0 if enrolled_symbol == 0 else int(bounds[enrolled_symbol - 1])
    upper = k + 1 if enrolled_symbol == profile.alphabet - 1 else int(bounds[enrolled_symbol])
    below = binom.cdf(lower - 1, k, p) if lower > 0 else 0.0
    above = binom.sf(upper - 1, k, p) if upper <= k else 0.0
    return float(min(1.0, max(0.0, below + above)))
