from .beta_model import (
    beta_cdf,
    beta_pdf,
    beta_quantile,
    fit_beta,
    fit_censored,
    fit_mle,
    fit_moments,
    log_beta,
)
from .gray_code import GrayWord, gray_decode, gray_encode
from .extraction import (
    KeyOrder,
    assemble_key,
    classify_cells,
    compute_thresholds,
    censoring_for,
    count_boundaries,
    enroll,
    extract_response,
    map_frequency_to_symbol,
    reconstruct,
    rescale_bounds,
    symbols_from_counts,
)
from .metrics import (
    bias,
    binary_baseline,
    bit_error_rate,
    build_metrics_report,
    class_counts,
    combine_rates,
    combined_entropy,
    effective_key_length,
    majority_bits,
    shannon_entropy,
    symbol_error_rate,
)
from .simulator import evaluate_population, predict_symbol_error, run_experiment, sample_population

__all__ = [
    "beta_cdf",
    "beta_pdf",
    "beta_quantile",
    "fit_beta",
    "fit_censored",
    "fit_mle",
    "fit_moments",
    "log_beta",
    "GrayWord",
    "gray_decode",
    "gray_encode",
    "KeyOrder",
    "assemble_key",
    "classify_cells",
    "compute_thresholds",
    "censoring_for",
    "count_boundaries",
    "enroll",
    "extract_response",
    "map_frequency_to_symbol",
    "reconstruct",
    "rescale_bounds",
    "symbols_from_counts",
    "bias",
    "binary_baseline",
    "bit_error_rate",
    "build_metrics_report",
    "class_counts",
    "combine_rates",
    "combined_entropy",
    "effective_key_length",
    "majority_bits",
    "shannon_entropy",
    "symbol_error_rate",
    "evaluate_population",
    "predict_symbol_error",
    "run_experiment",
    "sample_population",
]
