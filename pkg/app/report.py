from typing import Optional, Sequence

from models import ExperimentResult, FitReport, MetricsReport, TableRow


def _rate(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.4f}"


class ReportFormatter:
    def fit_summary(fit: FitReport) -> str:
        status = "converged" if fit.converged else "NOT converged"
        return (
            f"📈 Fitted Beta({fit.params.alpha:.6g}, {fit.params.beta:.6g}) "
            f"by {fit.method.value} on {fit.sample_count} cells, {status}."
        )

    def metrics_summary(report: MetricsReport) -> str:
        counts = report.counts
        cells_text = (
            f"🧮 {report.n_cells} cells: {counts.n_stable0} stable0, "
            f"{counts.n_stable1} stable1, {counts.n_variable} variable."
        )
        key_text = (
            f"🔑 {report.alphabet}-ary key of {report.key_length} bits, "
            f"entropy {report.entropy_per_cell:.4f}/cell, effective length {report.effective_key_length}."
        )
        error_text = (
            f"📉 SER {_rate(report.symbol_error_rate)}, BER {_rate(report.bit_error_rate)}, "
            f"bias {_rate(report.bias)}."
        )
        return "\n".join([cells_text, key_text, error_text])

    def experiment_summary(result: ExperimentResult) -> str:
        measured = len(result.per_repeat)
        return (
            f"🎲 {result.spec.n_cells} cells x {result.spec.repeats} repeats, "
            f"mean SER {_rate(result.mean_symbol_error_rate)} and mean BER {_rate(result.mean_bit_error_rate)} "
            f"over {measured} reconstruction{'s' if measured != 1 else ''}."
        )

    def table(rows: Sequence[TableRow]) -> str:
        """Alphabet comparison table, one row per alphabet, the binary baseline first."""
        header = f"{'alphabet':<10}{'entropy':>10}{'key len':>10}{'SER':>10}{'BER':>10}{'bias':>10}"
        lines = [header, "-" * len(header)]
        for row in rows:
            lines.append(
                f"{row.label:<10}{row.entropy:>10.4f}{row.effective_key_length:>10d}"
                f"{_rate(row.symbol_error_rate):>10}{_rate(row.bit_error_rate):>10}{row.bias:>10.4f}"
            )
        return "\n".join(lines) + "\n"
