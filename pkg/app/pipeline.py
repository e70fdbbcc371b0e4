import logging
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from rich.console import Console

from errors import ConfigurationError, ConvergenceError, InputOutputError
from formats import (
    ExperimentDocument,
    ModelDocument,
    ProfileDocument,
    ReportDocument,
    ResponsesDocument,
    ThresholdsDocument,
    parse_trace_file,
    read_model,
    read_profile,
    render_document,
    write_document,
    write_trace_file,
)
from models import (
    BetaParams,
    CellTrace,
    Command,
    PopulationSpec,
    ReportFormat,
    RunConfig,
    TableRow,
)
from puf import (
    assemble_key,
    binary_baseline,
    build_metrics_report,
    censoring_for,
    classify_cells,
    compute_thresholds,
    enroll,
    fit_beta,
    reconstruct,
    rescale_bounds,
    run_experiment,
)
from puf.extraction import MAX_T_BITS
from report import ReportFormatter


logger = logging.getLogger("latchkey")

REPORT_T_BITS = (2, 3, 4)
EXPERIMENT_FILE = "experiment.json"


def trace_file_name(repeat_index: int) -> str:
    return f"traces_r{repeat_index:03d}.csv"


class PipelineManager:
    """Validates a RunConfig and runs the command it names."""

    def __init__(self, console: Optional[Console] = None):
        self.console = console or Console(stderr=True)
        self.handlers: Dict[Command, Callable[[RunConfig], None]] = {
            Command.FIT: self.run_fit,
            Command.THRESHOLDS: self.run_thresholds,
            Command.ENROLL: self.run_enroll,
            Command.RECONSTRUCT: self.run_reconstruct,
            Command.EVALUATE: self.run_evaluate,
            Command.SIMULATE: self.run_simulate,
            Command.REPORT: self.run_report,
        }

    def validate_configuration(self, config: RunConfig) -> RunConfig:
        """Check the flags `config.command` needs; every problem is reported at once."""
        problems: List[str] = []
        command = config.command

        if config.out is None:
            problems.append("--out is required")

        if command in (Command.FIT, Command.ENROLL, Command.RECONSTRUCT, Command.EVALUATE):
            if len(config.traces) != 1:
                problems.append(f"{command.value} takes exactly one --traces file, got {len(config.traces)}")
        if command is Command.REPORT and not config.traces:
            problems.append("report needs at least one --traces file (enrollment first)")
        if command in (Command.RECONSTRUCT, Command.EVALUATE) and config.profile is None:
            problems.append("--profile is required")

        if command is Command.THRESHOLDS:
            has_shape = config.alpha is not None and config.beta is not None
            if not has_shape and config.model is None:
                problems.append("--alpha and --beta, or --model, are required")
            if config.k is None and not config.traces:
                problems.append("--k or --traces is required")

        if command is Command.SIMULATE:
            for flag, value in (("--alpha", config.alpha), ("--beta", config.beta), ("--cells", config.cells), ("--k", config.k)):
                if value is None:
                    problems.append(f"{flag} is required")
            if config.cells is not None and config.cells < 1:
                problems.append(f"--cells must be at least 1, got {config.cells}")
            if config.repeats < 2:
                problems.append(f"--repeats must be at least 2, got {config.repeats}")

        if config.k is not None and config.k < 2 and command in (Command.THRESHOLDS, Command.SIMULATE):
            problems.append(f"--k must be at least 2, got {config.k}")
        if not 0 <= config.seed < 1 << 64:
            problems.append(f"--seed must fit in 64 unsigned bits, got {config.seed}")
        if not 1 <= config.t_bits <= MAX_T_BITS:
            problems.append(f"--t-bits must lie in [1, {MAX_T_BITS}], got {config.t_bits}")

        if problems:
            raise ConfigurationError(f"invalid {command.value} configuration: " + "; ".join(problems))
        return config

    def dispatch(self, config: RunConfig) -> None:
        self.validate_configuration(config)
        logger.info("running %s", config.command.value)
        self.handlers[config.command](config)

    def load_traces(self, path: Path) -> List[CellTrace]:
        traces = parse_trace_file(path)
        self.console.print(f"📄 Loaded {len(traces)} cell traces from {path}")
        return traces

    def write_text(self, path: Path, text: str) -> None:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as e:
            raise InputOutputError(f"cannot write {path}: {e}")

    def run_fit(self, config: RunConfig) -> None:
        traces = self.load_traces(config.traces[0])
        partition = classify_cells(traces)
        min_freq, max_freq = rescale_bounds(traces[0].k, config.rescale_policy, partition.variable)
        frequencies = np.clip([trace.one_frequency for trace in partition.variable], min_freq, max_freq)

        self.console.print(f"🔧 Fitting beta model to {len(partition.variable)} variable cells...")
        fit = fit_beta(frequencies, config.fit_method, censoring_for(partition, min_freq, max_freq))
        write_document(config.out, ModelDocument.from_fit(fit))
        self.console.print(ReportFormatter.fit_summary(fit))
        if not fit.converged:
            raise ConvergenceError(
                f"{fit.method.value} fit did not converge; last estimate written to {config.out}",
                estimate=fit.params.alpha,
            )
        self.console.print(f"✅ Model written to {config.out}")

    def run_thresholds(self, config: RunConfig) -> None:
        if config.alpha is not None and config.beta is not None:
            params = BetaParams(alpha=config.alpha, beta=config.beta)
        else:
            params = read_model(config.model)

        variable: Sequence[CellTrace] = ()
        if config.traces:
            traces = self.load_traces(config.traces[0])
            variable = classify_cells(traces).variable
            k = config.k if config.k is not None else traces[0].k
        else:
            k = config.k
        min_freq, max_freq = rescale_bounds(k, config.rescale_policy, variable)

        thresholds = compute_thresholds(params, min_freq, max_freq, config.t_bits)
        document = ThresholdsDocument(
            t_bits=config.t_bits,
            alphabet=1 << config.t_bits,
            alpha=params.alpha,
            beta=params.beta,
            min_freq=min_freq,
            max_freq=max_freq,
            thresholds=list(thresholds),
        )
        write_document(config.out, document)
        self.console.print(f"✅ {len(thresholds)} thresholds written to {config.out}")

    def run_enroll(self, config: RunConfig) -> None:
        traces = self.load_traces(config.traces[0])
        self.console.print(f"⚙️  Enrolling {1 << config.t_bits}-ary profile...")
        profile = enroll(traces, config.t_bits, config.fit_method, config.rescale_policy)
        write_document(config.out, ProfileDocument.from_profile(profile))
        self.console.print(f"✅ Profile written to {config.out}")

    def run_reconstruct(self, config: RunConfig) -> None:
        profile = read_profile(config.profile)
        records = reconstruct(self.load_traces(config.traces[0]), profile)
        write_document(config.out, ResponsesDocument(t_bits=profile.t_bits, cells=records))
        self.console.print(f"✅ Responses written to {config.out}")
        if config.bits is not None:
            key = assemble_key(records)
            self.write_text(config.bits, key + "\n")
            self.console.print(f"🔑 {len(key)} key bits written to {config.bits}")

    def run_evaluate(self, config: RunConfig) -> None:
        profile = read_profile(config.profile)
        records = reconstruct(self.load_traces(config.traces[0]), profile)
        report = build_metrics_report(profile, records)
        write_document(config.out, report)
        self.console.print(ReportFormatter.metrics_summary(report))
        self.console.print(f"✅ Metrics written to {config.out}")

    def run_simulate(self, config: RunConfig) -> None:
        spec = PopulationSpec(
            n_cells=config.cells,
            params=BetaParams(alpha=config.alpha, beta=config.beta),
            k=config.k,
            seed=config.seed,
            repeats=config.repeats,
        )
        out_dir = Path(config.out)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise InputOutputError(f"cannot create {out_dir}: {e}")

        def save_traces(repeat_index: int, traces: List[CellTrace]) -> None:
            path = out_dir / trace_file_name(repeat_index)
            write_trace_file(path, traces)
            self.console.print(f"🎲 Repeat {repeat_index} traces written to {path}")

        result = run_experiment(spec, config.t_bits, config.fit_method, config.rescale_policy, on_traces=save_traces)
        write_document(out_dir / EXPERIMENT_FILE, ExperimentDocument.from_result(result))
        self.console.print(ReportFormatter.experiment_summary(result))
        self.console.print(f"✅ Experiment written to {out_dir / EXPERIMENT_FILE}")

    def build_table(self, config: RunConfig) -> List[TableRow]:
        enrollment = self.load_traces(config.traces[0])
        measurements = [self.load_traces(path) for path in config.traces[1:]]

        rows = [binary_baseline(enrollment, measurements)]
        for t_bits in REPORT_T_BITS:
            profile = enroll(enrollment, t_bits, config.fit_method, config.rescale_policy)
            benchmark = build_metrics_report(profile, list(profile.enrolled.values()))
            reports = [build_metrics_report(profile, reconstruct(traces, profile)) for traces in measurements]
            rows.append(
                TableRow(
                    label=f"{profile.alphabet}-ary",
                    alphabet=profile.alphabet,
                    entropy=benchmark.entropy_per_cell,
                    effective_key_length=benchmark.effective_key_length,
                    symbol_error_rate=float(np.mean([r.symbol_error_rate for r in reports])) if reports else None,
                    bit_error_rate=float(np.mean([r.bit_error_rate for r in reports])) if reports else None,
                    bias=benchmark.bias,
                )
            )
            logger.info("report row %d-ary done", profile.alphabet)
        return rows

    def run_report(self, config: RunConfig) -> None:
        rows = self.build_table(config)
        if config.report_format is ReportFormat.JSON:
            text = render_document(ReportDocument(rows=rows))
        else:
            text = ReportFormatter.table(rows)
        self.write_text(config.out, text)
        self.console.print(f"✅ Report for {len(rows)} alphabets written to {config.out}")
