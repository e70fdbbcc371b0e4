import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import click
import typer
from rich.console import Console
from rich.logging import RichHandler

from errors import LatchkeyError
from models import Command, FitMethod, ReportFormat, RescalePolicy, RunConfig
from pipeline import PipelineManager


app = typer.Typer(add_completion=False, help="Non-binary PUF response extraction.")


def configure_logging(verbose: bool) -> None:
    logger = logging.getLogger("latchkey")
    logger.handlers.clear()
    logger.addHandler(RichHandler(console=Console(stderr=True), show_path=False))
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)
    logger.propagate = False


@app.command()
def main(
    command: Command = typer.Argument(..., help="Workflow to run."),
    traces: Optional[List[Path]] = typer.Option(None, "--traces", help="Trace CSV; repeat for report measurements."),
    profile: Optional[Path] = typer.Option(None, "--profile", help="Profile JSON written by enroll."),
    model: Optional[Path] = typer.Option(None, "--model", help="Model JSON written by fit."),
    out: Optional[Path] = typer.Option(None, "--out", help="Output file (directory for simulate)."),
    bits: Optional[Path] = typer.Option(None, "--bits", help="Also write the key bits here (reconstruct)."),
    t_bits: int = typer.Option(2, "--t-bits", help="Bits per symbol, 1..8."),
    fit: FitMethod = typer.Option(FitMethod.MLE, "--fit", help="Beta estimator."),
    rescale: RescalePolicy = typer.Option(RescalePolicy.SMALLEST, "--rescale", help="Frequency range policy."),
    alpha: Optional[float] = typer.Option(None, "--alpha"),
    beta: Optional[float] = typer.Option(None, "--beta"),
    cells: Optional[int] = typer.Option(None, "--cells", help="Simulated population size."),
    k: Optional[int] = typer.Option(None, "--k", help="Evaluations per cell."),
    seed: int = typer.Option(0, "--seed"),
    repeats: int = typer.Option(2, "--repeats", help="Simulated measurements, enrollment included."),
    report_format: ReportFormat = typer.Option(ReportFormat.TEXT, "--format", help="Report output format."),
    verbose: bool = typer.Option(False, "--verbose", help="Debug logging on stderr."),
):
    configure_logging(verbose)
    config = RunConfig(
        command=command,
        traces=list(traces or []),
        profile=profile,
        model=model,
        out=out,
        bits=bits,
        t_bits=t_bits,
        fit_method=fit,
        rescale_policy=rescale,
        alpha=alpha,
        beta=beta,
        cells=cells,
        k=k,
        seed=seed,
        repeats=repeats,
        report_format=report_format,
        verbose=verbose,
    )
    PipelineManager().dispatch(config)


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Run the CLI and return its exit status: 0 ok, 1 usage, 2 data, 3 convergence."""
    command = typer.main.get_command(app)
    try:
        result = command.main(args=list(argv) if argv is not None else sys.argv[1:], standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return 1
    except click.exceptions.Abort:
        return 1
    except LatchkeyError as e:
        typer.echo(f"error: {e.describe()}", err=True)
        return e.exit_code
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    sys.exit(run())
