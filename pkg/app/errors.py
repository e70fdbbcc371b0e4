from typing import Optional


class LatchkeyError(Exception):
    """Base class for every error the toolkit raises on purpose."""

    exit_code = 2
    reason = "error"

    def __init__(self, message: str):
        # Keep messages to a single line so the CLI output stays machine-parsable.
        super().__init__(" ".join(str(message).split()))

    def describe(self) -> str:
        return f"{self.reason}: {self}"


class ConfigurationError(LatchkeyError):
    """Raised when configuration is invalid or incomplete."""

    exit_code = 1
    reason = "usage.config"


class DataError(LatchkeyError):
    exit_code = 2
    reason = "data"


class ParameterError(DataError):
    reason = "data.parameter"


class DomainError(DataError):
    reason = "data.domain"


class DegenerateSampleError(DataError):
    reason = "data.degenerate_sample"


class DegenerateRangeError(DataError):
    reason = "data.degenerate_range"


class TooFewVariableCellsError(DataError):
    reason = "data.too_few_variable_cells"


class KMismatchError(DataError):
    reason = "data.k_mismatch"


class UnknownCellError(DataError):
    reason = "data.unknown_cell"


class DuplicateCellError(DataError):
    reason = "data.duplicate_cell"


class CellSetMismatchError(DataError):
    reason = "data.cell_set_mismatch"


class SchemaError(DataError):
    """Malformed input file. `row` is the 1-based data row for CSV input."""

    reason = "data.schema"

    def __init__(self, message: str, row: Optional[int] = None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row


class ConvergenceError(LatchkeyError):
    """
    A numeric procedure ran out of iterations or precision.

    `lower` / `upper` hold the best bracket found and `estimate` the best
    point estimate, whichever apply to the failing procedure.
    """

    exit_code = 3
    reason = "numeric.convergence"

    def __init__(
        self,
        message: str,
        lower: Optional[float] = None,
        upper: Optional[float] = None,
        estimate: Optional[float] = None,
    ):
        details = []
        if lower is not None and upper is not None:
            details.append(f"bracket=[{lower!r}, {upper!r}]")
        if estimate is not None:
            details.append(f"estimate={estimate!r}")
        if details:
            message = f"{message} ({', '.join(details)})"
        super().__init__(message)
        self.lower = lower
        self.upper = upper
        self.estimate = estimate


class InputOutputError(DataError):
    reason = "data.io"
