import logging
from pathlib import Path
from typing import List, Sequence

import pandas as pd
from pydantic import ValidationError

from errors import DataError, InputOutputError, SchemaError
from models import CellTrace


logger = logging.getLogger("latchkey")

TRACE_COLUMNS = ["cell_id", "k", "ones"]


def _read_frame(path: Path) -> pd.DataFrame:
    try:
        return pd.read_csv(path, dtype=str, keep_default_na=False, encoding="utf-8", skipinitialspace=True)
    except FileNotFoundError:
        raise InputOutputError(f"trace file {path} does not exist")
    except pd.errors.EmptyDataError:
        raise SchemaError(f"{path} is empty")
    except pd.errors.ParserError as e:
        raise SchemaError(f"{path}: {e}")
    except (OSError, UnicodeDecodeError) as e:
        raise InputOutputError(f"cannot read {path}: {e}")


def parse_trace_file(path: Path) -> List[CellTrace]:
    """Load and validate a `cell_id,k,ones` trace file."""
    path = Path(path)
    frame = _read_frame(path)

    columns = [str(column).strip() for column in frame.columns]
    if columns != TRACE_COLUMNS:
        raise SchemaError(f"{path}: expected header {','.join(TRACE_COLUMNS)}, got {','.join(columns)}")
    if frame.empty:
        raise SchemaError(f"{path} has a header but no data rows")

    traces: List[CellTrace] = []
    seen = set()
    k = None
    for row, values in enumerate(frame.itertuples(index=False, name=None), start=1):
        try:
            cell_id, row_k, ones = (int(value.strip()) for value in values)
        except ValueError:
            raise SchemaError(f"non-integer value in {list(values)}", row=row)
        try:
            trace = CellTrace(cell_id=cell_id, k=row_k, ones=ones)
        except ValidationError as e:
            error = e.errors()[0]
            raise SchemaError(f"{'.'.join(map(str, error['loc']))}: {error['msg']}", row=row)
        except DataError as e:
            raise SchemaError(str(e), row=row)
        if cell_id in seen:
            raise SchemaError(f"duplicate cell_id {cell_id}", row=row)
        if k is not None and row_k != k:
            raise SchemaError(f"k={row_k} differs from k={k} on earlier rows", row=row)
        seen.add(cell_id)
        k = row_k
        traces.append(trace)

    logger.info("read %d traces (k=%d) from %s", len(traces), k, path)
    return traces


def write_trace_file(path: Path, traces: Sequence[CellTrace]) -> None:
    ordered = sorted(traces, key=lambda trace: trace.cell_id)
    frame = pd.DataFrame(
        {
            "cell_id": [trace.cell_id for trace in ordered],
            "k": [trace.k for trace in ordered],
            "ones": [trace.ones for trace in ordered],
        },
        columns=TRACE_COLUMNS,
    )
    try:
        frame.to_csv(path, index=False, lineterminator="\n", encoding="utf-8")
    except OSError as e:
        raise InputOutputError(f"cannot write {path}: {e}")
