from pathlib import Path
from typing import Callable, List, Sequence, Tuple

import pytest

from formats import write_trace_file
from models import BetaParams, CellTrace, ExtractionProfile


PUBLISHED_K = 1048575
PUBLISHED_PARAMS = BetaParams(alpha=0.0032, beta=0.0028)
PUBLISHED_QUATERNARY = (0.0010616, 0.5049029, 0.998969)


def make_traces(k: int, ones: Sequence[int]) -> List[CellTrace]:
    return [CellTrace(cell_id=cell_id, k=k, ones=m) for cell_id, m in enumerate(ones)]


@pytest.fixture
def uniform_profile() -> Callable[..., ExtractionProfile]:
    """Profile with hand-picked thresholds and no enrolled cells."""

    def build(
        thresholds: Tuple[float, ...] = (0.25, 0.5, 0.75),
        k: int = 100,
        min_freq: float = 0.01,
        max_freq: float = 0.99,
    ) -> ExtractionProfile:
        t_bits = (len(thresholds) + 1).bit_length() - 1
        return ExtractionProfile(
            t_bits=t_bits,
            params=BetaParams(alpha=1.0, beta=1.0),
            k=k,
            min_freq=min_freq,
            max_freq=max_freq,
            thresholds=thresholds,
        )

    return build


@pytest.fixture
def published_profile(uniform_profile) -> ExtractionProfile:
    return uniform_profile(PUBLISHED_QUATERNARY, k=PUBLISHED_K, min_freq=1 / PUBLISHED_K, max_freq=(PUBLISHED_K - 1) / PUBLISHED_K)


@pytest.fixture
def enrollment_traces() -> List[CellTrace]:
    """Six stable cells and a spread of Variable cells, k=1000."""
    ones = [0, 1000, 0, 1000, 1000, 0, 3, 10, 42, 120, 260, 380, 500, 620, 755, 880, 950, 990, 997, 999]
    return make_traces(1000, ones)


@pytest.fixture
def trace_file(tmp_path) -> Callable[[str, Sequence[CellTrace]], Path]:
    def write(name: str, traces: Sequence[CellTrace]) -> Path:
        path = tmp_path / name
        write_trace_file(path, traces)
        return path

    return write
