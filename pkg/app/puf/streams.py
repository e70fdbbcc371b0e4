"""
Counter-based random substreams.

Every (seed, domain) pair derives one Philox key; the cell id and repeat
index select a disjoint counter block. A cell's draws therefore never
depend on which other cells are generated alongside it, or in what order.
"""
from enum import IntEnum
from typing import Sequence

import numpy as np


class StreamDomain(IntEnum):
    POPULATION = 1
    EVALUATION = 2


def stream_key(seed: int, domain: StreamDomain) -> np.ndarray:
    return np.random.SeedSequence([seed, int(domain)]).generate_state(2, dtype=np.uint64)


def block_generator(key: np.ndarray, cell_id: int, repeat_index: int = 0) -> np.random.Generator:
    # counter words 0-1 advance as the stream is consumed; 2-3 identify the block
    counter = np.array([0, 0, cell_id, repeat_index], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def cell_uniforms(
    seed: int, domain: StreamDomain, cell_ids: Sequence[int], repeat_index: int = 0
) -> np.ndarray:
    """First draw of each cell's block, mapped to (0, 1]."""
    key = stream_key(seed, domain)
    return np.array(
        [1.0 - block_generator(key, cell_id, repeat_index).random() for cell_id in cell_ids],
        dtype=np.float64,
    )
