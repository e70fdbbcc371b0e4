from dataclasses import dataclass
from typing import Tuple

from errors import DomainError


MAX_WIDTH = 16


@dataclass(frozen=True)
class GrayWord:
    """Reflected Gray codeword, most significant bit first."""

    bits: Tuple[bool, ...]
    width: int

    def __post_init__(self):
        if not 1 <= self.width <= MAX_WIDTH:
            raise DomainError(f"width {self.width} outside [1, {MAX_WIDTH}]")
        if len(self.bits) != self.width:
            raise DomainError(f"{len(self.bits)} bits given for width {self.width}")

    @classmethod
    def from_string(cls, text: str) -> "GrayWord":
        if not text or set(text) - {"0", "1"}:
            raise DomainError(f"not a bit pattern: {text!r}")
        return cls(bits=tuple(ch == "1" for ch in text), width=len(text))

    def __str__(self) -> str:
        return "".join("1" if bit else "0" for bit in self.bits)

    def as_int(self) -> int:
        value = 0
        for bit in self.bits:
            value = (value << 1) | int(bit)
        return value


def gray_encode(symbol: int, width: int) -> GrayWord:
    if not 1 <= width <= MAX_WIDTH:
        raise DomainError(f"width {width} outside [1, {MAX_WIDTH}]")
    if not 0 <= symbol < (1 << width):
        raise DomainError(f"symbol {symbol} outside [0, {1 << width})")
    code = symbol ^ (symbol >> 1)
    return GrayWord(bits=tuple(bool((code >> shift) & 1) for shift in range(width - 1, -1, -1)), width=width)


def gray_decode(word: GrayWord) -> int:
    code = word.as_int()
    symbol = 0
    while code:
        symbol ^= code
        code >>= 1
    return symbol
