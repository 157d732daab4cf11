"""Binary sequences and their exchangeability / Markov summaries."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import LengthError, SymbolError

_WHITESPACE = frozenset(" \t\n\r\v\f")


class BinarySequence:
    """An immutable 0/1 sequence of length N >= 2, stored one byte per bit."""

    __slots__ = ("_bits",)

    def __init__(self, bits):
        arr = np.array(bits, dtype=np.uint8).ravel()
        if arr.size < 2:
            raise LengthError(f"horizon must be at least 2, got {arr.size}")
        if arr.size and arr.max() > 1:
            raise SymbolError(int(np.argmax(arr > 1)), str(int(arr[arr > 1][0])))
        arr.setflags(write=False)
        self._bits = arr

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def N(self) -> int:
        return int(self._bits.size)

    def __len__(self) -> int:
        return self.N

    def __iter__(self):
        return iter(self._bits.tolist())

    def __getitem__(self, i):
        return self._bits[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, BinarySequence):
            return NotImplemented
        return np.array_equal(self._bits, other._bits)

    def __hash__(self) -> int:
        return hash(self._bits.tobytes())

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self._bits.tolist())

    def __repr__(self) -> str:
        s = str(self)
        if len(s) > 40:
            s = s[:37] + "..."
        return f"BinarySequence('{s}')"


@dataclass(frozen=True)
class ExchType:
    N0: int
    N1: int

    @property
    def N(self) -> int:
        return self.N0 + self.N1


@dataclass(frozen=True)
class MarkovType:
    """First bit, the four transition counts, last bit."""

    F: int
    N00: int
    N01: int
    N10: int
    N11: int
    L: int

    @property
    def N(self) -> int:
        return self.N00 + self.N01 + self.N10 + self.N11 + 1

    @property
    def N0_star(self) -> int:
        """Transitions out of 0."""
        return self.N00 + self.N01

    @property
    def N1_star(self) -> int:
        return self.N10 + self.N11

    @property
    def N0(self) -> int:
        return self.N0_star + (self.L == 0)

    @property
    def N1(self) -> int:
        return self.N1_star + (self.L == 1)

    def is_consistent(self) -> bool:
        """Whether some binary sequence has this Markov type."""
        counts = (self.N00, self.N01, self.N10, self.N11)
        if self.F not in (0, 1) or self.L not in (0, 1) or min(counts) < 0:
            return False
        balance = self.N01 - self.N10
        if balance != (self.L - self.F):
            return False
        # A letter that is neither first nor last must still be entered to appear.
        if self.F == 0 and self.N1 > 0 and self.N01 == 0:
            return False
        if self.F == 1 and self.N0 > 0 and self.N10 == 0:
            return False
        return True


def exch_type(z: BinarySequence) -> ExchType:
    n1 = int(np.count_nonzero(z.bits))
    return ExchType(z.N - n1, n1)


def markov_type(z: BinarySequence) -> MarkovType:
    b = z.bits
    if b.size < 2:
        raise LengthError("Markov type needs N >= 2")
    prev, nxt = b[:-1], b[1:]
    n11 = int(np.count_nonzero(prev & nxt))
    n01 = int(np.count_nonzero(nxt & ~prev & 1))
    n10 = int(np.count_nonzero(prev & ~nxt & 1))
    n00 = b.size - 1 - n11 - n01 - n10
    return MarkovType(int(b[0]), n00, n01, n10, n11, int(b[-1]))


def parse_sequence(text: str) -> BinarySequence:
    """Parse '0'/'1' characters, skipping ASCII whitespace.

    Error positions index into the original text.
    """
    bits = []
    for i, ch in enumerate(text):
        if ch == "0" or ch == "1":
            bits.append(ord(ch) - 48)
        elif ch not in _WHITESPACE:
            raise SymbolError(i, ch)
    if len(bits) < 2:
        raise LengthError(f"horizon must be at least 2, got {len(bits)}")
    return BinarySequence(bits)


def read_binary_file(path) -> BinarySequence:
    """Load raw bytes, one observation per byte (0x00 or 0x01)."""
    raw = np.frombuffer(Path(path).read_bytes(), dtype=np.uint8)
    bad = np.flatnonzero(raw > 1)
    if bad.size:
        raise SymbolError(int(bad[0]), f"\\x{raw[bad[0]]:02x}")
    return BinarySequence(raw)
