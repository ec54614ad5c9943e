"""Binary tapes shared by every interpreter in the chain.

Blank is 0 everywhere. A :class:`SparseBitTape` stores only the indices that
hold a 1, so non-erasing runs grow monotonically and cheaply.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

L, R = "L", "R"


@dataclass(frozen=True)
class SparseBitTape:
    """Bi-infinite binary tape with finite support."""

    ones: frozenset = field(default_factory=frozenset)

    @classmethod
    def from_string(cls, bits: str, offset: int = 0) -> "SparseBitTape":
        """Cells ``offset .. offset+len(bits)-1`` take the characters of ``bits``."""
        if any(ch not in "01" for ch in bits):
            raise ValueError(f"tape literal must be over {{0,1}}: {bits!r}")
        return cls(frozenset(offset + i for i, ch in enumerate(bits) if ch == "1"))

    @classmethod
    def from_indices(cls, indices: Iterable[int]) -> "SparseBitTape":
        return cls(frozenset(int(i) for i in indices))

    def read(self, i: int) -> int:
        return 1 if i in self.ones else 0

    def write(self, i: int, b: int) -> "SparseBitTape":
        if b not in (0, 1):
            raise ValueError(f"not a bit: {b!r}")
        if b:
            return self if i in self.ones else SparseBitTape(self.ones | {i})
        return SparseBitTape(self.ones - {i}) if i in self.ones else self

    def window(self, *extra: int) -> tuple[int, str]:
        """Minimal window covering the support and any ``extra`` indices.

        Returns ``(offset, bits)``; an all-blank tape with no extras gives
        ``(0, "")``.
        """
        pts = set(self.ones).union(extra)
        if not pts:
            return 0, ""
        lo, hi = min(pts), max(pts)
        return lo, "".join("1" if i in self.ones else "0" for i in range(lo, hi + 1))

    def to_array(self, lo: int, hi: int) -> np.ndarray:
        """Dense uint8 copy of cells ``lo .. hi-1``."""
        arr = np.zeros(hi - lo, dtype=np.uint8)
        for i in self.ones:
            if lo <= i < hi:
                arr[i - lo] = 1
        return arr

    def __len__(self) -> int:
        return len(self.ones)

    def __str__(self) -> str:
        offset, bits = self.window()
        return f"{offset}:{bits}" if bits else "blank"


def tape_read(t: SparseBitTape, i: int) -> int:
    return t.read(i)


def tape_write(t: SparseBitTape, i: int, b: int) -> SparseBitTape:
    return t.write(i, b)


@dataclass(frozen=True)
class HeadedTape:
    tape: SparseBitTape = field(default_factory=SparseBitTape)
    head: int = 0

    @classmethod
    def from_string(cls, bits: str, head: int = 0, offset: int = 0) -> "HeadedTape":
        return cls(SparseBitTape.from_string(bits, offset), head)

    def read(self) -> int:
        return self.tape.read(self.head)

    def window(self) -> tuple[int, str]:
        return self.tape.window(self.head)

    def __str__(self) -> str:
        offset, bits = self.window()
        return f"head={self.head} offset={offset} tape={bits}"


_TO_BITS = bytes.maketrans(b"01", b"\x00\x01")
_TO_TEXT = bytes.maketrans(b"\x00\x01", b"01")


@dataclass(frozen=True)
class CircularTape:
    """Fixed-length read-only ring of bits; ``R`` is +1 and ``L`` is -1.

    Cells are held as ``bytes`` with values 0 and 1, so rings with millions
    of cells stay compact and convert to numpy without copying.
    """

    cells: bytes
    head: int = 0

    def __post_init__(self):
        cells = self.cells if isinstance(self.cells, bytes) else bytes(self.cells)
        if len(cells) < 1:
            raise ValueError("circular tape needs at least one cell")
        if cells.translate(None, b"\x00\x01"):
            raise ValueError("circular tape cells must be bits")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "head", self.head % len(cells))

    @classmethod
    def from_string(cls, bits: str, head: int = 0) -> "CircularTape":
        return cls(bits.encode("ascii").translate(_TO_BITS), head)

    def __len__(self) -> int:
        return len(self.cells)

    def read(self) -> int:
        return self.cells[self.head]

    def move(self, d: str) -> "CircularTape":
        if d == R:
            return CircularTape(self.cells, (self.head + 1) % len(self.cells))
        if d == L:
            return CircularTape(self.cells, (self.head - 1) % len(self.cells))
        raise ValueError(f"bad direction {d!r}")

    @property
    def bits(self) -> str:
        return self.cells.translate(_TO_TEXT).decode("ascii")

    def __str__(self) -> str:
        return f"{self.bits}@{self.head}"


def circ_move(t: CircularTape, d: str) -> CircularTape:
    return t.move(d)


def dense_to_sparse(arr: np.ndarray, offset: int) -> SparseBitTape:
    """Sparse view of a dense array whose cell 0 sits at tape index ``offset``."""
    return SparseBitTape(frozenset(int(i) + offset for i in np.flatnonzero(arr)))
