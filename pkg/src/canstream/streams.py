"""Operators over timed streams and their per-tick cells."""
from __future__ import annotations

from typing import Any, Sequence

from .core import TimedStream


def ti(s: TimedStream, t: int) -> tuple:
    """Cell of stream s at tick t. Ticks outside the horizon are an error."""
    if not 0 <= t < s.horizon:
        raise IndexError(f"tick {t} outside horizon {s.horizon}")
    return s.cells[t]


def ft(cell: Sequence[Any]) -> Any:
    """First element of a nonempty finite list."""
    if not cell:
        raise ValueError("ft of empty list")
    return cell[0]


def rt(cell: Sequence[Any]) -> tuple:
    """Rest of a nonempty finite list; ft + rt reassemble the input."""
    if not cell:
        raise ValueError("rt of empty list")
    return tuple(cell[1:])


def dom_of(cell: Sequence[Any]) -> tuple[int, ...]:
    """Index list [1..length] of a finite list."""
    return tuple(range(1, len(cell) + 1))


def rng_of(cell: Sequence[Any]) -> set:
    """The set of elements occurring in a finite list."""
    return set(cell)


def msg_n(n: int, s: TimedStream) -> bool:
    """True iff every cell of s carries at most n messages."""
    return all(len(c) <= n for c in s.cells)
