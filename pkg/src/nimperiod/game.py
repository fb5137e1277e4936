"""Subtraction-game model and the reference (unpacked) Grundy engine."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import ClassVar, Iterable, Optional

import numpy as np

from .errors import InvalidGameError, SequenceLimitError

DEFAULT_MAX_SEQ_LEN = 1 << 24


@dataclass(frozen=True, order=True)
class SubtractionSet:
    """The game S(s1, s2, s3): a move removes exactly s1, s2 or s3 beans."""

    s1: int
    s2: int
    s3: int

    max_subtrahend: ClassVar[int] = 65535

    def __post_init__(self):
        for name in ("s1", "s2", "s3"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise InvalidGameError(f"{name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if not 1 <= self.s1 < self.s2 < self.s3:
            raise InvalidGameError(
                f"need 1 <= s1 < s2 < s3, got ({self.s1}, {self.s2}, {self.s3})"
            )
        if self.s3 > self.max_subtrahend:
            raise InvalidGameError(
                f"s3={self.s3} exceeds the maximum subtrahend {self.max_subtrahend}"
            )

    @property
    def moves(self) -> tuple[int, int, int]:
        return (self.s1, self.s2, self.s3)

    def __str__(self):
        return f"S({self.s1},{self.s2},{self.s3})"


@dataclass(eq=False)
class NimSequence:
    """Grundy values n_0 .. n_{length-1} of a game, stored one per byte.

    ``packed`` holds the 2-bit packed form when the sequence came from the
    packed engine; window comparisons use it when present.
    """

    game: SubtractionSet
    values: np.ndarray
    packed: Optional[object] = field(default=None, repr=False)

    def __len__(self):
        return len(self.values)

    @property
    def length(self) -> int:
        return len(self.values)

    def __getitem__(self, index):
        return self.values[index]

    def tolist(self) -> list[int]:
        return self.values.tolist()

    def __eq__(self, other):
        if not isinstance(other, NimSequence):
            return NotImplemented
        return self.game == other.game and np.array_equal(self.values, other.values)


def mex(seen: Iterable[int]) -> int:
    """Least non-negative integer not in ``seen``."""
    seen = set(seen)
    m = 0
    while m in seen:
        m += 1
    return m


def check_count(count: int, max_length: int = DEFAULT_MAX_SEQ_LEN) -> None:
    if count < 1:
        raise ValueError(f"count must be positive, got {count}")
    if count > max_length:
        raise SequenceLimitError(
            f"requested {count} values, cap is {max_length}"
        )


def nim_sequence(
    game: SubtractionSet, count: int, max_length: int = DEFAULT_MAX_SEQ_LEN
) -> NimSequence:
    """Reference engine: direct mex recurrence over a Python list."""
    check_count(count, max_length)
    moves = game.moves
    values: list[int] = []
    for h in range(count):
        values.append(mex(values[h - s] for s in moves if s <= h))
    return NimSequence(game, np.array(values, dtype=np.uint8))
