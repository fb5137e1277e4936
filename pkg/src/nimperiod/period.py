"""Certified detection of the minimal eventual period of a nim sequence.

If a game's values agree at lag p over s3 consecutive heap sizes, every
later value is a mex of values inside the agreeing window and its lagged
copy, so the agreement propagates forever.  A length-s3 window is therefore
a complete certificate, and scanning lags upward from 1 makes the first
certified lag the minimal period (any certified lag is a true period, hence
a multiple of the minimal one, and needs at least as much prefix).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DetectionError
from .game import DEFAULT_MAX_SEQ_LEN, NimSequence, SubtractionSet
from .packed import PackedSequence


@dataclass(frozen=True)
class DetectionConfig:
    """Limits for :func:`find_period`.

    ``initial_length`` of None means ``4*(s1+s2+s3) + s3``; the prefix is
    doubled on failure until ``max_length``.
    """

    initial_length: Optional[int] = None
    max_length: int = DEFAULT_MAX_SEQ_LEN

    def __post_init__(self):
        if self.max_length < 1:
            raise ValueError("max_length must be positive")
        if self.initial_length is not None and self.initial_length < 1:
            raise ValueError("initial_length must be positive")

    def start_length(self, game: SubtractionSet) -> int:
        if self.initial_length is not None:
            n = self.initial_length
        else:
            s1, s2, s3 = game.moves
            n = max(4 * (s1 + s2 + s3), 4 * s3) + s3
        return min(n, self.max_length)


@dataclass(frozen=True)
class PeriodCertificate:
    game: SubtractionSet
    preperiod: int
    period: int
    witness_start: int
    sequence_length_used: int


def certify_window(seq: NimSequence, start: int, lag: int, window: int) -> bool:
    """True iff seq[h] == seq[h + lag] for every h in [start, start + window)."""
    if start < 0 or lag < 1 or window < 0:
        raise ValueError("start >= 0, lag >= 1 and window >= 0 required")
    if start + lag + window > len(seq):
        raise IndexError(
            f"window [{start}, {start + window}) at lag {lag} exceeds "
            f"computed prefix of length {len(seq)}"
        )
    if seq.packed is not None:
        return seq.packed.window_equal(start, lag, window)
    v = seq.values
    return bool(np.array_equal(v[start : start + window], v[start + lag : start + lag + window]))


def find_period(
    game: SubtractionSet, config: Optional[DetectionConfig] = None
) -> PeriodCertificate:
    config = config or DetectionConfig()
    s3 = game.s3
    length = config.start_length(game)
    packed = PackedSequence.compute(game, length)
    while True:
        period, preperiod = packed.scan_lags(s3)
        if period:
            return PeriodCertificate(game, preperiod, period, preperiod, length)
        if length >= config.max_length:
            raise DetectionError(game, config.max_length, max(length - s3, 0))
        length = min(2 * length, config.max_length)
        packed.extend(length)
