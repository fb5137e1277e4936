"""2-bit packed Grundy sequences.

Value ``h`` lives in word ``h // 32`` at bit offset ``2 * (h % 32)``, so a
run of 32 consecutive values starting anywhere is two word loads and a
shift.  Arrays carry one spare zero word past the end so that unaligned
loads never need a bounds branch.
"""
from __future__ import annotations

import numpy as np
from numba import njit

from .game import DEFAULT_MAX_SEQ_LEN, NimSequence, SubtractionSet, check_count

VALUES_PER_WORD = 32
_SHIFTS = np.arange(VALUES_PER_WORD, dtype=np.uint64) * np.uint64(2)
_ALL = np.uint64(0xFFFFFFFFFFFFFFFF)


def _n_words(count):
    return (count >> 5) + 2


@njit(cache=True, inline="always")
def _get(words, h):
    return (words[h >> 5] >> np.uint64((h & 31) << 1)) & np.uint64(3)


@njit(cache=True, inline="always")
def _load(words, pos):
    w = pos >> 5
    off = (pos & 31) << 1
    if off == 0:
        return words[w]
    return (words[w] >> np.uint64(off)) | (words[w + 1] << np.uint64(64 - off))


@njit(cache=True, inline="always")
def _low_mask(k):
    # mask covering the first k values (k < 32)
    return (np.uint64(1) << np.uint64(2 * k)) - np.uint64(1)


@njit(cache=True)
def _fill(words, start, stop, s1, s2, s3):
    for h in range(start, stop):
        seen = 0
        if h >= s1:
            seen |= 1 << _get(words, h - s1)
        if h >= s2:
            seen |= 1 << _get(words, h - s2)
        if h >= s3:
            seen |= 1 << _get(words, h - s3)
        v = 0
        while (seen >> v) & 1:
            v += 1
        words[h >> 5] |= np.uint64(v) << np.uint64((h & 31) << 1)


@njit(cache=True)
def _window_equal(words, start, lag, window):
    i = 0
    while i < window:
        x = _load(words, start + i) ^ _load(words, start + lag + i)
        k = window - i
        if k < 32:
            x &= _low_mask(k)
        if x != 0:
            return False
        i += 32
    return True


@njit(cache=True)
def _highest_value_index(x):
    # index (0..31) of the highest 2-bit lane holding a set bit
    b = 0
    if x >> np.uint64(32):
        x >>= np.uint64(32)
        b += 16
    if x >> np.uint64(16):
        x >>= np.uint64(16)
        b += 8
    if x >> np.uint64(8):
        x >>= np.uint64(8)
        b += 4
    if x >> np.uint64(4):
        x >>= np.uint64(4)
        b += 2
    if x >> np.uint64(2):
        b += 1
    return b


@njit(cache=True)
def _last_mismatch(words, lo, hi, lag):
    """Largest h in [lo, hi) with value[h] != value[h + lag], else lo - 1."""
    top = hi
    while top > lo:
        pos = top - 32
        if pos < lo:
            pos = lo
        x = _load(words, pos) ^ _load(words, pos + lag)
        k = top - pos
        if k < 32:
            x &= _low_mask(k)
        if x != 0:
            return pos + _highest_value_index(x)
        top = pos
    return lo - 1


@njit(cache=True)
def _scan_lags(words, length, window):
    """Smallest lag whose final ``window`` values repeat, and its preperiod.

    Returns (0, 0) when no lag up to ``length - window`` qualifies.
    """
    for lag in range(1, length - window + 1):
        start = length - lag - window
        if _window_equal(words, start, lag, window):
            return lag, _last_mismatch(words, 0, start, lag) + 1
    return 0, 0


class PackedSequence:
    """Growable packed nim sequence of one game."""

    def __init__(self, game: SubtractionSet, words: np.ndarray, length: int):
        self.game = game
        self.words = words
        self.length = length

    @classmethod
    def compute(cls, game: SubtractionSet, count: int) -> "PackedSequence":
        seq = cls(game, np.zeros(_n_words(count), dtype=np.uint64), 0)
        seq.extend(count)
        return seq

    @classmethod
    def from_values(cls, game: SubtractionSet, values) -> "PackedSequence":
        values = np.asarray(values, dtype=np.uint64)
        n = len(values)
        lanes = np.zeros(_n_words(n) * VALUES_PER_WORD, dtype=np.uint64)
        lanes[:n] = values
        words = np.bitwise_or.reduce(
            lanes.reshape(-1, VALUES_PER_WORD) << _SHIFTS, axis=1
        )
        return cls(game, words, n)

    def extend(self, count: int) -> None:
        """Grow the sequence to ``count`` values, reusing what is computed."""
        if count <= self.length:
            return
        needed = _n_words(count)
        if needed > len(self.words):
            grown = np.zeros(needed, dtype=np.uint64)
            grown[: len(self.words)] = self.words
            self.words = grown
        g = self.game
        _fill(self.words, self.length, count, g.s1, g.s2, g.s3)
        self.length = count

    def __len__(self):
        return self.length

    def __getitem__(self, h: int) -> int:
        if not 0 <= h < self.length:
            raise IndexError(h)
        return int(_get(self.words, h))

    def unpack(self) -> np.ndarray:
        lanes = (self.words[:, None] >> _SHIFTS) & np.uint64(3)
        return lanes.reshape(-1)[: self.length].astype(np.uint8)

    def window_equal(self, start: int, lag: int, window: int) -> bool:
        if start < 0 or lag < 1 or window < 0 or start + lag + window > self.length:
            raise IndexError(
                f"window [{start}, {start + window}) at lag {lag} exceeds "
                f"sequence of length {self.length}"
            )
        return bool(_window_equal(self.words, start, lag, window))

    def last_mismatch(self, lag: int, stop: int) -> int:
        """Largest h < stop with value[h] != value[h + lag], or -1."""
        if stop + lag > self.length:
            raise IndexError(stop + lag)
        return int(_last_mismatch(self.words, 0, stop, lag))

    def scan_lags(self, window: int) -> tuple[int, int]:
        lag, pre = _scan_lags(self.words, self.length, window)
        return int(lag), int(pre)


def nim_sequence_packed(
    game: SubtractionSet, count: int, max_length: int = DEFAULT_MAX_SEQ_LEN
) -> NimSequence:
    """Same values as :func:`nim_sequence`, computed in packed form."""
    check_count(count, max_length)
    packed = PackedSequence.compute(game, count)
    return NimSequence(game, packed.unpack(), packed)
