"""Exhaustive sweep over triples s_min <= s1 < s2 < s3 <= s_max.

Triples are enumerated lexicographically and split into contiguous blocks,
one per worker.  Worker k appends records to ``<out>.part<k>`` and, every
``checkpoint_interval`` records, fsyncs the shard and records its last
completed enumeration index in ``<out>.ckpt``.  Once every block is done the
shards are concatenated (block order is canonical order) into ``<out>``,
ok=false records are copied to ``<out>.mismatches``, and the scratch files
are removed.
"""
from __future__ import annotations

import contextlib
import json
import logging
import multiprocessing
import os
import time
from dataclasses import dataclass, field
from math import comb
from pathlib import Path
from typing import Iterator, Optional

from .conjecture import Case, Prediction, case2_check, predict
from .errors import CheckpointError, ConfigMismatchError, DetectionError, NimPeriodError
from .game import DEFAULT_MAX_SEQ_LEN, SubtractionSet
from .period import DetectionConfig, find_period

log = logging.getLogger(__name__)

CHECKPOINT_MAGIC = "nimperiod-checkpoint"
CHECKPOINT_VERSION = "v1"


class SweepInterrupted(NimPeriodError):
    """The sweep stopped before every block finished; resume to continue."""


class SweepError(NimPeriodError):
    pass


@dataclass(frozen=True)
class VerificationRecord:
    game: SubtractionSet
    case: Case
    prediction: Prediction
    measured_period: Optional[int]
    measured_preperiod: Optional[int]
    prediction_ok: bool
    matched_candidate: Optional[int]
    sequence_length_used: int

    @property
    def detection_failed(self) -> bool:
        return self.measured_period is None

    @property
    def is_mismatch(self) -> bool:
        return not self.detection_failed and not self.prediction_ok

    def to_dict(self) -> dict:
        pred = self.prediction
        return {
            "s1": self.game.s1,
            "s2": self.game.s2,
            "s3": self.game.s3,
            "case": self.case.value,
            "preperiod": self.measured_preperiod,
            "period": self.measured_period,
            "predicted": pred.exact_period if self.case is Case.I else list(pred.candidates),
            "ok": self.prediction_ok,
            "matched_candidate": self.matched_candidate,
            "seq_len": self.sequence_length_used,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def verify_one(
    game: SubtractionSet, detection: Optional[DetectionConfig] = None
) -> VerificationRecord:
    detection = detection or DetectionConfig()
    prediction = predict(game)
    try:
        cert = find_period(game, detection)
    except DetectionError as exc:
        log.warning("%s", exc)
        return VerificationRecord(
            game, prediction.case, prediction, None, None, False, None, exc.cap
        )
    ok = prediction.admits(game, cert.period)
    matched = cert.period if ok and prediction.case is Case.II else None
    return VerificationRecord(
        game, prediction.case, prediction, cert.period, cert.preperiod,
        ok, matched, cert.sequence_length_used,
    )


def validate_record(row: dict) -> list[str]:
    """Problems with one output row, checked against its own triple."""
    problems = []
    game = SubtractionSet(row["s1"], row["s2"], row["s3"])
    prediction = predict(game)
    if row["case"] != prediction.case.value:
        problems.append(f"case {row['case']} should be {prediction.case.value}")
    expected = (
        prediction.exact_period if prediction.case is Case.I else list(prediction.candidates)
    )
    if row["predicted"] != expected:
        problems.append(f"predicted {row['predicted']} should be {expected}")
    period = row["period"]
    if period is None:
        if row["ok"] or row["matched_candidate"] is not None or row["preperiod"] is not None:
            problems.append("failed detection must have ok=false and null fields")
        return problems
    ok = prediction.admits(game, period)
    if row["ok"] != ok:
        problems.append(f"ok={row['ok']} but prediction check gives {ok}")
    matched = period if ok and prediction.case is Case.II else None
    if row["matched_candidate"] != matched:
        problems.append(f"matched_candidate {row['matched_candidate']} should be {matched}")
    if row["seq_len"] < row["preperiod"] + period + game.s3:
        problems.append("seq_len too short to hold the certificate")
    return problems


def validate_output(path) -> list[str]:
    problems = []
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            problems.extend(f"line {n}: {p}" for p in validate_record(json.loads(line)))
    return problems


# --- enumeration and partitioning -------------------------------------------------

def triple_count(s_min: int, s_max: int) -> int:
    return comb(s_max - s_min + 1, 3)


def unrank(index: int, s_min: int, s_max: int) -> tuple[int, int, int]:
    """The ``index``-th triple in lexicographic order."""
    if not 0 <= index < triple_count(s_min, s_max):
        raise IndexError(index)
    s1 = s_min
    while True:
        block = comb(s_max - s1, 2)
        if index < block:
            break
        index -= block
        s1 += 1
    s2 = s1 + 1
    while True:
        block = s_max - s2
        if index < block:
            break
        index -= block
        s2 += 1
    return s1, s2, s2 + 1 + index


def iter_triples(s_min: int, s_max: int, start: int, stop: int) -> Iterator[tuple[int, int, int]]:
    if start >= stop:
        return
    s1, s2, s3 = unrank(start, s_min, s_max)
    for _ in range(stop - start):
        yield s1, s2, s3
        s3 += 1
        if s3 > s_max:
            s2 += 1
            if s2 >= s_max:
                s1 += 1
                s2 = s1 + 1
            s3 = s2 + 1


def partition(total: int, workers: int) -> list[tuple[int, int]]:
    return [(k * total // workers, (k + 1) * total // workers) for k in range(workers)]


# --- configuration, summary, checkpoint -------------------------------------------

@dataclass(frozen=True)
class SweepConfig:
    s_max: int
    output_path: str
    s_min: int = 1
    worker_count: int = 1
    checkpoint_interval: int = 10_000
    max_seq_len: int = DEFAULT_MAX_SEQ_LEN
    initial_length: Optional[int] = None

    def __post_init__(self):
        if not 1 <= self.s_min < self.s_max:
            raise ValueError(f"need 1 <= s_min < s_max, got {self.s_min}, {self.s_max}")
        if self.s_max > SubtractionSet.max_subtrahend:
            raise ValueError(f"s_max exceeds {SubtractionSet.max_subtrahend}")
        if self.worker_count < 1:
            raise ValueError("worker_count must be >= 1")
        if self.checkpoint_interval < 1:
            raise ValueError("checkpoint_interval must be >= 1")

    @property
    def detection(self) -> DetectionConfig:
        return DetectionConfig(self.initial_length, self.max_seq_len)

    @property
    def total(self) -> int:
        return triple_count(self.s_min, self.s_max)

    @property
    def checkpoint_path(self) -> Path:
        return Path(f"{self.output_path}.ckpt")

    @property
    def mismatch_path(self) -> Path:
        return Path(f"{self.output_path}.mismatches")

    def shard_path(self, k: int) -> Path:
        return Path(f"{self.output_path}.part{k}")

    def header(self) -> str:
        init = "none" if self.initial_length is None else str(self.initial_length)
        return (
            f"{CHECKPOINT_MAGIC} {CHECKPOINT_VERSION} s_min={self.s_min} s_max={self.s_max} "
            f"workers={self.worker_count} max_seq_len={self.max_seq_len} initial_length={init}"
        )


@dataclass(frozen=True)
class SweepSummary:
    total: int
    case1_count: int
    case2_count: int
    mismatches: int
    failures: int
    wall_time: float = field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "case1_count": self.case1_count,
            "case2_count": self.case2_count,
            "mismatches": self.mismatches,
            "failures": self.failures,
            "wall_time": round(self.wall_time, 3),
        }


def _write_atomic(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


def _write_checkpoint(config: SweepConfig, progress: list[int]) -> None:
    lines = [config.header()] + [f"{k} {last}" for k, last in enumerate(progress)]
    _write_atomic(config.checkpoint_path, "\n".join(lines) + "\n")


def read_checkpoint(config: SweepConfig) -> list[int]:
    """Per-worker last completed enumeration index (block start - 1 if none)."""
    try:
        lines = config.checkpoint_path.read_text(encoding="utf-8").splitlines()
    except UnicodeDecodeError as exc:
        raise CheckpointError(f"unreadable checkpoint: {exc}") from exc
    if not lines or not lines[0].startswith(CHECKPOINT_MAGIC + " "):
        raise CheckpointError(f"{config.checkpoint_path}: missing checkpoint header")
    if lines[0].split()[1] != CHECKPOINT_VERSION:
        raise CheckpointError(f"unsupported checkpoint version {lines[0].split()[1]!r}")
    if lines[0] != config.header():
        raise ConfigMismatchError(
            f"checkpoint was written for '{lines[0]}', current config is '{config.header()}'"
        )
    blocks = partition(config.total, config.worker_count)
    if len(lines) - 1 != len(blocks):
        raise CheckpointError(f"expected {len(blocks)} worker lines, found {len(lines) - 1}")
    progress = []
    for k, (line, (start, stop)) in enumerate(zip(lines[1:], blocks)):
        try:
            idx, last = (int(x) for x in line.split())
        except ValueError:
            raise CheckpointError(f"malformed checkpoint line {line!r}") from None
        if idx != k or not start - 1 <= last < stop:
            raise CheckpointError(f"checkpoint line {line!r} inconsistent with block [{start}, {stop})")
        progress.append(last)
    return progress


def _truncate_shard(path: Path, keep: int) -> None:
    """Cut a shard back to its first ``keep`` complete lines."""
    data = path.read_bytes() if path.exists() else b""
    end = 0
    for _ in range(keep):
        nl = data.find(b"\n", end)
        if nl < 0:
            raise CheckpointError(f"{path} holds fewer than the {keep} checkpointed records")
        end = nl + 1
    if end != len(data):
        with open(path, "r+b") as fh:
            fh.truncate(end)


# --- execution ---------------------------------------------------------------------

def _run_block(config: SweepConfig, k: int, start: int, stop: int, last: int,
               stop_at: Optional[int], lock, parent_pid: Optional[int] = None) -> None:
    end = stop if stop_at is None else min(stop, max(stop_at, last + 1))
    detection = config.detection
    interval = config.checkpoint_interval
    pending = 0
    with open(config.shard_path(k), "a", encoding="utf-8", newline="\n") as shard:
        for triple in iter_triples(config.s_min, config.s_max, last + 1, end):
            if parent_pid is not None and os.getppid() != parent_pid:
                # orphaned: the coordinating process is gone, leave the rest to resume
                return
            record = verify_one(SubtractionSet(*triple), detection)
            if record.is_mismatch:
                log.warning("conjecture mismatch: %s", record.to_json())
            shard.write(record.to_json() + "\n")
            last += 1
            pending += 1
            if pending == interval:
                _flush_progress(config, shard, k, last, lock)
                pending = 0
        if end < stop:
            # simulated interruption: records past the last checkpoint stay unacknowledged
            return
        if pending:
            _flush_progress(config, shard, k, last, lock)


def _flush_progress(config: SweepConfig, shard, k: int, last: int, lock) -> None:
    shard.flush()
    os.fsync(shard.fileno())
    with lock:
        progress = read_checkpoint(config)
        progress[k] = last
        _write_checkpoint(config, progress)


def _worker_main(config, k, start, stop, last, stop_at, lock, parent_pid):
    try:
        _run_block(config, k, start, stop, last, stop_at, lock, parent_pid)
    except BaseException:
        log.exception("worker %d failed", k)
        raise


def _execute(config: SweepConfig, progress: list[int], stop_at: Optional[int]) -> None:
    blocks = partition(config.total, config.worker_count)
    todo = [(k, start, stop, progress[k]) for k, (start, stop) in enumerate(blocks)
            if progress[k] < stop - 1]
    if config.worker_count == 1 or len(todo) <= 1:
        for k, start, stop, last in todo:
            _run_block(config, k, start, stop, last, stop_at, contextlib.nullcontext())
    else:
        methods = multiprocessing.get_all_start_methods()
        ctx = multiprocessing.get_context("fork" if "fork" in methods else None)
        lock = ctx.Lock()
        procs = [ctx.Process(target=_worker_main, args=(config, k, start, stop, last, stop_at, lock, os.getpid()))
                 for k, start, stop, last in todo]
        for p in procs:
            p.start()
        for p in procs:
            p.join()
        failed = [p.exitcode for p in procs if p.exitcode != 0]
        if failed:
            raise SweepError(
                f"{len(failed)} worker(s) failed; last durable checkpoint is "
                f"{config.checkpoint_path}"
            )
    final = read_checkpoint(config)
    if any(last < stop - 1 for last, (_, stop) in zip(final, blocks)):
        raise SweepInterrupted(f"sweep stopped early; checkpoint at {config.checkpoint_path}")


def _merge(config: SweepConfig, wall_time: float) -> SweepSummary:
    counts = {"I": 0, "II": 0}
    mismatches = failures = 0
    out = Path(config.output_path)
    tmp = out.with_name(out.name + ".tmp")
    bad_lines = []
    with open(tmp, "w", encoding="utf-8", newline="\n") as dst:
        for k in range(config.worker_count):
            with open(config.shard_path(k), encoding="utf-8") as src:
                for line in src:
                    row = json.loads(line)
                    counts[row["case"]] += 1
                    if row["period"] is None:
                        failures += 1
                    elif not row["ok"]:
                        mismatches += 1
                        bad_lines.append(line)
                    dst.write(line)
        dst.flush()
        os.fsync(dst.fileno())
    os.replace(tmp, out)
    _write_atomic(config.mismatch_path, "".join(bad_lines))
    for k in range(config.worker_count):
        config.shard_path(k).unlink()
    config.checkpoint_path.unlink()
    total = counts["I"] + counts["II"]
    if total != config.total:
        raise SweepError(f"merged {total} records, expected {config.total}")
    return SweepSummary(total, counts["I"], counts["II"], mismatches, failures, wall_time)


def sweep(config: SweepConfig, stop_at: Optional[int] = None) -> SweepSummary:
    """Run a fresh sweep, discarding any earlier partial state for ``config.output_path``.

    ``stop_at`` (an enumeration index) simulates an interruption: every worker
    stops before that index without acknowledging its trailing records, and
    :class:`SweepInterrupted` is raised.
    """
    t0 = time.perf_counter()
    blocks = partition(config.total, config.worker_count)
    for k in range(config.worker_count):
        config.shard_path(k).write_bytes(b"")
    progress = [start - 1 for start, _ in blocks]
    _write_checkpoint(config, progress)
    _execute(config, progress, stop_at)
    return _merge(config, time.perf_counter() - t0)


def resume(config: SweepConfig, stop_at: Optional[int] = None) -> SweepSummary:
    """Continue an interrupted sweep; without a checkpoint this is a fresh sweep."""
    if not config.checkpoint_path.exists():
        return sweep(config, stop_at)
    t0 = time.perf_counter()
    progress = read_checkpoint(config)
    for k, (start, _) in enumerate(partition(config.total, config.worker_count)):
        _truncate_shard(config.shard_path(k), progress[k] - start + 1)
    _execute(config, progress, stop_at)
    return _merge(config, time.perf_counter() - t0)
