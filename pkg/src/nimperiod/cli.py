"""Command-line interface: ``nimperiod {seq,period,predict,verify,resume}``.

Exit status: 0 success, 1 usage error, 2 detection failure, 3 conjecture
mismatch found by verify/resume.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import harness
from .conjecture import Case, predict
from .errors import CheckpointError, DetectionError, NimPeriodError, SequenceLimitError
from .game import DEFAULT_MAX_SEQ_LEN, SubtractionSet
from .packed import nim_sequence_packed
from .period import DetectionConfig, find_period

EXIT_OK, EXIT_USAGE, EXIT_DETECTION, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _decimal(text: str) -> int:
    if not text.isdigit():
        raise argparse.ArgumentTypeError(f"expected a decimal integer, got {text!r}")
    return int(text)


def _positive(text: str) -> int:
    value = _decimal(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON object on stdout")
    common.add_argument(
        "--max-seq-len", type=_positive, default=DEFAULT_MAX_SEQ_LEN,
        help=f"cap on computed sequence length (default {DEFAULT_MAX_SEQ_LEN})",
    )
    triple = _Parser(add_help=False)
    for name in ("s1", "s2", "s3"):
        triple.add_argument(name, type=_positive)

    parser = _Parser(prog="nimperiod", description="Periods of three-move subtraction games.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("seq", parents=[common, triple], help="print the first nim values")
    p.add_argument("--count", type=_positive, default=32, help="number of values (default 32)")
    sub.add_parser("period", parents=[common, triple], help="certified preperiod and period")
    sub.add_parser("predict", parents=[common, triple], help="conjectured period")

    for name, helptext in (("verify", "sweep all triples in a range"),
                           ("resume", "continue an interrupted sweep")):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("--min", dest="s_min", type=_positive, default=1,
                       help="smallest subtrahend (default 1)")
        p.add_argument("--max", dest="s_max", type=_positive, required=True,
                       help="largest subtrahend")
        p.add_argument("--workers", type=_positive, default=1, help="worker processes (default 1)")
        p.add_argument("--out", required=True, help="output file (newline-delimited JSON)")
        p.add_argument("--checkpoint-interval", type=_positive, default=10_000,
                       help="records between checkpoint flushes (default 10000)")
    return parser


def _game(args) -> SubtractionSet:
    try:
        return SubtractionSet(args.s1, args.s2, args.s3)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, obj: dict, text: str) -> None:
    print(json.dumps(obj) if args.json else text)


def _triple_dict(game: SubtractionSet) -> dict:
    return {"s1": game.s1, "s2": game.s2, "s3": game.s3}


def _cmd_seq(args) -> int:
    game = _game(args)
    try:
        values = nim_sequence_packed(game, args.count, args.max_seq_len).tolist()
    except SequenceLimitError as exc:
        raise UsageError(str(exc)) from None
    _emit(args, {**_triple_dict(game), "values": values}, " ".join(map(str, values)))
    return EXIT_OK


def _cmd_period(args) -> int:
    game = _game(args)
    cert = find_period(game, DetectionConfig(max_length=args.max_seq_len))
    obj = {**_triple_dict(game), "preperiod": cert.preperiod, "period": cert.period,
           "witness_start": cert.witness_start, "seq_len": cert.sequence_length_used}
    _emit(args, obj, f"preperiod={cert.preperiod} period={cert.period}")
    return EXIT_OK


def _cmd_predict(args) -> int:
    game = _game(args)
    pred = predict(game)
    if pred.case is Case.I:
        obj = {**_triple_dict(game), "case": "I", "exact_period": pred.exact_period}
        text = f"Case I, period: {pred.exact_period}"
    else:
        obj = {**_triple_dict(game), "case": "II", "candidates": list(pred.candidates)}
        text = "Case II, candidates: " + " ".join(map(str, pred.candidates))
    _emit(args, obj, text)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    try:
        config = harness.SweepConfig(
            s_max=args.s_max, s_min=args.s_min, output_path=args.out,
            worker_count=args.workers, checkpoint_interval=args.checkpoint_interval,
            max_seq_len=args.max_seq_len,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    run = harness.sweep if args.command == "verify" else harness.resume
    summary = run(config)
    d = summary.to_dict()
    text = (f"total={d['total']} case_I={d['case1_count']} case_II={d['case2_count']} "
            f"mismatches={d['mismatches']} failures={d['failures']} "
            f"wall_time={d['wall_time']:.2f}s")
    _emit(args, d, text)
    if summary.mismatches:
        return EXIT_MISMATCH
    if summary.failures:
        return EXIT_DETECTION
    return EXIT_OK


COMMANDS = {
    "seq": _cmd_seq,
    "period": _cmd_period,
    "predict": _cmd_predict,
    "verify": _cmd_sweep,
    "resume": _cmd_sweep,
}


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DetectionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DETECTION
    except (CheckpointError, NimPeriodError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def run() -> None:
    sys.exit(main())
