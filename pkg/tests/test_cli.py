import json
import subprocess
import sys

import pytest

from nimperiod import SubtractionSet, find_period, nim_sequence, predict
from nimperiod import cli
from nimperiod.harness import SweepSummary


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.mark.parametrize(
    "argv, expected",
    [
        (["seq", "1", "2", "3", "--count", "8"], "0 1 2 3 0 1 2 3"),
        (["predict", "1", "2", "4"], "Case II, candidates: 1 3 5 6"),
        (["predict", "2", "3", "5"], "Case I, period: 7"),
        (["period", "2", "3", "5"], "preperiod=0 period=7"),
        (["period", "4", "9", "12"], "preperiod=18 period=21"),
    ],
)
def test_text_output(capsys, argv, expected):
    code, out, err = run(capsys, *argv)
    assert (code, out.strip(), err) == (0, expected, "")


@pytest.mark.parametrize(
    "argv",
    [
        ["seq", "5", "9", "14", "--count", "40"],
        ["period", "3", "8", "20"],
        ["predict", "3", "8", "20"],
        ["predict", "3", "8", "11"],
    ],
)
def test_json_matches_library(capsys, argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    assert len(out.strip().splitlines()) == 1
    obj = json.loads(out)
    g = SubtractionSet(obj["s1"], obj["s2"], obj["s3"])
    if argv[0] == "seq":
        assert obj["values"] == nim_sequence(g, 40).tolist()
    elif argv[0] == "period":
        cert = find_period(g)
        assert (obj["preperiod"], obj["period"]) == (cert.preperiod, cert.period)
    else:
        pred = predict(g)
        assert obj.get("exact_period") == pred.exact_period
        assert obj.get("candidates") == (list(pred.candidates) if pred.candidates else None)


@pytest.mark.parametrize(
    "argv, needle",
    [
        (["seq", "3", "2", "1"], "s1 < s2 < s3"),
        (["seq", "1", "2", "x"], "'x'"),
        (["seq", "1", "2", "0x3"], "'0x3'"),
        (["seq", "1", "2", "3", "--count", "0"], "'0'"),
        (["seq", "1", "2", "3", "--count", "100", "--max-seq-len", "50"], "cap is 50"),
        (["period", "1", "2"], "s3"),
        (["frobnicate"], "frobnicate"),
        (["verify", "--out", "x"], "--max"),
        (["verify", "--max", "5", "--min", "5", "--out", "x"], "s_min"),
    ],
)
def test_usage_errors(capsys, argv, needle):
    code, out, err = run(capsys, *argv)
    assert code == 1 and out == ""
    assert needle in err


def test_detection_failure_exit(capsys):
    code, out, err = run(capsys, "period", "4", "9", "12", "--max-seq-len", "40")
    assert code == 2 and out == "" and "40" in err


def test_verify_and_resume(capsys, tmp_path):
    out_path = str(tmp_path / "o.jsonl")
    code, out, _ = run(capsys, "verify", "--max", "10", "--out", out_path, "--json", "--workers", "2")
    assert code == 0
    summary = json.loads(out)
    assert summary["total"] == 120 and summary["mismatches"] == 0
    code, out, _ = run(capsys, "resume", "--max", "10", "--out", out_path, "--checkpoint-interval", "5")
    assert code == 0 and out.startswith("total=120 case_I=")


def test_verify_failures_exit(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--max", "12", "--out", str(tmp_path / "o"), "--max-seq-len", "40")
    assert code == 2 and "failures=0" not in out


def test_verify_mismatch_exit(capsys, tmp_path, monkeypatch):
    monkeypatch.setattr(cli.harness, "sweep", lambda config: SweepSummary(4, 2, 2, 1, 0))
    code, out, _ = run(capsys, "verify", "--max", "4", "--out", str(tmp_path / "o"))
    assert code == 3 and "mismatches=1" in out


def test_resume_mismatched_checkpoint_exit(capsys, tmp_path):
    out_path = tmp_path / "o"
    (tmp_path / "o.ckpt").write_text("nimperiod-checkpoint v1 s_min=1 s_max=9 workers=1 max_seq_len=16777216 initial_length=none\n0 -1\n")
    code, out, err = run(capsys, "resume", "--max", "10", "--out", str(out_path))
    assert code == 1 and out == "" and "checkpoint" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "nimperiod", "predict", "1", "2", "3", "--json"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout) == {"s1": 1, "s2": 2, "s3": 3, "case": "I", "exact_period": 4}
