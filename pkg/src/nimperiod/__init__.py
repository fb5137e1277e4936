"""Nim sequences, certified periods and the three-move period conjecture."""
from .conjecture import (
    Branch,
    Case,
    CaseIParams,
    PairSums,
    Prediction,
    case1_params,
    case1_period,
    case2_candidates,
    case2_check,
    classify,
    predict,
)
from .errors import (
    CheckpointError,
    ConfigMismatchError,
    DetectionError,
    InvalidCaseError,
    InvalidGameError,
    NimPeriodError,
    SequenceLimitError,
)
from .game import NimSequence, SubtractionSet, mex, nim_sequence
from .harness import SweepConfig, SweepSummary, VerificationRecord, resume, sweep, verify_one
from .packed import PackedSequence, nim_sequence_packed
from .period import DetectionConfig, PeriodCertificate, certify_window, find_period

__version__ = "0.1.0"
