"""Exception types raised by nimperiod."""


class NimPeriodError(Exception):
    """Base class for all library errors."""


class InvalidGameError(NimPeriodError, ValueError):
    pass


class SequenceLimitError(NimPeriodError):
    """Requested sequence length exceeds the configured cap."""


class DetectionError(NimPeriodError):
    """No period could be certified within the sequence-length cap."""

    def __init__(self, game, cap, longest_lag):
        self.game = game
        self.cap = cap
        self.longest_lag = longest_lag
        super().__init__(
            f"no period certified for {game} within {cap} values "
            f"(largest lag examined: {longest_lag})"
        )


class InvalidCaseError(NimPeriodError, ValueError):
    pass


class CheckpointError(NimPeriodError):
    """Checkpoint file is unreadable or inconsistent with the shard files."""


class ConfigMismatchError(CheckpointError):
    """Checkpoint was written by a sweep with a different configuration."""
