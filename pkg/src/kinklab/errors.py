"""Exception hierarchy shared by all kinklab modules.

Exit-code mapping used by the CLI: 2 validation/configuration,
3 numeric blow-up, 4 oracle failure.
"""


class KinklabError(Exception):
    """Base class for all kinklab errors."""

    exit_code = 1


class ContractViolation(KinklabError):
    """An operation was called with arguments violating its contract
    (length mismatch, non-positive values where positives are required, ...)."""

    exit_code = 2


class ConfigurationError(KinklabError):
    """A run configuration or model specification is invalid or incomplete."""

    exit_code = 2


class UnsupportedVariant(ConfigurationError):
    """The requested operation does not apply to this model variant."""


class BlowUpError(KinklabError):
    """The numerical solution left the admissible range (non-finite values
    or |u| beyond the blow-up threshold)."""

    exit_code = 3

    def __init__(self, t, message=None):
        self.t = t
        super().__init__(message or f"numerical blow-up at t = {t:.6g}")


class OracleFailure(KinklabError):
    """A certification oracle could not reach its required residual,
    signalling a genuine mathematical inconsistency rather than guessing."""

    exit_code = 4


class TrackingError(KinklabError):
    """Kink level-crossing detection failed for a snapshot."""

    exit_code = 1

    def __init__(self, t, message=None):
        self.t = t
        super().__init__(message or f"kink tracking failed at t = {t:.6g}")
