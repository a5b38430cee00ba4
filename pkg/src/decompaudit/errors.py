"""Exception hierarchy shared across the package.

Each error class carries an exit-code category so the CLI can map failures
to distinct process exit codes (config=2, data=3, numeric=4).
"""


class DecompAuditError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InvalidConfigError(DecompAuditError):
    """A parameter or configuration value is out of its legal range."""

    exit_code = 2


class InvalidInputError(DecompAuditError):
    """Input data is malformed (non-finite values, length mismatch, ...)."""

    exit_code = 3


class InsufficientDataError(DecompAuditError):
    """Input is too short for the requested operation."""

    exit_code = 3


class IllConditionedError(DecompAuditError):
    """A linear system is singular or too ill-conditioned to solve."""

    exit_code = 4


class NumericOverflowError(DecompAuditError):
    """A computation produced non-finite intermediate values."""

    exit_code = 4
