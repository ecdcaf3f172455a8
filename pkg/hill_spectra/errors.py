"""Exception hierarchy for the hill_spectra package.

``DomainError`` subclasses mean the input was bad (CLI exit code 1);
``VerificationError`` subclasses mean a computation ran and found a
violated invariant (CLI exit code 2).
"""
from __future__ import annotations


class HillSpectraError(Exception):
    """Root of every error raised by this package."""


class DomainError(HillSpectraError):
    pass


class VerificationError(HillSpectraError):
    pass


class ConfigError(DomainError):
    pass


class PotentialError(DomainError):
    pass


class PotentialFileError(PotentialError):
    pass


class IntegrationError(DomainError):
    pass


class EigenSolveError(DomainError):
    pass


class PairingError(DomainError):
    pass


class DegenerateDenominatorError(DomainError):
    pass


class InsufficientRangeError(DomainError):
    pass


class InterlacingError(VerificationError):
    pass


class RootFindingError(VerificationError):
    pass


class BookkeepingError(VerificationError):
    pass


class ImplicationViolation(VerificationError):
    pass


class RecoveryViolation(VerificationError):
    pass


class GapRatioViolation(VerificationError):
    pass
