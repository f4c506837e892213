"""Exception types.  Each carries a stable ``code`` used by the CLI."""

from __future__ import annotations

from typing import Sequence


class SFHError(Exception):
    code = "ERROR"
    exit_code = 1


class ParseError(SFHError):
    code = "PARSE_ERROR"
    exit_code = 4


class ValidationError(SFHError):
    code = "INVALID"
    exit_code = 1

    def __init__(self, violations: Sequence[object]):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NotBalancedError(SFHError):
    code = "NOT_BALANCED"
    exit_code = 1

    def __init__(self, reasons: Sequence[str]):
        self.reasons = list(reasons)
        super().__init__("; ".join(self.reasons))


class NotNiceError(SFHError):
    code = "NOT_NICE"
    exit_code = 2

    def __init__(self, offenders: Sequence[str]):
        self.offenders = list(offenders)
        super().__init__("regions not bigons or squares: " + ", ".join(self.offenders))


class NotAdmissibleError(SFHError):
    code = "NOT_ADMISSIBLE"
    exit_code = 3


class NoContactGeneratorError(SFHError):
    code = "NO_CONTACT_GENERATOR"


class DSquaredNonzeroError(SFHError):
    """The computed differential does not square to zero: an engine bug."""

    code = "DSQUARED_NONZERO"
    exit_code = 70


class DomainMismatchError(SFHError):
    code = "DOMAIN_MISMATCH"


class ArrangementDegenerateError(SFHError):
    code = "ARRANGEMENT_DEGENERATE"


class UnknownExampleError(SFHError, KeyError):
    code = "UNKNOWN_EXAMPLE"

    def __str__(self) -> str:
        return Exception.__str__(self)
