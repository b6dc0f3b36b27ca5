"""Exception hierarchy shared by every module.

Input-shaped problems (parsing, unknown names, bad parameters) are kept
apart from domain violations (an axiom that fails on otherwise well-formed
data) so the command line can map them to distinct exit codes.
"""

from __future__ import annotations


class LincatError(Exception):
    """Root of all library errors."""


class InputError(LincatError):
    """Malformed input: parsing, shapes, unknown names, bad parameters."""


class ParseError(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class UnknownName(InputError):
    pass


class BadParams(InputError):
    pass


class FieldMismatch(InputError):
    pass


class AlgebraMismatch(InputError):
    pass


class NotComposable(InputError):
    pass


class DegreeTooLarge(InputError):
    pass


class SearchTooLarge(InputError):
    pass


class MissingUnits(InputError):
    pass


class DomainViolation(LincatError):
    """Well-formed data that fails a required identity."""

    def __init__(self, message: str, violations: list | None = None):
        super().__init__(message)
        self.violations = violations or []


class AxiomViolation(DomainViolation):
    """An equation of the defining system fails.

    ``violations`` holds (equation id, index tuple, residual) triples,
    stringified for reporting.
    """


class NotACocycle(DomainViolation):
    pass


class NotIdempotent(DomainViolation):
    pass


class NotIdempotentModEps(DomainViolation):
    pass


class InvalidFamily(DomainViolation):
    pass


class NotAPoint(DomainViolation):
    pass
