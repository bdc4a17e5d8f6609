"""Exception types shared across the library."""


class MechLabError(Exception):
    """Base class for all mechlab errors."""


class ContractViolationError(MechLabError, ValueError):
    """An argument breaks a documented precondition (dimension mismatch, NaN, ...)."""


class DomainError(MechLabError, ValueError):
    """A numeric parameter is outside its mathematical domain (k <= 0, p <= 1, ...)."""


class UnsupportedProfileError(MechLabError, ValueError):
    """A mechanism family does not accept this profile arity or dimension."""


class ParseError(MechLabError, ValueError):
    """Malformed textual input (mechanism string, profile CSV, config)."""
