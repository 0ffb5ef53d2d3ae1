"""Exception hierarchy.

Every error raised by the library derives from :class:`IwasawaLabError`, and
the CLI maps the subclasses onto its exit codes.
"""


class IwasawaLabError(Exception):
    """Base class for library errors."""

    exit_code = 1


class ConfigurationError(IwasawaLabError, ValueError):
    """Operands were built for different primes or precisions."""


class DomainError(IwasawaLabError, ValueError):
    """An argument lies outside the domain of the operation."""


class ResourceError(IwasawaLabError):
    """A size cap (degree, discriminant, level) would be exceeded."""


class PrecisionExhausted(IwasawaLabError, ArithmeticError):
    """The working p-adic precision is too small to certify the result."""

    exit_code = 4


class InfiniteQuotient(IwasawaLabError, ArithmeticError):
    """A quotient expected to be finite is infinite (common factor)."""

    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class NoStabilization(IwasawaLabError):
    """A growth scan did not settle on an Iwasawa-type formula."""

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table or []


class ConditionTViolated(IwasawaLabError):
    """The operation needs a torsion model but free summands are present."""


class FormulaViolation(IwasawaLabError):
    """A certified formula failed on some grid point."""

    def __init__(self, message, counterexample=None):
        super().__init__(message)
        self.counterexample = counterexample or {}


class HypothesisNotMet(IwasawaLabError):
    """A scenario hypothesis failed; no conclusions may be drawn."""

    exit_code = 2

    def __init__(self, message, ledger=None):
        super().__init__(message)
        self.ledger = ledger or []


class UnverifiedHypothesis(IwasawaLabError):
    """A conclusion needs an asserted input that was not supplied."""

    exit_code = 3

    def __init__(self, message, ledger=None):
        super().__init__(message)
        self.ledger = ledger or []
