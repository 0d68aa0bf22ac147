"""Exception types shared across the package."""


class ChateletError(Exception):
    """Base class for all package errors."""


class InvalidInput(ChateletError, ValueError):
    """Malformed or out-of-domain input."""


class InsufficientPrecision(ChateletError):
    """A p-adic quantity is not determined at the working precision."""


class PrecisionCapExceeded(ChateletError):
    """Precision doubling reached the hard cap without a certified answer."""


class CriterionFailed(ChateletError):
    """Hensel's criterion does not hold at the supplied approximation."""


class EffortExhausted(ChateletError):
    """A brute-force oracle could not decide at the requested effort."""


class Unsatisfiable(ChateletError):
    """A set of local constraints has no solution."""


class SearchExhausted(ChateletError):
    """A deterministic search hit its candidate cap."""


class UnsupportedPlace(ChateletError):
    """The place is outside the supported local models."""


class MissingFactorization(ChateletError):
    """An operation needs P = k * f1 * f2 but none was supplied."""
