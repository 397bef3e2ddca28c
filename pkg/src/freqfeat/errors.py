"""Exception hierarchy shared by all freqfeat modules."""


class FreqfeatError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(FreqfeatError, ValueError):
    """A file does not conform to its declared on-disk format."""


class ParameterError(FreqfeatError, ValueError):
    """An argument violates an operation's preconditions."""


class StateError(FreqfeatError):
    """An object is in the wrong state for the requested operation,
    e.g. centering an already-centered spectrum."""


class NumericalError(FreqfeatError):
    """A numerical consistency check failed, signalling corrupted or
    asymmetric data rather than ordinary floating-point noise."""


class ScorerError(FreqfeatError):
    """A scorer violated its contract (out-of-range, nondeterministic,
    or degenerate baseline)."""
