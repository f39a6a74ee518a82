"""Exception types raised by dglclass operations.

Every class maps to one failure mode of the public API; the CLI prints the
class name (minus the ``Error`` suffix) as its machine-readable error code.
"""


class DglClassError(ValueError):
    """Base class for all dglclass data and parameter errors."""

    @property
    def code(self) -> str:
        name = type(self).__name__
        return name[:-5] if name.endswith("Error") else name


class EmptyVectorError(DglClassError):
    """A probability vector or sequence was empty."""


class NegativeEntryError(DglClassError):
    """A probability vector contained a negative entry."""


class SumNotOneError(DglClassError):
    """A probability vector did not sum to 1 within tolerance."""


class SymbolOutOfRangeError(DglClassError):
    """A sequence symbol fell outside the declared alphabet."""


class AlphabetMismatchError(DglClassError):
    """Two objects were defined over different alphabets."""


class DisjointSupportError(DglClassError):
    """Two distributions share no support; the requested distance is infinite."""


class FewerThanTwoHypothesesError(DglClassError):
    """At least two hypotheses are required."""


class BadIndexError(DglClassError):
    """A hypothesis index was outside the valid range."""


class LengthMismatchError(DglClassError):
    """Training sequences (or paired lists) had inconsistent lengths."""


class BadPriorsError(DglClassError):
    """Prior probabilities were negative or did not sum to 1."""


class NonpositiveDeltaError(DglClassError):
    """A robustness slack parameter was not strictly positive."""


class BadParamsError(DglClassError):
    """Bound or sampling parameters violated their preconditions."""


class TooLargeError(DglClassError):
    """An exact enumeration would exceed the configured size cap."""


class InvalidGridError(DglClassError):
    """An experiment configuration described an empty or invalid grid."""


class ParseError(DglClassError):
    """A text file could not be parsed into the expected values."""
