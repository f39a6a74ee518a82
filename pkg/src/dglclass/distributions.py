"""Finite-alphabet probability primitives.

A distribution is a validated, immutable probability vector over the symbol
alphabet {0, ..., k-1}; a sequence is an immutable array of symbol indices.
The module also provides the two distances the rest of the package is built
on (total variation and the Chernoff information) plus inverse-CDF sampling
and plain-text I/O.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable

import numpy as np

from . import kernels
from .errors import (
    AlphabetMismatchError,
    BadParamsError,
    DisjointSupportError,
    EmptyVectorError,
    NegativeEntryError,
    ParseError,
    SumNotOneError,
    SymbolOutOfRangeError,
)

SUM_TOLERANCE = 1e-9
_LN2 = math.log(2.0)
_CHERNOFF_GRID = 33
_INV_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability vector over the alphabet {0, ..., alphabet_size - 1}.

    Entries must be non-negative and sum to 1 within ``SUM_TOLERANCE``.
    Inputs are never renormalized silently; fix the vector and retry.
    """

    probs: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.probs, dtype=np.float64)
        if arr.ndim != 1 or arr.size == 0:
            raise EmptyVectorError("probability vector must be a non-empty 1-d array")
        if (arr < 0).any():
            raise NegativeEntryError(
                f"probability vector has negative entry at index {int(np.argmin(arr))}"
            )
        total = float(arr.sum())
        if not abs(total - 1.0) <= SUM_TOLERANCE:
            raise SumNotOneError(
                f"probability vector sums to {total!r}, expected 1 within {SUM_TOLERANCE}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "probs", arr)

    @property
    def alphabet_size(self) -> int:
        return int(self.probs.shape[0])

    @cached_property
    def cdf(self) -> np.ndarray:
        out = np.cumsum(self.probs)
        out.flags.writeable = False
        return out

    def __len__(self) -> int:
        return self.alphabet_size


@dataclass(frozen=True, eq=False)
class Sequence:
    """Non-empty run of symbol indices, stored as an int64 array.

    Symbols are validated to be non-negative here; the upper range check
    happens wherever the sequence meets a concrete alphabet size.
    """

    symbols: np.ndarray

    def __post_init__(self):
        arr = np.ascontiguousarray(self.symbols, dtype=np.int64)
        if arr.ndim != 1 or arr.size == 0:
            raise EmptyVectorError("symbol sequence must be a non-empty 1-d array")
        if (arr < 0).any():
            raise SymbolOutOfRangeError(
                f"sequence contains negative symbol {int(arr.min())}"
            )
        arr.flags.writeable = False
        object.__setattr__(self, "symbols", arr)

    @property
    def length(self) -> int:
        return int(self.symbols.shape[0])

    def __len__(self) -> int:
        return self.length


@dataclass(frozen=True)
class ChernoffResult:
    """Chernoff information in bits and the optimizing exponent tilt."""

    value: float
    lambda_star: float


def validate_distribution(weights) -> Distribution:
    """Build a :class:`Distribution` from a raw vector, validating it."""
    return Distribution(np.asarray(weights, dtype=np.float64))


def empirical(seq: Sequence, alphabet_size: int) -> Distribution:
    """Empirical distribution of ``seq`` over {0, ..., alphabet_size - 1}."""
    if alphabet_size < 1:
        raise BadParamsError(f"alphabet_size must be >= 1, got {alphabet_size}")
    counts = histogram(seq, alphabet_size)
    return Distribution(counts / float(seq.length))


def histogram(seq: Sequence, alphabet_size: int) -> np.ndarray:
    """Symbol counts of ``seq`` as an int64 vector of length ``alphabet_size``."""
    try:
        return kernels.histogram(seq.symbols, alphabet_size)
    except ValueError as exc:
        raise SymbolOutOfRangeError(str(exc)) from None


def total_variation(p: Distribution, q: Distribution) -> float:
    """Total variation distance, one half the L1 distance between the vectors."""
    _check_same_alphabet(p, q)
    return 0.5 * float(np.abs(p.probs - q.probs).sum())


def chernoff(p: Distribution, q: Distribution, tol: float = 1e-9) -> ChernoffResult:
    """Chernoff information between ``p`` and ``q`` in bits.

    Minimizes g(lam) = log2 sum_a p(a)^lam q(a)^(1-lam) over lam in [0, 1]
    and returns -g at the minimizer.  g is convex, so a coarse grid scan
    followed by golden-section refinement of the bracketing interval finds
    the global minimum; ``tol`` is the absolute tolerance on lam.  The sum
    runs over the common support and is evaluated in log space.
    """
    _check_same_alphabet(p, q)
    if not tol > 0:
        raise BadParamsError(f"tol must be positive, got {tol}")
    if np.array_equal(p.probs, q.probs):
        # identical distributions carry no information; skip the optimizer,
        # whose rounding would otherwise report a spurious ~1e-16 value
        return ChernoffResult(value=0.0, lambda_star=0.5)
    common = (p.probs > 0) & (q.probs > 0)
    if not common.any():
        raise DisjointSupportError(
            "distributions have disjoint supports; Chernoff information is infinite"
        )
    log_p = np.log(p.probs[common])
    log_q = np.log(q.probs[common])

    def g(lam: float) -> float:
        z = lam * log_p + (1.0 - lam) * log_q
        z_max = float(z.max())
        return (z_max + math.log(float(np.exp(z - z_max).sum()))) / _LN2

    grid = np.linspace(0.0, 1.0, _CHERNOFF_GRID)
    values = [g(lam) for lam in grid]
    best = int(np.argmin(values))
    lo = grid[max(best - 1, 0)]
    hi = grid[min(best + 1, _CHERNOFF_GRID - 1)]

    # Golden-section shrink of [lo, hi]; convexity keeps the minimum inside.
    x1 = hi - _INV_GOLDEN * (hi - lo)
    x2 = lo + _INV_GOLDEN * (hi - lo)
    g1, g2 = g(x1), g(x2)
    while hi - lo > tol:
        if g1 <= g2:
            hi, x2, g2 = x2, x1, g1
            x1 = hi - _INV_GOLDEN * (hi - lo)
            g1 = g(x1)
        else:
            lo, x1, g1 = x1, x2, g2
            x2 = lo + _INV_GOLDEN * (hi - lo)
            g2 = g(x2)
    lam_star = 0.5 * (lo + hi)
    value = max(0.0, -g(lam_star))
    return ChernoffResult(value=value, lambda_star=float(lam_star))


def sample(p: Distribution, n: int, stream: np.random.Generator) -> Sequence:
    """Draw ``n`` i.i.d. symbols from ``p`` by inverting its CDF."""
    if n < 1:
        raise BadParamsError(f"sample length must be >= 1, got {n}")
    u = stream.random(n)
    return Sequence(kernels.sample_from_cdf(p.cdf, u))


def read_sequence(path) -> Sequence:
    """Read a whitespace-separated sequence of symbol indices from a text file."""
    with open(path, "r", encoding="utf-8") as fh:
        tokens = fh.read().split()
    if not tokens:
        raise EmptyVectorError(f"sequence file {path} is empty")
    try:
        values = [int(tok) for tok in tokens]
    except ValueError as exc:
        raise ParseError(f"sequence file {path}: {exc}") from None
    return Sequence(np.asarray(values, dtype=np.int64))


def write_sequence(path, seq: Sequence) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(" ".join(str(int(s)) for s in seq.symbols))
        fh.write("\n")


def read_distribution(path) -> Distribution:
    """Read a whitespace-separated probability vector from a text file."""
    with open(path, "r", encoding="utf-8") as fh:
        tokens = fh.read().split()
    if not tokens:
        raise EmptyVectorError(f"distribution file {path} is empty")
    try:
        values = [float(tok) for tok in tokens]
    except ValueError as exc:
        raise ParseError(f"distribution file {path}: {exc}") from None
    return validate_distribution(values)


def write_distribution(path, dist: Distribution) -> None:
    # repr round-trips doubles exactly, which matters for replaying runs.
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(" ".join(repr(float(v)) for v in dist.probs))
        fh.write("\n")


def _check_same_alphabet(*dists: Distribution) -> int:
    sizes = {d.alphabet_size for d in dists}
    if len(sizes) != 1:
        raise AlphabetMismatchError(
            f"distributions are over different alphabets: sizes {sorted(sizes)}"
        )
    return sizes.pop()


def check_same_alphabet(dists: Iterable[Distribution]) -> int:
    """Common alphabet size of ``dists``; raises if the sizes differ."""
    return _check_same_alphabet(*dists)
