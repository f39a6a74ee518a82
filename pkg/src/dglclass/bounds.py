"""Non-asymptotic error bounds for the deviation test.

Throughout, M is the number of hypotheses, |X| the alphabet size, n the test
sequence length, N = round(alpha * n) the per-hypothesis training length,
m the minimum pairwise total variation separation, and delta the slack left
for nominal misfit.  Every bound has the shape

    2 M exp(-n * exponent + penalty)

where ``exponent`` carries the rate and ``penalty`` is independent of n.
Two regimes split on how the estimation error is controlled: ``small``
pays an additive |X| ln(2) penalty and is tight for small alphabets, while
``large`` divides the deviation by |X| and pays only ln(|X|).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional, Tuple

from .distributions import Distribution, chernoff, total_variation
from .errors import BadParamsError, NonpositiveDeltaError

_LN2 = math.log(2.0)

_SMALL_VARIANTS = ("thm1", "cor1")
_LARGE_VARIANTS = ("thm2", "cor2")
BOUND_VARIANTS = _SMALL_VARIANTS + _LARGE_VARIANTS


class Regime(enum.Enum):
    """Which estimation-error control a bound uses."""

    SMALL = "small"
    LARGE = "large"


@dataclass(frozen=True)
class BoundParams:
    """Validated inputs shared by the bound evaluators.

    ``min_tv`` is the minimum pairwise total variation distance of whichever
    family the caller is bounding against (nominal or true; the evaluators
    do not care which).  ``delta`` is optional because the theorem-style
    bounds pick their own optimal slack.
    """

    n: int
    alpha: float
    num_hypotheses: int
    alphabet: int
    min_tv: float
    regime: Regime
    delta: Optional[float] = None
    epsilon: Optional[float] = None

    def __post_init__(self):
        if self.n < 1:
            raise BadParamsError(f"n must be >= 1, got {self.n}")
        if not self.alpha > 0:
            raise BadParamsError(f"alpha must be positive, got {self.alpha}")
        if self.num_hypotheses < 2:
            raise BadParamsError(
                f"need at least 2 hypotheses, got {self.num_hypotheses}"
            )
        if self.alphabet < 1:
            raise BadParamsError(f"alphabet must be >= 1, got {self.alphabet}")
        if not 0 < self.min_tv <= 1:
            raise BadParamsError(
                f"min_tv must lie in (0, 1], got {self.min_tv}"
            )
        if not isinstance(self.regime, Regime):
            raise BadParamsError(f"regime must be a Regime, got {self.regime!r}")
        if self.delta is not None:
            if not self.delta > 0:
                raise NonpositiveDeltaError(
                    f"delta must be positive, got {self.delta}"
                )
            if not self.delta < self.min_tv:
                raise BadParamsError(
                    f"delta must be smaller than min_tv, got delta={self.delta} "
                    f"with min_tv={self.min_tv}"
                )
        if self.epsilon is not None and not self.epsilon > 0:
            raise BadParamsError(f"epsilon must be positive, got {self.epsilon}")


@dataclass(frozen=True)
class BoundReport:
    """A bound value together with its decomposition 2M exp(-n e + p).

    ``vacuous`` marks values above 1; they are reported as-is, never
    clamped, so bound curves can be plotted where they start above 1.
    """

    value: float
    exponent: float
    penalty: float
    delta_used: Optional[float]

    @property
    def vacuous(self) -> bool:
        return self.value > 1.0


def dgl_error_bound(n: int, num_hypotheses: int, delta: float) -> float:
    """Test-noise term: 2 M exp(-n delta^2 / 2 + 2 ln(M - 1)).

    Bounds the chance that the empirical measure of the test sequence
    deviates by more than delta / 2 on some Scheffé set, via a union bound
    over the M (M - 1) / 2 sets and a two-sided concentration bound per set.
    """
    if n < 1:
        raise BadParamsError(f"n must be >= 1, got {n}")
    if num_hypotheses < 2:
        raise BadParamsError(f"need at least 2 hypotheses, got {num_hypotheses}")
    if not delta > 0:
        raise NonpositiveDeltaError(f"delta must be positive, got {delta}")
    exponent = 0.5 * delta * delta
    penalty = 2.0 * math.log(num_hypotheses - 1)
    return 2.0 * num_hypotheses * math.exp(-n * exponent + penalty)


def estimation_error_bound(params: BoundParams) -> float:
    """Training-noise term at slack ``params.delta``.

    Small regime:  2 M exp(-n alpha (m - delta)^2 / 2 + |X| ln 2), from a
    union bound over all 2^|X| subsets of the alphabet.  Large regime:
    2 M exp(-2 n alpha ((m - delta) / |X|)^2 + ln |X|), from per-symbol
    concentration at deviation (m - delta) / |X|.
    """
    if params.delta is None:
        raise BadParamsError("estimation_error_bound requires params.delta")
    gap = params.min_tv - params.delta
    two_m = 2.0 * params.num_hypotheses
    if params.regime is Regime.SMALL:
        exponent = 0.5 * params.alpha * gap * gap
        penalty = params.alphabet * _LN2
    else:
        exponent = 2.0 * params.alpha * (gap / params.alphabet) ** 2
        penalty = math.log(params.alphabet)
    return two_m * math.exp(-params.n * exponent + penalty)


def combined_bound(params: BoundParams) -> float:
    """Total error bound at explicit slack: test term plus training term."""
    if params.delta is None:
        raise BadParamsError("combined_bound requires params.delta")
    return (
        dgl_error_bound(params.n, params.num_hypotheses, params.delta)
        + estimation_error_bound(params)
    )


def delta_star(alpha: float, min_tv: float, alphabet: int, regime: Regime) -> float:
    """Slack equalizing the two exponents of :func:`combined_bound`.

    Small regime: delta* = sqrt(alpha) m / (1 + sqrt(alpha)), solving
    delta^2 / 2 = alpha (m - delta)^2 / 2.  Large regime:
    delta* = 2 sqrt(alpha) m / (|X| + 2 sqrt(alpha)), solving
    delta^2 / 2 = 2 alpha ((m - delta) / |X|)^2.
    """
    if not alpha > 0:
        raise BadParamsError(f"alpha must be positive, got {alpha}")
    if not 0 < min_tv <= 1:
        raise BadParamsError(f"min_tv must lie in (0, 1], got {min_tv}")
    if alphabet < 1:
        raise BadParamsError(f"alphabet must be >= 1, got {alphabet}")
    root = math.sqrt(alpha)
    if regime is Regime.SMALL:
        return root * min_tv / (1.0 + root)
    if regime is Regime.LARGE:
        return 2.0 * root * min_tv / (alphabet + 2.0 * root)
    raise BadParamsError(f"regime must be a Regime, got {regime!r}")


def theorem_bound(params: BoundParams, which: str) -> BoundReport:
    """Closed-form bound at the equalizing slack.

    ``which`` selects the variant.  With s = sqrt(alpha):

    - ``thm1``: exponent alpha m^2 / (2 (1 + s)^2), separation measured on
      the nominals, small regime.
    - ``cor1``: exponent alpha m^2 / (2 (2 + s)^2), separation measured on
      the true sources, small regime.
    - ``thm2``: exponent 2 alpha m^2 / (|X| + 2 s)^2, nominal separation,
      large regime.
    - ``cor2``: exponent 2 alpha m^2 / (3 |X| + 2 s)^2, true separation,
      large regime.

    Small-regime penalty is max(2 ln(M - 1), |X| ln 2); large-regime
    penalty is max(2 ln(M - 1), ln |X|).  The reported ``delta_used`` is
    the equalizing slack for the separation actually fed in.
    """
    if which not in BOUND_VARIANTS:
        raise BadParamsError(
            f"which must be one of {BOUND_VARIANTS}, got {which!r}"
        )
    small = which in _SMALL_VARIANTS
    wanted = Regime.SMALL if small else Regime.LARGE
    if params.regime is not wanted:
        raise BadParamsError(
            f"variant {which} requires regime {wanted.value!r}, "
            f"got {params.regime.value!r}"
        )
    root = math.sqrt(params.alpha)
    m = params.min_tv
    k = params.alphabet
    if which == "thm1":
        exponent = params.alpha * m * m / (2.0 * (1.0 + root) ** 2)
    elif which == "cor1":
        exponent = params.alpha * m * m / (2.0 * (2.0 + root) ** 2)
    elif which == "thm2":
        exponent = 2.0 * params.alpha * m * m / (k + 2.0 * root) ** 2
    else:
        exponent = 2.0 * params.alpha * m * m / (3.0 * k + 2.0 * root) ** 2
    if small:
        penalty = max(2.0 * math.log(params.num_hypotheses - 1), k * _LN2)
    else:
        penalty = max(2.0 * math.log(params.num_hypotheses - 1), math.log(k))
    value = 2.0 * params.num_hypotheses * math.exp(-params.n * exponent + penalty)
    used = delta_star(params.alpha, m, k, wanted)
    return BoundReport(value=value, exponent=exponent, penalty=penalty, delta_used=used)


def estimation_epsilon(alpha: float, alphabet: int, regime: Regime) -> float:
    """Estimation slack epsilon folded into the true-separation variants.

    Small regime: 1 / (2 (1 + sqrt(alpha))).  Large regime:
    |X| / (|X| + 2 sqrt(alpha)).
    """
    if not alpha > 0:
        raise BadParamsError(f"alpha must be positive, got {alpha}")
    if alphabet < 1:
        raise BadParamsError(f"alphabet must be >= 1, got {alphabet}")
    root = math.sqrt(alpha)
    if regime is Regime.SMALL:
        return 1.0 / (2.0 * (1.0 + root))
    if regime is Regime.LARGE:
        return alphabet / (alphabet + 2.0 * root)
    raise BadParamsError(f"regime must be a Regime, got {regime!r}")


def nominal_min_tv_lower_bound(min_tv_true: float, epsilon: float) -> float:
    """Nominal separation guaranteed by true separation under slack epsilon.

    If every nominal sits within epsilon * (its own pairwise separation) of
    its source, a double triangle inequality gives
    min TV(T_i, T_j) >= min TV(P_i, P_j) / (1 + 2 epsilon).
    """
    if not 0 < min_tv_true <= 1:
        raise BadParamsError(f"min_tv_true must lie in (0, 1], got {min_tv_true}")
    if not epsilon > 0:
        raise BadParamsError(f"epsilon must be positive, got {epsilon}")
    return min_tv_true / (1.0 + 2.0 * epsilon)


def alphabet_growth_limit(n: int, alpha: float, min_tv_true: float) -> float:
    """Largest |X| (as a real) keeping the small-regime bound nontrivial.

    Solves n alpha m^2 / (2 (2 + sqrt(alpha))^2) = |X| ln 2 for |X|: beyond
    this the penalty swallows the exponent and the bound exceeds 2M.
    """
    if n < 1:
        raise BadParamsError(f"n must be >= 1, got {n}")
    if not alpha > 0:
        raise BadParamsError(f"alpha must be positive, got {alpha}")
    if not 0 < min_tv_true <= 1:
        raise BadParamsError(f"min_tv_true must lie in (0, 1], got {min_tv_true}")
    root = math.sqrt(alpha)
    return n * alpha * min_tv_true**2 / (2.0 * _LN2 * (2.0 + root) ** 2)


def exponent_chain(p: Distribution, q: Distribution) -> Tuple[float, float, float]:
    """The exponent sandwich (V^2/2, -ln(1 - V^2)/2, C ln 2), all in nats.

    V is the total variation distance and C the Chernoff information in
    bits; the three terms are nondecreasing, so the deviation-test exponent
    V^2/2 is within the stated factors of the optimal error exponent.
    """
    v = total_variation(p, q)
    c_bits = chernoff(p, q).value
    first = 0.5 * v * v
    second = -0.5 * math.log1p(-v * v) if v < 1.0 else math.inf
    third = c_bits * _LN2
    return (first, second, third)
