"""Seeded Monte Carlo estimation of classification error.

A trial draws a hypothesis from the priors, draws M fresh training sequences
of length N = round(alpha * n) from the true sources, trains, draws a test
sequence of length n from the true hypothesis, and records whether the
deviation test (and optionally the MAP baseline) recovered it.  Training is
resampled every trial because the error being estimated averages over both
training and test randomness.

Every trial consumes exactly one Philox stream keyed by
``derive_seed(master_seed, point_index, trial_index)``, so results are a
pure function of the configuration and master seed: thread counts, chunk
scheduling and backend choice cannot change a single bit of the output.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

from . import kernels
from .bounds import BOUND_VARIANTS, BoundParams, Regime, theorem_bound
from .classifier import _map_from_counts, _validated_log_priors
from .distributions import Distribution, check_same_alphabet, total_variation
from .errors import (
    BadParamsError,
    FewerThanTwoHypothesesError,
    InvalidGridError,
)
from .rng import derive_seed, philox_stream
from .scheffe import ScheffeSystem, decide_counts_batch

_CHUNK_TRIALS = 1024
_ORACLE_BATCH = 8192

FIG1_ALPHAS = (0.1, 1.0, 10.0, 100.0)
FIG1_N_GRID = (20, 60, 100, 140, 200)
FIG2_ALPHAS = (0.5, 1.0, 2.0, 4.0, 8.0, 16.0)
FIG2_N = 60
DEFAULT_TRIALS = 10_000


class TrialResult(NamedTuple):
    dgl_correct: bool
    map_correct: Optional[bool]
    min_tv_nominal: float


@dataclass(frozen=True)
class LargeAlphabetFamilySpec:
    """Block family with alphabet growing polynomially in n.

    At test length n the alphabet is ceil(n ** alphabet_exponent) rounded up
    to a multiple of the hypothesis count; source i concentrates mass c/|X|
    on its own block of |X|/M symbols.
    """

    num_hypotheses: int
    c: float
    alphabet_exponent: float = 1.2

    def __post_init__(self):
        if self.num_hypotheses < 2:
            raise FewerThanTwoHypothesesError(
                f"need at least 2 hypotheses, got {self.num_hypotheses}"
            )
        if not 1.0 < self.c < self.num_hypotheses:
            raise BadParamsError(
                f"c must lie in (1, {self.num_hypotheses}), got {self.c}"
            )
        if not self.alphabet_exponent > 0:
            raise BadParamsError(
                f"alphabet_exponent must be positive, got {self.alphabet_exponent}"
            )

    def alphabet_for(self, n: int) -> int:
        raw = math.ceil(n**self.alphabet_exponent)
        m = self.num_hypotheses
        return ((raw + m - 1) // m) * m

    def truths_for(self, n: int) -> List[Distribution]:
        return large_alphabet_family(self.num_hypotheses, self.alphabet_for(n), self.c)


@dataclass(frozen=True)
class ExperimentConfig:
    """Grid of (alpha, n) points, each estimated with ``trials`` trials.

    Exactly one of ``truths`` (fixed sources) or ``family`` (sources rebuilt
    per n) must be given.  ``priors`` of None means uniform.  ``bound_set``
    lists which closed-form bound columns to tabulate; variants built on the
    nominal separation use the mean empirical nominal min-TV across trials,
    the true-separation variants use the exact min-TV of the sources.
    ``threads`` is a scheduling hint only and never changes results.
    """

    experiment: str
    alphas: Tuple[float, ...]
    n_grid: Tuple[int, ...]
    trials: int = DEFAULT_TRIALS
    master_seed: int = 0
    priors: Optional[Tuple[float, ...]] = None
    truths: Optional[Tuple[Distribution, ...]] = None
    family: Optional[LargeAlphabetFamilySpec] = None
    compare_map: bool = True
    bound_set: Tuple[str, ...] = ()
    ci_z: float = 3.0
    threads: int = 1

    def __post_init__(self):
        object.__setattr__(self, "alphas", tuple(float(a) for a in self.alphas))
        object.__setattr__(self, "n_grid", tuple(int(n) for n in self.n_grid))
        object.__setattr__(self, "bound_set", tuple(self.bound_set))
        if self.truths is not None:
            object.__setattr__(self, "truths", tuple(self.truths))
        if self.priors is not None:
            object.__setattr__(self, "priors", tuple(float(p) for p in self.priors))
        if not self.alphas or any(not a > 0 for a in self.alphas):
            raise InvalidGridError(f"alphas must be non-empty and positive: {self.alphas}")
        if not self.n_grid or any(n < 1 for n in self.n_grid):
            raise InvalidGridError(f"n_grid must be non-empty with n >= 1: {self.n_grid}")
        if self.trials < 1:
            raise InvalidGridError(f"trials must be >= 1, got {self.trials}")
        if (self.truths is None) == (self.family is None):
            raise InvalidGridError("exactly one of truths or family must be set")
        for which in self.bound_set:
            if which not in BOUND_VARIANTS:
                raise InvalidGridError(
                    f"unknown bound variant {which!r}; valid: {BOUND_VARIANTS}"
                )
        if not self.ci_z > 0:
            raise InvalidGridError(f"ci_z must be positive, got {self.ci_z}")
        if self.threads < 1:
            raise InvalidGridError(f"threads must be >= 1, got {self.threads}")


@dataclass(frozen=True)
class ResultRow:
    """One (alpha, n) grid point: counts, rates, interval, bounds."""

    experiment: str
    n: int
    train_length: int
    alpha: float
    num_hypotheses: int
    alphabet: int
    trials: int
    error_count: int
    error_rate: float
    ci_low: float
    ci_high: float
    map_error_rate: Optional[float]
    bound_values: Dict[str, float]
    min_tv_nominal: float
    min_tv_true: float


def training_length(alpha: float, n: int) -> int:
    """N = round(alpha * n), half away from zero, floored at 1."""
    return max(1, int(math.floor(alpha * n + 0.5)))


def fig1_truths() -> List[Distribution]:
    """The five fixed 3-symbol sources of the small-alphabet experiment."""
    rows = [
        [0.1, 0.8, 0.1],
        [0.3, 0.2, 0.5],
        [0.6, 0.1, 0.3],
        [0.4, 0.4, 0.2],
        [0.3, 0.6, 0.1],
    ]
    return [Distribution(np.array(row)) for row in rows]


def large_alphabet_family(num_hypotheses: int, alphabet: int, c: float) -> List[Distribution]:
    """Block sources over {0, ..., alphabet-1}.

    Source i puts mass c/alphabet on each symbol of its half-open block
    [i * alphabet/M, (i+1) * alphabet/M) and (M - c)/((M - 1) * alphabet)
    elsewhere.  Every pair is at total variation (c - 1)/(M - 1).
    """
    m = num_hypotheses
    if m < 2:
        raise FewerThanTwoHypothesesError(f"need at least 2 hypotheses, got {m}")
    if alphabet < m or alphabet % m != 0:
        raise BadParamsError(
            f"alphabet must be a positive multiple of {m}, got {alphabet}"
        )
    if not 1.0 < c < m:
        raise BadParamsError(f"c must lie in (1, {m}), got {c}")
    heavy = c / alphabet
    light = (m - c) / ((m - 1) * alphabet)
    block = alphabet // m
    out = []
    for i in range(m):
        probs = np.full(alphabet, light)
        probs[i * block : (i + 1) * block] = heavy
        out.append(Distribution(probs))
    return out


def wilson_interval(errors: int, trials: int, z: float) -> Tuple[float, float]:
    """Wilson score interval for a binomial proportion, clamped to [0, 1]."""
    if not 0 <= errors <= trials:
        raise BadParamsError(f"errors must lie in [0, {trials}], got {errors}")
    if trials < 1:
        raise BadParamsError(f"trials must be >= 1, got {trials}")
    if not z > 0:
        raise BadParamsError(f"z must be positive, got {z}")
    p_hat = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p_hat + z2 / (2.0 * trials)) / denom
    half = z * math.sqrt(p_hat * (1.0 - p_hat) / trials + z2 / (4.0 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True, eq=False)
class _PointSetup:
    """Precomputed per-grid-point arrays shared by every trial."""

    num_hypotheses: int
    alphabet: int
    prior_cdf: np.ndarray
    truth_cdf: np.ndarray
    log_priors: np.ndarray
    log_safe: np.ndarray
    zero_int: np.ndarray
    min_tv_true: float


def _point_setup(truths, priors) -> _PointSetup:
    truths = list(truths)
    if len(truths) < 2:
        raise FewerThanTwoHypothesesError(
            f"need at least 2 hypotheses, got {len(truths)}"
        )
    k = check_same_alphabet(truths)
    m = len(truths)
    if priors is None:
        prior_arr = np.full(m, 1.0 / m)
    else:
        prior_arr = np.asarray(priors, dtype=np.float64)
    log_priors = _validated_log_priors(prior_arr, m)
    probs = np.stack([t.probs for t in truths])
    min_tv = min(
        total_variation(truths[i], truths[j])
        for i in range(m)
        for j in range(i + 1, m)
    )
    return _PointSetup(
        num_hypotheses=m,
        alphabet=k,
        prior_cdf=np.cumsum(prior_arr),
        truth_cdf=np.ascontiguousarray(np.cumsum(probs, axis=1)),
        log_priors=log_priors,
        log_safe=np.where(probs > 0, np.log(np.where(probs > 0, probs, 1.0)), 0.0),
        zero_int=(probs == 0).astype(np.int64),
        min_tv_true=float(min_tv),
    )


def _one_trial(
    setup: _PointSetup, n: int, train_length: int, seed: int, compare_map: bool
) -> TrialResult:
    stream = philox_stream(seed)
    u = stream.random(1 + setup.num_hypotheses * train_length + n)
    true_index, chosen, min_tv_nominal, test_counts = kernels.run_trial_kernel(
        u, setup.prior_cdf, setup.truth_cdf, n, train_length
    )
    map_correct = None
    if compare_map:
        map_choice = _map_from_counts(
            setup.log_priors, setup.log_safe, setup.zero_int, test_counts
        )
        map_correct = map_choice == true_index
    return TrialResult(chosen == true_index, map_correct, min_tv_nominal)


def run_trial(
    truths,
    alpha: float,
    n: int,
    priors=None,
    trial_seed: int = 0,
    compare_map: bool = True,
) -> TrialResult:
    """One independent trial; deterministic given ``trial_seed``."""
    if not alpha > 0:
        raise BadParamsError(f"alpha must be positive, got {alpha}")
    if n < 1:
        raise BadParamsError(f"n must be >= 1, got {n}")
    setup = _point_setup(truths, priors)
    return _one_trial(setup, n, training_length(alpha, n), trial_seed, compare_map)


def run_experiment(cfg: ExperimentConfig) -> List[ResultRow]:
    """Estimate the error at every (alpha, n) grid point of ``cfg``.

    Grid points are visited alpha-major, n-minor; the point index in that
    order keys the per-trial seeds.
    """
    rows = []
    point_index = 0
    for alpha in cfg.alphas:
        for n in cfg.n_grid:
            truths = cfg.truths if cfg.truths is not None else cfg.family.truths_for(n)
            setup = _point_setup(truths, cfg.priors)
            n_train = training_length(alpha, n)
            errors, map_errors, tv_sum = _run_point(setup, n, n_train, cfg, point_index)
            error_rate = errors / cfg.trials
            ci_low, ci_high = wilson_interval(errors, cfg.trials, cfg.ci_z)
            mean_tv_nominal = tv_sum / cfg.trials
            bound_values = {
                which: _bound_value(
                    which, n, alpha, setup,
                    mean_tv_nominal if which in ("thm1", "thm2") else setup.min_tv_true,
                )
                for which in cfg.bound_set
            }
            rows.append(
                ResultRow(
                    experiment=cfg.experiment,
                    n=n,
                    train_length=n_train,
                    alpha=alpha,
                    num_hypotheses=setup.num_hypotheses,
                    alphabet=setup.alphabet,
                    trials=cfg.trials,
                    error_count=errors,
                    error_rate=error_rate,
                    ci_low=ci_low,
                    ci_high=ci_high,
                    map_error_rate=(map_errors / cfg.trials) if cfg.compare_map else None,
                    bound_values=bound_values,
                    min_tv_nominal=mean_tv_nominal,
                    min_tv_true=setup.min_tv_true,
                )
            )
            point_index += 1
    return rows


def _run_point(
    setup: _PointSetup, n: int, n_train: int, cfg: ExperimentConfig, point_index: int
) -> Tuple[int, int, float]:
    """All trials of one grid point, chunked identically for any thread count."""
    chunks = [
        (start, min(start + _CHUNK_TRIALS, cfg.trials))
        for start in range(0, cfg.trials, _CHUNK_TRIALS)
    ]

    def work(chunk):
        lo, hi = chunk
        errs = 0
        map_errs = 0
        tv = 0.0
        for t in range(lo, hi):
            seed = derive_seed(cfg.master_seed, point_index, t)
            result = _one_trial(setup, n, n_train, seed, cfg.compare_map)
            errs += not result.dgl_correct
            if result.map_correct is not None:
                map_errs += not result.map_correct
            tv += result.min_tv_nominal
        return errs, map_errs, tv

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            partials = list(pool.map(work, chunks))
    else:
        partials = [work(chunk) for chunk in chunks]
    errors = sum(p[0] for p in partials)
    map_errors = sum(p[1] for p in partials)
    tv_sum = math.fsum(p[2] for p in partials)
    return errors, map_errors, tv_sum


def _bound_value(which: str, n: int, alpha: float, setup: _PointSetup, min_tv: float) -> float:
    if not 0 < min_tv <= 1:
        return math.nan
    regime = Regime.SMALL if which in ("thm1", "cor1") else Regime.LARGE
    params = BoundParams(
        n=n,
        alpha=alpha,
        num_hypotheses=setup.num_hypotheses,
        alphabet=setup.alphabet,
        min_tv=min_tv,
        regime=regime,
    )
    return theorem_bound(params, which).value


def estimate_error_fixed_nominals(
    system: ScheffeSystem,
    truths,
    priors,
    n: int,
    trials: int,
    master_seed: int = 0,
) -> int:
    """Error count of the deviation test with ``system`` held fixed.

    No training happens: test sequences are drawn from the truths and
    decided against the injected nominals.  This matches the conditional
    error that exact enumeration computes, so the two are comparable.
    Vectorized in batches; one Philox stream keyed by ``master_seed``.
    """
    if n < 1:
        raise BadParamsError(f"n must be >= 1, got {n}")
    if trials < 1:
        raise BadParamsError(f"trials must be >= 1, got {trials}")
    setup = _point_setup(truths, priors)
    if setup.alphabet != system.alphabet_size:
        raise BadParamsError(
            f"truths alphabet {setup.alphabet} != system alphabet {system.alphabet_size}"
        )
    stream = philox_stream(master_seed)
    m = setup.num_hypotheses
    k = setup.alphabet
    errors = 0
    done = 0
    while done < trials:
        batch = min(_ORACLE_BATCH, trials - done)
        hyp = np.minimum(
            np.searchsorted(setup.prior_cdf, stream.random(batch), side="right"),
            m - 1,
        )
        u = stream.random((batch, n))
        symbols = np.empty((batch, n), dtype=np.int64)
        for i in range(m):
            mask = hyp == i
            if mask.any():
                symbols[mask] = np.minimum(
                    np.searchsorted(setup.truth_cdf[i], u[mask], side="right"), k - 1
                )
        flat = symbols + (np.arange(batch) * k)[:, None]
        counts = np.bincount(flat.ravel(), minlength=batch * k).reshape(batch, k)
        decisions = decide_counts_batch(system, counts.astype(np.int64), n)
        errors += int((decisions != hyp).sum())
        done += batch
    return errors


def fig1_config(
    trials: int = DEFAULT_TRIALS,
    master_seed: int = 0,
    threads: int = 1,
    compare_map: bool = True,
) -> ExperimentConfig:
    """The small-alphabet experiment: 5 fixed sources, alpha and n grids."""
    return ExperimentConfig(
        experiment="fig1",
        alphas=FIG1_ALPHAS,
        n_grid=FIG1_N_GRID,
        trials=trials,
        master_seed=master_seed,
        truths=tuple(fig1_truths()),
        compare_map=compare_map,
        bound_set=("thm1", "cor1"),
        threads=threads,
    )


def fig2_config(
    trials: int = DEFAULT_TRIALS,
    master_seed: int = 0,
    threads: int = 1,
    n: int = FIG2_N,
    alphas: Tuple[float, ...] = FIG2_ALPHAS,
    compare_map: bool = True,
) -> ExperimentConfig:
    """The large-alphabet experiment: alpha sweep at fixed n.

    The sweep axis is alpha (not n) because the phenomenon of interest is
    the onset of consistent classification as training grows; the alphabet
    is pinned by n through the family spec.
    """
    return ExperimentConfig(
        experiment="fig2",
        alphas=alphas,
        n_grid=(n,),
        trials=trials,
        master_seed=master_seed,
        family=LargeAlphabetFamilySpec(num_hypotheses=3, c=1.4),
        compare_map=compare_map,
        bound_set=("thm2", "cor2"),
        threads=threads,
    )
