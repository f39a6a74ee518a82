"""Exact error probabilities by multinomial enumeration.

For small n and alphabet size the distribution of the test-sequence
histogram is an explicit multinomial, so the error probability of any
decision rule that depends on the sequence only through its histogram can
be summed exactly.  This is the ground truth the Monte Carlo estimates are
checked against.
"""

from __future__ import annotations

import itertools
import math
from typing import Callable, Iterator, List, Tuple

import numpy as np
from scipy.special import gammaln

from .classifier import _map_from_counts, _validated_log_priors
from .distributions import Distribution, check_same_alphabet
from .errors import BadParamsError, TooLargeError
from .scheffe import ScheffeSystem, decide_counts_batch

DEFAULT_CAP = 10_000_000
_CHUNK = 65_536


def histogram_count(n: int, k: int) -> int:
    """Number of histograms of n draws over k symbols: C(n + k - 1, k - 1)."""
    return math.comb(n + k - 1, k - 1)


def enumerate_histograms(n: int, k: int, cap: int = DEFAULT_CAP) -> Iterator[Tuple[int, ...]]:
    """Yield every length-k tuple of non-negative ints summing to n.

    Order puts larger leading coordinates first: for n=2, k=2 the output is
    (2,0), (1,1), (0,2).  Raises TooLargeError up front when the total count
    exceeds ``cap``.
    """
    if n < 1:
        raise BadParamsError(f"n must be >= 1, got {n}")
    if k < 1:
        raise BadParamsError(f"k must be >= 1, got {k}")
    total = histogram_count(n, k)
    if total > cap:
        raise TooLargeError(
            f"{total} histograms for n={n}, k={k} exceeds cap {cap}"
        )
    return _compositions(n, k)


def _compositions(n: int, k: int) -> Iterator[Tuple[int, ...]]:
    if k == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(n - first, k - 1):
            yield (first,) + rest


def exact_dgl_error(
    system: ScheffeSystem,
    truths,
    priors,
    n: int,
    cap: int = DEFAULT_CAP,
) -> float:
    """Exact error probability of the deviation test under ``system``.

    ``truths`` generate the test sequence (hypothesis i with prior i); the
    decision rule is the one :func:`dglclass.scheffe.dgl_decide` applies.
    """
    truths = list(truths)
    k = check_same_alphabet(truths)
    if k != system.alphabet_size:
        raise BadParamsError(
            f"truths alphabet {k} != system alphabet {system.alphabet_size}"
        )
    if len(truths) != system.num_hypotheses:
        raise BadParamsError(
            f"{len(truths)} truths for a system of {system.num_hypotheses} hypotheses"
        )

    def decide(hists: np.ndarray) -> np.ndarray:
        return decide_counts_batch(system, hists, n)

    return _exact_error(decide, truths, priors, n, cap)


def exact_map_error(truths, priors, n: int, cap: int = DEFAULT_CAP) -> float:
    """Exact error probability of the MAP rule under fully known truths."""
    truths = list(truths)
    check_same_alphabet(truths)
    log_priors = _validated_log_priors(priors, len(truths))
    probs = np.stack([t.probs for t in truths])
    log_safe = np.where(probs > 0, np.log(np.where(probs > 0, probs, 1.0)), 0.0)
    zero_int = (probs == 0).astype(np.int64)

    def decide(hists: np.ndarray) -> np.ndarray:
        scores = hists @ log_safe.T + log_priors[None, :]
        violated = (hists @ zero_int.T) > 0
        scores = np.where(violated, -np.inf, scores)
        return scores.argmax(axis=1)

    return _exact_error(decide, truths, priors, n, cap)


def _exact_error(
    decide: Callable[[np.ndarray], np.ndarray],
    truths: List[Distribution],
    priors,
    n: int,
    cap: int,
) -> float:
    """Sum Pr[histogram] over decision-error histograms, per hypothesis."""
    num = len(truths)
    k = truths[0].alphabet_size
    prior_arr = np.exp(_validated_log_priors(priors, num))
    probs = np.stack([t.probs for t in truths])
    log_safe = np.where(probs > 0, np.log(np.where(probs > 0, probs, 1.0)), 0.0)
    zero_int = (probs == 0).astype(np.int64)
    log_nfac = float(gammaln(n + 1))

    err_chunks: List[List[float]] = [[] for _ in range(num)]
    gen = enumerate_histograms(n, k, cap)
    while True:
        block = list(itertools.islice(gen, _CHUNK))
        if not block:
            break
        hists = np.asarray(block, dtype=np.int64)
        base = log_nfac - gammaln(hists + 1).sum(axis=1)
        cross = hists @ log_safe.T
        log_pmf = base[:, None] + cross
        pmf = np.exp(log_pmf)
        pmf[(hists @ zero_int.T) > 0] = 0.0
        decisions = decide(hists)
        for i in range(num):
            wrong = decisions != i
            err_chunks[i].append(float(pmf[wrong, i].sum()))
    per_hyp = [math.fsum(chunks) for chunks in err_chunks]
    return float(np.dot(prior_arr, per_hyp))
