"""Training-data driven classification and reference deciders.

``train`` turns M labeled training sequences into a classifier whose
nominals are the empirical training distributions; ``classify`` runs the
deviation test against them.  ``map_decide`` is the maximum a posteriori
decision under fully known truths, used as the matched-decision baseline.
``robustness_report`` checks the separation condition under which the
deviation test is guaranteed to behave: each true source must stay within
half the nominal separation (minus slack) of its own nominal.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .distributions import Distribution, Sequence, check_same_alphabet, histogram, total_variation
from .errors import (
    AlphabetMismatchError,
    BadPriorsError,
    FewerThanTwoHypothesesError,
    LengthMismatchError,
    NonpositiveDeltaError,
)
from .scheffe import DglDecision, ScheffeSystem, dgl_decide, system_from_counts

PRIOR_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class Classifier:
    """A Scheffé-set system built from empirical training distributions."""

    system: ScheffeSystem
    training_length: int

    @property
    def num_hypotheses(self) -> int:
        return self.system.num_hypotheses

    @property
    def alphabet_size(self) -> int:
        return self.system.alphabet_size


@dataclass(frozen=True, eq=False)
class RobustnessReport:
    """Per-hypothesis margins of the separation condition at slack ``delta``.

    ``tv_to_truth[i]`` is V(T_i, P_i), the distance from nominal i to its
    true source; ``min_other_tv[i]`` is min over j != i of V(T_i, T_j);
    ``margin[i] = (min_other_tv[i] - delta) / 2 - tv_to_truth[i]``.  The
    condition for hypothesis i holds when the margin is >= 0, and
    ``all_hold`` is the conjunction over i.
    """

    delta: float
    tv_to_truth: np.ndarray
    min_other_tv: np.ndarray
    margin: np.ndarray
    condition_holds: np.ndarray
    all_hold: bool


def train(training, alphabet_size: int) -> Classifier:
    """Build a classifier from one training sequence per hypothesis.

    All sequences must share one length N; the classifier's nominals are the
    empirical distributions counts / N.
    """
    training = list(training)
    if len(training) < 2:
        raise FewerThanTwoHypothesesError(
            f"need at least 2 training sequences, got {len(training)}"
        )
    lengths = {seq.length for seq in training}
    if len(lengths) != 1:
        raise LengthMismatchError(
            f"training sequences have unequal lengths {sorted(lengths)}"
        )
    total = lengths.pop()
    counts = np.stack([histogram(seq, alphabet_size) for seq in training])
    return Classifier(system=system_from_counts(counts, total), training_length=total)


def classify(classifier: Classifier, x: Sequence) -> DglDecision:
    """Deviation-test decision for ``x`` against the trained nominals."""
    return dgl_decide(classifier.system, x)


def map_decide(truths, priors, x: Sequence) -> int:
    """Maximum a posteriori hypothesis for ``x`` under known truths.

    Scores are log prior plus sequence log likelihood; a hypothesis whose
    support excludes an observed symbol is out of the running.  Ties (and
    the no-survivor corner) resolve to the lowest index.
    """
    truths = list(truths)
    if len(truths) < 2:
        raise FewerThanTwoHypothesesError(
            f"need at least 2 hypotheses, got {len(truths)}"
        )
    k = check_same_alphabet(truths)
    log_priors = _validated_log_priors(priors, len(truths))
    counts = histogram(x, k)
    probs = np.stack([t.probs for t in truths])
    log_safe = np.where(probs > 0, np.log(np.where(probs > 0, probs, 1.0)), 0.0)
    zero_int = (probs == 0).astype(np.int64)
    return _map_from_counts(log_priors, log_safe, zero_int, counts)


def _map_from_counts(
    log_priors: np.ndarray,
    log_safe: np.ndarray,
    zero_int: np.ndarray,
    counts: np.ndarray,
) -> int:
    scores = log_priors + log_safe @ counts
    violated = (zero_int @ counts) > 0
    scores = np.where(violated, -np.inf, scores)
    return int(np.argmax(scores))


def robustness_report(nominals, truths, delta: float) -> RobustnessReport:
    """Evaluate the separation condition for each hypothesis at slack ``delta``."""
    nominals = list(nominals)
    truths = list(truths)
    if len(nominals) != len(truths):
        raise LengthMismatchError(
            f"{len(nominals)} nominals but {len(truths)} truths"
        )
    if len(nominals) < 2:
        raise FewerThanTwoHypothesesError(
            f"need at least 2 hypotheses, got {len(nominals)}"
        )
    check_same_alphabet(nominals + truths)
    if not delta > 0:
        raise NonpositiveDeltaError(f"delta must be positive, got {delta}")

    m = len(nominals)
    tv_to_truth = np.array(
        [total_variation(nominals[i], truths[i]) for i in range(m)]
    )
    pairwise = np.zeros((m, m))
    for i in range(m):
        for j in range(i + 1, m):
            pairwise[i, j] = pairwise[j, i] = total_variation(nominals[i], nominals[j])
    np.fill_diagonal(pairwise, np.inf)
    min_other = pairwise.min(axis=1)
    margin = (min_other - delta) / 2.0 - tv_to_truth
    holds = margin >= 0.0
    return RobustnessReport(
        delta=float(delta),
        tv_to_truth=tv_to_truth,
        min_other_tv=min_other,
        margin=margin,
        condition_holds=holds,
        all_hold=bool(holds.all()),
    )


def _validated_log_priors(priors, num_hypotheses: int) -> np.ndarray:
    arr = np.asarray(priors, dtype=np.float64)
    if arr.shape != (num_hypotheses,):
        raise BadPriorsError(
            f"priors must have shape ({num_hypotheses},), got {arr.shape}"
        )
    if (arr < 0).any():
        raise BadPriorsError("priors contain a negative entry")
    total = float(arr.sum())
    if not abs(total - 1.0) <= PRIOR_SUM_TOLERANCE:
        raise BadPriorsError(f"priors sum to {total!r}, expected 1")
    with np.errstate(divide="ignore"):
        return np.log(arr)
