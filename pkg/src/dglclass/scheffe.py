"""Scheffé-set systems and the deviation test over them.

For nominal distributions T_1, ..., T_M the system holds one set
A_ij = {a : T_i(a) >= T_j(a)} for every unordered pair i < j (ties belong to
the set), together with each nominal's mass on each set.  The test statistic
of hypothesis j against an empirical measure mu is

    D_j = max over sets A of |T_j(A) - mu(A)|

and the test accepts the hypothesis with the smallest statistic, breaking
ties toward the lowest index.

Set masses of empirical measures are computed from integer counts with a
single final division, so decisions never depend on float summation order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .distributions import Distribution, Sequence, check_same_alphabet, histogram
from .errors import AlphabetMismatchError, BadIndexError, FewerThanTwoHypothesesError


@dataclass(frozen=True, eq=False)
class ScheffeSystem:
    """Nominal distributions plus their pairwise Scheffé sets.

    ``masks`` is a (num_sets, alphabet_size) boolean matrix, one row per
    pair in the order (0,1), (0,2), ..., (1,2), ...; ``masks_int`` is the
    same matrix as int64 for exact count arithmetic; ``nominal_mass[j, s]``
    is the mass nominal j places on set s.
    """

    nominals: tuple
    pairs: tuple
    masks: np.ndarray
    masks_int: np.ndarray
    nominal_mass: np.ndarray

    @property
    def num_hypotheses(self) -> int:
        return len(self.nominals)

    @property
    def num_sets(self) -> int:
        return int(self.masks.shape[0])

    @property
    def alphabet_size(self) -> int:
        return int(self.masks.shape[1])


@dataclass(frozen=True)
class DglDecision:
    """Outcome of the deviation test.

    ``chosen`` is the accepted hypothesis as a 0-based index; ``statistics``
    holds the per-hypothesis deviation statistics D_j.
    """

    chosen: int
    statistics: np.ndarray


def build_scheffe_system(nominals) -> ScheffeSystem:
    """Assemble the Scheffé-set system for two or more nominal distributions."""
    nominals = tuple(nominals)
    if len(nominals) < 2:
        raise FewerThanTwoHypothesesError(
            f"need at least 2 nominal distributions, got {len(nominals)}"
        )
    check_same_alphabet(nominals)
    probs = np.stack([d.probs for d in nominals])
    masks, masks_int, pairs = _masks_from_matrix(probs)
    nominal_mass = np.ascontiguousarray(probs @ masks.T.astype(np.float64))
    return ScheffeSystem(
        nominals=nominals,
        pairs=pairs,
        masks=masks,
        masks_int=masks_int,
        nominal_mass=nominal_mass,
    )


def system_from_counts(counts: np.ndarray, total: int) -> ScheffeSystem:
    """Scheffé system for the empirical nominals ``counts / total``.

    ``counts`` is an int64 matrix of per-hypothesis symbol counts, each row
    summing to ``total``.  Masks come from integer count comparisons and the
    nominal set masses from exact integer sums, so the resulting system is
    bit-identical to what the trial kernels compute internally.
    """
    counts = np.ascontiguousarray(counts, dtype=np.int64)
    masks, masks_int, pairs = _masks_from_matrix(counts)
    nominal_mass = (counts @ masks_int.T) / float(total)
    nominals = tuple(Distribution(row / float(total)) for row in counts)
    return ScheffeSystem(
        nominals=nominals,
        pairs=pairs,
        masks=masks,
        masks_int=masks_int,
        nominal_mass=np.ascontiguousarray(nominal_mass),
    )


def dgl_statistic(system: ScheffeSystem, j: int, mu: Distribution) -> float:
    """Deviation statistic D_j of nominal ``j`` against the measure ``mu``."""
    if not 0 <= j < system.num_hypotheses:
        raise BadIndexError(
            f"hypothesis index {j} outside range 0..{system.num_hypotheses - 1}"
        )
    if mu.alphabet_size != system.alphabet_size:
        raise AlphabetMismatchError(
            f"measure alphabet {mu.alphabet_size} != system alphabet "
            f"{system.alphabet_size}"
        )
    mu_mass = system.masks.astype(np.float64) @ mu.probs
    return float(np.abs(system.nominal_mass[j] - mu_mass).max())


def dgl_decide(system: ScheffeSystem, x: Sequence) -> DglDecision:
    """Run the deviation test on the sequence ``x``."""
    counts = histogram(x, system.alphabet_size)
    mu_set = kernels.set_masses_from_counts(system.masks_int, counts, x.length)
    stats = kernels.max_abs_dev(system.nominal_mass, mu_set)
    return DglDecision(chosen=int(np.argmin(stats)), statistics=stats)


def decide_counts_batch(system: ScheffeSystem, counts: np.ndarray, n: int) -> np.ndarray:
    """Vectorized decisions for a batch of count vectors.

    ``counts`` has shape (batch, alphabet_size) with rows summing to ``n``.
    Returns the 0-based accepted index per row, with the same arithmetic and
    tie handling as :func:`dgl_decide`.
    """
    set_counts = counts @ system.masks_int.T
    mu_set = set_counts / float(n)
    devs = np.abs(system.nominal_mass[None, :, :] - mu_set[:, None, :])
    return devs.max(axis=2).argmin(axis=1)


def _masks_from_matrix(rows: np.ndarray):
    num = rows.shape[0]
    left, right = np.triu_indices(num, k=1)
    masks = np.ascontiguousarray(rows[left] >= rows[right])
    masks_int = np.ascontiguousarray(masks.astype(np.int64))
    pairs = tuple(zip(left.tolist(), right.tolist()))
    return masks, masks_int, pairs
