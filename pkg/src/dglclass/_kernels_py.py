"""Pure numpy implementations of the hot kernels.

This is the fallback backend used when the compiled extension
(``dglclass._kernels``) is unavailable.  Both backends compute every set mass
as an exact int64 count sum followed by a single float division, and compare
integer counts (never floats) when forming Scheffé sets, so their outputs are
bitwise identical.  ``tests/test_kernels.py`` holds them to that.
"""

from __future__ import annotations

import numpy as np


def sample_from_cdf(cdf: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Map uniforms in [0, 1) to symbols by inverting the CDF.

    Symbol ``a`` is returned when ``u`` lands in ``[cdf[a-1], cdf[a])``.  The
    clip guards against rounding in the final cumulative entry.
    """
    idx = np.searchsorted(cdf, u, side="right")
    return np.minimum(idx, len(cdf) - 1).astype(np.int64, copy=False)


def histogram(symbols: np.ndarray, alphabet_size: int) -> np.ndarray:
    counts = np.bincount(symbols, minlength=alphabet_size)
    if len(counts) > alphabet_size:
        bad = int(symbols.max())
        raise ValueError(
            f"symbol {bad} out of range for alphabet of size {alphabet_size}"
        )
    return counts.astype(np.int64, copy=False)


def set_masses_from_counts(
    masks_int: np.ndarray, counts: np.ndarray, total: int
) -> np.ndarray:
    """Empirical mass of each set: exact integer count sums, one division."""
    return (masks_int @ counts) / float(total)


def max_abs_dev(nominal_mass: np.ndarray, mu_mass: np.ndarray) -> np.ndarray:
    """Per-hypothesis test statistic: max_A |T_j(A) - mu(A)|."""
    return np.abs(nominal_mass - mu_mass[None, :]).max(axis=1)


def run_trial_kernel(
    u: np.ndarray,
    prior_cdf: np.ndarray,
    truth_cdf: np.ndarray,
    n: int,
    train_length: int,
):
    """One simulated trial driven by a pre-drawn uniform buffer.

    Layout of ``u``: one draw for the true hypothesis, then ``M`` training
    blocks of ``train_length`` draws, then ``n`` test draws.  Consuming a
    single flat buffer pins the trial outcome to the buffer contents alone,
    which is what makes the compiled and fallback backends interchangeable.

    Returns ``(true_index, chosen_index, min_tv_nominal, test_counts)`` where
    ``min_tv_nominal`` is the smallest pairwise total variation distance
    among the empirical training distributions.
    """
    num_hypotheses, alphabet_size = truth_cdf.shape
    expected = 1 + num_hypotheses * train_length + n
    if len(u) != expected:
        raise ValueError(f"uniform buffer has length {len(u)}, expected {expected}")

    true_index = int(
        min(np.searchsorted(prior_cdf, u[0], side="right"), num_hypotheses - 1)
    )

    train_counts = np.empty((num_hypotheses, alphabet_size), dtype=np.int64)
    pos = 1
    for m in range(num_hypotheses):
        block = sample_from_cdf(truth_cdf[m], u[pos : pos + train_length])
        train_counts[m] = np.bincount(block, minlength=alphabet_size)
        pos += train_length
    test_block = sample_from_cdf(truth_cdf[true_index], u[pos : pos + n])
    test_counts = np.bincount(test_block, minlength=alphabet_size).astype(np.int64)

    left, right = np.triu_indices(num_hypotheses, k=1)
    masks_int = (train_counts[left] >= train_counts[right]).astype(np.int64)
    nominal_set = (train_counts @ masks_int.T) / float(train_length)
    mu_set = (masks_int @ test_counts) / float(n)
    stats = np.abs(nominal_set - mu_set[None, :]).max(axis=1)
    chosen = int(np.argmin(stats))

    pair_l1 = np.abs(train_counts[left] - train_counts[right]).sum(axis=1)
    min_tv_nominal = float(pair_l1.min()) / (2.0 * train_length)

    return true_index, chosen, min_tv_nominal, test_counts
