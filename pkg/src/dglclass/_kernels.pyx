# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled implementations of the hot kernels.

Mirrors ``dglclass._kernels_py`` exactly: integer count accumulation with a
single rounding division per mass, integer comparisons for Scheffé sets, and
first-index tie breaks.  Outputs are bitwise identical to the fallback.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport INFINITY, fabs

cnp.import_array()

ctypedef cnp.int64_t i64


cdef inline Py_ssize_t _search_right(const double* cdf, Py_ssize_t k, double u) noexcept nogil:
    # First index where cdf[i] > u (numpy searchsorted side="right"),
    # clipped to k - 1.
    cdef Py_ssize_t lo = 0, hi = k, mid
    while lo < hi:
        mid = (lo + hi) >> 1
        if cdf[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    if lo >= k:
        lo = k - 1
    return lo


def sample_from_cdf(const double[::1] cdf not None, const double[::1] u not None):
    cdef Py_ssize_t n = u.shape[0], k = cdf.shape[0], t
    out = np.empty(n, dtype=np.int64)
    cdef i64[::1] o = out
    with nogil:
        for t in range(n):
            o[t] = _search_right(&cdf[0], k, u[t])
    return out


def histogram(const i64[::1] symbols not None, Py_ssize_t alphabet_size):
    counts = np.zeros(alphabet_size, dtype=np.int64)
    cdef i64[::1] c = counts
    cdef Py_ssize_t t, n = symbols.shape[0]
    cdef i64 s
    for t in range(n):
        s = symbols[t]
        if s < 0 or s >= alphabet_size:
            raise ValueError(
                f"symbol {s} out of range for alphabet of size {alphabet_size}"
            )
        c[s] += 1
    return counts


def set_masses_from_counts(const i64[:, ::1] masks_int not None,
                           const i64[::1] counts not None,
                           i64 total):
    cdef Py_ssize_t num_sets = masks_int.shape[0], k = masks_int.shape[1], s, a
    out = np.empty(num_sets, dtype=np.float64)
    cdef double[::1] o = out
    cdef i64 acc
    with nogil:
        for s in range(num_sets):
            acc = 0
            for a in range(k):
                if masks_int[s, a] != 0:
                    acc += counts[a]
            o[s] = acc / (<double> total)
    return out


def max_abs_dev(const double[:, ::1] nominal_mass not None,
                const double[::1] mu_mass not None):
    cdef Py_ssize_t num_hyp = nominal_mass.shape[0], num_sets = nominal_mass.shape[1]
    cdef Py_ssize_t j, s
    out = np.empty(num_hyp, dtype=np.float64)
    cdef double[::1] o = out
    cdef double worst, dev
    with nogil:
        for j in range(num_hyp):
            worst = 0.0
            for s in range(num_sets):
                dev = fabs(nominal_mass[j, s] - mu_mass[s])
                if dev > worst:
                    worst = dev
            o[j] = worst
    return out


def run_trial_kernel(const double[::1] u not None,
                     const double[::1] prior_cdf not None,
                     const double[:, ::1] truth_cdf not None,
                     Py_ssize_t n,
                     Py_ssize_t train_length):
    cdef Py_ssize_t num_hyp = truth_cdf.shape[0], k = truth_cdf.shape[1]
    cdef Py_ssize_t expected = 1 + num_hyp * train_length + n
    if u.shape[0] != expected:
        raise ValueError(
            f"uniform buffer has length {u.shape[0]}, expected {expected}"
        )

    cdef Py_ssize_t true_index = _search_right(&prior_cdf[0], num_hyp, u[0])

    train_counts_arr = np.zeros((num_hyp, k), dtype=np.int64)
    test_counts_arr = np.zeros(k, dtype=np.int64)
    cdef i64[:, ::1] tc = train_counts_arr
    cdef i64[::1] xc = test_counts_arr
    cdef Py_ssize_t num_sets = num_hyp * (num_hyp - 1) // 2
    nominal_set_arr = np.empty((num_hyp, num_sets), dtype=np.float64)
    mu_set_arr = np.empty(num_sets, dtype=np.float64)
    cdef double[:, ::1] ns = nominal_set_arr
    cdef double[::1] ms = mu_set_arr
    acc_arr = np.empty(num_hyp, dtype=np.int64)
    cdef i64[::1] acc = acc_arr

    cdef Py_ssize_t pos, m, t, i, j, a, s, chosen
    cdef const double* row
    cdef i64 xacc, l1, l1_min, d
    cdef double worst, dev, best, min_tv

    with nogil:
        pos = 1
        for m in range(num_hyp):
            row = &truth_cdf[m, 0]
            for t in range(train_length):
                tc[m, _search_right(row, k, u[pos])] += 1
                pos += 1
        row = &truth_cdf[true_index, 0]
        for t in range(n):
            xc[_search_right(row, k, u[pos])] += 1
            pos += 1

        s = 0
        l1_min = -1
        for i in range(num_hyp):
            for j in range(i + 1, num_hyp):
                for m in range(num_hyp):
                    acc[m] = 0
                xacc = 0
                l1 = 0
                for a in range(k):
                    d = tc[i, a] - tc[j, a]
                    l1 += d if d >= 0 else -d
                    if tc[i, a] >= tc[j, a]:
                        for m in range(num_hyp):
                            acc[m] += tc[m, a]
                        xacc += xc[a]
                for m in range(num_hyp):
                    ns[m, s] = acc[m] / (<double> train_length)
                ms[s] = xacc / (<double> n)
                if l1_min < 0 or l1 < l1_min:
                    l1_min = l1
                s += 1
        min_tv = l1_min / (2.0 * train_length)

        best = INFINITY
        chosen = 0
        for m in range(num_hyp):
            worst = 0.0
            for s in range(num_sets):
                dev = fabs(ns[m, s] - ms[s])
                if dev > worst:
                    worst = dev
            if worst < best:
                best = worst
                chosen = m

    return int(true_index), int(chosen), float(min_tv), test_counts_arr
