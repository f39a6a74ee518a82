"""Both kernel backends must agree bit for bit, not just approximately."""

import os
import subprocess
import sys

import numpy as np
import pytest

from dglclass import kernels
from dglclass import _kernels_py

BACKENDS = [("python", _kernels_py)]
try:
    from dglclass import _kernels as _compiled_mod

    BACKENDS.append(("compiled", _compiled_mod))
except ImportError:
    _compiled_mod = None

needs_compiled = pytest.mark.skipif(
    _compiled_mod is None, reason="compiled extension not built"
)


def _cdf(probs):
    return np.cumsum(np.asarray(probs, dtype=np.float64))


@pytest.mark.parametrize("name,impl", BACKENDS)
def test_sample_from_cdf_basic(name, impl):
    cdf = _cdf([0.25, 0.25, 0.5])
    u = np.array([0.0, 0.24, 0.25, 0.49, 0.5, 0.99])
    out = impl.sample_from_cdf(cdf, u)
    assert out.dtype == np.int64
    assert list(out) == [0, 0, 1, 1, 2, 2]


@pytest.mark.parametrize("name,impl", BACKENDS)
def test_sample_from_cdf_clips_top(name, impl):
    # a cdf whose last entry sits just below 1.0 must still map u near 1
    top = np.nextafter(1.0, 0.0)
    cdf = np.array([0.3, top])
    out = impl.sample_from_cdf(cdf, np.array([top]))
    assert list(out) == [1]


@pytest.mark.parametrize("name,impl", BACKENDS)
def test_histogram_roundtrip(name, impl):
    out = impl.histogram(np.array([0, 2, 2, 1, 0, 0], dtype=np.int64), 4)
    assert list(out) == [3, 1, 2, 0]
    with pytest.raises(ValueError):
        impl.histogram(np.array([0, 4], dtype=np.int64), 4)
    with pytest.raises(ValueError):
        impl.histogram(np.array([-1], dtype=np.int64), 4)


@pytest.mark.parametrize("name,impl", BACKENDS)
def test_set_masses_and_max_dev(name, impl):
    masks = np.array([[1, 0, 1], [0, 1, 0]], dtype=np.int64)
    counts = np.array([2, 5, 3], dtype=np.int64)
    masses = impl.set_masses_from_counts(masks, counts, 10)
    assert list(masses) == [0.5, 0.5]
    nominal = np.array([[0.75, 0.25], [0.5, 1.0]])
    dev = impl.max_abs_dev(nominal, masses)
    assert list(dev) == [0.25, 0.5]


@needs_compiled
def test_sample_from_cdf_backends_agree():
    rng = np.random.default_rng(71)
    for _ in range(20):
        k = int(rng.integers(1, 12))
        v = rng.random(k) + 1e-3
        cdf = _cdf(v / v.sum())
        u = rng.random(10_000)
        a = _kernels_py.sample_from_cdf(cdf, u)
        b = _compiled_mod.sample_from_cdf(cdf, u)
        assert np.array_equal(a, b)
    # boundary values exactly on cdf entries must land identically
    cdf = _cdf([0.25, 0.5, 0.25])
    u = np.array([0.0, 0.25, 0.75, np.nextafter(1.0, 0.0)])
    assert np.array_equal(
        _kernels_py.sample_from_cdf(cdf, u), _compiled_mod.sample_from_cdf(cdf, u)
    )


@needs_compiled
def test_histogram_backends_agree():
    rng = np.random.default_rng(73)
    for _ in range(10):
        k = int(rng.integers(1, 9))
        symbols = rng.integers(0, k, size=500).astype(np.int64)
        assert np.array_equal(
            _kernels_py.histogram(symbols, k), _compiled_mod.histogram(symbols, k)
        )


@needs_compiled
def test_masses_and_dev_backends_agree():
    rng = np.random.default_rng(79)
    for _ in range(10):
        s = int(rng.integers(1, 12))
        k = int(rng.integers(1, 9))
        m = int(rng.integers(2, 7))
        masks = rng.integers(0, 2, size=(s, k)).astype(np.int64)
        counts = rng.integers(0, 50, size=k).astype(np.int64)
        total = max(1, int(counts.sum()))
        a = _kernels_py.set_masses_from_counts(masks, counts, total)
        b = _compiled_mod.set_masses_from_counts(masks, counts, total)
        assert np.array_equal(a, b)
        nominal = rng.random((m, s))
        assert np.array_equal(
            _kernels_py.max_abs_dev(nominal, a), _compiled_mod.max_abs_dev(nominal, b)
        )


@needs_compiled
def test_run_trial_kernel_backends_bitwise():
    rng = np.random.default_rng(83)
    for _ in range(25):
        m = int(rng.integers(2, 7))
        k = int(rng.integers(2, 9))
        n = int(rng.integers(1, 60))
        n_train = int(rng.integers(1, 80))
        probs = rng.random((m, k)) + 1e-3
        probs /= probs.sum(axis=1, keepdims=True)
        truth_cdf = np.ascontiguousarray(np.cumsum(probs, axis=1))
        prior = rng.random(m) + 0.1
        prior_cdf = np.cumsum(prior / prior.sum())
        u = rng.random(1 + m * n_train + n)
        res_a = _kernels_py.run_trial_kernel(u, prior_cdf, truth_cdf, n, n_train)
        res_b = _compiled_mod.run_trial_kernel(u, prior_cdf, truth_cdf, n, n_train)
        assert res_a[0] == res_b[0]
        assert res_a[1] == res_b[1]
        assert res_a[2] == res_b[2]  # exact float equality, not approximate
        assert np.array_equal(res_a[3], res_b[3])


@pytest.mark.parametrize("name,impl", BACKENDS)
def test_run_trial_kernel_buffer_length(name, impl):
    truth_cdf = np.ascontiguousarray(
        np.cumsum(np.array([[0.5, 0.5], [0.2, 0.8]]), axis=1)
    )
    prior_cdf = np.array([0.5, 1.0])
    with pytest.raises(ValueError):
        impl.run_trial_kernel(np.zeros(4), prior_cdf, truth_cdf, 2, 2)


@pytest.mark.parametrize("name,impl", BACKENDS)
def test_run_trial_kernel_outputs(name, impl):
    # deterministic buffer: truth draw picks source 1, training blocks are
    # pinned to single symbols, test sequence all symbol 1
    truth_cdf = np.ascontiguousarray(
        np.cumsum(np.array([[1.0, 0.0], [0.0, 1.0]]), axis=1)
    )
    prior_cdf = np.array([0.5, 1.0])
    u = np.array([0.7, 0.1, 0.1, 0.1, 0.1, 0.5, 0.5])
    true_index, chosen, min_tv, counts = impl.run_trial_kernel(
        u, prior_cdf, truth_cdf, 2, 2
    )
    assert true_index == 1
    assert chosen == 1
    assert min_tv == 1.0  # training histograms [2,0] vs [0,2]
    assert list(counts) == [0, 2]


def test_active_backend_is_consistent():
    assert kernels.active_backend() in ("compiled", "python")
    if _compiled_mod is not None:
        assert kernels.active_backend() == "compiled"
        assert kernels.run_trial_kernel is _compiled_mod.run_trial_kernel
    else:
        assert kernels.run_trial_kernel is _kernels_py.run_trial_kernel


def test_backend_env_override():
    env = dict(os.environ, DGLCLASS_BACKEND="python")
    code = (
        "from dglclass import kernels; "
        "assert kernels.active_backend() == 'python'; "
        "print('ok')"
    )
    proc = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.strip() == "ok"


def test_backend_env_rejects_unknown():
    env = dict(os.environ, DGLCLASS_BACKEND="fortran")
    proc = subprocess.run(
        [sys.executable, "-c", "import dglclass.kernels"],
        env=env,
        capture_output=True,
        text=True,
    )
    assert proc.returncode != 0
    assert "DGLCLASS_BACKEND" in proc.stderr
