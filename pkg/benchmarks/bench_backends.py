"""Benchmark the compiled kernels against the pure numpy fallback.

Both backends produce bitwise-identical results (the test suite enforces
this); this script measures what the compiled extension buys.  Run from the
repository root:

    python3 benchmarks/bench_backends.py [--reps 7] [--trials 2000]
"""

import argparse
import time

import numpy as np

from dglclass import _kernels_py

try:
    from dglclass import _kernels as _compiled
except ImportError:
    _compiled = None


def best_of(fn, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def trial_inputs(num_hypotheses, alphabet, n, train_length, seed):
    rng = np.random.default_rng(seed)
    probs = rng.random((num_hypotheses, alphabet)) + 1e-3
    probs /= probs.sum(axis=1, keepdims=True)
    truth_cdf = np.ascontiguousarray(np.cumsum(probs, axis=1))
    prior_cdf = np.cumsum(np.full(num_hypotheses, 1.0 / num_hypotheses))
    u = rng.random(1 + num_hypotheses * train_length + n)
    return u, prior_cdf, truth_cdf


def bench_sample(impl, reps):
    rng = np.random.default_rng(0)
    cdf = np.cumsum(np.full(64, 1.0 / 64.0))
    u = rng.random(1_000_000)
    return best_of(lambda: impl.sample_from_cdf(cdf, u), reps)


def bench_histogram(impl, reps):
    rng = np.random.default_rng(1)
    symbols = rng.integers(0, 64, size=1_000_000).astype(np.int64)
    return best_of(lambda: impl.histogram(symbols, 64), reps)


def bench_masses(impl, reps):
    rng = np.random.default_rng(2)
    masks = rng.integers(0, 2, size=(45, 128)).astype(np.int64)
    counts = rng.integers(0, 1000, size=128).astype(np.int64)
    total = int(counts.sum())

    def run():
        for _ in range(1000):
            impl.set_masses_from_counts(masks, counts, total)

    return best_of(run, reps)


def bench_trials(impl, reps, trials, num_hypotheses, alphabet, n, alpha):
    train_length = max(1, round(alpha * n))
    u, prior_cdf, truth_cdf = trial_inputs(
        num_hypotheses, alphabet, n, train_length, seed=3
    )

    def run():
        for _ in range(trials):
            impl.run_trial_kernel(u, prior_cdf, truth_cdf, n, train_length)

    return best_of(run, reps)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=7,
                        help="repetitions per measurement (best is kept)")
    parser.add_argument("--trials", type=int, default=2000,
                        help="trials per run_trial_kernel measurement")
    args = parser.parse_args()

    if _compiled is None:
        print("compiled extension not available; nothing to compare")
        return

    rows = [
        ("sample_from_cdf (1e6 draws, |X|=64)",
         lambda impl: bench_sample(impl, args.reps)),
        ("histogram (1e6 symbols, |X|=64)",
         lambda impl: bench_histogram(impl, args.reps)),
        ("set_masses x1000 (45 sets, |X|=128)",
         lambda impl: bench_masses(impl, args.reps)),
        (f"run_trial x{args.trials} (M=5, |X|=3, n=200, a=10)",
         lambda impl: bench_trials(impl, args.reps, args.trials, 5, 3, 200, 10.0)),
        (f"run_trial x{args.trials} (M=3, |X|=138, n=60, a=8)",
         lambda impl: bench_trials(impl, args.reps, args.trials, 3, 138, 60, 8.0)),
    ]

    name_w = max(len(name) for name, _ in rows)
    print(f"{'benchmark':<{name_w}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}")
    for name, runner in rows:
        t_py = runner(_kernels_py)
        t_c = runner(_compiled)
        print(f"{name:<{name_w}}  {t_py * 1e3:>8.2f}ms  {t_c * 1e3:>8.2f}ms  "
              f"{t_py / t_c:>7.1f}x")


if __name__ == "__main__":
    main()
