"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--corpus 300] [--repeat 3]

Three workloads: the simplex game kernel over the payoff matrices of a
seeded random corpus, and both mixture-sweep kernels over 1e5 mixtures.
Each backend's result is checked against the other before timing.
"""
import argparse
import time

import numpy as np

from roeminimax import kernels, random_corpus
from roeminimax._accel import NUMBA_AVAILABLE


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def simplex_workload(corpus, backend):
    fn = kernels.KERNELS[backend]["simplex_game"]
    payoffs = []
    for inst in corpus:
        P = inst.ratios - inst.ratios.min() + 1.0
        payoffs.append((P, 50 * sum(P.shape) + 100, 1e-12 * P.max()))

    def run():
        return [fn(P, it, eps) for P, it, eps in payoffs]
    return run


def mixture_workloads(backend, n=12, count=100_000, seed=0):
    rng = np.random.default_rng(seed)
    W = rng.dirichlet(np.ones(n), size=count)
    beta, alg = rng.uniform(0.1, 10, n), rng.uniform(0.1, 10, n)
    k = kernels.KERNELS[backend]
    return {
        "roe_over_mixtures": lambda: k["roe_over_mixtures"](beta, alg, W),
        "eor_over_mixtures": lambda: k["eor_over_mixtures"](beta / alg, W),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--corpus", type=int, default=300)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not NUMBA_AVAILABLE:
        raise SystemExit("numba is not importable (or ROEMINIMAX_DISABLE_NUMBA is set); nothing to compare")

    corpus = list(random_corpus(args.corpus, seed=0))
    work = {}
    for backend in ("numpy", "numba"):
        work[backend] = {"simplex_game (corpus)": simplex_workload(corpus, backend)}
        work[backend].update(mixture_workloads(backend))

    print(f"{'kernel':<24}{'numpy s':>12}{'numba s':>12}{'speedup':>10}")
    for name in work["numpy"]:
        ref, fast = work["numpy"][name](), work["numba"][name]()  # also triggers compilation
        if name.startswith("simplex"):
            for (x0, y0, _, s0), (x1, y1, _, s1) in zip(ref, fast):
                assert s0 == s1 == kernels.STATUS_OPTIMAL
                assert abs(x0.sum() - x1.sum()) <= 1e-9 * x0.sum()
        else:
            assert np.allclose(ref, fast, rtol=1e-12, atol=0)
        t_np = best_of(work["numpy"][name], args.repeat)
        t_nb = best_of(work["numba"][name], args.repeat)
        print(f"{name:<24}{t_np:>12.4f}{t_nb:>12.4f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
