"""Compare the compiled posterior kernel against the pure-Python fallback.

Runs the posterior sampling hot path (Dirichlet draws via Gamma variates,
per-draw IC and relative risks) through both backends, checks bitwise
agreement, and reports timings.

Usage: python3 benchmarks/bench_kernels.py [--draws N] [--pts M] [--arms K]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from shield._kernels import BACKEND, _fallback, stream_state

if BACKEND == "compiled":
    from shield._kernels import _core
else:
    _core = None


def _run(mod, shapes, mu, draws, seed):
    m = shapes.shape[0]
    ic = []
    rr = []
    for i in range(m):
        a, b = mod.posterior_ic_rr(shapes[i], mu, draws, stream_state(seed, i))
        ic.append(a)
        rr.append(b)
    return np.array(ic), np.array(rr)


def _bench(mod, shapes, mu, draws, seed, repeats=3):
    best = np.inf
    out = None
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = _run(mod, shapes, mu, draws, seed)
        best = min(best, time.perf_counter() - t0)
    return out, best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=20000)
    ap.add_argument("--pts", type=int, default=72)
    ap.add_argument("--arms", type=int, default=4)
    args = ap.parse_args()

    rng = np.random.default_rng(42)
    alpha = rng.uniform(0.5, 5.0, size=args.arms)
    mu = alpha / alpha.sum()
    shapes = rng.integers(0, 40, size=(args.pts, args.arms)) + alpha

    print(f"backend available: {BACKEND}")
    print(f"workload: {args.pts} PTs x {args.arms} arms x {args.draws} draws")

    (ic_py, rr_py), t_py = _bench(_fallback, shapes, mu, args.draws, 42)
    print(f"python fallback : {t_py:8.3f} s")

    if _core is None:
        print("compiled kernel : not built; skipping comparison")
        return

    (ic_c, rr_c), t_c = _bench(_core, shapes, mu, args.draws, 42)
    print(f"compiled kernel : {t_c:8.3f} s  ({t_py / t_c:.1f}x faster)")

    if np.array_equal(ic_py, ic_c) and np.array_equal(rr_py, rr_c):
        print("bitwise parity  : OK")
    else:
        nbad = int((ic_py != ic_c).sum() + (rr_py != rr_c).sum())
        raise SystemExit(f"bitwise parity  : FAILED ({nbad} differing values)")


if __name__ == "__main__":
    main()
