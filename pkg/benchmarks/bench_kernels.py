"""Compare the compiled and pure-numpy kernel backends.

Run with ``python benchmarks/bench_kernels.py``; prints one timing line per kernel
and backend, plus the maximum difference between backends.
"""

import argparse
import time

import numpy as np

from eisenstein_lk import _kernels
from eisenstein_lk.group import exp_alg
from eisenstein_lk.levy import GeneratorTriple, LevyMeasureDiscrete, simulate


def best_of(fn, repeat):
    times, out = [], None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def bench_accumulate(samples, nodes, N, repeat):
    rng = np.random.default_rng(0)
    gs = [exp_alg(rng.normal(size=3) * 0.5) for _ in range(samples)]
    a = np.array([g.a for g in gs])
    b = np.array([g.b for g in gs])
    w = np.full(samples, 1.0 / samples)
    return lambda: _kernels.accumulate_modes(a, b, w, 1.0, N, nodes)


def bench_evolve(paths, steps):
    rng = np.random.default_rng(0)
    incr = rng.normal(size=(steps, paths, 3)) * 0.01
    a0 = np.ones(paths, dtype=complex)
    b0 = np.zeros(paths, dtype=complex)
    no_events = np.zeros(0, dtype=np.int64)
    return lambda: _kernels.evolve_paths(a0, b0, incr, False, no_events, no_events, np.zeros(0, dtype=np.int32),
                                         np.ones(1, dtype=complex), np.zeros(1, dtype=complex),
                                         steps, steps, 1000)[0]


def bench_simulate(paths, steps):
    levy = LevyMeasureDiscrete([(exp_alg((0.3, 0, 0)), 1.0)])
    gen = GeneratorTriple([0.1, 0, 0.2], np.diag([0.1, 0.1, 0.05]), levy)
    return lambda: simulate(gen, 1.0, steps, paths, seed=1, record_every=steps).a


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--samples", type=int, default=20_000)
    p.add_argument("--nodes", type=int, default=512)
    p.add_argument("--window", type=int, default=8)
    p.add_argument("--paths", type=int, default=5_000)
    p.add_argument("--steps", type=int, default=1_000)
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()

    backends = _kernels.available_backends()
    cases = {
        f"accumulate_modes ({args.samples} samples x {args.nodes} nodes, N={args.window})":
            bench_accumulate(args.samples, args.nodes, args.window, args.repeat),
        f"evolve_paths ({args.paths} paths x {args.steps} steps)": bench_evolve(args.paths, args.steps),
        f"simulate ({args.paths} paths x {args.steps} steps)": bench_simulate(args.paths, args.steps),
    }
    previous = _kernels.get_backend()
    try:
        for label, fn in cases.items():
            results = {}
            for name in backends:
                _kernels.set_backend(name)
                results[name] = best_of(fn, args.repeat)
                print(f"{label:60s} {name:8s} {results[name][0]:8.3f} s")
            if len(results) == 2:
                (tc, oc), (tp, op) = results["cython"], results["python"]
                print(f"{'':60s} speedup {tp / tc:6.1f}x, max diff {np.max(np.abs(oc - op)):.1e}")
    finally:
        _kernels.set_backend(previous)


if __name__ == "__main__":
    main()
