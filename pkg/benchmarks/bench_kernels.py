"""Time the compiled kernels against the NumPy fallback.

    python3 benchmarks/bench_kernels.py [--reads 200] [--sweeps 500] [--qubits 40]
"""

import argparse
import time

import numpy as np

from qals import kernels


def model(n, seed=0):
    rng = np.random.default_rng(seed)
    upper = np.triu(rng.normal(size=(n, n)), 1)
    return np.ascontiguousarray(upper + upper.T), rng.normal(size=n)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--reads", type=int, default=200)
    parser.add_argument("--sweeps", type=int, default=500)
    parser.add_argument("--qubits", type=int, default=40)
    parser.add_argument("--enum-qubits", type=int, default=18)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    w, v = model(args.qubits)
    betas = np.geomspace(0.1, 10.0, args.sweeps)
    we, ve = model(args.enum_qubits, 1)
    threads = kernels.thread_count()
    cases = {
        f"anneal {args.reads}x{args.sweeps} on {args.qubits} qubits":
            lambda impl: impl.anneal(w, v, betas, 0, args.reads, threads),
        f"exhaustive over {args.enum_qubits} qubits":
            lambda impl: impl.exhaustive_min(we, ve, 1e-12),
    }
    backends = kernels.available_backends()
    print(f"{'case':<40}" + "".join(f"{name:>12}" for name in backends) + f"{'speedup':>10}")
    for label, run in cases.items():
        times = {name: best_of(lambda: run(impl), args.repeat) for name, impl in backends.items()}
        row = f"{label:<40}" + "".join(f"{t:>11.3f}s" for t in times.values())
        if len(times) == 2:
            row += f"{times['python'] / times['compiled']:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
