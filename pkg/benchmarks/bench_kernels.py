"""Timing comparison of the compiled and pure-Python kernel backends.

Run as: python benchmarks/bench_kernels.py
"""

import random
import time

from sfckit._kernels import _pure

try:
    from sfckit._kernels import _speed
except ImportError:
    _speed = None


def _time(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def random_graph(n, density, seed):
    rng = random.Random(seed)
    weights = [rng.random() for _ in range(n)]
    total = sum(weights)
    weights = [w / total for w in weights]
    adj = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                adj[i] |= 1 << j
                adj[j] |= 1 << i
    return adj, weights


def bench_partitions(backend, adj, weights):
    return lambda: backend.min_entropy_partitions(adj, weights)


def bench_simulate(backend, n):
    nx, ny, nu, nz = 4, 3, 4, 4
    rng = random.Random(5)
    kxy = sorted(rng.random() for _ in range(nx * ny - 1)) + [1.0]
    ku = [sorted(rng.random() for _ in range(nu - 1)) + [1.0] for _ in range(nx)]
    kz = [sorted(rng.random() for _ in range(nz - 1)) + [1.0] for _ in range(nu * ny)]
    return lambda: backend.simulate_counts(99, n, nx, ny, nu, nz, kxy, ku, kz)


def main():
    backends = [("python", _pure)]
    if _speed is not None:
        backends.append(("c", _speed))
    print(f"{'kernel':<28}" + "".join(f"{name:>12}" for name, _ in backends) + f"{'speedup':>10}")

    for label, size, density in [("partitions n=10 d=0.3", 10, 0.3),
                                 ("partitions n=12 d=0.5", 12, 0.5)]:
        adj, weights = random_graph(size, density, seed=size)
        times = [_time(bench_partitions(b, adj, weights)) for _, b in backends]
        ratio = times[0] / times[-1] if len(times) > 1 and times[-1] > 0 else 1.0
        print(f"{label:<28}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + f"{ratio:>9.1f}x")

    for label, n in [("simulate n=200000", 200_000), ("simulate n=1000000", 1_000_000)]:
        times = [_time(bench_simulate(b, n)) for _, b in backends]
        ratio = times[0] / times[-1] if len(times) > 1 and times[-1] > 0 else 1.0
        print(f"{label:<28}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times) + f"{ratio:>9.1f}x")

    if _speed is None:
        print("\ncompiled backend unavailable; showing pure-Python times only")


if __name__ == "__main__":
    main()
