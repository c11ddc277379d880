"""Compare the compiled and numpy partition-scan backends.

    python benchmarks/bench_enumerate.py --sizes 14 16 18 20 --repeat 3

Each instance is a random sparse graph of mostly semi-definite edges, so the
prefilter has work to do on every one of the 2^(n-1) partitions.
"""
import argparse
import time

import numpy as np

from mwconsensus import kernels
from mwconsensus.balance import _conflict_pairs, _edge_arrays, enumerate_nbs
from mwconsensus.graph import MatrixWeightedGraph, classify_weight


def bench_graph(n: int, d: int = 3, seed: int = 0) -> MatrixWeightedGraph:
    rng = np.random.default_rng(seed)
    pool = [v / np.linalg.norm(v) for v in rng.normal(size=(3, d))]
    edges = []
    pairs = [(i, i + 1) for i in range(1, n)]
    pairs += [(int(u), int(v)) for u, v in
              (sorted(rng.choice(np.arange(1, n + 1), 2, replace=False)) for _ in range(n))]
    seen = set()
    for u, v in pairs:
        if (u, v) in seen:
            continue
        seen.add((u, v))
        k = pool[int(rng.integers(len(pool)))]
        b = rng.normal(size=(d - 1, d))
        b -= np.outer(b @ k, k)
        w = b.T @ b
        edges.append((u, v, classify_weight(-w if rng.random() < 0.4 else w)))
    return MatrixWeightedGraph.from_arrays(n, d, edges)


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[12, 14, 16, 18, 20])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    backends = sorted(kernels.BACKENDS)
    print(f"backends available: {', '.join(backends)} (default {kernels.BACKEND})")
    print(f"{'n':>3} {'edges':>5} {'partitions':>11} " +
          " ".join(f"{b + ' [s]':>14}" for b in backends) +
          (f" {'speedup':>8}" if len(backends) > 1 else "") + f" {'enumerate [s]':>14}")
    for n in args.sizes:
        g = bench_graph(n)
        scan_args = _edge_arrays(g) + (_conflict_pairs(g),)
        results = {}
        for b in backends:
            results[b] = best_of(lambda: kernels.candidate_partitions(n, *scan_args, backend=b),
                                 args.repeat)
        outs = [r[1] for r in results.values()]
        assert all(np.array_equal(outs[0], o) for o in outs[1:]), "backends disagree"
        full, _ = best_of(lambda: enumerate_nbs(g), 1)
        row = f"{n:>3} {g.num_edges:>5} {1 << (n - 1):>11} "
        row += " ".join(f"{results[b][0]:>14.4f}" for b in backends)
        if len(backends) > 1:
            row += f" {results['numpy'][0] / results['compiled'][0]:>7.1f}x"
        print(row + f" {full:>14.4f}")


if __name__ == "__main__":
    main()
