"""Compare the compiled kernels with the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from encounter_net import _pykernels
from encounter_net.encounters import AggregateGraph
from encounter_net.growth import GrowthConfig, simulate

try:
    from encounter_net import _ckernels
except ImportError:
    _ckernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases():
    rng = np.random.default_rng(0)
    n = 1500
    pairs = {tuple(sorted(map(int, rng.choice(n, 2, replace=False)))) for _ in range(12_000)}
    names = [f"v{i:04d}" for i in range(n)]
    g = AggregateGraph.from_pairs(names, [(names[u], names[v]) for u, v in sorted(pairs)])
    indptr, indices = g.csr()
    sources = np.arange(0, n, 10, dtype=np.int64)

    run = simulate(GrowthConfig(1000, 10_000, freq_scale=0.05, presence_scale=0.0007, seed=1))
    arr = run.trace.arrays()
    runs = run.runs[np.lexsort((run.runs[:, 0], run.runs[:, 1]))]
    node, start, end = (np.ascontiguousarray(runs[:, c]) for c in range(3))

    return {
        "bfs_distance_sums (150 sources, 1500 nodes)": lambda k: k.bfs_distance_sums(indptr, indices, sources),
        "triangles_per_node (12k edges)": lambda k: k.triangles_per_node(indptr, indices),
        f"overlap_pairs ({len(node)} runs)": lambda k: k.overlap_pairs(node, start, end),
        f"replay SIS ({len(arr.a)} encounters)": lambda k: k.replay(
            arr.a, arr.b, arr.start, len(arr.names), 0, 0, 0, 3 * 86400, None, 1.0
        ),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if _ckernels is None:
        print("compiled extension not built; only the Python timings are shown")
    print(f"{'kernel':48s} {'python':>10s} {'cython':>10s} {'speedup':>8s}")
    for name, fn in cases().items():
        py = best_of(lambda: fn(_pykernels), args.repeat)
        if _ckernels is None:
            print(f"{name:48s} {py:10.4f}")
            continue
        cy = best_of(lambda: fn(_ckernels), args.repeat)
        print(f"{name:48s} {py:10.4f} {cy:10.4f} {py / cy:7.1f}x")


if __name__ == "__main__":
    main()
