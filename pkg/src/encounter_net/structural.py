"""Static-graph statistics: size, density, core, degree, diameter, path length, clustering."""

from __future__ import annotations

import json
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TextIO

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ._backend import kernels
from .encounters import AggregateGraph


@dataclass(frozen=True)
class StructuralSummary:
    size: int
    edges: int
    density: float
    core: int
    avg_degree: float
    diameter: int
    avg_path_length: float
    avg_clustering: float

    def to_json(self) -> dict:
        """Table-style keys: Size, Edges, Density, Core, k, lambda_max, lambda, C."""
        return {
            "Size": self.size,
            "Edges": self.edges,
            "Density": self.density,
            "Core": self.core,
            "k": self.avg_degree,
            "lambda_max": self.diameter,
            "lambda": self.avg_path_length,
            "C": self.avg_clustering,
        }


@dataclass(frozen=True)
class DegreeProfile:
    degree_counts: dict[int, int]
    ck_profile: dict[int, float]


def density(size: int, edges: int) -> float:
    if size < 2:
        return 0.0
    return 2.0 * edges / (size * (size - 1))


def avg_degree(size: int, edges: int) -> float:
    return 2.0 * edges / size if size else 0.0


def default_threads() -> int:
    env = os.environ.get("ENCOUNTER_NET_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def largest_component(indptr, indices) -> np.ndarray:
    """Sorted node indices of the largest component.

    Equal-sized components are ranked by their smallest node index.
    """
    n = len(indptr) - 1
    if n == 0:
        return np.empty(0, dtype=np.int64)
    adj = csr_matrix((np.ones(len(indices), dtype=np.int8), indices, indptr), shape=(n, n))
    _, label = connected_components(adj, directed=False)
    sizes = np.bincount(label)
    first = np.full(len(sizes), n, dtype=np.int64)
    np.minimum.at(first, label, np.arange(n))
    best = min(range(len(sizes)), key=lambda c: (-sizes[c], first[c]))
    return np.flatnonzero(label == best).astype(np.int64)


def _path_stats(indptr, indices, sources, threads):
    if threads <= 1 or len(sources) < 64:
        return kernels.bfs_distance_sums(indptr, indices, sources)
    chunks = np.array_split(sources, threads * 4)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(lambda c: kernels.bfs_distance_sums(indptr, indices, c), chunks))
    return sum(p[0] for p in parts), max(p[1] for p in parts), sum(p[2] for p in parts)


def local_clustering(graph: AggregateGraph) -> tuple[np.ndarray, np.ndarray]:
    """Per-node (degree, local clustering); degree < 2 gives clustering 0."""
    indptr, indices = graph.csr()
    deg = np.diff(indptr)
    tri = kernels.triangles_per_node(indptr, indices)
    c = np.zeros(len(deg), dtype=float)
    mask = deg >= 2
    c[mask] = 2.0 * tri[mask] / (deg[mask] * (deg[mask] - 1))
    return deg, c


def summarize(graph: AggregateGraph, threads: int | None = None) -> StructuralSummary:
    """All eight table statistics.

    Diameter and mean path length are taken over the largest connected
    component only, with unweighted BFS from every node of it.
    """
    n = len(graph.nodes)
    if n == 0:
        raise ValueError("cannot summarize an empty graph")
    m = len(graph.edges)
    indptr, indices = graph.csr()
    core = largest_component(indptr, indices)
    if len(core) > 1:
        total, far, pairs = _path_stats(indptr, indices, core, threads or default_threads())
        lam = total / pairs
    else:
        far, lam = 0, 0.0
    _, c = local_clustering(graph)
    return StructuralSummary(
        size=n,
        edges=m,
        density=density(n, m),
        core=len(core),
        avg_degree=avg_degree(n, m),
        diameter=int(far),
        avg_path_length=float(lam),
        avg_clustering=float(c.mean()),
    )


def degree_profile(graph: AggregateGraph) -> DegreeProfile:
    deg, c = local_clustering(graph)
    counts: dict[int, int] = {}
    ck: dict[int, float] = {}
    for k in np.unique(deg):
        mask = deg == k
        counts[int(k)] = int(mask.sum())
        ck[int(k)] = float(c[mask].mean())
    return DegreeProfile(counts, ck)


def degrees(graph: AggregateGraph) -> dict[str, int]:
    indptr, _ = graph.csr()
    return dict(zip(graph.nodes, np.diff(indptr).tolist()))


def write_summary(summary: StructuralSummary, fh: TextIO) -> None:
    json.dump(summary.to_json(), fh, indent=2, sort_keys=False)
    fh.write("\n")


def write_profile(profile: DegreeProfile, fh: TextIO) -> None:
    fh.write("k,count,C_k\n")
    for k in sorted(profile.degree_counts):
        fh.write(f"{k},{profile.degree_counts[k]},{profile.ck_profile[k]!r}\n")


def write_degrees(graph: AggregateGraph, fh: TextIO) -> None:
    fh.write("device_id,degree\n")
    for node, k in degrees(graph).items():
        fh.write(f"{node},{k}\n")


def pseudofractal_graph(generation: int) -> AggregateGraph:
    """Deterministic scale-free 'pseudofractal' graph.

    Generation 0 is a single edge; each later generation adds, for every
    existing edge, a new node joined to both of its endpoints.
    """
    if generation < 0:
        raise ValueError("generation must be non-negative")
    edges = [(0, 1)]
    n = 2
    for _ in range(generation):
        new = []
        for u, v in edges:
            new.append((u, n))
            new.append((v, n))
            n += 1
        edges += new
    names = [f"v{i:06d}" for i in range(n)]
    return AggregateGraph.from_pairs(names, [(names[u], names[v]) for u, v in edges])
