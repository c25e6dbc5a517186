"""Slow, obviously-correct reference computations used to check the fast paths."""

import itertools
import random

INF = float("inf")


def floyd_warshall(nodes, pairs):
    idx = {v: i for i, v in enumerate(nodes)}
    n = len(nodes)
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for u, v in pairs:
        d[idx[u]][idx[v]] = d[idx[v]][idx[u]] = 1
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return d


def structural_oracle(nodes, pairs):
    """Table statistics by all-pairs distances and explicit triangle triples."""
    nodes = sorted(nodes)
    n = len(nodes)
    d = floyd_warshall(nodes, pairs)
    # components via reachability rows; largest, ties to smallest member
    comps = []
    seen = set()
    for i in range(n):
        if i in seen:
            continue
        comp = [j for j in range(n) if d[i][j] < INF]
        seen.update(comp)
        comps.append(comp)
    core = min(comps, key=lambda c: (-len(c), min(c)))
    dists = [d[i][j] for i in core for j in core if i < j]
    lam = sum(dists) / len(dists) if dists else 0.0
    lam_max = max(dists) if dists else 0
    adj = {v: set() for v in nodes}
    for u, v in pairs:
        adj[u].add(v)
        adj[v].add(u)
    local = {}
    for v in nodes:
        k = len(adj[v])
        if k < 2:
            local[v] = 0.0
            continue
        links = sum(1 for x, y in itertools.combinations(sorted(adj[v]), 2) if y in adj[x])
        local[v] = links / (k * (k - 1) / 2)
    m = len(pairs)
    return {
        "size": n,
        "edges": m,
        "density": 2 * m / (n * (n - 1)) if n >= 2 else 0.0,
        "core": len(core),
        "avg_degree": 2 * m / n,
        "diameter": lam_max,
        "avg_path_length": lam,
        "avg_clustering": sum(local.values()) / n,
        "degrees": {v: len(adj[v]) for v in nodes},
        "local": local,
    }


def random_graph(rng: random.Random, max_nodes=50):
    n = rng.randint(1, max_nodes)
    p = rng.choice([0.02, 0.05, 0.1, 0.2, 0.4, 0.8])
    nodes = [f"d{i:02d}" for i in range(n)]
    pairs = [(nodes[i], nodes[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return nodes, pairs


def reachable_by_paths(encounters, source, t0):
    """Devices reachable from ``source`` injected at ``t0`` along index-increasing
    chains of encounters, each starting no earlier than ``t0``.

    ``encounters`` is a list of ``(a, b, start)`` already in replay order.
    Enumerates every chain explicitly (exponential; tiny traces only).
    """
    reached = {source}

    def extend(node, last_index):
        for i in range(last_index + 1, len(encounters)):
            a, b, s = encounters[i]
            if s < t0 or node not in (a, b):
                continue
            other = b if node == a else a
            reached.add(other)
            extend(other, i)

    extend(source, -1)
    return reached


def si_curve_by_paths(encounters, source, t0):
    """Earliest arrival per device via explicit chain enumeration, as ``{device: time}``."""
    best = {source: None}

    def extend(node, last_index):
        for i in range(last_index + 1, len(encounters)):
            a, b, s = encounters[i]
            if s < t0 or node not in (a, b):
                continue
            other = b if node == a else a
            if other != source and (other not in best or s < best[other]):
                best[other] = s
            extend(other, i)

    extend(source, -1)
    return best
