"""Pure-Python versions of the compiled kernels, used when the extension is absent."""

from collections import deque

import numpy as np


def bfs_distance_sums(indptr, indices, sources):
    indptr = indptr.tolist()
    indices = indices.tolist()
    n = len(indptr) - 1
    dist = [-1] * n
    total = far = pairs = 0
    for s in sources.tolist():
        dist[s] = 0
        q = deque([s])
        order = [s]
        while q:
            u = q.popleft()
            du = dist[u] + 1
            for v in indices[indptr[u]:indptr[u + 1]]:
                if dist[v] < 0:
                    dist[v] = du
                    q.append(v)
                    order.append(v)
                    total += du
                    pairs += 1
                    if du > far:
                        far = du
        for v in order:
            dist[v] = -1
    return total, far, pairs


def triangles_per_node(indptr, indices):
    n = len(indptr) - 1
    nbrs = [set(indices[indptr[u]:indptr[u + 1]].tolist()) for u in range(n)]
    out = np.zeros(n, dtype=np.int64)
    for u in range(n):
        for v in nbrs[u]:
            if v <= u:
                continue
            for w in nbrs[u] & nbrs[v]:
                if w > v:
                    out[u] += 1
                    out[v] += 1
                    out[w] += 1
    return out


def overlap_pairs(node, start, end):
    node = node.tolist()
    start = start.tolist()
    end = end.tolist()
    oi, oj, olo, ohi = [], [], [], []
    active = []
    for r in range(len(node)):
        s = start[r]
        active = [x for x in active if end[x] >= s]
        for x in active:
            if node[x] == node[r]:
                continue
            oi.append(x)
            oj.append(r)
            olo.append(s)
            ohi.append(min(end[x], end[r]))
        active.append(r)
    as_arr = lambda xs: np.asarray(xs, dtype=np.int64)
    return as_arr(oi), as_arr(oj), as_arr(olo), as_arr(ohi)


def replay(a, b, start, n_nodes, first, source, t0, expiry, uniforms, rate):
    a = a.tolist()
    b = b.tolist()
    start = start.tolist()
    u = uniforms.tolist() if uniforms is not None else None
    state = bytearray(max(n_nodes, 1))
    seen = bytearray(max(n_nodes, 1))
    state[source] = seen[source] = 1
    expiring = expiry >= 0
    queue = deque()
    if expiring:
        queue.append((t0 + expiry, source))
    times, counts = [], []
    count = ever = 1
    ext = -1

    def record(t):
        if times and times[-1] == t:
            counts[-1] = count
        else:
            times.append(t)
            counts.append(count)

    for i in range(first, len(a)):
        s = start[i]
        while queue and queue[0][0] <= s:
            rt, v = queue.popleft()
            state[v] = 0
            count -= 1
            if count == 0:
                ext = rt
            record(rt)
        if count == 0:
            break
        ia, ib = state[a[i]], state[b[i]]
        if ia == ib:
            continue
        if u is not None and not u[i] < rate:
            continue
        other = b[i] if ia else a[i]
        state[other] = 1
        count += 1
        if not seen[other]:
            seen[other] = 1
            ever += 1
        if expiring:
            queue.append((s + expiry, other))
        record(s)
    while queue:
        rt, _ = queue.popleft()
        count -= 1
        if count == 0:
            ext = rt
        record(rt)
    return np.asarray(times, dtype=np.int64), np.asarray(counts, dtype=np.int64), ever, ext
