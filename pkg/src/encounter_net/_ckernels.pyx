# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops. Signatures and results match ``_pykernels`` exactly."""

import numpy as np

from libc.stdint cimport int64_t, uint8_t


def bfs_distance_sums(const int64_t[::1] indptr, const int64_t[::1] indices,
                      const int64_t[::1] sources):
    """Sum of BFS distances and max eccentricity from each source.

    Returns ``(total_distance, max_distance, reached_pairs)`` over ordered
    (source, target) pairs with target reachable and distinct from source.
    """
    cdef Py_ssize_t n = indptr.shape[0] - 1
    cdef int64_t[::1] dist = np.full(n, -1, dtype=np.int64)
    cdef int64_t[::1] queue = np.empty(max(n, 1), dtype=np.int64)
    cdef int64_t total = 0, far = 0, pairs = 0
    cdef Py_ssize_t si, head, tail, k
    cdef int64_t u, v, s, du
    with nogil:
        for si in range(sources.shape[0]):
            s = sources[si]
            dist[s] = 0
            queue[0] = s
            head = 0
            tail = 1
            while head < tail:
                u = queue[head]
                head += 1
                du = dist[u]
                for k in range(indptr[u], indptr[u + 1]):
                    v = indices[k]
                    if dist[v] < 0:
                        dist[v] = du + 1
                        queue[tail] = v
                        tail += 1
                        total += du + 1
                        pairs += 1
                        if du + 1 > far:
                            far = du + 1
            for k in range(tail):
                dist[queue[k]] = -1
    return total, far, pairs


def triangles_per_node(const int64_t[::1] indptr, const int64_t[::1] indices):
    """Triangle count at each node; adjacency rows must be sorted."""
    cdef Py_ssize_t n = indptr.shape[0] - 1
    out_arr = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] out = out_arr
    cdef Py_ssize_t u, k, p, q, pe, qe
    cdef int64_t v
    with nogil:
        for u in range(n):
            for k in range(indptr[u], indptr[u + 1]):
                v = indices[k]
                if v <= u:
                    continue
                # common neighbours w > v of u and v
                p = indptr[u]
                pe = indptr[u + 1]
                q = indptr[v]
                qe = indptr[v + 1]
                while p < pe and q < qe:
                    if indices[p] < indices[q]:
                        p += 1
                    elif indices[p] > indices[q]:
                        q += 1
                    else:
                        if indices[p] > v:
                            out[u] += 1
                            out[v] += 1
                            out[indices[p]] += 1
                        p += 1
                        q += 1
    return out_arr


def overlap_pairs(const int64_t[::1] node, const int64_t[::1] start,
                  const int64_t[::1] end):
    """All pairs of inclusive integer intervals that share at least one point.

    Input runs must be sorted by start. Returns arrays ``(i, j, lo, hi)`` of
    run indices and the inclusive intersection, one row per overlapping pair
    of runs belonging to different nodes, ordered by the later run's index.
    """
    cdef Py_ssize_t m = node.shape[0]
    cdef int64_t[::1] active = np.empty(max(m, 1), dtype=np.int64)
    cdef Py_ssize_t nact, r, k, w, total = 0, pos
    cdef int64_t x
    cdef int pass_no
    i_arr = j_arr = lo_arr = hi_arr = None
    cdef int64_t[::1] oi, oj, olo, ohi
    for pass_no in range(2):
        if pass_no == 1:
            i_arr = np.empty(total, dtype=np.int64)
            j_arr = np.empty(total, dtype=np.int64)
            lo_arr = np.empty(total, dtype=np.int64)
            hi_arr = np.empty(total, dtype=np.int64)
            oi = i_arr
            oj = j_arr
            olo = lo_arr
            ohi = hi_arr
        nact = 0
        pos = 0
        with nogil:
            for r in range(m):
                w = 0
                for k in range(nact):
                    x = active[k]
                    if end[x] >= start[r]:
                        active[w] = x
                        w += 1
                nact = w
                for k in range(nact):
                    x = active[k]
                    if node[x] == node[r]:
                        continue
                    if pass_no == 0:
                        total += 1
                    else:
                        oi[pos] = x
                        oj[pos] = r
                        olo[pos] = start[r]
                        ohi[pos] = end[x] if end[x] < end[r] else end[r]
                        pos += 1
                active[nact] = r
                nact += 1
    return i_arr, j_arr, lo_arr, hi_arr


def replay(const int64_t[::1] a, const int64_t[::1] b, const int64_t[::1] start,
           Py_ssize_t n_nodes, Py_ssize_t first, int64_t source, int64_t t0,
           int64_t expiry, uniforms, double rate):
    """Replay encounters ``first..`` from one injected node.

    ``expiry < 0`` means infections never expire (SI). ``uniforms`` is either
    None (certain transmission) or a float array aligned with the encounters.
    Returns ``(times, counts, ever_infected, extinction_time)``; extinction
    time is -1 when infection never dies out (SI).
    """
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t cap = 2 * (m - first) + 2 if m > first else 2
    times_arr = np.empty(cap, dtype=np.int64)
    counts_arr = np.empty(cap, dtype=np.int64)
    cdef int64_t[::1] times = times_arr
    cdef int64_t[::1] counts = counts_arr
    cdef uint8_t[::1] state = np.zeros(max(n_nodes, 1), dtype=np.uint8)
    cdef uint8_t[::1] seen = np.zeros(max(n_nodes, 1), dtype=np.uint8)
    cdef int64_t[::1] q_node = np.empty(m - first + 1 if m > first else 1, dtype=np.int64)
    cdef int64_t[::1] q_time = np.empty(m - first + 1 if m > first else 1, dtype=np.int64)
    cdef const double[::1] u
    cdef bint use_u = uniforms is not None
    if use_u:
        u = uniforms
    cdef Py_ssize_t qh = 0, qt = 0, ns = 0, i
    cdef int64_t count = 1, ever = 1, s, other, rt, ext = -1
    cdef bint expiring = expiry >= 0
    cdef bint ia, ib
    with nogil:
        state[source] = 1
        seen[source] = 1
        if expiring:
            q_node[qt] = source
            q_time[qt] = t0 + expiry
            qt += 1
        for i in range(first, m):
            s = start[i]
            while qh < qt and q_time[qh] <= s:
                rt = q_time[qh]
                state[q_node[qh]] = 0
                qh += 1
                count -= 1
                if count == 0:
                    ext = rt
                if ns > 0 and times[ns - 1] == rt:
                    counts[ns - 1] = count
                else:
                    times[ns] = rt
                    counts[ns] = count
                    ns += 1
            if count == 0:
                break
            ia = state[a[i]] != 0
            ib = state[b[i]] != 0
            if ia == ib:
                continue
            if use_u and not (u[i] < rate):
                continue
            other = b[i] if ia else a[i]
            state[other] = 1
            count += 1
            if seen[other] == 0:
                seen[other] = 1
                ever += 1
            if expiring:
                q_node[qt] = other
                q_time[qt] = s + expiry
                qt += 1
            if ns > 0 and times[ns - 1] == s:
                counts[ns - 1] = count
            else:
                times[ns] = s
                counts[ns] = count
                ns += 1
        while qh < qt:
            rt = q_time[qh]
            qh += 1
            count -= 1
            if count == 0:
                ext = rt
            if ns > 0 and times[ns - 1] == rt:
                counts[ns - 1] = count
            else:
                times[ns] = rt
                counts[ns] = count
                ns += 1
    return times_arr[:ns].copy(), counts_arr[:ns].copy(), ever, ext
