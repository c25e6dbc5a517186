"""The compiled and pure-Python kernels must agree exactly."""

import os
import subprocess
import sys

import numpy as np
import pytest

from encounter_net import _backend, _pykernels

ck = pytest.importorskip("encounter_net._ckernels")


def random_csr(rng, n, p):
    m = np.triu(rng.random((n, n)) < p, 1)
    m = m | m.T
    indptr = np.concatenate([[0], np.cumsum(m.sum(axis=1))]).astype(np.int64)
    indices = np.concatenate([np.flatnonzero(row) for row in m] or [[]]).astype(np.int64)
    return indptr, indices


@pytest.mark.parametrize("seed", range(20))
def test_graph_kernels_agree(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 60))
    indptr, indices = random_csr(rng, n, rng.uniform(0.01, 0.5))
    sources = np.arange(n, dtype=np.int64)
    assert tuple(ck.bfs_distance_sums(indptr, indices, sources)) == tuple(
        _pykernels.bfs_distance_sums(indptr, indices, sources)
    )
    assert np.array_equal(ck.triangles_per_node(indptr, indices), _pykernels.triangles_per_node(indptr, indices))


@pytest.mark.parametrize("seed", range(20))
def test_overlap_pairs_agree(seed):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(0, 80))
    node = rng.integers(0, 10, k)
    start = rng.integers(0, 100, k)
    end = start + rng.integers(0, 10, k)
    order = np.lexsort((node, start))
    args = [np.ascontiguousarray(x[order], dtype=np.int64) for x in (node, start, end)]
    got, ref = ck.overlap_pairs(*args), _pykernels.overlap_pairs(*args)
    for g, r in zip(got, ref):
        assert np.array_equal(g, r)


@pytest.mark.parametrize("seed", range(40))
@pytest.mark.parametrize("expiry", [-1, 0, 3, 50])
def test_replay_agrees(seed, expiry):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 12))
    k = int(rng.integers(0, 60))
    a = rng.integers(0, n - 1, k)
    b = a + 1 + (rng.integers(0, n, k) % (n - 1 - a).clip(1))
    start = np.sort(rng.integers(0, 100, k))
    arrs = [np.ascontiguousarray(x, dtype=np.int64) for x in (a, b, start)]
    src = int(rng.integers(0, n))
    t0 = int(rng.integers(0, 100))
    first = int(np.searchsorted(start, t0))
    u = rng.random(k) if seed % 2 else None
    rate = 0.5 if u is not None else 1.0
    got = ck.replay(*arrs, n, first, src, t0, expiry, u, rate)
    ref = _pykernels.replay(*arrs, n, first, src, t0, expiry, u, rate)
    assert np.array_equal(got[0], ref[0]) and np.array_equal(got[1], ref[1])
    assert tuple(got[2:]) == tuple(ref[2:])


def test_backend_reports_selection():
    assert _backend.BACKEND in ("cython", "python")
    assert _backend.kernels is (ck if _backend.BACKEND == "cython" else _pykernels)


def test_pure_python_override():
    env = dict(os.environ, ENCOUNTER_NET_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import encounter_net; print(encounter_net.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
