import itertools
import random

import pytest

from encounter_net.encounters import Encounter, TemporalTrace, build_encounters
from encounter_net.ingest import Session
from encounter_net.temporal import link_stats, node_stats, rank_correlation


def test_node_stats_disjoint_sessions():
    out = node_stats([Session("d", "s1", 0, 100), Session("d", "s1", 200, 250)])
    assert [(n.device_id, n.n_p, n.n_f) for n in out] == [("d", 150, 2)]


def test_node_stats_union_across_scanners():
    out = node_stats([Session("d", "s1", 0, 100), Session("d", "s2", 50, 150)])
    assert (out[0].n_p, out[0].n_f) == (150, 2)


def test_node_stats_absent_device_not_emitted():
    assert [n.device_id for n in node_stats([Session("a", "s", 0, 1)])] == ["a"]


def test_link_stats_sum_and_count():
    trace = TemporalTrace([Encounter("A", "B", "s", 50, 100), Encounter("A", "B", "s", 120, 130)])
    assert [(l.l_p, l.l_f) for l in link_stats(trace)] == [(60, 2)]


def test_link_stats_single_and_absent():
    trace = TemporalTrace([Encounter("A", "B", "s", 0, 7)], devices=["C"])
    out = link_stats(trace)
    assert [(l.a, l.b, l.l_p, l.l_f) for l in out] == [("A", "B", 7, 1)]


def test_spearman_examples():
    assert rank_correlation([1, 2, 3], [1, 2, 3]) == pytest.approx(1.0)
    assert rank_correlation([1, 2, 3], [3, 2, 1]) == pytest.approx(-1.0)
    # ranks differ by (-1, 1, -1, 1): 1 - 6*4 / (4*15) = 0.6
    assert rank_correlation([1, 2, 3, 4], [2, 1, 4, 3]) == pytest.approx(0.6, abs=1e-12)


def test_spearman_ties_use_average_ranks():
    # x ranks (1.5, 1.5, 3), y ranks (1, 2, 3)
    rho = rank_correlation([5, 5, 9], [1, 2, 3])
    rx, ry = [1.5, 1.5, 3.0], [1.0, 2.0, 3.0]
    mx, my = sum(rx) / 3, sum(ry) / 3
    num = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    den = (sum((a - mx) ** 2 for a in rx) * sum((b - my) ** 2 for b in ry)) ** 0.5
    assert rho == pytest.approx(num / den, abs=1e-12)


def test_spearman_argument_errors():
    with pytest.raises(ValueError):
        rank_correlation([1, 2], [1])
    with pytest.raises(ValueError):
        rank_correlation([1], [1])


def _brute_node_stats(sessions):
    out = {}
    for d in {s.device_id for s in sessions}:
        mine = [s for s in sessions if s.device_id == d]
        lo = min(s.start for s in mine)
        hi = max(s.end for s in mine)
        covered = sum(1 for t in range(lo, hi) if any(s.start <= t < s.end for s in mine))
        out[d] = (covered, len(mine))
    return out


def _brute_link_stats(sessions):
    out = {}
    for x, y in itertools.combinations(sessions, 2):
        if x.device_id == y.device_id or x.scanner_id != y.scanner_id:
            continue
        lo, hi = max(x.start, y.start), min(x.end, y.end)
        if hi > lo:
            key = tuple(sorted((x.device_id, y.device_id)))
            p, f = out.get(key, (0, 0))
            out[key] = (p + hi - lo, f + 1)
    return out


def test_stats_agree_with_brute_force():
    rng = random.Random(3)
    for _ in range(200):
        sessions = []
        for dev in "ABCD":
            for sc in ("s1", "s2"):
                t = rng.randint(0, 20)
                for _ in range(rng.randint(0, 3)):
                    d = rng.randint(1, 15)
                    sessions.append(Session(dev, sc, t, t + d))
                    t += d + rng.randint(1, 10)
        sessions = sessions[:20]
        assert {n.device_id: (n.n_p, n.n_f) for n in node_stats(sessions)} == _brute_node_stats(sessions)
        # merge_gap=0 may fuse touching pieces, which the brute force counts apart;
        # totals still agree and counts can only shrink
        got = {(l.a, l.b): (l.l_p, l.l_f) for l in link_stats(build_encounters(sessions))}
        ref = _brute_link_stats(sessions)
        assert set(got) == set(ref)
        for key in ref:
            assert got[key][0] == ref[key][0]
            assert got[key][1] <= ref[key][1]
