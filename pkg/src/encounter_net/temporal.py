"""Node presence/frequency, link presence/frequency, and rank correlation."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np
from scipy.stats import rankdata

from .encounters import TemporalTrace
from .ingest import Session


@dataclass(frozen=True, slots=True)
class NodeTemporalStats:
    device_id: str
    n_p: int
    n_f: int


@dataclass(frozen=True, slots=True)
class LinkTemporalStats:
    a: str
    b: str
    l_p: int
    l_f: int


def union_length(intervals: Iterable[tuple[int, int]]) -> int:
    total = 0
    cur_lo = cur_hi = None
    for lo, hi in sorted(intervals):
        if cur_hi is None or lo > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        elif hi > cur_hi:
            cur_hi = hi
    if cur_hi is not None:
        total += cur_hi - cur_lo
    return total


def node_stats(sessions: Iterable[Session]) -> list[NodeTemporalStats]:
    """Presence is the measure of the union of a device's sessions over all scanners,
    so overlapping coverage is counted once; frequency is its session count."""
    spans: dict[str, list[tuple[int, int]]] = defaultdict(list)
    for s in sessions:
        spans[s.device_id].append((s.start, s.end))
    return [NodeTemporalStats(d, union_length(spans[d]), len(spans[d])) for d in sorted(spans)]


def link_stats(trace: TemporalTrace) -> list[LinkTemporalStats]:
    lp: dict[tuple[str, str], int] = defaultdict(int)
    lf: dict[tuple[str, str], int] = defaultdict(int)
    for e in trace.encounters:
        lp[e.pair] += e.duration
        lf[e.pair] += 1
    return [LinkTemporalStats(a, b, lp[(a, b)], lf[(a, b)]) for a, b in sorted(lp)]


def rank_correlation(x: Sequence[float], y: Sequence[float]) -> float:
    """Spearman's rho, ties given their average rank.

    Returns nan when either input is constant.
    """
    if len(x) != len(y):
        raise ValueError(f"length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValueError("need at least two observations")
    rx = rankdata(np.asarray(x, dtype=float))
    ry = rankdata(np.asarray(y, dtype=float))
    rx -= rx.mean()
    ry -= ry.mean()
    denom = np.sqrt((rx * rx).sum() * (ry * ry).sum())
    if denom == 0:
        return float("nan")
    return float(np.clip((rx * ry).sum() / denom, -1.0, 1.0))


def write_node_stats(stats: Iterable[NodeTemporalStats], fh: TextIO) -> None:
    fh.write("device_id,n_p,n_f\n")
    for s in stats:
        fh.write(f"{s.device_id},{s.n_p},{s.n_f}\n")


def write_link_stats(stats: Iterable[LinkTemporalStats], fh: TextIO) -> None:
    fh.write("a,b,l_p,l_f\n")
    for s in stats:
        fh.write(f"{s.a},{s.b},{s.l_p},{s.l_f}\n")
