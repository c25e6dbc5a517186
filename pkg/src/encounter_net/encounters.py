"""Pairwise encounters from overlapping sessions, the aggregate graph, removal filters."""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, TextIO

import numpy as np

from .ingest import Session, TraceParseError, _lines

ENCOUNTER_HEADER = "a,b,scanner_id,start,end"
POLICIES = ("briefest", "most_persistent")


@dataclass(frozen=True, slots=True)
class Encounter:
    a: str
    b: str
    scanner_id: str
    start: int
    end: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"encounter endpoints must satisfy a < b: {self.a!r}, {self.b!r}")
        if self.end <= self.start:
            raise ValueError(f"encounter must have positive duration: [{self.start}, {self.end}]")

    @property
    def duration(self) -> int:
        return self.end - self.start

    @property
    def pair(self) -> tuple[str, str]:
        return (self.a, self.b)


def encounter_key(e: Encounter):
    return (e.start, e.end, e.a, e.b, e.scanner_id)


class TemporalTrace:
    """Time-ordered encounters plus the full device set (isolated devices included).

    Replay kernels work on integer arrays; :meth:`arrays` builds them once and
    caches the result.
    """

    __slots__ = ("encounters", "devices", "_arrays")

    def __init__(self, encounters: Iterable[Encounter] = (), devices: Iterable[str] = ()):
        encs = tuple(encounters)
        if any(encounter_key(x) > encounter_key(y) for x, y in zip(encs, encs[1:])):
            encs = tuple(sorted(encs, key=encounter_key))
        devs = set(devices)
        for e in encs:
            devs.add(e.a)
            devs.add(e.b)
        self.encounters = encs
        self.devices = frozenset(devs)
        self._arrays = None

    def __len__(self):
        return len(self.encounters)

    def __eq__(self, other):
        if not isinstance(other, TemporalTrace):
            return NotImplemented
        return self.encounters == other.encounters and self.devices == other.devices

    def __repr__(self):
        return f"TemporalTrace({len(self.encounters)} encounters, {len(self.devices)} devices)"

    def arrays(self) -> "TraceArrays":
        if self._arrays is None:
            self._arrays = TraceArrays.from_trace(self)
        return self._arrays


@dataclass(frozen=True)
class TraceArrays:
    """Integer view of a trace: device ``names`` sorted, endpoints as indices."""

    names: tuple[str, ...]
    index: dict[str, int] = field(repr=False)
    a: np.ndarray
    b: np.ndarray
    start: np.ndarray
    end: np.ndarray

    @classmethod
    def from_trace(cls, trace: TemporalTrace) -> "TraceArrays":
        names = tuple(sorted(trace.devices))
        index = {d: i for i, d in enumerate(names)}
        m = len(trace.encounters)
        a = np.empty(m, dtype=np.int64)
        b = np.empty(m, dtype=np.int64)
        start = np.empty(m, dtype=np.int64)
        end = np.empty(m, dtype=np.int64)
        for i, e in enumerate(trace.encounters):
            a[i] = index[e.a]
            b[i] = index[e.b]
            start[i] = e.start
            end[i] = e.end
        return cls(names, index, a, b, start, end)


@dataclass(frozen=True, slots=True)
class EdgeStats:
    total_overlap: int
    event_count: int


@dataclass
class AggregateGraph:
    """Static simple graph; ``edges`` maps a sorted pair to its :class:`EdgeStats`."""

    nodes: tuple[str, ...]
    edges: dict[tuple[str, str], EdgeStats]

    def __post_init__(self):
        self.nodes = tuple(sorted(set(self.nodes)))
        known = set(self.nodes)
        for (u, v), st in self.edges.items():
            if not u < v:
                raise ValueError(f"edge endpoints must be sorted and distinct: {(u, v)}")
            if u not in known or v not in known:
                raise ValueError(f"edge {(u, v)} references unknown node")
            if st.event_count < 1 or st.total_overlap <= 0:
                raise ValueError(f"edge {(u, v)} needs event_count >= 1 and positive overlap")

    @classmethod
    def from_pairs(cls, nodes: Iterable[str], pairs: Iterable[tuple[str, str]]) -> "AggregateGraph":
        """Unweighted convenience constructor (each edge one unit event)."""
        edges = {}
        for u, v in pairs:
            if u == v:
                raise ValueError("self-loop")
            key = (u, v) if u < v else (v, u)
            edges[key] = EdgeStats(1, 1)
        return cls(tuple(nodes), edges)

    def csr(self):
        """Sorted-adjacency CSR arrays ``(indptr, indices)`` over ``self.nodes`` order."""
        index = {v: i for i, v in enumerate(self.nodes)}
        n = len(self.nodes)
        m = len(self.edges)
        src = np.empty(2 * m, dtype=np.int64)
        dst = np.empty(2 * m, dtype=np.int64)
        for k, (u, v) in enumerate(self.edges):
            i, j = index[u], index[v]
            src[2 * k], dst[2 * k] = i, j
            src[2 * k + 1], dst[2 * k + 1] = j, i
        order = np.lexsort((dst, src))
        indices = dst[order]
        counts = np.bincount(src, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(counts, out=indptr[1:])
        return indptr, np.ascontiguousarray(indices, dtype=np.int64)


def _merge_runs(encs: list[Encounter], merge_gap: int) -> list[Encounter]:
    encs.sort(key=lambda e: (e.start, e.end))
    out = [encs[0]]
    for e in encs[1:]:
        prev = out[-1]
        if e.start - prev.end <= merge_gap:
            out[-1] = Encounter(prev.a, prev.b, prev.scanner_id, prev.start, max(prev.end, e.end))
        else:
            out.append(e)
    return out


def build_encounters(sessions: Iterable[Session], merge_gap: int = 0) -> TemporalTrace:
    """Link every pair of distinct devices whose sessions overlap at the same scanner.

    Each positive-length intersection is one encounter. Encounters of the same
    (pair, scanner) whose gap is at most ``merge_gap`` are fused.
    """
    if merge_gap < 0:
        raise ValueError("merge_gap must be non-negative")
    sessions = list(sessions)
    devices = {s.device_id for s in sessions}
    by_scanner: dict[str, list[Session]] = defaultdict(list)
    for s in sessions:
        by_scanner[s.scanner_id].append(s)

    raw: dict[tuple[str, str, str], list[Encounter]] = defaultdict(list)
    for scanner, group in by_scanner.items():
        group.sort(key=lambda s: (s.start, s.end, s.device_id))
        active: list[Session] = []
        for s in group:
            active = [x for x in active if x.end > s.start]
            for x in active:
                if x.device_id == s.device_id:
                    continue
                lo, hi = s.start, min(x.end, s.end)
                if hi <= lo:
                    continue
                a, b = sorted((x.device_id, s.device_id))
                raw[(a, b, scanner)].append(Encounter(a, b, scanner, lo, hi))
            active.append(s)

    encs = []
    for key in raw:
        encs.extend(_merge_runs(raw[key], merge_gap))
    encs.sort(key=encounter_key)
    return TemporalTrace(encs, devices)


def aggregate(trace: TemporalTrace) -> AggregateGraph:
    overlap: dict[tuple[str, str], int] = defaultdict(int)
    count: dict[tuple[str, str], int] = defaultdict(int)
    for e in trace.encounters:
        overlap[e.pair] += e.duration
        count[e.pair] += 1
    edges = {p: EdgeStats(overlap[p], count[p]) for p in sorted(overlap)}
    return AggregateGraph(tuple(trace.devices), edges)


def removal_order(trace: TemporalTrace, policy: str) -> list[int]:
    """Encounter indices in the order ``policy`` removes them."""
    if policy not in POLICIES:
        raise ValueError(f"unknown removal policy {policy!r}; expected one of {POLICIES}")
    sign = 1 if policy == "briefest" else -1
    encs = trace.encounters
    return sorted(
        range(len(encs)),
        key=lambda i: (sign * encs[i].duration, encs[i].start, encs[i].a, encs[i].b, encs[i].scanner_id, i),
    )


def remove_encounters(trace: TemporalTrace, fraction: float, policy: str) -> TemporalTrace:
    """Drop ``floor(fraction * count)`` encounters, shortest or longest first.

    Ties go to the earlier start, then to the lexicographically smaller pair.
    The device set is kept as is.
    """
    if not 0.0 <= fraction <= 1.0 or math.isnan(fraction):
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")
    order = removal_order(trace, policy)
    k = math.floor(fraction * len(order))
    if k == 0:
        return trace
    dropped = set(order[:k])
    kept = [e for i, e in enumerate(trace.encounters) if i not in dropped]
    return TemporalTrace(kept, trace.devices)


def write_trace(trace: TemporalTrace, fh: TextIO) -> None:
    """Encounter CSV; devices without encounters go in ``#device,<id>`` lines."""
    seen = set()
    for e in trace.encounters:
        seen.add(e.a)
        seen.add(e.b)
    for d in sorted(trace.devices - seen):
        fh.write(f"#device,{d}\n")
    fh.write(ENCOUNTER_HEADER + "\n")
    for e in trace.encounters:
        fh.write(f"{e.a},{e.b},{e.scanner_id},{e.start},{e.end}\n")


def read_trace(stream: TextIO | str | Iterable[str]) -> TemporalTrace:
    devices = set()
    encs = []
    for lineno, raw in enumerate(_lines(stream), start=1):
        line = raw.strip()
        if not line or line == ENCOUNTER_HEADER:
            continue
        if line.startswith("#"):
            if line.startswith("#device,"):
                devices.add(line[len("#device,"):])
            continue
        fields = line.split(",")
        if len(fields) != 5:
            raise TraceParseError(lineno, f"expected 5 fields, got {len(fields)}")
        try:
            encs.append(Encounter(fields[0], fields[1], fields[2], int(fields[3]), int(fields[4])))
        except ValueError as exc:
            raise TraceParseError(lineno, str(exc)) from None
    return TemporalTrace(encs, devices)


def write_edges(graph: AggregateGraph, fh: TextIO) -> None:
    fh.write("a,b,total_overlap,event_count\n")
    for (u, v), st in graph.edges.items():
        fh.write(f"{u},{v},{st.total_overlap},{st.event_count}\n")
