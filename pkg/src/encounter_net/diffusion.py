"""Deterministic SI / SIS replay of encounter traces, injection sweeps, removal experiments.

Each encounter is one transmission opportunity, taken at its start: if
exactly one endpoint is infected at that moment the other becomes infected
(with probability ``transmission_rate``). Under SIS every infection lasts
exactly ``expiry`` seconds, after which the node is susceptible again.
Encounters are visited in trace order, so an infection picked up at time
``t`` can be passed on by a later encounter that also starts at ``t``.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence, TextIO

import numpy as np

from ._backend import kernels
from .encounters import TemporalTrace, remove_encounters
from .structural import default_threads

MODELS = ("SI", "SIS")
THREE_DAYS = 3 * 24 * 3600


@dataclass(frozen=True)
class EmulationSpec:
    model: str = "SI"
    expiry: float | None = None
    transmission_rate: float = 1.0
    seed: int = 0

    def __post_init__(self):
        model = self.model.upper()
        object.__setattr__(self, "model", model)
        if model not in MODELS:
            raise ValueError(f"unknown model {self.model!r}; expected SI or SIS")
        if model == "SIS":
            if self.expiry is None or not self.expiry > 0:
                raise ValueError("SIS needs a positive expiry")
        if not 0 < self.transmission_rate <= 1:
            raise ValueError("transmission_rate must lie in (0, 1]")

    @property
    def expiry_ticks(self) -> int:
        """Expiry as the kernels see it: -1 for never."""
        if self.model == "SI" or self.expiry is None or math.isinf(self.expiry):
            return -1
        return int(self.expiry)


@dataclass(frozen=True)
class DiffusionCurve:
    """Infected count after each event time (transmission or recovery).

    The injection itself is not a sample; before the first sample the
    count is 1. For SI the count is cumulative, for SIS it is the number
    currently infected.
    """

    device: str
    injection_time: int
    times: np.ndarray
    counts: np.ndarray
    reach: int
    extinction_time: int | None = None

    @property
    def samples(self) -> list[tuple[int, int]]:
        return list(zip(self.times.tolist(), self.counts.tolist()))

    @property
    def duration(self) -> int | None:
        """Seconds from injection to extinction; None if it never dies out."""
        if self.extinction_time is None:
            return None
        return self.extinction_time - self.injection_time

    def count_at(self, t: float) -> int:
        """Step-function value at absolute time ``t`` (``>=`` injection time)."""
        k = np.searchsorted(self.times, t, side="right")
        return 1 if k == 0 else int(self.counts[k - 1])


@dataclass
class SweepResult:
    injections: list[tuple[str, int]]
    curves: list[DiffusionCurve]
    total_injections: int
    sampled: bool
    fraction: float = 0.0

    @property
    def final_reach(self) -> np.ndarray:
        return np.array([c.reach for c in self.curves], dtype=float)

    @property
    def mean_final_reach(self) -> float | None:
        return float(self.final_reach.mean()) if self.curves else None

    @property
    def median_final_reach(self) -> float | None:
        return float(np.median(self.final_reach)) if self.curves else None

    @property
    def median_extinction_time(self) -> float | None:
        """Median time from injection to extinction (SIS); None under SI."""
        durs = [c.duration for c in self.curves]
        if not durs or any(d is None for d in durs):
            return None
        return float(np.median(durs))

    def reach_over_time(self, elapsed: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
        """Mean and median count at each elapsed time since injection."""
        elapsed = np.asarray(elapsed, dtype=float)
        if not self.curves:
            return np.zeros(len(elapsed)), np.zeros(len(elapsed))
        mat = np.empty((len(self.curves), len(elapsed)))
        for r, c in enumerate(self.curves):
            k = np.searchsorted(c.times - c.injection_time, elapsed, side="right")
            vals = np.concatenate([[1], c.counts])
            mat[r] = vals[k]
        return mat.mean(axis=0), np.median(mat, axis=0)


def _uniforms(spec: EmulationSpec, n: int, salt: int) -> np.ndarray | None:
    if spec.transmission_rate >= 1:
        return None
    rng = np.random.default_rng(np.random.SeedSequence([spec.seed, salt]))
    return rng.random(n)


def replay(trace: TemporalTrace, spec: EmulationSpec, device: str, time: int, salt: int = 0) -> DiffusionCurve:
    """Replay from one injection ``(device, time)``.

    Below unit transmission rate the draws come from ``(spec.seed, salt)``;
    sweeps pass the injection index as the salt.
    """
    arr = trace.arrays()
    if device not in arr.index:
        raise ValueError(f"unknown device {device!r}")
    if time < 0:
        raise ValueError("injection time must be non-negative")
    first = int(np.searchsorted(arr.start, time, side="left"))
    u = _uniforms(spec, len(arr.a), salt)
    times, counts, ever, ext = kernels.replay(
        arr.a, arr.b, arr.start, len(arr.names), first, arr.index[device], int(time),
        spec.expiry_ticks, u, float(spec.transmission_rate),
    )
    return DiffusionCurve(device, int(time), times, counts, int(ever), None if ext < 0 else int(ext))


def injection_points(trace: TemporalTrace) -> list[tuple[str, int]]:
    """Every (participating device, encounter start), sorted by time then device."""
    pts = set()
    for e in trace.encounters:
        pts.add((e.start, e.a))
        pts.add((e.start, e.b))
    return [(d, t) for t, d in sorted(pts)]


def choose_injections(trace: TemporalTrace, sample_limit: int | None, seed: int):
    pts = injection_points(trace)
    if sample_limit is None or sample_limit >= len(pts):
        return pts, len(pts), False
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x5EED]))
    keep = np.sort(rng.choice(len(pts), size=sample_limit, replace=False))
    return [pts[i] for i in keep], len(pts), True


def _run_all(trace, spec, injections, threads):
    trace.arrays()  # build once before fanning out
    job = lambda k: replay(trace, spec, injections[k][0], injections[k][1], salt=k)
    if threads <= 1 or len(injections) < 2:
        return [job(k) for k in range(len(injections))]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(job, range(len(injections))))


def exhaustive_sweep(
    trace: TemporalTrace,
    spec: EmulationSpec,
    sample_limit: int | None = None,
    injections: Sequence[tuple[str, int]] | None = None,
    threads: int | None = None,
) -> SweepResult:
    """Replay from every injection point, or a seeded uniform subsample of them."""
    if injections is None:
        injections, total, sampled = choose_injections(trace, sample_limit, spec.seed)
    else:
        injections, total, sampled = list(injections), len(injections), False
    curves = _run_all(trace, spec, injections, threads or default_threads())
    return SweepResult(list(injections), curves, total, sampled)


def removal_experiment(
    trace: TemporalTrace,
    spec: EmulationSpec,
    fractions: Iterable[float],
    policy: str,
    sample_limit: int | None = None,
    threads: int | None = None,
) -> dict[float, SweepResult]:
    """Sweep the same injection points over progressively thinned traces.

    Injection points come from the full trace so that every fraction is
    compared on identical starting conditions.
    """
    injections, total, sampled = choose_injections(trace, sample_limit, spec.seed)
    out = {}
    for frac in fractions:
        reduced = remove_encounters(trace, frac, policy)
        res = exhaustive_sweep(reduced, spec, injections=injections, threads=threads)
        res.total_injections, res.sampled, res.fraction = total, sampled, float(frac)
        out[float(frac)] = res
    return out


def write_curves(results: dict[float, SweepResult], fh: TextIO) -> None:
    fh.write("fraction,injection_device,injection_time,event_time,count\n")
    for frac, res in results.items():
        for c in res.curves:
            for t, n in zip(c.times.tolist(), c.counts.tolist()):
                fh.write(f"{frac!r},{c.device},{c.injection_time},{t},{n}\n")


def summary(results: dict[float, SweepResult]) -> dict:
    return {
        repr(frac): {
            "mean_final_reach": res.mean_final_reach,
            "median_final_reach": res.median_final_reach,
            "median_extinction_time": res.median_extinction_time,
            "injections": len(res.injections),
            "total_injections": res.total_injections,
            "sampled": res.sampled,
        }
        for frac, res in results.items()
    }


def write_summary(results: dict[float, SweepResult], fh: TextIO) -> None:
    json.dump(summary(results), fh, indent=2)
    fh.write("\n")
