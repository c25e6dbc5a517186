"""Availability-driven growth model.

Every inactive node switches on with its own activation probability. An
activated node stays on for ``max(1, round(presence_factor * inactive_steps))``
steps, where ``inactive_steps`` counts the steps it spent off before this
activation. Nodes that are on at the same step are all linked to each other;
nothing about the rule looks at degree.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from ._backend import kernels
from .encounters import AggregateGraph, Encounter, TemporalTrace, aggregate
from .powerlaw import pareto_samples

MODEL_SCANNER = "model"


@dataclass(frozen=True)
class GrowthConfig:
    population: int
    steps: int
    freq_exponent: float = 1.6
    presence_exponent: float = 0.9
    freq_scale: float = 0.005
    presence_scale: float = 0.001
    seed: int = 0
    step_seconds: int = 60
    # explicit per-node overrides; sampled from the exponents when None
    activation_probs: Sequence[float] | None = field(default=None, compare=False)
    presence_factors: Sequence[float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.population < 1:
            raise ValueError("population must be >= 1")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.freq_exponent <= 0 or self.presence_exponent <= 0:
            raise ValueError("exponents must be positive")
        if not 0 < self.freq_scale <= 1:
            raise ValueError("freq_scale must lie in (0, 1]")
        if self.presence_scale <= 0:
            raise ValueError("presence_scale must be positive")
        if self.step_seconds <= 0:
            raise ValueError("step_seconds must be positive")
        for name in ("activation_probs", "presence_factors"):
            vals = getattr(self, name)
            if vals is not None and len(vals) != self.population:
                raise ValueError(f"{name} needs one value per node")

    @classmethod
    def from_json(cls, data: dict) -> "GrowthConfig":
        return cls(**data)

    def to_json(self) -> dict:
        d = asdict(self)
        for name in ("activation_probs", "presence_factors"):
            if d[name] is None:
                del d[name]
            else:
                d[name] = [float(v) for v in d[name]]
        return d


@dataclass
class GrowthRun:
    trace: TemporalTrace
    graph: AggregateGraph
    activation_probs: np.ndarray
    presence_factors: np.ndarray
    runs: np.ndarray  # (node, first_step, last_step), merged maximal active runs


def node_names(population: int) -> list[str]:
    width = len(str(population - 1))
    return [f"n{i:0{width}d}" for i in range(population)]


def sample_parameters(config: GrowthConfig, rng_f: np.random.Generator, rng_p: np.random.Generator):
    """Per-node (activation probability, presence factor).

    Frequencies are Pareto draws divided by their maximum (largest -> 1),
    then multiplied by ``freq_scale``; presence factors are Pareto draws
    times ``presence_scale``.
    """
    n = config.population
    if config.activation_probs is not None:
        f = np.asarray(config.activation_probs, dtype=float)
        if np.any((f < 0) | (f > 1)):
            raise ValueError("activation probabilities must lie in [0, 1]")
    else:
        raw = pareto_samples(config.freq_exponent, n, rng_f)
        f = np.clip(config.freq_scale * raw / raw.max(), np.finfo(float).tiny, 1.0)
    if config.presence_factors is not None:
        p = np.asarray(config.presence_factors, dtype=float)
        if np.any(p <= 0):
            raise ValueError("presence factors must be positive")
    else:
        p = config.presence_scale * pareto_samples(config.presence_exponent, n, rng_p)
    return f, p


def activation_runs(f: np.ndarray, p: np.ndarray, steps: int, rng: np.random.Generator) -> np.ndarray:
    """Step the model and return merged active runs as rows ``(node, first, last)``.

    One uniform per node per step is drawn regardless of state, so the random
    stream does not depend on the trajectory.
    """
    n = len(f)
    active_until = np.zeros(n, dtype=np.int64)  # active at t iff t <= active_until
    inactive = np.ones(n, dtype=np.int64)
    nodes, firsts, lasts = [], [], []
    for t in range(1, steps + 1):
        u = rng.random(n)
        off = active_until < t
        fire = off & (u < f)
        idle = off & ~fire
        inactive[idle] += 1
        if fire.any():
            idx = np.flatnonzero(fire)
            dwell = np.maximum(1, np.floor(p[idx] * inactive[idx] + 0.5)).astype(np.int64)
            last = np.minimum(t + dwell - 1, steps)
            active_until[idx] = t + dwell - 1
            inactive[idx] = 0
            nodes.append(idx)
            firsts.append(np.full(len(idx), t, dtype=np.int64))
            lasts.append(last)
    if not nodes:
        return np.empty((0, 3), dtype=np.int64)
    runs = np.column_stack([np.concatenate(nodes), np.concatenate(firsts), np.concatenate(lasts)])
    return _merge_adjacent(runs)


def _merge_adjacent(runs: np.ndarray) -> np.ndarray:
    """Fuse runs of a node that follow each other without a gap step."""
    runs = runs[np.lexsort((runs[:, 1], runs[:, 0]))]
    out = []
    node, first, last = runs[0]
    for nd, fs, ls in runs[1:].tolist():
        if nd == node and fs == last + 1:
            last = ls
        else:
            out.append((node, first, last))
            node, first, last = nd, fs, ls
    out.append((node, first, last))
    return np.asarray(out, dtype=np.int64)


def simulate(config: GrowthConfig) -> GrowthRun:
    """Run the model; deterministic given ``config.seed``.

    Step ``t`` covers seconds ``[t * step_seconds, (t + 1) * step_seconds)``,
    so co-activity over steps ``s..e`` becomes one encounter
    ``[s * step_seconds, (e + 1) * step_seconds]``.
    """
    ss = np.random.SeedSequence(config.seed)
    rng_f, rng_p, rng_step = (np.random.default_rng(s) for s in ss.spawn(3))
    f, p = sample_parameters(config, rng_f, rng_p)
    runs = activation_runs(f, p, config.steps, rng_step)
    names = node_names(config.population)

    encs = []
    if len(runs):
        order = np.lexsort((runs[:, 0], runs[:, 1]))
        runs = runs[order]
        i, j, lo, hi = kernels.overlap_pairs(
            np.ascontiguousarray(runs[:, 0]), np.ascontiguousarray(runs[:, 1]), np.ascontiguousarray(runs[:, 2])
        )
        ni, nj = runs[i, 0], runs[j, 0]
        sec = config.step_seconds
        for u, v, s, e in zip(ni.tolist(), nj.tolist(), (lo * sec).tolist(), ((hi + 1) * sec).tolist()):
            a, b = names[u], names[v]
            if b < a:
                a, b = b, a
            encs.append(Encounter(a, b, MODEL_SCANNER, s, e))
        runs = runs[np.lexsort((runs[:, 1], runs[:, 0]))]
    trace = TemporalTrace(sorted(encs, key=lambda e: (e.start, e.end, e.a, e.b)), names)
    return GrowthRun(trace, aggregate(trace), f, p, runs)


def load_config(fh) -> GrowthConfig:
    return GrowthConfig.from_json(json.load(fh))
