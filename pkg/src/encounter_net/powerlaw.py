"""Power-law tails: empirical CCDF, log-log CCDF regression and the continuous Hill MLE.

Exponents are reported as ``alpha_minus_1``, the slope of the CCDF
``P(X >= x) ~ x^-(alpha-1)``; ``alpha`` is the density exponent.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence, TextIO

import numpy as np

METHODS = ("ccdf_ls", "mle")
MIN_TAIL = 10


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class PowerLawFit:
    alpha_minus_1: float
    xmin: float
    method: str
    fit_quality: float
    n_tail: int

    @property
    def alpha(self) -> float:
        return self.alpha_minus_1 + 1.0

    def to_json(self) -> dict:
        return {
            "alpha_minus_1": self.alpha_minus_1,
            "alpha": self.alpha,
            "xmin": self.xmin,
            "method": self.method,
            "fit_quality": self.fit_quality,
            "n_tail": self.n_tail,
        }


@dataclass(frozen=True)
class Ccdf:
    x: np.ndarray
    p: np.ndarray

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.p.tolist()))


def _as_samples(samples) -> np.ndarray:
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        raise ValueError("no samples")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise ValueError("samples must be finite and positive")
    return x


def ccdf(samples: Sequence[float]) -> Ccdf:
    """``P(X >= x)`` at each distinct sample value."""
    x = _as_samples(samples)
    values, counts = np.unique(x, return_counts=True)
    at_least = np.cumsum(counts[::-1])[::-1]
    return Ccdf(values, at_least / x.size)


def _loglog_regression(c: Ccdf) -> tuple[float, float]:
    lx = np.log(c.x)
    lp = np.log(c.p)
    slope, intercept = np.polyfit(lx, lp, 1)
    resid = lp - (slope * lx + intercept)
    ss_tot = ((lp - lp.mean()) ** 2).sum()
    r2 = 1.0 - (resid**2).sum() / ss_tot if ss_tot > 0 else 0.0
    return float(slope), float(r2)


def fit(samples: Sequence[float], xmin: float | None = None, method: str = "mle") -> PowerLawFit:
    """Fit the tail ``x >= xmin`` (default: smallest sample).

    ``fit_quality`` is always the R^2 of the log-log CCDF regression over the
    tail, whichever method produced the exponent.
    """
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    x = _as_samples(samples)
    if xmin is None:
        xmin = float(x.min())
    elif xmin <= 0:
        raise ValueError("xmin must be positive")
    tail = x[x >= xmin]
    if tail.size < MIN_TAIL:
        raise FitError(f"only {tail.size} samples >= xmin={xmin}; need {MIN_TAIL}")
    c = ccdf(tail)
    if c.x.size < 2:
        raise FitError("tail samples are all equal")
    slope, r2 = _loglog_regression(c)
    if method == "ccdf_ls":
        est = -slope
    else:
        log_sum = np.log(tail / xmin).sum()
        if log_sum <= 0:
            raise FitError("degenerate tail for the MLE")
        est = tail.size / log_sum
    return PowerLawFit(float(est), float(xmin), method, r2, int(tail.size))


def pareto_samples(alpha_minus_1: float, size: int, rng: np.random.Generator, xmin: float = 1.0) -> np.ndarray:
    """Inverse-CDF Pareto draws: ``xmin * u ** (-1 / alpha_minus_1)``."""
    u = 1.0 - rng.random(size)  # (0, 1]
    return xmin * u ** (-1.0 / alpha_minus_1)


def write_ccdf(c: Ccdf, fh: TextIO) -> None:
    fh.write("x,p\n")
    for x, p in c.points:
        fh.write(f"{x!r},{p!r}\n")


def write_fit(result: PowerLawFit | dict, fh: TextIO) -> None:
    payload = result.to_json() if isinstance(result, PowerLawFit) else result
    json.dump(payload, fh, indent=2)
    fh.write("\n")
