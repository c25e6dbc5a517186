"""Sighting logs and their merge into per-device, per-scanner visit sessions."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, TextIO

DEFAULT_GAP = 300
DEFAULT_SCAN_PERIOD = 60


class TraceParseError(ValueError):
    """A sighting line could not be parsed; ``lineno`` is 1-based."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


@dataclass(frozen=True, slots=True)
class Sighting:
    device_id: str
    scanner_id: str
    time: int

    def __post_init__(self):
        if not self.device_id or not self.scanner_id:
            raise ValueError("device_id and scanner_id must be non-empty")
        if self.time < 0:
            raise ValueError(f"negative sighting time {self.time}")


@dataclass(frozen=True, slots=True)
class Session:
    device_id: str
    scanner_id: str
    start: int
    end: int

    def __post_init__(self):
        if self.end <= self.start:
            raise ValueError(f"session must have positive duration: [{self.start}, {self.end}]")

    @property
    def duration(self) -> int:
        return self.end - self.start


def _lines(stream: TextIO | str | Iterable[str]) -> Iterable[str]:
    if isinstance(stream, str):
        return stream.splitlines()
    return stream


def parse_sightings(stream: TextIO | str | Iterable[str], delimiter: str = ",") -> list[Sighting]:
    """Parse ``device_id,scanner_id,time`` lines in file order.

    Blank lines and lines starting with ``#`` are skipped. Nothing is sorted
    or deduplicated here.
    """
    out = []
    for lineno, raw in enumerate(_lines(stream), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(delimiter)]
        if len(fields) != 3:
            raise TraceParseError(lineno, f"expected 3 fields, got {len(fields)}")
        device, scanner, time_s = fields
        if not device or not scanner:
            raise TraceParseError(lineno, "empty device or scanner id")
        try:
            t = int(time_s)
        except ValueError:
            raise TraceParseError(lineno, f"time is not an integer: {time_s!r}") from None
        if t < 0:
            raise TraceParseError(lineno, f"negative time {t}")
        out.append(Sighting(device, scanner, t))
    return out


def sessionize(
    sightings: Iterable[Sighting],
    gap: int = DEFAULT_GAP,
    scan_period: int = DEFAULT_SCAN_PERIOD,
) -> list[Session]:
    """Merge sightings into sessions, keyed by (device, scanner).

    Consecutive detection times at most ``gap`` apart chain into one session
    spanning ``[first, last + scan_period]``. Detections closer than
    ``scan_period`` also chain, so sessions of one key never overlap even when
    ``gap < scan_period``. Duplicate times collapse.
    """
    if gap <= 0 or scan_period <= 0:
        raise ValueError("gap and scan_period must be positive")
    by_key: dict[tuple[str, str], set[int]] = defaultdict(set)
    for s in sightings:
        by_key[(s.device_id, s.scanner_id)].add(s.time)

    reach = max(gap, scan_period - 1)
    sessions = []
    for (device, scanner), times in sorted(by_key.items()):
        ts = sorted(times)
        first = last = ts[0]
        for t in ts[1:]:
            if t - last <= reach:
                last = t
                continue
            sessions.append(Session(device, scanner, first, last + scan_period))
            first = last = t
        sessions.append(Session(device, scanner, first, last + scan_period))
    return sessions


def read_sessions(stream: TextIO | str | Iterable[str]) -> list[Session]:
    """Read the ``device_id,scanner_id,start,end`` CSV written by :func:`write_sessions`."""
    out = []
    for lineno, raw in enumerate(_lines(stream), start=1):
        line = raw.strip()
        if not line or line.startswith("#") or line == "device_id,scanner_id,start,end":
            continue
        fields = line.split(",")
        if len(fields) != 4:
            raise TraceParseError(lineno, f"expected 4 fields, got {len(fields)}")
        try:
            out.append(Session(fields[0], fields[1], int(fields[2]), int(fields[3])))
        except ValueError as exc:
            raise TraceParseError(lineno, str(exc)) from None
    return out


def write_sessions(sessions: Iterable[Session], fh: TextIO) -> None:
    fh.write("device_id,scanner_id,start,end\n")
    for s in sessions:
        fh.write(f"{s.device_id},{s.scanner_id},{s.start},{s.end}\n")


def write_sightings(sightings: Iterable[Sighting], fh: TextIO) -> None:
    fh.write("# device_id,scanner_id,time\n")
    for s in sightings:
        fh.write(f"{s.device_id},{s.scanner_id},{s.time}\n")
