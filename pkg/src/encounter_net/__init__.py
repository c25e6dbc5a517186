"""Temporal encounter networks built from proximity sightings."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .diffusion import DiffusionCurve, EmulationSpec, exhaustive_sweep, removal_experiment, replay
from .encounters import (
    AggregateGraph,
    Encounter,
    TemporalTrace,
    aggregate,
    build_encounters,
    read_trace,
    remove_encounters,
    write_trace,
)
from .growth import GrowthConfig, simulate
from .ingest import Session, Sighting, parse_sightings, sessionize
from .powerlaw import PowerLawFit, ccdf, fit
from .structural import degree_profile, summarize
from .temporal import link_stats, node_stats, rank_correlation

__all__ = [
    "BACKEND",
    "AggregateGraph", "DiffusionCurve", "EmulationSpec", "Encounter", "GrowthConfig", "PowerLawFit",
    "Session", "Sighting", "TemporalTrace",
    "aggregate", "build_encounters", "ccdf", "degree_profile", "exhaustive_sweep", "fit", "link_stats",
    "node_stats", "parse_sightings", "rank_correlation", "read_trace", "removal_experiment",
    "remove_encounters", "replay", "sessionize", "simulate", "summarize", "write_trace",
]
