"""``encounter-net`` command line: ingest, sessions, encounters, metrics, temporal, fit, growth, emulate, remove."""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import diffusion, encounters, growth, ingest, powerlaw, structural, temporal


class StageError(RuntimeError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"{stage}: {message}")
        self.stage = stage


def _open_out(path):
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    return open(path, "w", encoding="utf-8", newline="\n")


def _read_text(path, stage):
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise StageError(stage, f"cannot read {path}: {exc.strerror or exc}") from None


def _strip_threads(argv):
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--threads":
            skip = True
            continue
        if tok.startswith("--threads="):
            continue
        out.append(tok)
    return out


def write_manifest(args, argv, inputs: dict, outputs: dict, params: dict, seed=None):
    """Write ``<first output>.manifest.json``. Thread count is left out on purpose:
    it never changes results."""
    primary = next(iter(outputs.values()))
    manifest = {
        "tool": "encounter-net",
        "version": __version__,
        "subcommand": args.command,
        "parameters": params,
        "inputs": inputs,
        "outputs": outputs,
        "seed": seed,
        "argv": _strip_threads(argv),
    }
    with _open_out(str(primary) + ".manifest.json") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")


def parse_fractions(text: str) -> list[float]:
    """Comma list of ratios; ``a,b,...,c`` expands to an arithmetic progression."""
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if "..." in parts:
        k = parts.index("...")
        if k < 2 or k != len(parts) - 2:
            raise argparse.ArgumentTypeError("use the form a,b,...,c")
        head = [float(p) for p in parts[:k]]
        last = float(parts[-1])
        step = head[-1] - head[-2]
        if step <= 0:
            raise argparse.ArgumentTypeError("progression step must be positive")
        count = int(round((last - head[0]) / step))
        vals = [round(head[0] + i * step, 12) for i in range(count + 1)]
    else:
        try:
            vals = [float(p) for p in parts]
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad fraction list {text!r}") from None
    for v in vals:
        if not 0 <= v <= 1:
            raise argparse.ArgumentTypeError(f"fraction {v} outside [0, 1]")
    return vals


def parse_injection(text: str) -> tuple[str, int]:
    device, sep, t = text.rpartition("@")
    if not sep or not device:
        raise argparse.ArgumentTypeError("injection must look like DEVICE@TIME")
    try:
        return device, int(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad injection time {t!r}") from None


# --- subcommands -------------------------------------------------------------


def cmd_ingest(args, argv):
    try:
        sightings = ingest.parse_sightings(_read_text(args.input, "ingest"))
    except ingest.TraceParseError as exc:
        raise StageError("ingest", f"{args.input}: {exc}") from None
    clean = sorted(set(sightings), key=lambda s: (s.device_id, s.scanner_id, s.time))
    with _open_out(args.out) as fh:
        ingest.write_sightings(clean, fh)
    print(f"ingest: {len(sightings)} sightings read, {len(clean)} kept", file=sys.stderr)
    write_manifest(args, argv, {"in": args.input}, {"out": args.out}, {})


def cmd_sessions(args, argv):
    try:
        sightings = ingest.parse_sightings(_read_text(args.input, "sessions"))
        sessions = ingest.sessionize(sightings, args.gap, args.scan_period)
    except (ingest.TraceParseError, ValueError) as exc:
        raise StageError("sessions", str(exc)) from None
    with _open_out(args.out) as fh:
        ingest.write_sessions(sessions, fh)
    write_manifest(args, argv, {"in": args.input}, {"out": args.out},
                   {"gap": args.gap, "scan_period": args.scan_period})


def cmd_encounters(args, argv):
    try:
        sessions = ingest.read_sessions(_read_text(args.input, "encounters"))
        trace = encounters.build_encounters(sessions, args.merge_gap)
    except (ingest.TraceParseError, ValueError) as exc:
        raise StageError("encounters", str(exc)) from None
    outputs = {"out": args.out}
    with _open_out(args.out) as fh:
        encounters.write_trace(trace, fh)
    if args.edges_out:
        with _open_out(args.edges_out) as fh:
            encounters.write_edges(encounters.aggregate(trace), fh)
        outputs["edges_out"] = args.edges_out
    write_manifest(args, argv, {"in": args.input}, outputs, {"merge_gap": args.merge_gap})


def _load_trace(path, stage):
    try:
        return encounters.read_trace(_read_text(path, stage))
    except (ingest.TraceParseError, ValueError) as exc:
        raise StageError(stage, f"{path}: {exc}") from None


def cmd_metrics(args, argv):
    trace = _load_trace(args.trace, "metrics")
    graph = encounters.aggregate(trace)
    try:
        summary = structural.summarize(graph, threads=args.threads)
    except ValueError as exc:
        raise StageError("metrics", str(exc)) from None
    outputs = {"out": args.out}
    with _open_out(args.out) as fh:
        structural.write_summary(summary, fh)
    if args.profile_out:
        with _open_out(args.profile_out) as fh:
            structural.write_profile(structural.degree_profile(graph), fh)
        outputs["profile_out"] = args.profile_out
    if args.degrees_out:
        with _open_out(args.degrees_out) as fh:
            structural.write_degrees(graph, fh)
        outputs["degrees_out"] = args.degrees_out
    write_manifest(args, argv, {"trace": args.trace}, outputs, {})


def cmd_temporal(args, argv):
    trace = _load_trace(args.trace, "temporal")
    links = temporal.link_stats(trace)
    outputs = {"links_out": args.links_out}
    inputs = {"trace": args.trace}
    with _open_out(args.links_out) as fh:
        temporal.write_link_stats(links, fh)
    report = {"links": len(links)}
    if args.sessions:
        inputs["sessions"] = args.sessions
        try:
            sessions = ingest.read_sessions(_read_text(args.sessions, "temporal"))
        except (ingest.TraceParseError, ValueError) as exc:
            raise StageError("temporal", str(exc)) from None
        nodes = temporal.node_stats(sessions)
        if args.nodes_out:
            with _open_out(args.nodes_out) as fh:
                temporal.write_node_stats(nodes, fh)
            outputs["nodes_out"] = args.nodes_out
        report["devices"] = len(nodes)
        if len(nodes) >= 2:
            rho = temporal.rank_correlation([n.n_p for n in nodes], [n.n_f for n in nodes])
            report["spearman_n_p_n_f"] = None if math.isnan(rho) else rho
    if args.out:
        with _open_out(args.out) as fh:
            json.dump(report, fh, indent=2)
            fh.write("\n")
        outputs["out"] = args.out
    write_manifest(args, argv, inputs, outputs, {})


SAMPLE_COLUMNS = ("degree", "n_p", "n_f", "l_p", "l_f", "value", "x")


def load_samples(path, column=None) -> np.ndarray:
    """Numeric samples from a CSV.

    A ``k,count`` degree profile is expanded by its counts; otherwise the
    named column, else the first of the usual sample columns, else the
    single column of a one-column file.
    """
    text = _read_text(path, "fit")
    rows = [r for r in csv.reader(line for line in text.splitlines() if line and not line.startswith("#"))]
    if not rows:
        raise StageError("fit", f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    if len(header) == 1:
        try:
            float(header[0])
            body = rows
        except ValueError:
            pass
        return np.array([float(r[0]) for r in body if r])
    if column is None and "k" in header and "count" in header:
        k, c = header.index("k"), header.index("count")
        return np.repeat([float(r[k]) for r in body], [int(r[c]) for r in body])
    if column is None:
        column = next((c for c in SAMPLE_COLUMNS if c in header), None)
    if column is None or column not in header:
        raise StageError("fit", f"choose a column with --column; header is {header}")
    idx = header.index(column)
    return np.array([float(r[idx]) for r in body if r])


def cmd_fit(args, argv):
    samples = load_samples(args.input, args.column)
    positive = samples[samples > 0]
    methods = list(powerlaw.METHODS) if args.method == "both" else [args.method]
    try:
        fits = [powerlaw.fit(positive, args.xmin, m) for m in methods]
    except ValueError as exc:
        raise StageError("fit", str(exc)) from None
    if len(fits) == 1:
        payload = fits[0].to_json()
    else:
        payload = {f.method: f.to_json() for f in fits}
    payload_out = dict(payload)
    payload_out["n_dropped_nonpositive"] = int(samples.size - positive.size)
    outputs = {"out": args.out}
    with _open_out(args.out) as fh:
        powerlaw.write_fit(payload_out, fh)
    if args.ccdf_out:
        with _open_out(args.ccdf_out) as fh:
            powerlaw.write_ccdf(powerlaw.ccdf(positive), fh)
        outputs["ccdf_out"] = args.ccdf_out
    for f in fits:
        print(f"{f.method}: alpha-1 = {f.alpha_minus_1:.4f} (alpha = {f.alpha:.4f}, xmin = {f.xmin:g}, "
              f"R^2 = {f.fit_quality:.4f}, n_tail = {f.n_tail})")
    write_manifest(args, argv, {"in": args.input}, outputs,
                   {"method": args.method, "xmin": args.xmin, "column": args.column})


def cmd_growth(args, argv):
    if args.config:
        try:
            data = json.loads(_read_text(args.config, "growth"))
        except json.JSONDecodeError as exc:
            raise StageError("growth", f"bad config JSON: {exc}") from None
    else:
        data = {}
    for key in ("population", "steps", "freq_exponent", "presence_exponent", "freq_scale",
                "presence_scale", "step_seconds"):
        val = getattr(args, key)
        if val is not None:
            data[key] = val
    if args.seed is not None:
        data["seed"] = args.seed
    try:
        config = growth.GrowthConfig.from_json(data)
    except (TypeError, ValueError) as exc:
        raise StageError("growth", f"invalid config: {exc}") from None
    run = growth.simulate(config)
    outputs = {"out": args.out}
    with _open_out(args.out) as fh:
        encounters.write_trace(run.trace, fh)
    if args.edges_out:
        with _open_out(args.edges_out) as fh:
            encounters.write_edges(run.graph, fh)
        outputs["edges_out"] = args.edges_out
    write_manifest(args, argv, {"config": args.config} if args.config else {}, outputs,
                   config.to_json(), seed=config.seed)


def cmd_emulate(args, argv):
    trace = _load_trace(args.trace, "emulate")
    expiry = args.expiry
    if args.model == "sis" and expiry is None:
        expiry = diffusion.THREE_DAYS
    try:
        spec = diffusion.EmulationSpec(args.model, expiry if args.model == "sis" else None,
                                       args.rate, args.seed)
    except ValueError as exc:
        raise StageError("emulate", str(exc)) from None
    fractions = args.fractions or [0.0]
    try:
        if args.inject:
            device, t = args.inject
            results = {}
            for frac in fractions:
                reduced = encounters.remove_encounters(trace, frac, args.removal_policy)
                res = diffusion.exhaustive_sweep(reduced, spec, injections=[(device, t)], threads=1)
                res.fraction = frac
                results[frac] = res
        else:
            results = diffusion.removal_experiment(
                trace, spec, fractions, args.removal_policy, args.sample_limit, threads=args.threads
            )
    except ValueError as exc:
        raise StageError("emulate", str(exc)) from None
    outputs = {"out": args.out}
    with _open_out(args.out) as fh:
        diffusion.write_curves(results, fh)
    if args.summary_out:
        with _open_out(args.summary_out) as fh:
            diffusion.write_summary(results, fh)
        outputs["summary_out"] = args.summary_out
    for frac, res in results.items():
        ext = res.median_extinction_time
        print(f"fraction {frac:g}: mean final reach {res.mean_final_reach}, median extinction "
              f"{'n/a' if ext is None else ext} over {len(res.curves)} injections")
    params = {"model": spec.model, "expiry": spec.expiry, "transmission_rate": spec.transmission_rate,
              "removal_policy": args.removal_policy, "fractions": fractions,
              "sample_limit": args.sample_limit,
              "inject": list(args.inject) if args.inject else "exhaustive"}
    write_manifest(args, argv, {"trace": args.trace}, outputs, params, seed=args.seed)


def cmd_remove(args, argv):
    trace = _load_trace(args.trace, "remove")
    try:
        reduced = encounters.remove_encounters(trace, args.fraction, args.policy)
    except ValueError as exc:
        raise StageError("remove", str(exc)) from None
    with _open_out(args.out) as fh:
        encounters.write_trace(reduced, fh)
    write_manifest(args, argv, {"trace": args.trace}, {"out": args.out},
                   {"fraction": args.fraction, "policy": args.policy})


# --- parser ------------------------------------------------------------------


def _fraction(text):
    v = float(text)
    if not 0 <= v <= 1:
        raise argparse.ArgumentTypeError("fraction must lie in [0, 1]")
    return v


def _positive_int(text):
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="encounter-net",
        description="Temporal encounter networks from proximity sightings.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    threads_help = "worker threads (default: $ENCOUNTER_NET_THREADS, else all cores); never changes results"

    s = sub.add_parser("ingest", help="validate a sighting log and write it deduplicated and sorted")
    s.add_argument("--in", dest="input", required=True, help="sightings CSV: device_id,scanner_id,time")
    s.add_argument("--out", required=True, help="normalized sightings CSV")
    s.set_defaults(func=cmd_ingest)

    s = sub.add_parser("sessions", help="merge sightings into visit sessions")
    s.add_argument("--in", dest="input", required=True, help="sightings CSV")
    s.add_argument("--gap", type=_positive_int, default=ingest.DEFAULT_GAP,
                   help="max seconds between detections of one session (default 300)")
    s.add_argument("--scan-period", type=_positive_int, default=ingest.DEFAULT_SCAN_PERIOD,
                   help="seconds of presence implied by one detection (default 60)")
    s.add_argument("--out", required=True, help="sessions CSV: device_id,scanner_id,start,end")
    s.set_defaults(func=cmd_sessions)

    s = sub.add_parser("encounters", help="derive pairwise encounters from sessions")
    s.add_argument("--in", dest="input", required=True, help="sessions CSV")
    s.add_argument("--merge-gap", type=int, default=0,
                   help="fuse encounters of one pair and scanner at most this many seconds apart (default 0)")
    s.add_argument("--out", required=True, help="encounter trace CSV: a,b,scanner_id,start,end")
    s.add_argument("--edges-out", help="aggregate edge list CSV: a,b,total_overlap,event_count")
    s.set_defaults(func=cmd_encounters)

    s = sub.add_parser("metrics", help="structural statistics of the aggregate graph")
    s.add_argument("--trace", required=True, help="encounter trace CSV")
    s.add_argument("--out", required=True, help="summary JSON")
    s.add_argument("--profile-out", help="degree profile CSV: k,count,C_k")
    s.add_argument("--degrees-out", help="per-device degree CSV: device_id,degree")
    s.add_argument("--threads", type=_positive_int, help=threads_help)
    s.set_defaults(func=cmd_metrics)

    s = sub.add_parser("temporal", help="node and link presence/frequency")
    s.add_argument("--trace", required=True, help="encounter trace CSV")
    s.add_argument("--sessions", help="sessions CSV, needed for node statistics")
    s.add_argument("--links-out", required=True, help="CSV: a,b,l_p,l_f")
    s.add_argument("--nodes-out", help="CSV: device_id,n_p,n_f")
    s.add_argument("--out", help="JSON report incl. Spearman correlation of n_p and n_f")
    s.set_defaults(func=cmd_temporal)

    s = sub.add_parser("fit", help="fit a power-law tail")
    s.add_argument("--in", dest="input", required=True, help="CSV of samples (or a k,count profile)")
    s.add_argument("--column", help="sample column name")
    s.add_argument("--method", choices=("mle", "ccdf_ls", "both"), default="both")
    s.add_argument("--xmin", type=float, help="tail threshold (default: smallest sample)")
    s.add_argument("--out", required=True, help="fit JSON")
    s.add_argument("--ccdf-out", help="CCDF CSV: x,p")
    s.set_defaults(func=cmd_fit)

    s = sub.add_parser("growth", help="simulate the availability-driven growth model")
    s.add_argument("--config", help="GrowthConfig JSON; flags below override it")
    s.add_argument("--population", type=_positive_int)
    s.add_argument("--steps", type=_positive_int)
    s.add_argument("--freq-exponent", type=float)
    s.add_argument("--presence-exponent", type=float)
    s.add_argument("--freq-scale", type=float)
    s.add_argument("--presence-scale", type=float)
    s.add_argument("--step-seconds", type=_positive_int)
    s.add_argument("--seed", type=int)
    s.add_argument("--out", required=True, help="encounter trace CSV")
    s.add_argument("--edges-out", help="aggregate edge list CSV")
    s.set_defaults(func=cmd_growth)

    s = sub.add_parser("emulate", help="SI/SIS replay with optional removal sweep")
    s.add_argument("--trace", required=True, help="encounter trace CSV")
    s.add_argument("--model", type=str.lower, choices=("si", "sis"), default="si")
    s.add_argument("--expiry", type=float, help="SIS infection lifetime in seconds (default 259200 = 3 days)")
    s.add_argument("--rate", type=float, default=1.0, help="transmission probability per encounter")
    s.add_argument("--inject", type=parse_injection, help="single injection DEVICE@TIME (default: exhaustive)")
    s.add_argument("--sample-limit", type=_positive_int, help="seeded subsample of the injection set")
    s.add_argument("--removal-policy", choices=encounters.POLICIES, default="briefest")
    s.add_argument("--fractions", type=parse_fractions, help="e.g. 0,0.1,...,0.9 (default 0)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--threads", type=_positive_int, help=threads_help)
    s.add_argument("--out", required=True,
                   help="curves CSV: fraction,injection_device,injection_time,event_time,count")
    s.add_argument("--summary-out", help="JSON per fraction: mean_final_reach, median_extinction_time")
    s.set_defaults(func=cmd_emulate)

    s = sub.add_parser("remove", help="drop the briefest or most persistent encounters")
    s.add_argument("--trace", required=True)
    s.add_argument("--fraction", type=_fraction, required=True)
    s.add_argument("--policy", choices=encounters.POLICIES, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_remove)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    try:
        args.func(args, argv)
    except StageError as exc:
        print(f"encounter-net: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"encounter-net: error: {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
