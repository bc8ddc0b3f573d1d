"""Batch orchestration: ``fieldnet probe|stream|simulate|report|serve``.

Exit codes: 0 success, 1 validation error, 2 transport failure, 3 partial results.

Plan files are INI::

    [plan]
    networks = WIFI6_LOCAL, FIVEG_N77_VLOS, FOURG_PUBLIC
    profiles = RGB1, RGB4, RGBD1
    repeats = 5
    duration_s = 30
    probe_rate_hz = 10
    output = results

    [location P.R.L.]
    distance_to_ap_m = 49.1
    environment = Vegetable Polytunnel

Results directory layout::

    plan.json                  echo of the plan, seed and transport
    stats.csv / stats.json     one row per run plus per-run-mean and pooled rows
    runs/<loc>__<net>__<profile>__run<i>_rtt.csv
    runs/<loc>__<net>__<profile>__run<i>_throughput.csv
    failures.txt               only when some items failed
    report/                    written by ``fieldnet report``
"""

from __future__ import annotations

import argparse
import configparser
import csv
import json
import logging
import math
import sys
import warnings
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from fieldnet import channel as ch
from fieldnet import loadgen as lg
from fieldnet import rtsim, svg
from fieldnet.errors import ConfigurationError, ProtocolError, SessionError
from fieldnet.metrics import RunStats, average_runs, fmt

log = logging.getLogger("fieldnet")

EXIT_OK, EXIT_VALIDATION, EXIT_TRANSPORT, EXIT_PARTIAL = 0, 1, 2, 3

STATS_HEADER = ["location", "network", "profile", "run", "method"] + RunStats.field_names()
PROBE_PROFILE = "probe"


@dataclass(frozen=True)
class Location:
    label: str
    distance_to_ap_m: float | None = None
    environment: str = ""


@dataclass(frozen=True)
class ExperimentPlan:
    locations: tuple
    networks: tuple
    profiles: tuple
    repeats: int = lg.DEFAULT_REPEATS
    duration_s: float = lg.DEFAULT_DURATION_S
    probe_rate_hz: float = lg.DEFAULT_PROBE_HZ
    output: str = "results"

    def validate(self, catalog=None):
        """Raise ConfigurationError naming every bad key; ``catalog=None`` skips preset lookup."""
        bad = []
        if not self.locations:
            bad.append("location")
        labels = [loc.label for loc in self.locations]
        bad.extend(f"location {lab}" for lab in sorted({x for x in labels if labels.count(x) > 1}))
        if not self.networks:
            bad.append("plan.networks")
        if catalog is not None:
            bad.extend(f"plan.networks:{n}" for n in self.networks if n not in catalog)
        bad.extend(f"plan.profiles:{p}" for p in self.profiles if p not in lg.PROFILES)
        if not isinstance(self.repeats, int) or self.repeats < 1:
            bad.append("plan.repeats")
        if not self.duration_s > 0:
            bad.append("plan.duration_s")
        if not self.probe_rate_hz > 0:
            bad.append("plan.probe_rate_hz")
        if bad:
            raise ConfigurationError(f"invalid plan: {', '.join(bad)}", bad)
        return self

    def count_runs(self, mode="stream"):
        profiles = len(self.profiles) if mode == "stream" else 1
        return len(self.locations) * len(self.networks) * profiles * self.repeats


def _split(value):
    return tuple(v.strip() for v in value.replace("\n", ",").split(",") if v.strip())


def parse_plan(text, source="<string>"):
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"{source}: {exc}") from exc
    bad = []
    plan = parser["plan"] if "plan" in parser else {}
    known = {"networks", "profiles", "repeats", "duration_s", "probe_rate_hz", "output"}
    bad.extend(f"plan.{k}" for k in sorted(set(plan) - known))
    bad.extend(f"[{s}]" for s in parser.sections() if s != "plan" and not s.startswith("location "))

    kwargs = {}
    for key, conv in (("repeats", int), ("duration_s", float), ("probe_rate_hz", float)):
        if key in plan:
            try:
                kwargs[key] = conv(plan[key])
            except ValueError:
                bad.append(f"plan.{key}")
    locations = []
    for name in parser.sections():
        if not name.startswith("location "):
            continue
        sec = parser[name]
        label = name[len("location "):].strip()
        bad.extend(f"{name}.{k}" for k in sorted(set(sec) - {"distance_to_ap_m", "environment"}))
        dist = None
        if "distance_to_ap_m" in sec:
            try:
                dist = float(sec["distance_to_ap_m"])
            except ValueError:
                bad.append(f"{name}.distance_to_ap_m")
        locations.append(Location(label, dist, sec.get("environment", "").strip()))
    if bad:
        raise ConfigurationError(f"{source}: invalid plan keys: {', '.join(bad)}", bad)
    return ExperimentPlan(
        locations=tuple(locations),
        networks=_split(plan.get("networks", "")),
        profiles=_split(plan.get("profiles", "")),
        output=plan.get("output", "results").strip(),
        **kwargs,
    )


def load_plan(path):
    path = Path(path)
    return parse_plan(path.read_text(encoding="utf-8"), source=str(path))


def item_seed(seed, location, network, profile):
    """Stable per-item seed so adding plan items never reshuffles the others."""
    tag = zlib.crc32(f"{location}|{network}|{profile}".encode())
    return int(np.random.SeedSequence([seed, tag]).generate_state(1)[0])


# --- running plans ----------------------------------------------------------


@dataclass
class PlanResult:
    records: list = field(default_factory=list)
    failures: list = field(default_factory=list)  # (location, network, profile, message)
    transport_failures: int = 0


def run_plan(plan, mode="stream", catalog=None, seed=0, transport=None):
    """Run every plan item. ``transport=None`` emulates each network from ``catalog``.

    With a real ``transport`` the network names are labels only and items run
    sequentially; an unreachable peer fails that item, not the whole plan.
    """
    result = PlanResult()
    profiles = [lg.get_profile(p) for p in plan.profiles] if mode == "stream" else [None]
    for loc in plan.locations:
        for net in plan.networks:
            if transport is not None:
                try:
                    transport.check()
                except SessionError as exc:
                    for prof in profiles:
                        name = prof.name if prof else PROBE_PROFILE
                        result.failures.append((loc.label, net, name, str(exc)))
                        result.transport_failures += 1
                    continue
            for prof in profiles:
                name = prof.name if prof else PROBE_PROFILE
                tr = transport if transport is not None else lg.EmulatedTransport(catalog[net])
                try:
                    recs = lg.run_protocol(
                        tr,
                        prof,
                        repeats=plan.repeats,
                        duration_s=plan.duration_s,
                        seed=item_seed(seed, loc.label, net, name),
                        location=loc.label,
                        network=net,
                        probe_rate_hz=plan.probe_rate_hz,
                    )
                except ProtocolError as exc:
                    result.records.extend(exc.partial)
                    result.failures.append((loc.label, net, name, str(exc)))
                    if isinstance(exc.__cause__, SessionError):
                        result.transport_failures += 1
                    continue
                result.records.extend(recs)
    return result


def _stats_row(loc, net, prof, run, method, stats):
    row = {"location": loc, "network": net, "profile": prof, "run": run, "method": method}
    row.update(stats.as_dict())
    return row


def stats_rows(records):
    """Per-run rows, then a per-run-mean and a pooled row for each (location, network, profile)."""
    rows = []
    groups = {}
    for rec in records:
        groups.setdefault(rec.key[:3], []).append(rec)
    for (loc, net, prof), recs in groups.items():
        recs = sorted(recs, key=lambda r: r.run_index)
        per_run = []
        for rec in recs:
            st = rec.stats()
            per_run.append(st)
            rows.append(_stats_row(loc, net, prof, str(rec.run_index), "run", st))
        rows.append(_stats_row(loc, net, prof, "mean", "per-run-mean", average_runs(per_run)))
        rows.append(_stats_row(loc, net, prof, "combined", "pooled", lg.records_stats(recs)))
    return rows


def _cell(value):
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results(output, result, plan, seed, transport_desc):
    out = Path(output)
    runs = out / "runs"
    runs.mkdir(parents=True, exist_ok=True)
    for rec in result.records:
        rtt_path, tput_path = lg.record_paths(runs, rec)
        lg.write_rtt_csv(rec, rtt_path)
        if rec.profile is not None:
            lg.write_throughput_csv(rec, tput_path)
    rows = stats_rows(result.records) if result.records else []
    with open(out / "stats.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(STATS_HEADER)
        for row in rows:
            w.writerow([_cell(row[k]) for k in STATS_HEADER])
    (out / "stats.json").write_text(json.dumps(rows, indent=2) + "\n", encoding="utf-8")
    meta = {
        "seed": seed,
        "transport": transport_desc,
        "repeats": plan.repeats,
        "duration_s": plan.duration_s,
        "probe_rate_hz": plan.probe_rate_hz,
        "networks": list(plan.networks),
        "profiles": list(plan.profiles),
        "locations": [
            {"label": l.label, "distance_to_ap_m": l.distance_to_ap_m, "environment": l.environment}
            for l in plan.locations
        ],
    }
    (out / "plan.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    failures = out / "failures.txt"
    if result.failures:
        lines = [f"{loc}\t{net}\t{prof}\t{msg}" for loc, net, prof, msg in result.failures]
        failures.write_text("\n".join(lines) + "\n", encoding="utf-8")
    elif failures.exists():
        failures.unlink()
    return rows


# --- report -----------------------------------------------------------------

TABLE_COLUMNS = [
    ("latency_mean_ms", "lat mean"),
    ("latency_std_ms", "lat std"),
    ("latency_min_ms", "lat min"),
    ("throughput_mean_mbps", "tput mean"),
    ("throughput_std_mbps", "tput std"),
    ("throughput_max_mbps", "tput max"),
]


def read_stats_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != STATS_HEADER:
            raise ValueError(f"{path}: unexpected header")
        rows = []
        for row in reader:
            for key, _ in TABLE_COLUMNS:
                row[key] = float(row[key])
            row["sample_count"] = int(row["sample_count"])
            rows.append(row)
    return rows


def _text_table(header, rows):
    widths = [max(len(str(c)) for c in col) for col in zip(header, *rows)] if rows else [len(h) for h in header]
    line = lambda cells: "  ".join(str(c).ljust(w) if i < 3 else str(c).rjust(w) for i, (c, w) in enumerate(zip(cells, widths)))
    out = [line(header), "  ".join("-" * w for w in widths)]
    out.extend(line(r) for r in rows)
    return "\n".join(out) + "\n"


def latency_gaps(rows):
    """Mean latency difference between each network pair over shared (location, profile) cells.

    Networks are ordered by overall mean latency so gaps are non-negative.
    """
    means = {}
    for r in rows:
        if r["method"] == "per-run-mean":
            means[(r["location"], r["profile"], r["network"])] = r["latency_mean_ms"]
    nets = sorted({k[2] for k in means})
    overall = {n: math.fsum(v for k, v in means.items() if k[2] == n) / sum(1 for k in means if k[2] == n) for n in nets}
    nets.sort(key=lambda n: (overall[n], n))
    cells = sorted({k[:2] for k in means})
    gaps = []
    for i, a in enumerate(nets):
        for b in nets[i + 1:]:
            diffs = [means[c + (b,)] - means[c + (a,)] for c in cells if c + (a,) in means and c + (b,) in means]
            if diffs:
                gaps.append((a, b, math.fsum(diffs) / len(diffs), len(diffs)))
    return gaps


def _runs_for(rows, loc, net, prof):
    return sorted(
        (int(r["run"]) for r in rows
         if r["method"] == "run" and (r["location"], r["network"], r["profile"]) == (loc, net, prof)),
    )


def _mean_std(stack):
    """Mean and +/-1 sample std across runs at each index; std is 0 with one run."""
    arr = np.array(stack, dtype=float)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        mean = np.nanmean(arr, axis=0)
        if arr.shape[0] > 1:
            std = np.nanstd(arr, axis=0, ddof=1)
        else:
            std = np.zeros(arr.shape[1])
    return mean, np.nan_to_num(std)


def build_report(results_dir):
    """Render tables and plots into ``results_dir/report``.

    Returns ``(rendered_paths, skipped)`` where ``skipped`` lists
    ``(path, reason)`` for missing or corrupt inputs.
    """
    results = Path(results_dir)
    report = results / "report"
    skipped = []
    rendered = []
    try:
        rows = read_stats_csv(results / "stats.csv")
    except (OSError, ValueError, KeyError) as exc:
        return rendered, [(str(results / "stats.csv"), str(exc))]
    report.mkdir(parents=True, exist_ok=True)

    summary = [r for r in rows if r["method"] == "per-run-mean"]
    header = ["location", "network", "profile"] + [label for _, label in TABLE_COLUMNS]
    table = [[r["location"], r["network"], r["profile"]] + [fmt(r[k]) for k, _ in TABLE_COLUMNS] for r in summary]
    pooled = [r for r in rows if r["method"] == "pooled"]
    pooled_table = [[r["location"], r["network"], r["profile"]] + [fmt(r[k]) for k, _ in TABLE_COLUMNS] for r in pooled]
    if table:
        text = "Per-run statistics averaged over runs (latency ms, throughput Mbps)\n\n"
        text += _text_table(header, table)
        text += "\nPooled statistics over all runs' samples\n\n" + _text_table(header, pooled_table)
        path = report / "table_results.txt"
        path.write_text(text, encoding="utf-8")
        rendered.append(path)
        path = report / "table_results.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["method"] + header)
            w.writerows([["per-run-mean"] + r for r in table] + [["pooled"] + r for r in pooled_table])
        rendered.append(path)

    gaps = latency_gaps(rows)
    if gaps:
        path = report / "table_latency_gaps.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["lower_latency_network", "higher_latency_network", "mean_gap_ms", "cells"])
            for a, b, gap, n in gaps:
                w.writerow([a, b, fmt(gap), n])
        rendered.append(path)

    runs_dir = results / "runs"
    combos = sorted({(r["location"], r["profile"]) for r in summary})
    for loc, prof in combos:
        nets = [r["network"] for r in summary if (r["location"], r["profile"]) == (loc, prof)]
        lat_series, tput_series = [], []
        for net in nets:
            lat_stack, tput_stack, x_lat, x_tput = [], [], None, None
            for run in _runs_for(rows, loc, net, prof):
                rtt_path, tput_path = lg.run_paths(runs_dir, loc, net, prof, run)
                try:
                    series = lg.read_rtt_csv(rtt_path)
                    if x_lat is None or len(series.time_s) == len(x_lat):
                        x_lat = series.time_s if x_lat is None else x_lat
                        lat_stack.append(series.rtt_ms)
                    else:
                        skipped.append((str(rtt_path), "series length differs from run 0"))
                except (OSError, ValueError, IndexError) as exc:
                    skipped.append((str(rtt_path), str(exc)))
                if prof == PROBE_PROFILE:
                    continue
                try:
                    sent, _ = lg.read_throughput_csv(tput_path)
                    if x_tput is None or len(sent) == len(x_tput):
                        x_tput = np.arange(len(sent), dtype=float) if x_tput is None else x_tput
                        tput_stack.append(sent)
                    else:
                        skipped.append((str(tput_path), "series length differs from run 0"))
                except (OSError, ValueError, IndexError) as exc:
                    skipped.append((str(tput_path), str(exc)))
            if lat_stack:
                m, s = _mean_std(lat_stack)
                lat_series.append((net, x_lat.tolist(), m.tolist(), s.tolist()))
            if tput_stack:
                m, s = _mean_std(tput_stack)
                tput_series.append((net, x_tput.tolist(), m.tolist(), s.tolist()))
        stem = f"{lg.safe_label(loc)}__{lg.safe_label(prof)}"
        if lat_series:
            path = report / f"latency__{stem}.svg"
            path.write_text(
                svg.band_plot(lat_series, f"Latency at {loc} ({prof})", "time (s)", "RTT (ms)"), encoding="utf-8"
            )
            rendered.append(path)
        if tput_series:
            path = report / f"throughput__{stem}.svg"
            path.write_text(
                svg.band_plot(tput_series, f"Throughput at {loc} ({prof})", "time (s)", "data sent (Mbps)"),
                encoding="utf-8",
            )
            rendered.append(path)

    skip_path = report / "skipped.txt"
    if skipped:
        skip_path.write_text("".join(f"{p}\t{why}\n" for p, why in skipped), encoding="utf-8")
    elif skip_path.exists():
        skip_path.unlink()
    return rendered, skipped


# --- argparse front end -----------------------------------------------------


def _parse_target(text):
    parts = text.rsplit(":", 2)
    if len(parts) == 2:
        host, echo, sink = parts[0], parts[1], None
    elif len(parts) == 3:
        host, echo, sink = parts
    else:
        raise ConfigurationError(f"--target must be HOST:ECHO_PORT[:SINK_PORT], got {text!r}", ["--target"])
    try:
        return host, int(echo), int(sink) if sink else None
    except ValueError:
        raise ConfigurationError(f"bad port in --target {text!r}", ["--target"]) from None


def _cmd_run(args, mode):
    try:
        plan = load_plan(args.plan)
        catalog = ch.load_presets(args.presets) if args.presets else ch.default_catalog()
        if mode == "probe":
            plan = ExperimentPlan(plan.locations, plan.networks, (), plan.repeats, plan.duration_s,
                                  plan.probe_rate_hz, plan.output)
        elif not plan.profiles:
            raise ConfigurationError("invalid plan: plan.profiles", ["plan.profiles"])
        plan.validate(None if args.target else catalog)
    except (ConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    output = args.output or plan.output
    transport = None
    desc = "emulated"
    if args.target:
        try:
            host, echo, sink = _parse_target(args.target)
            if mode == "stream" and sink is None:
                raise ConfigurationError("stream over UDP needs HOST:ECHO_PORT:SINK_PORT", ["--target"])
            transport = lg.UdpTransport(host, echo, sink)
        except ConfigurationError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_VALIDATION
        except SessionError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_TRANSPORT
        desc = f"udp {args.target}"
    try:
        result = run_plan(plan, mode, catalog, args.seed, transport)
    finally:
        if transport is not None:
            transport.close()
    rows = write_results(output, result, plan, args.seed, desc)
    for r in rows:
        if r["method"] == "per-run-mean":
            print(
                f"{r['location']:<10} {r['network']:<16} {r['profile']:<6} "
                f"latency {fmt(r['latency_mean_ms'])} ms  throughput {fmt(r['throughput_mean_mbps'])} Mbps"
            )
    if result.failures:
        print("failures:", file=sys.stderr)
        for loc, net, prof, msg in result.failures:
            print(f"  {loc} {net} {prof}: {msg}", file=sys.stderr)
        if not result.records:
            return EXIT_TRANSPORT if result.transport_failures else EXIT_PARTIAL
        return EXIT_PARTIAL
    print(f"{len(result.records)} runs written to {output}")
    return EXIT_OK


def _cmd_simulate(args):
    try:
        if args.mission:
            spec, models = rtsim.load_mission(args.mission)
        else:
            spec, models = rtsim.MissionSpec(), []
        overrides = {}
        if args.velocity is not None:
            overrides["velocity_mps"] = args.velocity
        if args.processing is not None:
            overrides["processing_ms"] = args.processing
        if overrides:
            spec = rtsim.MissionSpec(**{**spec.__dict__, **overrides})
        for rtt in args.rtt or ():
            models.append((f"RTT {fmt(rtt)} ms", rtsim.DelayModel.constant(rtt)))
        if not models:
            raise ConfigurationError("no delay model: give --mission with a [delay] section or --rtt", ["[delay]"])
    except (ConfigurationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        keys = getattr(exc, "keys", ())
        if keys:
            print("offending keys: " + ", ".join(keys), file=sys.stderr)
        return EXIT_VALIDATION

    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    reports = [rtsim.simulate_mission(spec, model, label) for label, model in models]
    summaries = []
    for i, rep in enumerate(reports):
        stem = "mission" if len(reports) == 1 else f"mission_{i}_{lg.safe_label(rep.label)}"
        (out / f"{stem}.csv").write_text(rep.to_csv(), encoding="utf-8")
        summaries.append(rep.summary())
    payload = summaries[0] if len(summaries) == 1 else summaries
    (out / "mission.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    (out / "timeline.svg").write_text(svg.mission_timeline(reports), encoding="utf-8")

    print(f"response window {fmt(spec.response_window_ms)} ms, processing {fmt(spec.processing_ms)} ms, "
          f"{spec.messages} messages over {fmt(spec.travel_time_s)} s")
    for rep in reports:
        s = rep.summary()
        margin = s["min_margin_ms"]
        kind = "lead" if margin >= 0 else "lag"
        total = rep.total_cumulative_delay_ms
        line = f"{rep.label or 'mission'}: {rep.verdict}, worst {kind} {abs(margin):.1f} ms"
        if total > 0:
            line += f", total lag {fmt(total / 1000.0)} s"
        print(line)
    for note in reports[0].notes[:1]:
        print(f"note: {note}")
    return EXIT_OK


def _cmd_report(args):
    rendered, skipped = build_report(args.results)
    for path, why in skipped:
        print(f"skipped {path}: {why}", file=sys.stderr)
    if not rendered:
        print("error: nothing rendered", file=sys.stderr)
        return EXIT_VALIDATION
    for path in rendered:
        print(path)
    return EXIT_OK


def _cmd_serve(args):
    server = lg.EchoServer(args.host, args.echo_port, args.sink_port)
    print(f"echo {server.echo_address[0]}:{server.echo_address[1]} sink port {server.sink_address[1]}", flush=True)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.stop()
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="fieldnet", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_text in (("probe", "latency probes only"), ("stream", "video-stream load with latency probes")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--plan", required=True, help="plan file")
        p.add_argument("--presets", help="preset file (default: bundled presets)")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", help="results directory (default: plan's output)")
        p.add_argument("--target", help="HOST:ECHO_PORT[:SINK_PORT] of a 'fieldnet serve' peer; omit to emulate")

    p = sub.add_parser("simulate", help="real-time mission simulation")
    p.add_argument("--mission", help="mission file")
    p.add_argument("--rtt", type=float, action="append", help="constant RTT in ms (repeatable)")
    p.add_argument("--velocity", type=float, help="override velocity_mps")
    p.add_argument("--processing", type=float, help="override processing_ms")
    p.add_argument("--seed", type=int, default=0, help="accepted for symmetry; missions are deterministic")
    p.add_argument("--output", default="mission", help="output directory")

    p = sub.add_parser("report", help="render tables and plots from a results directory")
    p.add_argument("results")

    p = sub.add_parser("serve", help="run a UDP echo/sink peer")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--echo-port", type=int, default=9000)
    p.add_argument("--sink-port", type=int, default=9001)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.ERROR, format="%(levelname)s %(message)s")
    if args.command == "probe":
        return _cmd_run(args, "probe")
    if args.command == "stream":
        return _cmd_run(args, "stream")
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "report":
        return _cmd_report(args)
    return _cmd_serve(args)


if __name__ == "__main__":
    sys.exit(main())
