"""Acceptance gate: one test per criterion, each reporting a PASS/FAIL line.

Lines are printed immediately (visible with ``-s``) and repeated in the
terminal summary by ``conftest.py``.
"""

import csv
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from fieldnet import channel as ch
from fieldnet import cli
from fieldnet import loadgen as lg
from fieldnet import metrics as m
from fieldnet import rtsim as rs

RESULTS = {}


def verdict(n, title, ok, detail):
    line = f"ACCEPTANCE {n:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
    RESULTS[n] = line
    print(line)
    assert ok, line


def test_01_one_way_latency():
    a = m.present(m.one_way_latency(22.9))
    b = m.present(m.one_way_latency(63.9))
    verdict(1, "one-way latency", (a, b) == (11.5, 32.0), f"22.9 -> {a}, 63.9 -> {b}")


def test_02_response_window():
    w = rs.response_window(1, 3)
    ok = abs(w - 333.33) < 0.005 and m.fmt(w) == "333.3"
    verdict(2, "response window", ok, f"{w!r} ms, presented {m.fmt(w)}")


def test_03_fourg_lag_bracket():
    totals = []
    for rtt in (217.0, 293.6):
        rep = rs.simulate_mission(rs.MissionSpec(), rs.DelayModel.constant(rtt))
        totals.append((rep.total_cumulative_delay_ms / 1000.0, rep))
    (lo, r1), (hi, r2) = totals
    ok = (
        abs(lo - 4.70) <= 0.05
        and abs(hi - 7.00) <= 0.05
        and r1.spec.messages == 30
        and r1.spec.travel_time_s == 10.0
        and not r1.real_time
        and not r2.real_time
    )
    verdict(3, "4G lag bracket", ok, f"RTT 217.0 -> {lo:.4f} s, RTT 293.6 -> {hi:.4f} s")


def test_04_fiveg_wifi6_verdicts():
    spec = rs.MissionSpec(processing_ms=273.0)
    good = rs.simulate_mission(spec, rs.DelayModel.constant(22.9))
    margin_ok = good.real_time and all(abs(x - 37.4) <= 0.1 for x in good.margins)
    rng = np.random.default_rng(4)
    lagging = [60.4, 63.9, 100.0, 217.0, 293.6] + list(rng.uniform(60.4, 5000.0, 200))
    all_lag = all(not rs.simulate_mission(spec, rs.DelayModel.constant(float(r))).real_time for r in lagging)
    nvlos = rs.simulate_mission(spec, rs.DelayModel.constant(63.9))
    notes = " ".join(nvlos.notes)
    footnote_ok = "never adjusted" in notes and "30 FPS" in notes and "60.3" in notes
    ok = margin_ok and all_lag and footnote_ok
    verdict(
        4,
        "5G/WiFi6 verdicts",
        ok,
        f"RTT 22.9 margin {good.margins[0]:.4f} ms ({good.verdict}); "
        f"{len(lagging)} RTTs >= 60.4 all lag; footnote documented={footnote_ok}",
    )


def test_05_saturation(catalog):
    t0 = time.perf_counter()
    five = lg.run_throughput_test(lg.EmulatedTransport(catalog["FIVEG_N77_VLOS"], 1), "RGBD1", 30, seed=1)
    wifi = lg.run_throughput_test(lg.EmulatedTransport(catalog["WIFI6_LOCAL"], 1), "RGBD1", 30, seed=1)
    elapsed = time.perf_counter() - t0
    f_mbps, f_fps = float(np.mean(five.sent_mbps)), float(np.mean(five.delivered_fps))
    w_mbps, w_fps = float(np.mean(wifi.sent_mbps)), float(np.mean(wifi.delivered_fps))
    ok = (
        abs(f_mbps - 60) <= 3
        and abs(f_fps - 12.5) <= 1
        and abs(w_mbps - 144) <= 3
        and abs(w_fps - 30) <= 0.5
        and elapsed < 1.0
    )
    verdict(
        5,
        "saturation",
        ok,
        f"5G {f_mbps:.2f} Mbps / {f_fps:.2f} FPS, WiFi6 {w_mbps:.2f} Mbps / {w_fps:.2f} FPS, {elapsed:.3f} s virtual-clock",
    )


def test_06_probe_fidelity(tn_profile):
    t0 = time.perf_counter()
    recs = lg.run_protocol(lg.EmulatedTransport(tn_profile), None, repeats=5, duration_s=30, seed=6)
    elapsed = time.perf_counter() - t0
    stats = lg.records_stats(recs)
    ok = abs(stats.latency_mean_ms - 50) <= 2 and stats.latency_min_ms >= 40 and elapsed < 1.0
    verdict(
        6,
        "probe fidelity",
        ok,
        f"mean {stats.latency_mean_ms:.3f} ms, min {stats.latency_min_ms:.3f} ms over {stats.sample_count} "
        f"samples in {elapsed:.3f} s",
    )


def _brute(values):
    """Exact rational statistics: mean, sample std, min, max."""
    xs = [Fraction(v) for v in values]
    n = len(xs)
    mean = sum(xs) / n
    var = sum((x - mean) ** 2 for x in xs) / (n - 1) if n > 1 else Fraction(0)
    return float(mean), float(var) ** 0.5, float(min(xs)), float(max(xs))


def _close(a, b):
    return abs(a - b) <= 1e-9 * max(abs(a), abs(b)) or abs(a - b) <= 1e-12


def test_07_metrics_oracle():
    rnd = random.Random(7)
    worst = 0.0
    failures = 0
    for _ in range(1000):
        runs = [
            ([rnd.uniform(0, 500) for _ in range(rnd.randint(1, 8))], [rnd.uniform(0, 200) for _ in range(rnd.randint(1, 8))])
            for _ in range(rnd.randint(1, 4))
        ]
        rtt, tput = runs[0]
        single = m.compute_run_stats(rtt, tput)
        pooled = m.combine_runs(runs)
        cases = [
            (single, _brute(rtt), _brute(tput)),
            (pooled, _brute([v for r, _ in runs for v in r]), _brute([v for _, t in runs for v in t])),
        ]
        for got, (lm, ls, lmin, _), (tm, ts, _, tmax) in cases:
            pairs = [
                (got.latency_mean_ms, lm),
                (got.latency_std_ms, ls),
                (got.latency_min_ms, lmin),
                (got.throughput_mean_mbps, tm),
                (got.throughput_std_mbps, ts),
                (got.throughput_max_mbps, tmax),
            ]
            for a, b in pairs:
                if b:
                    worst = max(worst, abs(a - b) / abs(b))
                failures += not _close(a, b)
    verdict(7, "metrics oracle", failures == 0, f"1000 series, worst relative error {worst:.2e}")


def _pipeline(tmp, seed):
    presets = tmp / "presets.ini"
    presets.write_text(
        "[TN]\nuplink_cap_mbps = 40\nrtt_mean_ms = 50\nrtt_std_ms = 5\nrtt_min_ms = 40\n"
        "loss_fraction = 0.02\nprovenance = acceptance fixture\n"
        "[NARROW]\nuplink_cap_mbps = 8\nrtt_mean_ms = 30\nrtt_std_ms = 12\nrtt_min_ms = 5\n"
        "provenance = acceptance fixture\n"
    )
    plan = tmp / "plan.ini"
    plan.write_text(
        "[plan]\nnetworks = TN, NARROW\nprofiles = RGB1, RGB4, RGBD1\nrepeats = 3\nduration_s = 5\n"
        "[location P.R.L.]\n[location R.W.P.]\n"
    )
    out = tmp / "results"
    rc = cli.main(["stream", "--plan", str(plan), "--presets", str(presets), "--seed", str(seed), "--output", str(out)])
    cli.build_report(out)
    return rc, {p.relative_to(out).as_posix(): p.read_bytes() for p in sorted(out.rglob("*.csv"))}


def test_08_determinism(tmp_path, catalog):
    (tmp_path / "a").mkdir()
    (tmp_path / "b").mkdir()
    rc_a, a = _pipeline(tmp_path / "a", 8)
    rc_b, b = _pipeline(tmp_path / "b", 8)
    ok = rc_a == rc_b == 0 and a == b and len(a) > 50
    verdict(8, "determinism", ok, f"{len(a)} CSV files byte-identical across two seeded runs")


def _fit(start, end):
    h = 0.0 if start <= end else 1.0
    A = np.array([[0.0, 0.0, 1.0], [1.0, 1.0, 1.0], [2.0 * h, 1.0, 0.0]])
    return np.linalg.solve(A, np.array([start, end, 0.0]))


def test_09_trend_interpolation():
    rng = np.random.default_rng(9)
    xs = np.linspace(0.0, 1.0, 101)
    bad_end = bad_mono = bad_fit = 0
    for _ in range(100):
        start, end = (float(v) for v in rng.uniform(0, 400, 2))
        model = rs.DelayModel(start, end, rs.TrendMode.VERTEX_QUADRATIC)
        ys = np.array([rs.trend_rtt(model, float(x)) for x in xs])
        bad_end += ys[0] != start or ys[-1] != end
        d = np.diff(ys)
        bad_mono += not (np.all(d >= 0) if start <= end else np.all(d <= 0))
        a, b, c = _fit(start, end)
        bad_fit += not np.allclose(ys, a * xs**2 + b * xs + c, rtol=1e-9, atol=1e-9)
    ok = bad_end == bad_mono == bad_fit == 0
    verdict(9, "trend interpolation", ok, f"100 pairs: endpoint misses {bad_end}, non-monotone {bad_mono}, fit mismatches {bad_fit}")


def test_10_preset_regression(tmp_path, catalog):
    plan = tmp_path / "plan.ini"
    plan.write_text("[plan]\nnetworks = WIFI6_LOCAL, FIVEG_N77_VLOS\nrepeats = 5\nduration_s = 30\n[location P.R.L.]\n")
    out = tmp_path / "results"
    rc = cli.main(["probe", "--plan", str(plan), "--output", str(out)])
    cli.build_report(out)
    with open(out / "report" / "table_latency_gaps.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    gap = rows[0]["mean_gap_ms"] if rows else None
    ok = (
        rc == 0
        and gap == "18.2"
        and rows[0]["lower_latency_network"] == "WIFI6_LOCAL"
        and catalog["FIVEG_N77_VLOS"].uplink_cap_mbps == 60.0
        and all(catalog.provenance[n] for n in ch.REQUIRED_PRESETS)
    )
    verdict(10, "preset regression", ok, f"WiFi6-vs-5G mean latency gap rendered as {gap} ms")
