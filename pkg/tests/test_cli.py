import csv
import json
import re

import pytest

from fieldnet import cli
from fieldnet import loadgen as lg
from fieldnet.errors import ConfigurationError


def write_plan(tmp_path, locations=("P.R.L.",), networks="WIFI6_LOCAL", profiles="RGBD1", repeats=1, duration=2):
    text = f"[plan]\nnetworks = {networks}\nprofiles = {profiles}\nrepeats = {repeats}\nduration_s = {duration}\n"
    for loc in locations:
        text += f"\n[location {loc}]\ndistance_to_ap_m = 49.1\n"
    path = tmp_path / "plan.ini"
    path.write_text(text)
    return path


def read_stats(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


CONSTANT_PRESETS = """
[SLOW]
uplink_cap_mbps = 500
rtt_mean_ms = 40
provenance = test
[FAST]
uplink_cap_mbps = 500
rtt_mean_ms = 21.8
provenance = test
"""


class TestPlan:
    def test_parse(self, tmp_path):
        plan = cli.load_plan(write_plan(tmp_path, ("P.R.L.", "R.W.P."), "WIFI6_LOCAL, FIVEG_N77_VLOS", "RGB1,RGBD1", 5, 30))
        assert [l.label for l in plan.locations] == ["P.R.L.", "R.W.P."]
        assert plan.networks == ("WIFI6_LOCAL", "FIVEG_N77_VLOS")
        assert plan.count_runs() == 2 * 2 * 2 * 5
        assert plan.count_runs("probe") == 2 * 2 * 5

    def test_validation_lists_every_problem(self, catalog):
        plan = cli.ExperimentPlan((), ("NOPE",), ("RGB9",), repeats=0)
        with pytest.raises(ConfigurationError) as info:
            plan.validate(catalog)
        assert set(info.value.keys) == {"location", "plan.networks:NOPE", "plan.profiles:RGB9", "plan.repeats"}

    def test_duplicate_labels(self, catalog):
        locs = (cli.Location("A"), cli.Location("A"))
        with pytest.raises(ConfigurationError):
            cli.ExperimentPlan(locs, ("WIFI6_LOCAL",), ("RGB1",)).validate(catalog)

    def test_unknown_keys(self):
        with pytest.raises(ConfigurationError) as info:
            cli.parse_plan("[plan]\nnetworks = X\nrepeat = 5\n[site A]\n")
        assert set(info.value.keys) == {"plan.repeat", "[site A]"}

    def test_item_seed_stable(self):
        assert cli.item_seed(0, "A", "N", "P") == cli.item_seed(0, "A", "N", "P")
        assert cli.item_seed(0, "A", "N", "P") != cli.item_seed(0, "B", "N", "P")


class TestRunCommands:
    def test_wifi6_rgbd_stream(self, tmp_path):
        out = tmp_path / "res"
        assert cli.main(["stream", "--plan", str(write_plan(tmp_path)), "--output", str(out)]) == 0
        rows = read_stats(out / "stats.csv")
        mean_row = next(r for r in rows if r["method"] == "per-run-mean")
        assert float(mean_row["throughput_mean_mbps"]) == pytest.approx(144.0, abs=1e-6)
        assert (out / "runs" / "P.R.L.__WIFI6_LOCAL__RGBD1__run0_rtt.csv").exists()
        assert json.loads((out / "plan.json").read_text())["transport"] == "emulated"

    def test_empty_plan(self, tmp_path, capsys):
        path = tmp_path / "empty.ini"
        path.write_text("[plan]\n")
        assert cli.main(["stream", "--plan", str(path), "--output", str(tmp_path / "o")]) == cli.EXIT_VALIDATION
        assert "error" in capsys.readouterr().err

    def test_full_design_space_counts(self, catalog):
        locs = tuple(cli.Location(f"L{i}") for i in range(8))
        plan = cli.ExperimentPlan(
            locs, ("WIFI6_LOCAL", "FIVEG_N77_VLOS", "FOURG_PUBLIC"), ("RGB1", "RGB4", "RGBD1"), 5, 1.0
        ).validate(catalog)
        result = cli.run_plan(plan, "stream", catalog)
        assert len(result.records) == 360 == plan.count_runs()
        assert not result.failures

    def test_probe_mode(self, tmp_path):
        out = tmp_path / "res"
        plan = write_plan(tmp_path, networks="FIVEG_N77_VLOS", repeats=2)
        assert cli.main(["probe", "--plan", str(plan), "--output", str(out)]) == 0
        rows = read_stats(out / "stats.csv")
        assert {r["profile"] for r in rows} == {"probe"}
        assert float(rows[0]["latency_mean_ms"]) == pytest.approx(22.9)

    def test_unreachable_target(self, tmp_path, capsys):
        with lg.EchoServer() as srv:
            host, port = srv.echo_address
        plan = write_plan(tmp_path)
        rc = cli.main(["probe", "--plan", str(plan), "--output", str(tmp_path / "o"), "--target", f"{host}:{port}"])
        assert rc == cli.EXIT_TRANSPORT
        err = capsys.readouterr().err
        assert "P.R.L." in err
        assert (tmp_path / "o" / "failures.txt").exists()

    def test_real_loopback_target(self, tmp_path, echo_server):
        host, echo = echo_server.echo_address
        sink = echo_server.sink_address[1]
        plan = write_plan(tmp_path, duration=1)
        out = tmp_path / "o"
        rc = cli.main(["stream", "--plan", str(plan), "--output", str(out), "--target", f"{host}:{echo}:{sink}"])
        assert rc == 0
        row = next(r for r in read_stats(out / "stats.csv") if r["method"] == "run")
        assert float(row["throughput_mean_mbps"]) == pytest.approx(144.0, rel=0.05)

    def test_bad_target(self, tmp_path):
        rc = cli.main(["probe", "--plan", str(write_plan(tmp_path)), "--target", "nohostport"])
        assert rc == cli.EXIT_VALIDATION


class TestSimulate:
    def test_fiveg(self, tmp_path, capsys):
        assert cli.main(["simulate", "--rtt", "22.9", "--output", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "333.3 ms" in out
        assert "real-time, worst lead 37.4 ms" in out
        summary = json.loads((tmp_path / "mission.json").read_text())
        assert summary["verdict"] == "real-time"
        assert (tmp_path / "timeline.svg").exists()

    def test_fourg_total_lag(self, tmp_path, capsys):
        # RTT 217 ms: cumulative delay 490 ms per pair
        assert cli.main(["simulate", "--rtt", "217.0", "--output", str(tmp_path)]) == 0
        out = capsys.readouterr().out
        assert "not real-time" in out
        assert "total lag 4.7 s" in out

    def test_outputs_deterministic(self, tmp_path):
        for d in ("a", "b"):
            cli.main(["simulate", "--rtt", "22.9", "--rtt", "63.9", "--output", str(tmp_path / d)])
        names = sorted(p.name for p in (tmp_path / "a").iterdir())
        assert len(names) == 4
        for name in names:
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    def test_invalid_config_lists_keys(self, tmp_path, capsys):
        path = tmp_path / "m.ini"
        path.write_text("[mission]\nvelocity_mps = -3\nwheels = 4\n[delay]\nrtt_ms = 20\n")
        assert cli.main(["simulate", "--mission", str(path), "--output", str(tmp_path / "o")]) == 1
        err = capsys.readouterr().err
        assert "mission.velocity_mps" in err and "mission.wheels" in err

    def test_slow_velocity_override(self, tmp_path, capsys):
        assert cli.main(["simulate", "--rtt", "293.6", "--velocity", "0.1", "--output", str(tmp_path)]) == 0
        assert ": real-time" in capsys.readouterr().out


class TestReport:
    @pytest.fixture
    def results(self, tmp_path):
        presets = tmp_path / "presets.ini"
        presets.write_text(CONSTANT_PRESETS)
        plan = write_plan(tmp_path, ("P.R.L.", "R.W.P."), "SLOW, FAST", "RGBD1", repeats=5, duration=3)
        out = tmp_path / "res"
        assert cli.main(["stream", "--plan", str(plan), "--presets", str(presets), "--output", str(out)]) == 0
        return out

    def test_gap_row(self, results):
        rendered, skipped = cli.build_report(results)
        assert not skipped
        rows = read_stats(results / "report" / "table_latency_gaps.csv")
        assert rows == [{"lower_latency_network": "FAST", "higher_latency_network": "SLOW", "mean_gap_ms": "18.2", "cells": "2"}]

    def test_constant_channel_lines_identical_and_flat_band(self, results):
        cli.build_report(results)
        svg = (results / "report" / "latency__P.R.L.__RGBD1.svg").read_text()
        for band in re.findall(r'class="band" points="([^"]+)"', svg):
            pts = band.split()
            half = len(pts) // 2
            upper, lower = pts[:half], pts[half:][::-1]
            assert upper == lower

    def test_single_run_zero_shading(self, tmp_path):
        plan = write_plan(tmp_path, networks="FIVEG_N77_VLOS", profiles="RGB1", repeats=1, duration=3)
        out = tmp_path / "res"
        cli.main(["stream", "--plan", str(plan), "--output", str(out)])
        cli.build_report(out)
        svg = (out / "report" / "throughput__P.R.L.__RGB1.svg").read_text()
        (band,) = re.findall(r'class="band" points="([^"]+)"', svg)
        pts = band.split()
        assert pts[: len(pts) // 2] == pts[len(pts) // 2:][::-1]

    def test_rerender_is_byte_identical(self, results):
        first, _ = cli.build_report(results)
        before = {p.name: p.read_bytes() for p in first}
        second, _ = cli.build_report(results)
        assert {p.name: p.read_bytes() for p in second} == before
        assert len(before) == 7

    def test_table_numbers_round_trip_from_csv(self, results):
        cli.build_report(results)
        stats = {(r["location"], r["network"], r["profile"], r["method"]): r for r in read_stats(results / "stats.csv")}
        for row in read_stats(results / "report" / "table_results.csv"):
            src = stats[(row["location"], row["network"], row["profile"], row["method"])]
            assert row["lat mean"] == cli.fmt(float(src["latency_mean_ms"]))
            assert row["tput max"] == cli.fmt(float(src["throughput_max_mbps"]))

    def test_corrupt_csv_skipped(self, results, capsys):
        victim = results / "runs" / "P.R.L.__SLOW__RGBD1__run2_rtt.csv"
        victim.write_text("garbage\n")
        assert cli.main(["report", str(results)]) == 0
        _, skipped = cli.build_report(results)
        assert [p for p, _ in skipped] == [str(victim)]
        assert "skipped" in capsys.readouterr().err
        assert (results / "report" / "skipped.txt").exists()

    def test_nothing_renders(self, tmp_path):
        assert cli.main(["report", str(tmp_path)]) == cli.EXIT_VALIDATION
