"""Run statistics: mean/std/min latency and mean/std/max throughput.

Missing RTT samples are encoded as NaN and skipped. Standard deviations use
the sample (n - 1) estimator and are 0 for a single sample. Everything is kept
at full precision; :func:`present` rounds half-up to one decimal for display.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields
from decimal import ROUND_HALF_UP, Decimal

import numpy as np

from fieldnet.errors import DomainError, StatisticsError


@dataclass(frozen=True)
class RunStats:
    latency_mean_ms: float
    latency_std_ms: float
    latency_min_ms: float
    throughput_mean_mbps: float
    throughput_std_mbps: float
    throughput_max_mbps: float
    sample_count: int

    def as_dict(self):
        return asdict(self)

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]


def present(value, places=1):
    """Round half-up for display. Works from the shortest repr, so 11.45 -> 11.5."""
    if value is None or (isinstance(value, float) and not math.isfinite(value)):
        return value
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return int(value)
    quantum = Decimal(1).scaleb(-places)
    return float(Decimal(repr(float(value))).quantize(quantum, rounding=ROUND_HALF_UP))


def fmt(value, places=1):
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return "-"
    return f"{present(value, places):.{places}f}"


def _present_samples(series, name):
    arr = np.asarray(series, dtype=float).ravel()
    arr = arr[~np.isnan(arr)]
    if arr.size == 0:
        raise StatisticsError(f"{name} series has no present samples")
    return arr


def _mean(arr):
    # exactly-rounded sum; clamped because rounding can push it past the extremes
    m = math.fsum(arr.tolist()) / arr.size
    return min(max(m, float(arr.min())), float(arr.max()))


def _std(arr):
    if arr.size < 2 or arr.min() == arr.max():
        return 0.0
    return float(np.std(arr, ddof=1))


def compute_run_stats(rtt_series, throughput_series):
    """Six statistics for one run.

    ``rtt_series`` is RTT in ms (NaN = lost echo); ``throughput_series`` is
    per-second sent Mbps. ``sample_count`` counts present RTT samples.
    """
    rtt = _present_samples(rtt_series, "rtt")
    tput = _present_samples(throughput_series, "throughput")
    return RunStats(
        latency_mean_ms=_mean(rtt),
        latency_std_ms=_std(rtt),
        latency_min_ms=float(np.min(rtt)),
        throughput_mean_mbps=_mean(tput),
        throughput_std_mbps=_std(tput),
        throughput_max_mbps=float(np.max(tput)),
        sample_count=int(rtt.size),
    )


def combine_runs(runs):
    """Statistics over the concatenated raw samples of several runs.

    ``runs`` is a sequence of ``(rtt_series, throughput_series)`` pairs. This
    is the pooled methodology, not a mean of per-run means.
    """
    runs = list(runs)
    if not runs:
        raise StatisticsError("combine_runs needs at least one run")
    rtt = np.concatenate([np.asarray(r, dtype=float).ravel() for r, _ in runs])
    tput = np.concatenate([np.asarray(t, dtype=float).ravel() for _, t in runs])
    return compute_run_stats(rtt, tput)


def average_runs(stats):
    """Per-run methodology: each statistic averaged across runs."""
    stats = list(stats)
    if not stats:
        raise StatisticsError("average_runs needs at least one RunStats")
    out = {}
    for name in RunStats.field_names():
        values = [getattr(s, name) for s in stats]
        if name == "sample_count":
            out[name] = int(sum(values))
        else:
            out[name] = math.fsum(values) / len(values)
    return RunStats(**out)


def one_way_latency(rtt_ms):
    """Half the RTT. Use :func:`present` for the one-decimal display value."""
    if rtt_ms < 0 or math.isnan(rtt_ms):
        raise DomainError(f"rtt_ms must be >= 0, got {rtt_ms}")
    return rtt_ms / 2.0
