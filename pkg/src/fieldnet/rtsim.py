"""Message-pair delay accounting for a robot crossing a path of location spaces.

The robot sends one location message per location space and must receive the
processed reply before it leaves that space. For each pair::

    cumulative delay = RTT + processing time
    margin           = response window - cumulative delay   (lead > 0, lag < 0)

and the mission-level figure is the total cumulative delay,
``sum(cumulative_i - window)``, which reduces to
``(cumulative - window) * messages`` when the RTT is constant along the path.

RTT along the path comes from a :class:`DelayModel`: either one endpoint held
constant, a linear ramp, or a vertex-form quadratic whose vertex sits at the
lower-RTT endpoint.
"""

from __future__ import annotations

import configparser
import csv
import enum
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from fieldnet.errors import ConfigurationError, DomainError
from fieldnet.metrics import present

HUMAN_REACTION_MS = 273.0
PIPELINE_MS = 14.5
PROCESSING_PRESETS = {"human": HUMAN_REACTION_MS, "pipeline": PIPELINE_MS}


class TrendMode(str, enum.Enum):
    CONSTANT_START = "constant-start"
    CONSTANT_END = "constant-end"
    LINEAR = "linear"
    VERTEX_QUADRATIC = "vertex-quadratic"


CONSTANT_MODES = (TrendMode.CONSTANT_START, TrendMode.CONSTANT_END)


def _check_nonneg(**values):
    for name, value in values.items():
        if value < 0 or math.isnan(value):
            raise DomainError(f"{name} must be >= 0, got {value}")


def cumulative_delay(rtt_ms, processing_ms):
    _check_nonneg(rtt_ms=rtt_ms, processing_ms=processing_ms)
    return rtt_ms + processing_ms


def response_window(space_m, velocity_mps):
    """Time in ms before the robot leaves a location space."""
    if not velocity_mps > 0:
        raise DomainError(f"velocity_mps must be > 0, got {velocity_mps}")
    if not space_m > 0:
        raise DomainError(f"space_m must be > 0, got {space_m}")
    return space_m / velocity_mps * 1000.0


def message_margin(cumulative_delay_ms, window_ms):
    return window_ms - cumulative_delay_ms


def total_cumulative_delay(cumulative_delay_ms, window_ms, messages):
    if messages < 1:
        raise DomainError(f"messages must be >= 1, got {messages}")
    return (cumulative_delay_ms - window_ms) * messages


@dataclass(frozen=True)
class MissionSpec:
    path_length_m: float = 30.0
    space_m: float = 1.0
    velocity_mps: float = 3.0
    processing_ms: float = HUMAN_REACTION_MS

    def __post_init__(self):
        bad = [k for k in ("path_length_m", "space_m", "velocity_mps") if not getattr(self, k) > 0]
        if not self.processing_ms >= 0:
            bad.append("processing_ms")
        if bad:
            raise ConfigurationError(f"invalid mission parameters: {bad}", bad)
        n = self.path_length_m / self.space_m
        if abs(n - round(n)) > 1e-9 * max(1.0, n) or round(n) < 1:
            raise ConfigurationError(
                "path_length_m must be a whole number of location spaces",
                ["path_length_m", "space_m"],
            )

    @property
    def messages(self):
        return int(round(self.path_length_m / self.space_m))

    @property
    def total_messages(self):
        """Sent plus received."""
        return 2 * self.messages

    @property
    def response_window_ms(self):
        return response_window(self.space_m, self.velocity_mps)

    @property
    def travel_time_s(self):
        return self.path_length_m / self.velocity_mps


@dataclass(frozen=True)
class DelayModel:
    rtt_start_ms: float
    rtt_end_ms: float | None = None
    mode: TrendMode = TrendMode.CONSTANT_START

    def __post_init__(self):
        object.__setattr__(self, "mode", TrendMode(self.mode))
        if self.rtt_end_ms is None:
            object.__setattr__(self, "rtt_end_ms", self.rtt_start_ms)
        bad = [k for k in ("rtt_start_ms", "rtt_end_ms") if not getattr(self, k) >= 0]
        if bad:
            raise ConfigurationError(f"RTT endpoints must be >= 0: {bad}", bad)

    @classmethod
    def constant(cls, rtt_ms):
        return cls(rtt_ms, rtt_ms, TrendMode.CONSTANT_START)

    @property
    def is_constant(self):
        return self.mode in CONSTANT_MODES


def trend_rtt(model, fraction):
    """RTT at ``fraction`` of the way along the path.

    Vertex-quadratic: ``a * (x - h)**2 + k`` with the vertex ``(h, k)`` at the
    endpoint with the smaller RTT and ``a`` the endpoint difference, so the
    curve passes through both endpoints and is monotone on [0, 1].
    """
    if not 0.0 <= fraction <= 1.0:
        raise DomainError(f"fraction must be in [0, 1], got {fraction}")
    start, end = model.rtt_start_ms, model.rtt_end_ms
    mode = model.mode
    if mode is TrendMode.CONSTANT_START:
        return start
    if mode is TrendMode.CONSTANT_END:
        return end
    if fraction == 0.0:
        return start
    if fraction == 1.0:
        return end
    if mode is TrendMode.LINEAR:
        value = start + (end - start) * fraction
    elif start <= end:
        value = (end - start) * fraction**2 + start
    else:
        value = (start - end) * (fraction - 1.0) ** 2 + end
    # rounding must not step outside the endpoint range
    return min(max(value, min(start, end)), max(start, end))


@dataclass(frozen=True)
class MessagePair:
    index: int
    position_m: float
    sent_ms: float
    rtt_ms: float
    cumulative_delay_ms: float
    margin_ms: float

    @property
    def received_ms(self):
        return self.sent_ms + self.cumulative_delay_ms

    @property
    def lead(self):
        return self.margin_ms >= 0


@dataclass(frozen=True)
class MissionReport:
    spec: MissionSpec
    model: DelayModel
    pairs: tuple
    total_cumulative_delay_ms: float
    real_time: bool
    label: str = ""
    notes: tuple = field(default=())

    @property
    def window_ms(self):
        return self.spec.response_window_ms

    @property
    def margins(self):
        return [p.margin_ms for p in self.pairs]

    @property
    def verdict(self):
        return "real-time" if self.real_time else "not real-time"

    @property
    def max_realtime_rtt_ms(self):
        """Largest constant RTT that still meets every response window."""
        return self.window_ms - self.spec.processing_ms

    def summary(self):
        margins = self.margins
        total = self.total_cumulative_delay_ms
        return {
            "label": self.label,
            "verdict": self.verdict,
            "real_time": self.real_time,
            "messages_sent": self.spec.messages,
            "messages_total": self.spec.total_messages,
            "path_length_m": self.spec.path_length_m,
            "space_m": self.spec.space_m,
            "velocity_mps": self.spec.velocity_mps,
            "travel_time_s": present(self.spec.travel_time_s),
            "processing_ms": present(self.spec.processing_ms),
            "response_window_ms": present(self.window_ms),
            "delay_mode": self.model.mode.value,
            "rtt_start_ms": present(self.model.rtt_start_ms),
            "rtt_end_ms": present(self.model.rtt_end_ms),
            "min_margin_ms": present(min(margins)),
            "max_margin_ms": present(max(margins)),
            "total_cumulative_delay_ms": present(total),
            "total_cumulative_delay_s": present(total / 1000.0),
            "max_realtime_rtt_ms": present(self.max_realtime_rtt_ms),
            "notes": list(self.notes),
        }

    def to_csv(self, fh=None):
        """Per-message rows at full precision. Returns the text when ``fh`` is None."""
        out = fh if fh is not None else io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            ["index", "position_m", "sent_ms", "rtt_ms", "cumulative_delay_ms", "margin_ms", "kind"]
        )
        for p in self.pairs:
            writer.writerow(
                [
                    p.index,
                    repr(p.position_m),
                    repr(p.sent_ms),
                    repr(p.rtt_ms),
                    repr(p.cumulative_delay_ms),
                    repr(p.margin_ms),
                    "lead" if p.lead else "lag",
                ]
            )
        if fh is None:
            return out.getvalue()
        return None

    def to_json(self):
        return json.dumps(self.summary(), indent=2, sort_keys=True) + "\n"


def _footnote(spec, report_pairs):
    limit = spec.response_window_ms - spec.processing_ms
    lines = [
        f"Real-time requires RTT + {present(spec.processing_ms):.1f} ms processing to fit in the "
        f"{present(spec.response_window_ms):.1f} ms response window, i.e. RTT <= "
        f"{present(limit):.1f} ms. Lead/lag signs are computed from the inputs as given and "
        "never adjusted to match a network's expected class."
    ]
    lagging = [p for p in report_pairs if p.margin_ms < 0]
    if lagging:
        worst = min(lagging, key=lambda p: p.margin_ms)
        lines.append(
            f"{len(lagging)} of {len(report_pairs)} replies arrive after the window closes; worst lag "
            f"{present(-worst.margin_ms):.1f} ms at RTT {present(worst.rtt_ms):.1f} ms. Any RTT "
            f"above {present(limit):.1f} ms lags here, including RTTs normally considered "
            "low enough for live 30 FPS video."
        )
    return tuple(lines)


def simulate_mission(spec=None, model=None, label=""):
    """One message pair per location space; verdict is real-time iff no pair lags."""
    spec = spec or MissionSpec()
    if model is None:
        raise ConfigurationError("simulate_mission needs a DelayModel", ["model"])
    window = spec.response_window_ms
    n = spec.messages
    pairs = []
    for i in range(n):
        fraction = i / (n - 1) if n > 1 else 0.0
        rtt = trend_rtt(model, fraction)
        cum = cumulative_delay(rtt, spec.processing_ms)
        pairs.append(
            MessagePair(
                index=i,
                position_m=i * spec.space_m,
                sent_ms=i * window,
                rtt_ms=rtt,
                cumulative_delay_ms=cum,
                margin_ms=message_margin(cum, window),
            )
        )
    if model.is_constant:
        total = total_cumulative_delay(pairs[0].cumulative_delay_ms, window, n)
    else:
        total = math.fsum(p.cumulative_delay_ms - window for p in pairs)
    real_time = all(p.margin_ms >= 0 for p in pairs)
    return MissionReport(
        spec=spec,
        model=model,
        pairs=tuple(pairs),
        total_cumulative_delay_ms=total,
        real_time=real_time,
        label=label,
        notes=_footnote(spec, pairs),
    )


# --- mission config ---------------------------------------------------------

_MISSION_KEYS = {"path_length_m", "space_m", "velocity_mps", "processing_ms", "processing"}
_DELAY_KEYS = {"mode", "rtt_start_ms", "rtt_end_ms", "rtt_ms"}


def parse_mission(text, source="<string>"):
    """Parse a mission config into ``(MissionSpec, [(label, DelayModel), ...])``.

    ``[mission]`` holds path_length_m, space_m, velocity_mps and either
    processing_ms or ``processing = human|pipeline``; omitted keys take the
    defaults. Each ``[delay]`` or ``[delay LABEL]`` section is one network to
    simulate on that mission: ``mode`` plus rtt_start_ms/rtt_end_ms, or rtt_ms
    for a constant RTT. Every offending key is reported at once.
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"{source}: {exc}") from exc

    bad = []
    delay_sections = [s for s in parser.sections() if s == "delay" or s.startswith("delay ")]
    others = [s for s in parser.sections() if s != "mission" and s not in delay_sections]
    bad.extend(f"[{s}]" for s in others)
    if not delay_sections:
        bad.append("[delay]")
    mission = parser["mission"] if "mission" in parser else {}
    bad.extend(f"mission.{k}" for k in sorted(set(mission) - _MISSION_KEYS))

    def num(sec_name, sec, key, default=None):
        if key not in sec:
            return default
        try:
            value = float(sec[key])
        except ValueError:
            value = math.nan
        if not math.isfinite(value):
            bad.append(f"{sec_name}.{key}")
            return default
        return value

    spec_kwargs = {}
    for key in ("path_length_m", "space_m", "velocity_mps", "processing_ms"):
        value = num("mission", mission, key)
        if value is not None:
            spec_kwargs[key] = value
    if "processing" in mission:
        choice = mission["processing"].strip().lower()
        if choice not in PROCESSING_PRESETS or "processing_ms" in mission:
            bad.append("mission.processing")
        else:
            spec_kwargs["processing_ms"] = PROCESSING_PRESETS[choice]

    raw_models = []
    for name in delay_sections:
        delay = parser[name]
        label = name[len("delay"):].strip()
        bad.extend(f"{name}.{k}" for k in sorted(set(delay) - _DELAY_KEYS))
        mode = delay.get("mode", TrendMode.CONSTANT_START.value).strip()
        if mode not in {m.value for m in TrendMode}:
            bad.append(f"{name}.mode")
            mode = TrendMode.CONSTANT_START.value
        rtt = num(name, delay, "rtt_ms")
        start = num(name, delay, "rtt_start_ms", rtt)
        end = num(name, delay, "rtt_end_ms", start)
        if "rtt_ms" in delay and ("rtt_start_ms" in delay or "rtt_end_ms" in delay):
            bad.append(f"{name}.rtt_ms")
        if start is None and not any(k.startswith(f"{name}.rtt") for k in bad):
            bad.append(f"{name}.rtt_start_ms")
        raw_models.append((name, label, start, end, mode))

    spec = None
    try:
        spec = MissionSpec(**spec_kwargs)
    except ConfigurationError as exc:
        bad.extend(f"mission.{k}" for k in exc.keys)
    models = []
    for name, label, start, end, mode in raw_models:
        if start is None:
            continue
        try:
            models.append((label, DelayModel(start, end, TrendMode(mode))))
        except ConfigurationError as exc:
            bad.extend(f"{name}.{k}" for k in exc.keys)
    if bad:
        raise ConfigurationError(f"{source}: invalid mission config keys: {', '.join(bad)}", bad)
    return spec, models


def load_mission(path):
    path = Path(path)
    return parse_mission(path.read_text(encoding="utf-8"), source=str(path))
