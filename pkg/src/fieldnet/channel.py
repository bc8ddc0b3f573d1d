"""Seedable emulation of a wireless link's latency and capacity.

A :class:`ChannelProfile` describes one emulated link: capacity caps for each
direction, a round-trip latency model, a constant per-hop tunnel overhead and
a per-packet loss fraction. Profiles are immutable and can be shared freely;
randomness always comes from a caller-owned :class:`numpy.random.Generator`.

Typical usage::

    from fieldnet import channel

    presets = channel.default_catalog()
    fiveg = presets["FIVEG_N77_VLOS"]
    rng = np.random.default_rng(7)
    channel.sample_rtt(fiveg, rng)                  # ms, includes tunnel
    channel.saturated_throughput(fiveg, 144.0)      # 60.0 Mbps
"""

from __future__ import annotations

import configparser
import enum
import functools
import math
from collections.abc import Iterator, Mapping
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

import numpy as np
from scipy import optimize, special, stats

from fieldnet.errors import ConfigurationError

FOURG_PUBLIC = "FOURG_PUBLIC"
FIVEG_N77_VLOS = "FIVEG_N77_VLOS"
FIVEG_N77_NVLOS = "FIVEG_N77_NVLOS"
WIFI6_LOCAL = "WIFI6_LOCAL"
REQUIRED_PRESETS = (FOURG_PUBLIC, FIVEG_N77_VLOS, FIVEG_N77_NVLOS, WIFI6_LOCAL)

# Point-to-point WireGuard ping over Ethernet, used as the per-hop tunnel cost.
WIREGUARD_OVERHEAD_MS = 0.403

# Above this the lower-truncation shape parameter is numerically unreliable.
_MAX_ALPHA = 30.0


class Distribution(str, enum.Enum):
    TRUNCATED_NORMAL = "truncated-normal"
    CONSTANT = "constant"


class Direction(str, enum.Enum):
    UPLINK = "uplink"
    DOWNLINK = "downlink"


def _mills_ratio(alpha):
    # phi(a) / (1 - Phi(a)), stable for large positive a
    return math.sqrt(2.0 / math.pi) / special.erfcx(alpha / math.sqrt(2.0))


def _mean_offset(alpha):
    # lambda(a) - a; the asymptotic series avoids cancellation for large a
    if alpha > 1e3:
        inv = 1.0 / alpha
        return inv - 2.0 * inv**3 + 10.0 * inv**5
    return _mills_ratio(alpha) - alpha


def _truncated_moments(alpha):
    """Mean offset and std of a unit normal truncated below at ``alpha``."""
    lam = _mills_ratio(alpha)
    var = 1.0 + alpha * lam - lam * lam
    return lam - alpha, math.sqrt(max(var, 0.0))


@dataclass(frozen=True)
class LatencyModel:
    """Round-trip latency distribution described by (mean, std, min).

    For ``truncated-normal`` the three statistics describe the *truncated*
    distribution: the parent normal is solved so that draws have the given
    mean and standard deviation and never fall below ``min_ms``. When the
    triple is not reachable by any lower-truncated normal (std too large for
    the gap between mean and min) the mean is matched exactly and the parent
    scale is set to ``std_ms``.
    """

    mean_ms: float
    std_ms: float = 0.0
    min_ms: float = 0.0
    distribution: Distribution = Distribution.TRUNCATED_NORMAL

    def __post_init__(self):
        object.__setattr__(self, "distribution", Distribution(self.distribution))
        bad = []
        for key in ("mean_ms", "std_ms", "min_ms"):
            value = getattr(self, key)
            if not isinstance(value, (int, float)) or not math.isfinite(value):
                bad.append(key)
        if bad:
            raise ConfigurationError(f"non-finite latency parameters: {bad}", bad)
        if self.min_ms < 0:
            raise ConfigurationError("min_ms must be >= 0", ["min_ms"])
        if self.std_ms < 0:
            raise ConfigurationError("std_ms must be >= 0", ["std_ms"])
        if self.mean_ms < self.min_ms:
            raise ConfigurationError("mean_ms must be >= min_ms", ["mean_ms", "min_ms"])
        if self.is_truncated_normal and self.mean_ms == self.min_ms:
            raise ConfigurationError(
                "a truncated normal with std > 0 cannot have mean equal to its minimum",
                ["mean_ms", "min_ms", "std_ms"],
            )

    @property
    def is_truncated_normal(self):
        return self.distribution is Distribution.TRUNCATED_NORMAL and self.std_ms > 0

    @functools.cached_property
    def parent(self):
        """(loc, scale, alpha) of the parent normal; alpha is the standardized lower bound."""
        if not self.is_truncated_normal:
            return self.mean_ms, 0.0, -math.inf
        gap = self.mean_ms - self.min_ms
        target = gap / self.std_ms

        if target > 40.0:
            # bound sits 40+ sigma below the mean; truncation changes nothing
            return self.mean_ms, self.std_ms, -target

        def ratio(alpha):
            offset, sd = _truncated_moments(alpha)
            return offset / sd

        if target > ratio(_MAX_ALPHA):
            alpha = optimize.brentq(lambda a: ratio(a) - target, -target - 2.0, _MAX_ALPHA, xtol=1e-13)
            _, sd = _truncated_moments(alpha)
            scale = self.std_ms / sd
            return self.min_ms - alpha * scale, scale, alpha

        scale = self.std_ms
        # offset(a) falls from +inf towards 0 (about 1/a), so widen until bracketed
        hi = max(_MAX_ALPHA, 2.0 / target)
        while _mean_offset(hi) > target:
            hi *= 2.0
        alpha = optimize.brentq(lambda a: _mean_offset(a) - target, -target - 2.0, hi, xtol=1e-13, rtol=1e-14)
        return self.min_ms - alpha * scale, scale, alpha

    @functools.cached_property
    def _frozen(self):
        loc, scale, alpha = self.parent
        return stats.truncnorm(a=alpha, b=math.inf, loc=loc, scale=scale)

    def sample(self, rng, size=None):
        """Draw latency values in ms; scalar when ``size`` is None."""
        if not self.is_truncated_normal:
            if size is None:
                return float(self.mean_ms)
            return np.full(size, float(self.mean_ms))
        draws = self._frozen.rvs(size=size, random_state=rng)
        draws = np.maximum(draws, self.min_ms)
        return float(draws) if size is None else draws


@dataclass(frozen=True)
class ChannelProfile:
    name: str
    uplink_cap_mbps: float
    downlink_cap_mbps: float
    rtt_model: LatencyModel
    tunnel_overhead_ms: float = 0.0
    loss_fraction: float = 0.0

    def __post_init__(self):
        bad = []
        for key in ("uplink_cap_mbps", "downlink_cap_mbps"):
            value = getattr(self, key)
            if not isinstance(value, (int, float)) or math.isnan(value) or value <= 0:
                bad.append(key)
        overhead = self.tunnel_overhead_ms
        if not isinstance(overhead, (int, float)) or not math.isfinite(overhead) or overhead < 0:
            bad.append("tunnel_overhead_ms")
        loss = self.loss_fraction
        if not isinstance(loss, (int, float)) or not 0.0 <= loss <= 1.0:
            bad.append("loss_fraction")
        if not isinstance(self.rtt_model, LatencyModel):
            bad.append("rtt_model")
        if bad:
            raise ConfigurationError(f"invalid channel profile {self.name!r}: {bad}", bad)

    def cap(self, direction=Direction.UPLINK):
        direction = Direction(direction)
        return self.uplink_cap_mbps if direction is Direction.UPLINK else self.downlink_cap_mbps

    @property
    def rtt_floor_ms(self):
        return self.rtt_model.min_ms + 2.0 * self.tunnel_overhead_ms

    @property
    def mean_rtt_ms(self):
        """Expected end-to-end RTT including the tunnel in both directions."""
        return self.rtt_model.mean_ms + 2.0 * self.tunnel_overhead_ms

    def with_rtt(self, **changes):
        return replace(self, rtt_model=replace(self.rtt_model, **changes))


def sample_rtt(profile, rng):
    """One end-to-end RTT draw in ms: link sample plus the tunnel overhead both ways."""
    if not isinstance(profile, ChannelProfile):
        raise ConfigurationError("sample_rtt needs a ChannelProfile", ["profile"])
    return profile.rtt_model.sample(rng) + 2.0 * profile.tunnel_overhead_ms


class RttSampler:
    """Owns one RNG stream for a profile; use from a single task."""

    def __init__(self, profile, seed=None):
        if not isinstance(profile, ChannelProfile):
            raise ConfigurationError("RttSampler needs a ChannelProfile", ["profile"])
        self.profile = profile
        self.rng = np.random.default_rng(seed)

    def __call__(self):
        return sample_rtt(self.profile, self.rng)

    def many(self, n):
        return self.profile.rtt_model.sample(self.rng, size=n) + 2.0 * self.profile.tunnel_overhead_ms


def saturated_throughput(profile, offered_mbps, direction=Direction.UPLINK):
    if offered_mbps < 0:
        raise ValueError("offered_mbps must be >= 0")
    return min(float(offered_mbps), profile.cap(direction))


def transfer_time(profile, payload_bits, direction=Direction.UPLINK, rng=None):
    """Serialization at the direction's cap plus half of one sampled RTT, in ms."""
    if payload_bits < 0:
        raise ValueError("payload_bits must be >= 0")
    bits_per_ms = profile.cap(direction) * 1e3
    serialization = payload_bits / bits_per_ms
    if rng is None:
        rng = np.random.default_rng()
    return serialization + sample_rtt(profile, rng) / 2.0


# --- preset catalog ---------------------------------------------------------

_PRESET_KEYS = {
    "uplink_cap_mbps",
    "downlink_cap_mbps",
    "rtt_mean_ms",
    "rtt_std_ms",
    "rtt_min_ms",
    "distribution",
    "tunnel_overhead_ms",
    "loss_fraction",
    "provenance",
}
_REQUIRED_KEYS = ("uplink_cap_mbps", "rtt_mean_ms", "provenance")
UNKNOWN = "unknown"


@dataclass(frozen=True)
class PresetCatalog(Mapping):
    """Named channel profiles with a provenance note and unknown-field list each."""

    profiles: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)
    unknown: dict = field(default_factory=dict)

    def __getitem__(self, name):
        try:
            return self.profiles[name]
        except KeyError:
            raise KeyError(f"unknown preset {name!r}; known: {sorted(self.profiles)}") from None

    def __iter__(self) -> Iterator[str]:
        return iter(self.profiles)

    def __len__(self):
        return len(self.profiles)


def _number(section, key, raw, errors):
    try:
        value = float(raw)
    except ValueError:
        errors.append(f"{section}.{key}")
        return None
    return value


def parse_presets(text, source="<string>"):
    """Parse a preset file.

    Each ``[NAME]`` section defines one profile. ``rtt_*`` keys are the
    end-to-end figures as measured through the tunnel; the tunnel overhead is
    backed out of them so that sampled RTTs reproduce the measured values.
    ``unknown`` is accepted for caps (unbounded), std (zero) and min (zero).
    """
    parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    try:
        parser.read_string(text, source=source)
    except configparser.Error as exc:
        raise ConfigurationError(f"{source}: {exc}") from exc

    profiles, provenance, unknown = {}, {}, {}
    errors = []
    for name in parser.sections():
        sec = parser[name]
        extra = sorted(set(sec) - _PRESET_KEYS)
        errors.extend(f"{name}.{k}" for k in extra)
        missing = [k for k in _REQUIRED_KEYS if k not in sec]
        errors.extend(f"{name}.{k}" for k in missing)
        if extra or missing:
            continue

        unknown_fields = []
        values = {}
        for key, default in (
            ("uplink_cap_mbps", None),
            ("downlink_cap_mbps", UNKNOWN),
            ("rtt_mean_ms", None),
            ("rtt_std_ms", UNKNOWN),
            ("rtt_min_ms", UNKNOWN),
            ("tunnel_overhead_ms", "0"),
            ("loss_fraction", "0"),
        ):
            raw = sec.get(key, default).strip()
            if raw.lower() == UNKNOWN:
                if key in ("rtt_mean_ms", "tunnel_overhead_ms", "loss_fraction"):
                    errors.append(f"{name}.{key}")
                    continue
                unknown_fields.append(key)
                values[key] = math.inf if key.endswith("cap_mbps") else 0.0
            else:
                values[key] = _number(name, key, raw, errors)
        if any(v is None for v in values.values()) or len(values) < 7:
            continue

        overhead = values["tunnel_overhead_ms"]
        two_way = 2.0 * overhead
        mean = values["rtt_mean_ms"] - two_way
        measured_min = values["rtt_min_ms"]
        raw_min = max(measured_min - two_way, 0.0) if "rtt_min_ms" not in unknown_fields else 0.0
        dist = sec.get("distribution", "").strip()
        if not dist:
            dist = Distribution.TRUNCATED_NORMAL if values["rtt_std_ms"] > 0 else Distribution.CONSTANT
        try:
            model = LatencyModel(mean, values["rtt_std_ms"], raw_min, Distribution(dist))
            profiles[name] = ChannelProfile(
                name=name,
                uplink_cap_mbps=values["uplink_cap_mbps"],
                downlink_cap_mbps=values["downlink_cap_mbps"],
                rtt_model=model,
                tunnel_overhead_ms=overhead,
                loss_fraction=values["loss_fraction"],
            )
        except (ConfigurationError, ValueError) as exc:
            keys = getattr(exc, "keys", ()) or ("distribution",)
            errors.extend(f"{name}.{k}" for k in keys)
            continue
        provenance[name] = " ".join(sec["provenance"].split())
        unknown[name] = tuple(unknown_fields)

    if errors:
        raise ConfigurationError(f"{source}: invalid preset keys: {', '.join(errors)}", errors)
    return PresetCatalog(profiles, provenance, unknown)


def load_presets(path=None):
    """Load a preset file; ``None`` loads the bundled paper presets."""
    if path is None:
        text = resources.files("fieldnet").joinpath("data/presets.ini").read_text(encoding="utf-8")
        return parse_presets(text, source="presets.ini")
    path = Path(path)
    return parse_presets(path.read_text(encoding="utf-8"), source=str(path))


@functools.lru_cache(maxsize=None)
def default_catalog():
    catalog = load_presets()
    missing = [n for n in REQUIRED_PRESETS if n not in catalog]
    if missing:
        raise ConfigurationError(f"bundled presets missing {missing}", missing)
    return catalog
