"""Probe and video-stream load generation.

Two transports share one interface:

* :class:`EmulatedTransport` runs a :class:`~fieldnet.channel.ChannelProfile`
  on a virtual clock, so a 30 s run finishes in milliseconds and is fully
  determined by its seed.
* :class:`UdpTransport` sends real datagrams to an :class:`EchoServer` (probe
  echo + frame sink), paced by the monotonic clock.

A session interleaves three kinds of events on one timeline: probe sends at
``rate_hz``, frame sends every ``1/fps`` seconds for each stream, and
one-second accounting boundaries. Echoes are timestamped on arrival by the
transport, independently of the sender.

Probe wire format: 16-byte big-endian header ``(seq: u64, send_ns: u64)``
followed by optional padding. The echo carries the header only.
"""

from __future__ import annotations

import csv
import heapq
import logging
import math
import selectors
import socket
import struct
import threading
import time
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from fieldnet import channel as ch
from fieldnet.errors import ConfigurationError, ProtocolError, SessionError
from fieldnet.metrics import combine_runs, compute_run_stats

log = logging.getLogger(__name__)

HEADER = struct.Struct(">QQ")
HEADER_SIZE = HEADER.size
NS_PER_S = 1_000_000_000
ECHO_TIMEOUT_S = 2.0
DEFAULT_PROBE_HZ = 10.0
DEFAULT_FPS = 30.0
DEFAULT_DURATION_S = 30.0
DEFAULT_REPEATS = 5


@dataclass(frozen=True)
class ProbePacket:
    seq: int
    send_timestamp_ns: int
    padding: bytes = b""

    def encode(self):
        return HEADER.pack(self.seq, self.send_timestamp_ns) + self.padding

    @classmethod
    def decode(cls, data):
        if len(data) < HEADER_SIZE:
            raise ValueError(f"probe datagram too short: {len(data)} bytes")
        seq, ts = HEADER.unpack_from(data)
        return cls(seq, ts, bytes(data[HEADER_SIZE:]))

    def echo(self):
        """Reply payload: the header unchanged, padding stripped."""
        return HEADER.pack(self.seq, self.send_timestamp_ns)


# --- stream profiles --------------------------------------------------------


@dataclass(frozen=True)
class StaticRate:
    rate_mbps: float

    def frame_bits(self, fps, rng):
        return int(round(self.rate_mbps * 1e6 / fps))

    @property
    def mean_mbps(self):
        return self.rate_mbps


@dataclass(frozen=True)
class VariableRate:
    """Per-frame rate drawn uniformly from [min_mbps, max_mbps]."""

    min_mbps: float = 2.0
    max_mbps: float = 12.0

    def frame_bits(self, fps, rng):
        rate = rng.uniform(self.min_mbps, self.max_mbps)
        return int(round(rate * 1e6 / fps))

    @property
    def mean_mbps(self):
        return (self.min_mbps + self.max_mbps) / 2.0


@dataclass(frozen=True)
class StreamProfile:
    name: str
    stream_count: int
    fps: float = DEFAULT_FPS
    frame_model: StaticRate | VariableRate = field(default_factory=VariableRate)

    def __post_init__(self):
        bad = []
        if not isinstance(self.stream_count, int) or self.stream_count < 1:
            bad.append("stream_count")
        if not self.fps > 0:
            bad.append("fps")
        fm = self.frame_model
        if isinstance(fm, StaticRate):
            if not fm.rate_mbps >= 0:
                bad.append("frame_model")
        elif isinstance(fm, VariableRate):
            if not 0 <= fm.min_mbps <= fm.max_mbps:
                bad.append("frame_model")
        else:
            bad.append("frame_model")
        if bad:
            raise ConfigurationError(f"invalid stream profile {self.name!r}: {bad}", bad)

    @property
    def offered_mbps(self):
        return self.stream_count * self.frame_model.mean_mbps


# 1-RGBD is compressed at a static rate: 144 Mbps (18 MBps) at 30 FPS.
RGBD_STATIC_MBPS = 144.0

PROFILES = {
    "RGB1": StreamProfile("RGB1", 1, DEFAULT_FPS, VariableRate(2.0, 12.0)),
    "RGB4": StreamProfile("RGB4", 4, DEFAULT_FPS, VariableRate(2.0, 12.0)),
    "RGBD1": StreamProfile("RGBD1", 1, DEFAULT_FPS, StaticRate(RGBD_STATIC_MBPS)),
}


def get_profile(name):
    try:
        return PROFILES[name]
    except KeyError:
        raise ConfigurationError(f"unknown stream profile {name!r}; known: {sorted(PROFILES)}", [name]) from None


# --- clocks -----------------------------------------------------------------


class VirtualClock:
    def __init__(self):
        self._now = 0

    def now_ns(self):
        return self._now

    def sleep_until(self, t_ns):
        if t_ns > self._now:
            self._now = int(t_ns)

    def reset(self):
        self._now = 0


class MonotonicClock:
    def now_ns(self):
        return time.monotonic_ns()

    def sleep_until(self, t_ns):
        delay = (t_ns - time.monotonic_ns()) / NS_PER_S
        if delay > 0:
            time.sleep(delay)


# --- transports -------------------------------------------------------------


class EmulatedTransport:
    """A channel profile on a virtual clock.

    Frames are serialized FIFO at the uplink cap. A frame that would push the
    queued backlog past ``buffer_s`` seconds of capacity is dropped (and
    logged) instead of being delayed indefinitely. Probes and echoes each
    suffer ``loss_fraction`` per packet and do not queue behind frames.
    """

    realtime = False

    def __init__(self, profile, seed=None, buffer_s=1.0):
        if not isinstance(profile, ch.ChannelProfile):
            raise ConfigurationError("EmulatedTransport needs a ChannelProfile", ["profile"])
        self.profile = profile
        self.buffer_s = buffer_s
        self.clock = VirtualClock()
        self.closed = False
        self.reset(seed)

    def reset(self, seed=None):
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self.clock.reset()
        self._echoes = []  # heap of (arrival_ns, order, payload)
        self._order = 0
        self._queue = deque()  # [stream, remaining_bits]
        self._link_ns = 0.0
        self._bits = 0.0
        self._done = {}

    def close(self):
        self.closed = True

    def _check(self):
        if self.closed:
            raise SessionError("transport is closed")

    @property
    def _bits_per_ns(self):
        return self.profile.uplink_cap_mbps * 1e-3

    def send_probe(self, data):
        self._check()
        loss = self.profile.loss_fraction
        now = self.clock.now_ns()
        if loss and self.rng.random() < loss:
            return
        rtt_ms = ch.sample_rtt(self.profile, self.rng)
        if loss and self.rng.random() < loss:
            return
        arrival = now + int(round(rtt_ms * 1e6))
        heapq.heappush(self._echoes, (arrival, self._order, ProbePacket.decode(data).echo()))
        self._order += 1

    def poll_echoes(self):
        self._check()
        now = self.clock.now_ns()
        out = []
        while self._echoes and self._echoes[0][0] <= now:
            arrival, _, payload = heapq.heappop(self._echoes)
            out.append((payload, arrival))
        return out

    def next_echo_ns(self):
        return self._echoes[0][0] if self._echoes else None

    def _advance_link(self, to_ns):
        rate = self._bits_per_ns
        if math.isinf(rate):
            while self._queue:
                stream, remaining = self._queue.popleft()
                self._bits += remaining
                self._complete(stream)
            self._link_ns = float(to_ns)
            return
        t = max(self._link_ns, 0.0)
        while self._queue and t < to_ns:
            item = self._queue[0]
            need = item[1] / rate
            if t + need <= to_ns:
                t += need
                self._bits += item[1]
                self._queue.popleft()
                self._complete(item[0])
            else:
                sent = (to_ns - t) * rate
                item[1] -= sent
                self._bits += sent
                t = float(to_ns)
        self._link_ns = max(t, float(to_ns)) if not self._queue else t

    def _complete(self, stream):
        loss = self.profile.loss_fraction
        if loss and self.rng.random() < loss:
            return
        self._done[stream] = self._done.get(stream, 0) + 1

    def backlog_bits(self):
        return sum(item[1] for item in self._queue)

    def send_frame(self, stream, nbits):
        """Queue a frame; False when dropped for backpressure."""
        self._check()
        now = self.clock.now_ns()
        self._advance_link(now)
        if not self._queue:
            self._link_ns = float(now)
        limit = self.profile.uplink_cap_mbps * 1e6 * self.buffer_s
        if self._queue and self.backlog_bits() + nbits > limit:
            return False
        if nbits <= 0:
            return True
        self._queue.append([stream, float(nbits)])
        return True

    def take_counters(self):
        """Bits put on the wire and frames delivered per stream since the last call."""
        self._advance_link(self.clock.now_ns())
        bits, done = self._bits, self._done
        self._bits, self._done = 0.0, {}
        return bits, done


class UdpTransport:
    """Real datagrams to an echo/sink server; echoes stamped by a receiver thread."""

    realtime = True

    def __init__(self, host, echo_port, sink_port=None, datagram_size=1400, send_timeout_s=0.05):
        self.clock = MonotonicClock()
        self.closed = False
        try:
            infos = socket.getaddrinfo(host, echo_port, type=socket.SOCK_DGRAM)
        except OSError as exc:
            raise SessionError(f"cannot resolve {host}:{echo_port}: {exc}") from exc
        family, _, _, _, addr = infos[0]
        self.echo_addr = addr
        self.sink_addr = (addr[0], sink_port) + tuple(addr[2:]) if sink_port else None
        self.datagram_size = max(int(datagram_size), 1)
        self.sock = socket.socket(family, socket.SOCK_DGRAM)
        self.sock.settimeout(send_timeout_s)
        self._rx = deque()
        self._bits = 0.0
        self._done = {}
        self._stop = threading.Event()
        self._thread = threading.Thread(target=self._receive, name="udp-echo-rx", daemon=True)
        self._thread.start()

    def _receive(self):
        while not self._stop.is_set():
            try:
                data, _ = self.sock.recvfrom(65535)
            except (socket.timeout, BlockingIOError):
                continue
            except OSError:
                if self._stop.is_set():
                    return
                continue
            self._rx.append((data, time.monotonic_ns()))

    def reset(self, seed=None):
        self._rx.clear()
        self._bits, self._done = 0.0, {}

    def close(self):
        if not self.closed:
            self.closed = True
            self._stop.set()
            self._thread.join(timeout=1.0)
            self.sock.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _check(self):
        if self.closed:
            raise SessionError("transport is closed")

    def send_probe(self, data):
        self._check()
        try:
            self.sock.sendto(data, self.echo_addr)
        except (socket.timeout, BlockingIOError):
            log.debug("probe send blocked; counted as lost")
        except OSError as exc:
            raise SessionError(f"probe send failed: {exc}") from exc

    def poll_echoes(self):
        self._check()
        out = []
        while self._rx:
            out.append(self._rx.popleft())
        return out

    def next_echo_ns(self):
        return None

    def send_frame(self, stream, nbits):
        self._check()
        if self.sink_addr is None:
            raise SessionError("no sink address configured for frame traffic")
        remaining = int(math.ceil(nbits / 8))
        chunk = bytes(min(self.datagram_size, max(remaining, 1)))
        while remaining > 0:
            size = min(remaining, self.datagram_size)
            try:
                self.sock.sendto(chunk[:size], self.sink_addr)
            except (socket.timeout, BlockingIOError, InterruptedError):
                return False
            except OSError as exc:
                if exc.errno in (105,):  # ENOBUFS
                    return False
                raise SessionError(f"frame send failed: {exc}") from exc
            self._bits += size * 8
            remaining -= size
        if nbits > 0:
            self._done[stream] = self._done.get(stream, 0) + 1
        return True

    def take_counters(self):
        bits, done = self._bits, self._done
        self._bits, self._done = 0.0, {}
        return bits, done

    def check(self, timeout_s=1.0):
        """Round-trip one probe; SessionError if nothing echoes within ``timeout_s``."""
        probe = ProbePacket(2**64 - 1, self.clock.now_ns())
        self.send_probe(probe.encode())
        deadline = time.monotonic() + timeout_s
        while time.monotonic() < deadline:
            for data, _ in self.poll_echoes():
                if len(data) >= HEADER_SIZE and ProbePacket.decode(data).seq == probe.seq:
                    return True
            time.sleep(0.002)
        raise SessionError(f"no echo from {self.echo_addr[0]}:{self.echo_addr[1]} within {timeout_s} s")


class EchoServer:
    """Loopback/LAN peer: echoes probe headers on one port, discards frames on another."""

    def __init__(self, host="127.0.0.1", echo_port=0, sink_port=0):
        self.echo_sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self.sink_sock = socket.socket(socket.AF_INET, socket.SOCK_DGRAM)
        self.echo_sock.bind((host, echo_port))
        self.sink_sock.bind((host, sink_port))
        self.sink_sock.setsockopt(socket.SOL_SOCKET, socket.SO_RCVBUF, 4 << 20)
        self.sink_bytes = 0
        self.echoed = 0
        self._stop = threading.Event()
        self._thread = None

    @property
    def echo_address(self):
        return self.echo_sock.getsockname()

    @property
    def sink_address(self):
        return self.sink_sock.getsockname()

    def serve_forever(self):
        sel = selectors.DefaultSelector()
        sel.register(self.echo_sock, selectors.EVENT_READ, "echo")
        sel.register(self.sink_sock, selectors.EVENT_READ, "sink")
        try:
            while not self._stop.is_set():
                for key, _ in sel.select(timeout=0.1):
                    try:
                        data, addr = key.fileobj.recvfrom(65535)
                    except OSError:
                        continue
                    if key.data == "echo":
                        if len(data) >= HEADER_SIZE:
                            key.fileobj.sendto(data[:HEADER_SIZE], addr)
                            self.echoed += 1
                    else:
                        self.sink_bytes += len(data)
        finally:
            sel.close()

    def start(self):
        self._thread = threading.Thread(target=self.serve_forever, name="echo-server", daemon=True)
        self._thread.start()
        return self

    def stop(self):
        self._stop.set()
        if self._thread is not None:
            self._thread.join(timeout=1.0)
        self.echo_sock.close()
        self.sink_sock.close()

    def __enter__(self):
        return self.start()

    def __exit__(self, *exc):
        self.stop()

    def transport(self, **kwargs):
        host, echo_port = self.echo_address
        return UdpTransport(host, echo_port, self.sink_address[1], **kwargs)


# --- records ----------------------------------------------------------------


@dataclass(frozen=True)
class RttSeries:
    """Probe send times (s from session start) and RTTs in ms; NaN marks a lost echo."""

    time_s: np.ndarray
    rtt_ms: np.ndarray

    def __len__(self):
        return len(self.rtt_ms)

    @property
    def present(self):
        return self.rtt_ms[~np.isnan(self.rtt_ms)]

    @property
    def missing(self):
        return int(np.isnan(self.rtt_ms).sum())


@dataclass(frozen=True)
class RunRecord:
    location_label: str
    network_label: str
    profile: StreamProfile | None
    duration_s: float
    rtt: RttSeries
    sent_mbps: np.ndarray
    delivered_fps: np.ndarray  # shape (seconds, streams)
    run_index: int = 0
    seed: int | None = None
    frames_offered: int = 0
    frames_dropped: int = 0

    @property
    def profile_name(self):
        return self.profile.name if self.profile is not None else "probe"

    @property
    def key(self):
        return (self.location_label, self.network_label, self.profile_name, self.run_index)

    @property
    def rtt_samples(self):
        return np.column_stack([self.rtt.time_s, self.rtt.rtt_ms])

    @property
    def total_bits_sent(self):
        return float(math.fsum(self.sent_mbps.tolist())) * 1e6

    def stats(self):
        tput = self.sent_mbps if len(self.sent_mbps) else np.zeros(1)
        return compute_run_stats(self.rtt.rtt_ms, tput)


def records_stats(records):
    """Pooled statistics over several records."""
    return combine_runs(
        (r.rtt.rtt_ms, r.sent_mbps if len(r.sent_mbps) else np.zeros(1)) for r in records
    )


# --- sessions ---------------------------------------------------------------

_BOUNDARY, _PROBE, _FRAME = 0, 1, 2


def _check_open(transport):
    if getattr(transport, "closed", False):
        raise SessionError("transport is closed")


def _session(transport, duration_s, probe_rate_hz, profile=None, frame_rng=None, padding=0, timeout_s=ECHO_TIMEOUT_S):
    _check_open(transport)
    if not duration_s > 0:
        raise ConfigurationError("duration_s must be > 0", ["duration_s"])
    if probe_rate_hz is not None and not probe_rate_hz > 0:
        raise ConfigurationError("rate_hz must be > 0", ["rate_hz"])

    clock = transport.clock
    start = clock.now_ns()
    dur_ns = int(round(duration_s * NS_PER_S))
    pad = bytes(padding)

    events = []
    n_probes = int(round(duration_s * probe_rate_hz)) if probe_rate_hz else 0
    for j in range(n_probes):
        events.append((start + int(round(j * NS_PER_S / probe_rate_hz)), _PROBE, 0, j))
    n_seconds = 0
    if profile is not None:
        n_frames = int(round(duration_s * profile.fps))
        for k in range(n_frames):
            t = start + int(round(k * NS_PER_S / profile.fps))
            # rotate which stream queues first so backpressure is shared evenly
            for pos in range(profile.stream_count):
                events.append((t, _FRAME, pos, (pos + k) % profile.stream_count))
        n_seconds = int(math.ceil(duration_s - 1e-9))
        for sec in range(1, n_seconds + 1):
            events.append((start + min(sec * NS_PER_S, dur_ns), _BOUNDARY, 0, sec - 1))
    events.sort()

    send_ns = np.zeros(n_probes, dtype=np.int64)
    rtt_ms = np.full(n_probes, np.nan)
    pending = set()
    sent_bits = np.zeros(n_seconds)
    delivered = np.zeros((n_seconds, profile.stream_count if profile else 0))
    offered = dropped = 0
    timeout_ns = int(timeout_s * NS_PER_S)

    def collect():
        for payload, recv_ns in transport.poll_echoes():
            try:
                pkt = ProbePacket.decode(payload)
            except ValueError:
                continue
            seq = pkt.seq
            if seq not in pending:
                continue
            elapsed = recv_ns - pkt.send_timestamp_ns
            pending.discard(seq)
            if 0 <= elapsed <= timeout_ns:
                rtt_ms[seq] = elapsed / 1e6

    for t, kind, _, idx in events:
        clock.sleep_until(t)
        collect()
        if kind == _PROBE:
            now = clock.now_ns()
            send_ns[idx] = now
            pending.add(idx)
            transport.send_probe(ProbePacket(idx, now, pad).encode())
        elif kind == _FRAME:
            nbits = profile.frame_model.frame_bits(profile.fps, frame_rng)
            offered += 1
            if not transport.send_frame(idx, nbits):
                dropped += 1
                log.debug("frame dropped (stream %d, %d bits) at t=%.3f s", idx, nbits, (t - start) / 1e9)
        else:
            bits, done = transport.take_counters()
            width = (min((idx + 1) * NS_PER_S, dur_ns) - idx * NS_PER_S) / NS_PER_S
            for stream, count in done.items():
                delivered[idx, stream] = count / width
            sent_bits[idx] = bits / width

    # stragglers: wait for outstanding echoes, at most timeout_s past the last send
    if pending:
        deadline = int(send_ns.max()) + timeout_ns if n_probes else clock.now_ns()
        while pending and clock.now_ns() < deadline:
            if transport.realtime:
                time.sleep(0.001)
            else:
                nxt = transport.next_echo_ns()
                clock.sleep_until(deadline if nxt is None or nxt > deadline else nxt)
            collect()
    if pending:
        log.debug("%d probe echoes missing after %.1f s timeout", len(pending), timeout_s)
    if dropped:
        log.warning("%d of %d frames dropped for backpressure", dropped, offered)

    rtt = RttSeries((send_ns - start) / 1e9, rtt_ms)
    return rtt, sent_bits / 1e6, delivered, offered, dropped


def run_latency_probe(transport, duration_s=DEFAULT_DURATION_S, rate_hz=DEFAULT_PROBE_HZ, padding=0):
    """Probe at ``rate_hz`` for ``duration_s``; lost echoes are NaN, never zero."""
    rtt, *_ = _session(transport, duration_s, rate_hz, padding=padding)
    return rtt


def run_throughput_test(
    transport,
    profile,
    duration_s=DEFAULT_DURATION_S,
    probe_rate_hz=DEFAULT_PROBE_HZ,
    seed=None,
    location="",
    network="",
    run_index=0,
):
    """Stream ``profile`` for ``duration_s`` while probing latency.

    ``sent_mbps`` is per-second data put on the wire (after saturation);
    ``delivered_fps`` counts frames fully delivered per second per stream.
    """
    if isinstance(profile, str):
        profile = get_profile(profile)
    if not isinstance(profile, StreamProfile):
        raise ConfigurationError("profile must be a StreamProfile", ["profile"])
    frame_rng = np.random.default_rng(None if seed is None else [seed, 0xF4A3E])
    rtt, sent, delivered, offered, dropped = _session(
        transport, duration_s, probe_rate_hz, profile=profile, frame_rng=frame_rng
    )
    return RunRecord(
        location_label=location,
        network_label=network,
        profile=profile,
        duration_s=float(duration_s),
        rtt=rtt,
        sent_mbps=sent,
        delivered_fps=delivered,
        run_index=run_index,
        seed=seed,
        frames_offered=offered,
        frames_dropped=dropped,
    )


def run_protocol(
    transport,
    profile,
    repeats=DEFAULT_REPEATS,
    duration_s=DEFAULT_DURATION_S,
    seed=0,
    location="",
    network="",
    probe_rate_hz=DEFAULT_PROBE_HZ,
):
    """``repeats`` independently seeded runs; a failure raises ProtocolError with the partial list."""
    if not isinstance(repeats, int) or repeats < 1:
        raise ConfigurationError("repeats must be >= 1", ["repeats"])
    seeds = [int(s) for s in np.random.SeedSequence(seed).generate_state(repeats)]
    records = []
    for i, run_seed in enumerate(seeds):
        try:
            transport.reset(run_seed)
            if profile is None:
                rtt = run_latency_probe(transport, duration_s, probe_rate_hz)
                rec = RunRecord(location, network, None, float(duration_s), rtt,
                                np.zeros(0), np.zeros((0, 0)), i, run_seed)
            else:
                rec = run_throughput_test(
                    transport, profile, duration_s, probe_rate_hz, run_seed, location, network, i
                )
        except Exception as exc:
            raise ProtocolError(f"run {i} of {repeats} failed: {exc}", i, records) from exc
        records.append(rec)
    return records


# --- CSV persistence --------------------------------------------------------

RTT_HEADER = ["time_s", "rtt_ms"]
THROUGHPUT_HEADER = ["second", "sent_mbps", "delivered_fps"]


def _num(x):
    return "" if x is None or (isinstance(x, float) and math.isnan(x)) else repr(float(x))


def write_rtt_csv(record_or_series, path):
    """``time_s,rtt_ms``; a lost echo leaves ``rtt_ms`` empty."""
    series = record_or_series.rtt if isinstance(record_or_series, RunRecord) else record_or_series
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RTT_HEADER)
        for t, r in zip(series.time_s.tolist(), series.rtt_ms.tolist()):
            w.writerow([_num(t), _num(r)])


def write_throughput_csv(record, path):
    """``second,sent_mbps,delivered_fps`` (mean per stream) plus ``delivered_fps_<i>`` per stream when several."""
    streams = record.delivered_fps.shape[1] if record.delivered_fps.ndim == 2 else 0
    header = list(THROUGHPUT_HEADER)
    if streams > 1:
        header += [f"delivered_fps_{i}" for i in range(streams)]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for sec, mbps in enumerate(record.sent_mbps.tolist()):
            row_fps = record.delivered_fps[sec].tolist() if streams else []
            mean_fps = math.fsum(row_fps) / streams if streams else 0.0
            row = [sec, _num(mbps), _num(mean_fps)]
            if streams > 1:
                row += [_num(v) for v in row_fps]
            w.writerow(row)


def _parse(value):
    return math.nan if value == "" else float(value)


def read_rtt_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RTT_HEADER:
            raise ValueError(f"{path}: expected header {','.join(RTT_HEADER)}")
        rows = [(float(t), _parse(r)) for t, r in reader]
    arr = np.array(rows, dtype=float).reshape(-1, 2)
    return RttSeries(arr[:, 0], arr[:, 1])


def read_throughput_csv(path):
    """Returns ``(sent_mbps, delivered_fps)`` with delivered_fps shaped (seconds, streams)."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or header[:3] != THROUGHPUT_HEADER:
            raise ValueError(f"{path}: expected header {','.join(THROUGHPUT_HEADER)}")
        per_stream = len(header) > 3
        sent, fps = [], []
        for row in reader:
            sent.append(float(row[1]))
            fps.append([float(v) for v in row[3:]] if per_stream else [float(row[2])])
    width = len(header) - 3 if per_stream else 1
    return np.array(sent, dtype=float), np.array(fps, dtype=float).reshape(-1, width)


def run_paths(directory, location, network, profile_name, run_index):
    """``(rtt_csv, throughput_csv)`` paths for one run inside ``directory``."""
    stem = "__".join(safe_label(p) for p in (location, network, profile_name)) + f"__run{run_index}"
    directory = Path(directory)
    return directory / f"{stem}_rtt.csv", directory / f"{stem}_throughput.csv"


def record_paths(directory, record):
    return run_paths(directory, *record.key)


def safe_label(label):
    return "".join(c if c.isalnum() or c in ".-_" else "_" for c in label) or "_"
