"""
Latency probes: five 30 s runs
==============================

The same protocol runs against the emulated channel and against a real UDP
echo server on loopback. Pooled and per-run statistics are both shown.
"""

from fieldnet import channel as ch
from fieldnet import loadgen as lg
from fieldnet import metrics

lab = ch.ChannelProfile("lab", 100, 100, ch.LatencyModel(50.0, 5.0, 40.0), loss_fraction=0.01)
records = lg.run_protocol(lg.EmulatedTransport(lab), None, repeats=5, duration_s=30, seed=0)

pooled = lg.records_stats(records)
per_run = metrics.average_runs(r.stats() for r in records)
print("pooled :", {k: metrics.present(v) for k, v in pooled.as_dict().items()})
print("per-run:", {k: metrics.present(v) for k, v in per_run.as_dict().items()})
print("lost echoes:", sum(r.rtt.missing for r in records))

# Real sockets take real time, so keep this one short.
with lg.EchoServer() as server:
    transport = server.transport()
    rtt = lg.run_latency_probe(transport, duration_s=2, rate_hz=20)
    transport.close()
print(f"loopback mean RTT {rtt.present.mean():.3f} ms over {len(rtt)} probes")
