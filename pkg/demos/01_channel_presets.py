"""
Channel presets and latency sampling
====================================

Load the bundled presets, look at what is known about each network, and draw
RTTs from a truncated-normal link.
"""

import numpy as np

from fieldnet import channel as ch

catalog = ch.default_catalog()
for name, profile in catalog.items():
    print(f"{name:<16} up {profile.uplink_cap_mbps:>6} Mbps  mean RTT {profile.mean_rtt_ms:.1f} ms")
    print(f"{'':<16} unknown: {', '.join(catalog.unknown[name]) or '-'}")

# The bundled presets only know a mean, so their latency is constant.
rng = np.random.default_rng(0)
print("5G VLoS RTT:", ch.sample_rtt(catalog["FIVEG_N77_VLOS"], rng))

# With a std and a floor the three numbers describe the truncated distribution.
lab = ch.ChannelProfile("lab", 100, 100, ch.LatencyModel(50.0, 5.0, 40.0))
draws = ch.RttSampler(lab, seed=1).many(100_000)
print(f"truncated normal: mean {draws.mean():.2f}  std {draws.std(ddof=1):.2f}  min {draws.min():.2f}")

# the parent normal sits a little lower and wider than the requested stats
loc, scale, alpha = lab.rtt_model.parent
print(f"parent loc {loc:.3f} scale {scale:.3f}, floor at {alpha:.2f} sigma")
