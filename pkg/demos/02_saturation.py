"""
Stream saturation on the emulated link
======================================

An RGB-D stream is compressed at a fixed 144 Mbps. On WiFi6 it fits; on the
60 Mbps 5G uplink the queue fills, frames are dropped and the delivered frame
rate falls to about 60/144 of 30 FPS.
"""

import numpy as np

from fieldnet import channel as ch
from fieldnet import loadgen as lg

catalog = ch.default_catalog()

for net in ("WIFI6_LOCAL", "FIVEG_N77_VLOS", "FIVEG_N77_NVLOS", "FOURG_PUBLIC"):
    transport = lg.EmulatedTransport(catalog[net], seed=0)
    rec = lg.run_throughput_test(transport, "RGBD1", duration_s=30, seed=0)
    print(
        f"{net:<16} sent {np.mean(rec.sent_mbps):6.1f} Mbps  "
        f"{np.mean(rec.delivered_fps):5.1f} FPS  dropped {rec.frames_dropped}/{rec.frames_offered}"
    )

# Four variable-rate RGB streams share the 4G uplink.
rec = lg.run_throughput_test(lg.EmulatedTransport(catalog["FOURG_PUBLIC"], 0), "RGB4", 30, seed=0)
print("RGB4 over 4G, FPS per stream:", np.round(rec.delivered_fps.mean(axis=0), 1))
