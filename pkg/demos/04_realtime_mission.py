"""
Can the robot react in time?
============================

A robot at 3 m/s crosses 30 one-metre spaces. Each space it sends its location
and must get a reply back, after 273 ms of human reaction, before it leaves
the space. Compare the networks' RTTs against that budget.
"""

from pathlib import Path

from fieldnet import rtsim, svg

spec = rtsim.MissionSpec()
print(f"window {spec.response_window_ms:.1f} ms, RTT budget {spec.response_window_ms - spec.processing_ms:.1f} ms")

networks = {
    "WiFi6": rtsim.DelayModel.constant(4.7),
    "5G": rtsim.DelayModel.constant(22.9),
    "5G far": rtsim.DelayModel.constant(63.9),
    "4G": rtsim.DelayModel(217.0, 293.6, "vertex-quadratic"),
}
reports = []
for label, model in networks.items():
    rep = rtsim.simulate_mission(spec, model, label)
    reports.append(rep)
    s = rep.summary()
    print(f"{label:<7} {rep.verdict:<14} worst margin {s['min_margin_ms']:+7.1f} ms  "
          f"total {s['total_cumulative_delay_s']:+.1f} s")

for note in reports[-1].notes:
    print("note:", note)

# An automated pipeline instead of a human operator changes the picture.
fast = rtsim.MissionSpec(processing_ms=rtsim.PIPELINE_MS)
print("4G with pipeline processing:", rtsim.simulate_mission(fast, networks["4G"]).verdict)

out = Path("demo_output")
out.mkdir(exist_ok=True)
(out / "timeline.svg").write_text(svg.mission_timeline(reports))
print("wrote", out / "timeline.svg")
