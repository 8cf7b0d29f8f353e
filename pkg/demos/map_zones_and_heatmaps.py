"""Visualize the zone model and a player's dwell heatmap.

Prints an ASCII map of the default zone layout, then renders the injected
support's dwell heatmap over the suspicious late-game window to a PNG
(demos/out/heatmap.png) with the hot cells (> 30 s) called out.
"""

import os

import numpy as np

from grieferlens.detect import run_all_detectors
from grieferlens.simgen import Injection, Scenario, generate_match
from grieferlens.spatial import classify_zone, default_layout, dwell_heatmap
from grieferlens.telemetry import parse_match

layout = default_layout()

GLYPHS = {
    "fountain_blue": "F",
    "fountain_red": "f",
    "base_blue": "B",
    "base_red": "b",
    "river": "~",
    "mid_lane": "/",
    "top_lane": "#",
    "bot_lane": "=",
    "jungle_blue": ".",
    "jungle_red": ",",
}

print("default zone layout (y grows upward):")
for row in range(20, -1, -1):
    y = row / 20
    line = "".join(GLYPHS[classify_zone(layout, col / 40, y)] for col in range(41))
    print("  " + line)
print("  " + " ".join(f"{g}={z}" for z, g in list(GLYPHS.items())[:5]))
print("  " + " ".join(f"{g}={z}" for z, g in list(GLYPHS.items())[5:]))

scenario = Scenario(
    seed=2023,
    injections=(
        Injection("P03", "jungle_stealing", {"stage": "late"}),
        Injection("P03", "non_participation"),
    ),
)
telemetry, _ = generate_match(scenario)
match = parse_match(telemetry)

finding = next(
    f
    for s in run_all_detectors(match, layout)
    for f in s.findings
    if f.griefer_type == "jungle_stealing"
)
t0, t1 = finding.time_ranges[0][0], finding.time_ranges[-1][1]
print(f"\nsuspicious window for P03: [{t0:.0f}, {t1:.0f}] s")

hm = dwell_heatmap(match, layout, "P03", t0, t1, grid_n=64)
hot = np.argwhere(hm.cells > 30.0)
print(f"total tracked dwell: {hm.total_seconds():.0f} s, hot cells (> 30 s): {len(hot)}")
for ix, iy in hot:
    cx, cy = (ix + 0.5) / 64, (iy + 0.5) / 64
    zone = classify_zone(layout, cx, cy)
    print(f"  cell ({ix:2d},{iy:2d}) ~ ({cx:.2f},{cy:.2f}) in {zone}: {hm.cells[ix, iy]:.0f} s")

try:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    os.makedirs(os.path.join(os.path.dirname(__file__), "out"), exist_ok=True)
    out_path = os.path.join(os.path.dirname(__file__), "out", "heatmap.png")
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.imshow(hm.cells.T, origin="lower", extent=(0, 1, 0, 1), cmap="hot")
    ax.set_title(f"P03 dwell, t in [{t0:.0f}, {t1:.0f}] s")
    fig.savefig(out_path, dpi=120)
    print(f"\nwrote {out_path}")
except ImportError:
    print("\nmatplotlib not available; skipped the PNG render")
