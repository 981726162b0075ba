"""
Generate a perturbed sine trajectory and split it at its significant peaks.

Run:  python3 demos/01_generate_and_segment.py [outdir]
"""
import sys
from pathlib import Path

import numpy as np

from prompseg import TrajectoryConfig, generate_dynamic_trajectory, segment_trajectory
from prompseg.svg import line_plot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

# %% A trajectory: sin(t) plus noise, with five windows scaled by random multipliers.
traj = generate_dynamic_trajectory(TrajectoryConfig(), seed=7)
print(f"{len(traj)} samples over [{traj.t[0]:.2f}, {traj.t[-1]:.2f}]")
for (a, b), m in zip(traj.obstacle_windows(), traj.obstacle_multipliers):
    print(f"  obstacle window [{a:4d}, {b:4d})  multiplier {m:+.3f}")

# %% Peaks of |y| that rise above one standard deviation, grouped by height.
seg = segment_trajectory(traj.y, n_clusters=3, seed=7)
print(f"{len(seg.peak_indices)} significant peaks, cluster sizes {seg.label_histogram()}")
print(f"{len(seg.intervals)} intervals, shortest {min(b - a for a, b in seg.intervals)} samples")

# %% Plot: obstacle windows shaded, peaks coloured by cluster.
colors = ["#d62728", "#2ca02c", "#9467bd"]
markers = [(traj.t[p], traj.y[p], colors[l]) for p, l in zip(seg.peak_indices, seg.peak_labels)]
shade = [(traj.t[a], traj.t[b - 1]) for a, b in traj.obstacle_windows()]
line_plot(out / "segmentation.svg", traj.t,
          {"y": traj.y, "sin(t)": np.sin(traj.t)}, title="Peaks and obstacle windows",
          shade=shade, markers=markers)
print("wrote", out / "segmentation.svg")
