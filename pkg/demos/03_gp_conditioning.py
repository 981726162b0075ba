"""
Learn a weight vector for each of several single-obstacle runs, treat the
obstacle multiplier as context, and ask a GP for the trajectory at a new one.

Run:  python3 demos/03_gp_conditioning.py [outdir]
"""
import sys
from pathlib import Path

from prompseg import GpConfig
from prompseg.experiments import condition_runs
from prompseg.svg import line_plot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

cfg = GpConfig(length_scale=0.5, signal_var=1.0, noise_var=1e-6)
seeds = list(range(1, 9))

# far from every training context (5.0) the GP falls back to the mean
# weights and the band widens to the prior
for c in (0.25, -0.6, 5.0):
    r = condition_runs(seeds, [c], gp_cfg=cfg)
    print(f"context {c:+.2f}: weight variance {r.variance:.3g}, "
          f"max band {2 * r.std.max():.3g}")

print("training contexts:", " ".join(f"{v:+.2f}" for v in r.contexts[:, 0]))

r = condition_runs(seeds, [0.25], gp_cfg=cfg)
line_plot(out / "conditional.svg", r.t,
          {"mean": r.mean, "+2 std": r.mean + 2 * r.std, "-2 std": r.mean - 2 * r.std},
          title="GP-conditioned trajectory, context 0.25")
print("wrote", out / "conditional.svg")
