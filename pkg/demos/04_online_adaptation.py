"""
Follow a planned trajectory while an unexpected obstacle distorts the
observations, re-fitting the weights every batch with older samples
down-weighted.

Run:  python3 demos/04_online_adaptation.py [outdir]
"""
import sys
from pathlib import Path

import numpy as np

from prompseg.experiments import adaptation_stream
from prompseg.svg import line_plot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

r = adaptation_stream(seed=3, decay=0.9, batch=10)
print(f"obstacle at sample {r.obstacle_center}, multiplier {r.obstacle_multiplier:+.3f}")
print(f"rolling MSE without adaptation {r.rolling_mse_static:.4f}")
print(f"rolling MSE with adaptation    {r.rolling_mse_adapted:.4f}")

line_plot(out / "adaptation.svg", r.t,
          {"stream": r.stream, "static": r.pred_static, "adapted": r.pred_adapted},
          title="Online adaptation")
print("wrote", out / "adaptation.svg")

# %% Decay trades memory for reactivity.
for decay in (0.5, 0.8, 0.9, 0.98, 1.0):
    res = [adaptation_stream(s, decay=decay) for s in range(1, 21)]
    wins = sum(x.rolling_mse_adapted < x.rolling_mse_static for x in res)
    gain = np.median([x.rolling_mse_static / x.rolling_mse_adapted for x in res])
    print(f"decay {decay:.2f}: adapted wins {wins:2d}/20, median error ratio {gain:.2f}")

# with nothing to react to, the weights stay put
quiet = adaptation_stream(seed=3, inject=False)
print("no obstacle, max weight change:",
      f"{np.max(np.abs(quiet.weights_final - quiet.weights_initial)):.1e}")
