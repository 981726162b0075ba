"""
Alternative segmentation: embed the series with a sliding window, build a
Gaussian affinity graph and cluster its Laplacian eigenvectors.

Run:  python3 demos/05_spectral_segmentation.py [outdir]
"""
import sys
from pathlib import Path

import numpy as np

from prompseg import SpectralConfig, generate_dynamic_trajectory, sym_eig
from prompseg.segment import (affinity_matrix, delay_embed, labels_to_intervals, laplacian,
                              median_sigma, spectral_clusters)
from prompseg.svg import line_plot

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo_out")
out.mkdir(exist_ok=True)

traj = generate_dynamic_trajectory(seed=2)
stride = 4
feats = delay_embed(traj.y, 10)[::stride]
sigma = median_sigma(feats)
print(f"{len(feats)} windows of length 10, sigma {sigma:.3f}")

vals, _ = sym_eig(laplacian(affinity_matrix(feats, sigma)))
print("smallest Laplacian eigenvalues:", np.array2string(vals[:5], precision=4))

labels = spectral_clusters(feats, SpectralConfig(n_clusters=3, sigma=sigma), seed=0)
ivs = labels_to_intervals(labels, n=len(traj), stride=stride)
print(f"{len(ivs)} runs of constant label; label counts {np.bincount(labels).tolist()}")

shade = [(traj.t[a], traj.t[b - 1]) for (a, b), lab in
         zip(ivs, [labels[a // stride] for a, _ in ivs]) if lab == 0]
line_plot(out / "spectral.svg", traj.t, {"y": traj.y},
          title="Spectral segmentation (label 0 shaded)", shade=shade)
print("wrote", out / "spectral.svg")
