"""
Reading and writing trajectories, segmentations, primitives and GP models.

Floats are written with ``repr`` so every value round-trips exactly and
repeated runs produce byte-identical files.
"""

import csv
import json
from pathlib import Path

import numpy as np

from .basis import BasisConfig
from .errors import InvalidInputError
from .gp_promp import GpConfig
from .promp import ProMP, SegmentedProMP
from .segment import Segmentation
from .trajgen import Trajectory


def _fmt(x):
    return repr(float(x))


def write_csv(path, columns):
    """Write a dict of equally long columns with a header row."""
    names = list(columns)
    cols = [np.asarray(columns[k], dtype=float) for k in names]
    lines = [",".join(names)]
    for row in zip(*cols):
        lines.append(",".join(_fmt(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8", newline="\n")


def read_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise InvalidInputError(f"{path}: empty CSV") from None
        rows = [r for r in reader if r]
    try:
        data = np.array([[float(v) for v in r] for r in rows], dtype=float)
    except ValueError as exc:
        raise InvalidInputError(f"{path}: {exc}") from exc
    if data.size and data.shape[1] != len(header):
        raise InvalidInputError(f"{path}: row width does not match header")
    data = data.reshape(-1, len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def write_json(path, obj):
    Path(path).write_text(json.dumps(obj, indent=2, allow_nan=False) + "\n",
                          encoding="utf-8", newline="\n")


def write_trajectory_csv(path, traj):
    write_csv(path, {"t": traj.t, "y": traj.y})


def read_trajectory_csv(path):
    cols = read_csv(path)
    if "t" not in cols or "y" not in cols:
        raise InvalidInputError(f"{path}: expected header t,y")
    if len(cols["t"]) < 2:
        raise InvalidInputError(f"{path}: need at least 2 samples")
    return Trajectory(t=cols["t"], y=cols["y"])


def trajectory_to_dict(traj):
    return {
        "t": [float(v) for v in traj.t],
        "y": [float(v) for v in traj.y],
        "obstacle_centers": [int(c) for c in traj.obstacle_centers],
        "obstacle_multipliers": [float(m) for m in traj.obstacle_multipliers],
        "obstacle_half_width": int(traj.obstacle_half_width),
    }


def trajectory_from_dict(d):
    return Trajectory(t=np.asarray(d["t"], dtype=float), y=np.asarray(d["y"], dtype=float),
                      obstacle_centers=list(d.get("obstacle_centers", [])),
                      obstacle_multipliers=list(d.get("obstacle_multipliers", [])),
                      obstacle_half_width=int(d.get("obstacle_half_width", 50)))


def segmentation_to_dict(seg):
    return {
        "peaks": [int(p) for p in seg.peak_indices],
        "labels": [int(l) for l in seg.peak_labels],
        "intervals": [[int(a), int(b)] for a, b in seg.intervals],
        "n_clusters": int(seg.n_clusters),
    }


def segmentation_from_dict(d):
    return Segmentation(peak_indices=np.asarray(d["peaks"], dtype=int),
                        peak_labels=np.asarray(d["labels"], dtype=int),
                        intervals=[tuple(iv) for iv in d["intervals"]],
                        n_clusters=int(d.get("n_clusters", 0)))


def promp_to_dict(p):
    return {
        "weights": [float(w) for w in p.weights],
        "num_bases": int(p.basis.num_bases),
        "width": float(p.width),
        "t_start": float(p.t_start),
        "t_end": float(p.t_end),
        "noise_std": float(p.noise_std),
    }


def promp_from_dict(d):
    return ProMP(weights=np.asarray(d["weights"], dtype=float),
                 basis=BasisConfig(int(d["num_bases"]), float(d["width"])),
                 t_start=float(d["t_start"]), t_end=float(d["t_end"]),
                 noise_std=float(d.get("noise_std", 0.0)))


def segmented_promp_to_dict(sp):
    return {"segments": [{"start": int(a), "end": int(b), "promp": promp_to_dict(p)}
                         for (a, b), p in sp.segments]}


def segmented_promp_from_dict(d):
    return SegmentedProMP(segments=[((s["start"], s["end"]), promp_from_dict(s["promp"]))
                                    for s in d["segments"]])


def gp_model_to_dict(model):
    cfg = model.config
    return {
        "contexts": model.contexts.tolist(),
        "weight_table": model.weight_table.tolist(),
        "config": {"length_scale": cfg.length_scale, "signal_var": cfg.signal_var,
                   "noise_var": cfg.noise_var, "jitter": cfg.jitter},
    }


def gp_model_from_dict(d):
    from .gp_promp import gp_fit
    return gp_fit(np.asarray(d["contexts"], dtype=float),
                  np.asarray(d["weight_table"], dtype=float),
                  GpConfig(**d["config"]))
