"""
End-to-end experiment drivers shared by the CLI and the demo scripts.

run_pipeline(): generate -> segment -> learn (global, segmented) -> reconstruct -> mse.
summarize(): per-seed MSEs with median and interquartile range.
condition_runs(): GP over weights with obstacle multipliers as context.
adaptation_stream(): online weight adaptation against an injected obstacle.
"""

import logging
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from .basis import BasisConfig
from .errors import InvalidInputError
from .gp_promp import conditional_trajectory, gp_fit, gp_predict
from .numerics import Rng64
from .promp import (adapt_weights, fit_promp, learn_segmented, mse, reconstruct,
                    reconstruct_segmented)
from .segment import Segmentation, segment_trajectory, significant_peaks
from .trajgen import TrajectoryConfig, generate_dynamic_trajectory

log = logging.getLogger(__name__)


class StageError(RuntimeError):
    """Failure inside a named pipeline stage."""

    def __init__(self, stage, exc):
        self.stage = stage
        super().__init__(f"stage '{stage}' failed: {exc}")


@dataclass
class PipelineReport:
    config: dict
    seed: int
    num_peaks: int
    n_clusters: int
    cluster_label_histogram: list
    mse_global: float
    mse_segmented: float
    runtime_ms: dict = field(default_factory=dict)

    def to_dict(self, include_timing=False):
        d = asdict(self)
        if not include_timing:
            del d["runtime_ms"]
        return d


@dataclass
class PipelineResult:
    report: PipelineReport
    trajectory: object
    segmentation: Segmentation
    promp: object
    segmented: object
    y_global: np.ndarray
    y_segmented: np.ndarray


def segment_with_fallback(y, n_clusters, seed):
    """Peak segmentation that lowers ``k`` to the number of peaks found."""
    peaks = significant_peaks(y)
    k = min(n_clusters, len(peaks))
    if k < n_clusters:
        log.warning("only %d significant peaks; reducing n_clusters from %d to %d",
                    len(peaks), n_clusters, k)
    if k == 0:
        return Segmentation(peak_indices=peaks, peak_labels=np.zeros(0, dtype=int),
                            intervals=[(0, len(y))], n_clusters=0)
    return segment_trajectory(y, k, seed)


def run_pipeline(traj_cfg=None, num_bases=10, n_clusters=3, seed=0, trajectory=None):
    """
    Run the full experiment for one seed.

    ``trajectory`` can be given to skip generation (the config is then only
    echoed in the report).
    """
    if traj_cfg is None:
        traj_cfg = TrajectoryConfig()
    timings = {}

    def stage(name, fn, *args):
        t0 = time.perf_counter()
        try:
            out = fn(*args)
        except Exception as exc:
            raise StageError(name, exc) from exc
        timings[name] = (time.perf_counter() - t0) * 1e3
        return out

    traj = trajectory
    if traj is None:
        traj = stage("generate", generate_dynamic_trajectory, traj_cfg, seed)
    seg = stage("segment", segment_with_fallback, traj.y, n_clusters, seed)
    basis = BasisConfig(num_bases)
    promp = stage("learn_global", fit_promp, traj.t, traj.y, basis)
    sp = stage("learn_segmented", learn_segmented, traj, seg, num_bases)
    y_glob = stage("reconstruct_global", reconstruct, promp, traj.t)
    y_seg = stage("reconstruct_segmented", reconstruct_segmented, sp, traj.t)
    mse_g = stage("mse", mse, traj.y, y_glob)
    mse_s = mse(traj.y, y_seg)

    config = asdict(traj_cfg)
    config.update(num_bases=num_bases, n_clusters=n_clusters)
    report = PipelineReport(
        config=config, seed=int(seed), num_peaks=int(len(seg.peak_indices)),
        n_clusters=int(seg.n_clusters),
        cluster_label_histogram=seg.label_histogram(),
        mse_global=mse_g, mse_segmented=mse_s, runtime_ms=timings)
    return PipelineResult(report, traj, seg, promp, sp, y_glob, y_seg)


def summarize(reports):
    """Per-seed MSEs (sorted by seed) with median and IQR of each metric."""
    reports = sorted(reports, key=lambda r: r.seed)
    out = {"seeds": [r.seed for r in reports],
           "per_seed": [{"seed": r.seed, "num_peaks": r.num_peaks,
                         "mse_global": r.mse_global,
                         "mse_segmented": r.mse_segmented} for r in reports]}
    for key in ("mse_global", "mse_segmented"):
        vals = np.array([getattr(r, key) for r in reports])
        q1, med, q3 = np.percentile(vals, [25, 50, 75])
        out[key] = {"median": float(med), "q1": float(q1), "q3": float(q3),
                    "iqr": float(q3 - q1)}
    return out


@dataclass
class ConditionResult:
    seeds: list
    contexts: np.ndarray
    promps: list
    model: object
    context: np.ndarray
    t: np.ndarray
    mean: np.ndarray
    std: np.ndarray
    weights: np.ndarray
    variance: float


def condition_runs(train_seeds, context, traj_cfg=None, num_bases=10, gp_cfg=None):
    """
    Learn one primitive per training run and condition on a new context.

    The context of a run is the vector of its obstacle multipliers, so all
    runs must share ``num_obstacles >= 1``.
    """
    if traj_cfg is None:
        traj_cfg = TrajectoryConfig(num_obstacles=1)
    if len(train_seeds) < 2:
        raise InvalidInputError("need at least 2 training runs")
    if traj_cfg.num_obstacles < 1:
        raise InvalidInputError("contexts are obstacle multipliers; need num_obstacles >= 1")
    basis = BasisConfig(num_bases)
    contexts, promps = [], []
    for s in train_seeds:
        traj = generate_dynamic_trajectory(traj_cfg, s)
        contexts.append(traj.obstacle_multipliers)
        promps.append(fit_promp(traj.t, traj.y, basis))
    C = np.array(contexts, dtype=float)
    model = gp_fit(C, np.array([p.weights for p in promps]), gp_cfg)
    c_star = np.atleast_1d(np.asarray(context, dtype=float))
    t = traj.t
    mean, std = conditional_trajectory(model, c_star, t, basis)
    pred = gp_predict(model, c_star)
    return ConditionResult(seeds=list(train_seeds), contexts=C, promps=promps,
                           model=model, context=c_star, t=t, mean=mean, std=std,
                           weights=pred.mean, variance=pred.variance)


@dataclass
class AdaptationResult:
    t: np.ndarray
    stream: np.ndarray
    pred_static: np.ndarray
    pred_adapted: np.ndarray
    weights_initial: np.ndarray
    weights_final: np.ndarray
    obstacle_center: object
    obstacle_multiplier: object
    rolling_mse_static: float
    rolling_mse_adapted: float


def adaptation_stream(seed=0, traj_cfg=None, num_bases=10, decay=0.9, ridge=1e-6,
                      batch=10, inject=True):
    """
    Stream a planned path that meets an unexpected obstacle.

    A primitive is learned from an obstacle-free demonstration; its
    reconstruction is the planned path. The executed stream follows the
    plan except inside one obstacle window, placed in the middle half of
    the grid, where it is scaled by a multiplier drawn on ``[-1, 1)``.
    Every ``batch`` samples the weights are re-fit on everything observed
    so far and the next batch is predicted. Rolling MSE compares these
    one-batch-ahead predictions (and the static plan) with the stream.
    """
    if batch < 1:
        raise ValueError(f"batch must be >= 1, got {batch}")
    if traj_cfg is None:
        traj_cfg = TrajectoryConfig()
    demo_cfg = TrajectoryConfig(**{**asdict(traj_cfg), "num_obstacles": 0})
    demo = generate_dynamic_trajectory(demo_cfg, seed)
    t, n = demo.t, len(demo.t)
    p0 = fit_promp(t, demo.y, BasisConfig(num_bases))
    plan = reconstruct(p0, t)

    stream = plan.copy()
    center = multiplier = None
    if inject:
        rng = Rng64(seed)
        rng.state ^= 0xA5A5A5A5A5A5A5A5  # stream independent of the demo noise
        center = n // 4 + rng.integers(max(1, n // 2))
        multiplier = rng.uniform(-1.0, 1.0)
        h = traj_cfg.obstacle_half_width
        stream[max(0, center - h):min(n, center + h)] *= multiplier

    p = p0
    pred = plan.copy()
    for b in range(batch, n, batch):
        p = adapt_weights(p, t[:b], stream[:b], decay, ridge)
        pred[b:b + batch] = p.design_matrix(t[b:b + batch]) @ p.weights
    return AdaptationResult(
        t=t, stream=stream, pred_static=plan, pred_adapted=pred,
        weights_initial=p0.weights, weights_final=p.weights,
        obstacle_center=center, obstacle_multiplier=multiplier,
        rolling_mse_static=mse(stream, plan), rolling_mse_adapted=mse(stream, pred))
