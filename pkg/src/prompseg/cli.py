"""
Command-line entry point.

    prompseg generate  --seed 7 --out traj.csv [--svg fig1.svg]
    prompseg segment   --input traj.csv [--method peaks|spectral] --out seg.json
    prompseg pipeline  --seed 7 --out results/ | --seeds 1..100 --summary
    prompseg condition --train-seeds 1,2,3 --context 0.25 --out cond/
    prompseg adapt     --seed 3 --batch 10 --decay 0.9 --out adapt/

Exit codes: 0 success, 1 I/O or runtime failure, 2 usage or validation error.
"""

import argparse
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import io
from .errors import InvalidInputError
from .experiments import (StageError, adaptation_stream, condition_runs, run_pipeline,
                          segment_with_fallback, summarize)
from .gp_promp import GpConfig
from .segment import (Segmentation, SpectralConfig, delay_embed, labels_to_intervals,
                      spectral_clusters)
from .svg import PALETTE, line_plot
from .trajgen import TrajectoryConfig, generate_dynamic_trajectory

log = logging.getLogger("prompseg")

SEED_ENV = "PROMPSEG_DEFAULT_SEED"


class CliFailure(Exception):
    """Runtime failure mapped to exit code 1."""


# argparse type helpers; a ValueError here becomes exit 2 naming the flag

def _nonneg_float(s):
    v = float(s)
    if not (v >= 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be a finite number >= 0, got {s!r}")
    return v


def _pos_float(s):
    v = float(s)
    if not (v > 0 and math.isfinite(v)):
        raise argparse.ArgumentTypeError(f"must be a finite number > 0, got {s!r}")
    return v


def _finite_float(s):
    v = float(s)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"must be finite, got {s!r}")
    return v


def _count(minimum):
    def parse(s):
        v = int(s)
        if v < minimum:
            raise argparse.ArgumentTypeError(f"must be an integer >= {minimum}, got {s!r}")
        return v
    parse.__name__ = f"integer>={minimum}"
    return parse


def _seed(s):
    v = int(s)
    if v < 0:
        raise argparse.ArgumentTypeError(f"seed must be >= 0, got {s!r}")
    return v


def parse_seeds(s):
    """``"1..5"`` (inclusive) or ``"1,2,3"`` or a mix like ``"1..3,7"``."""
    seeds = []
    for part in s.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            a, b = part.split("..", 1)
            a, b = int(a), int(b)
            if b < a:
                raise argparse.ArgumentTypeError(f"empty seed range {part!r}")
            seeds.extend(range(a, b + 1))
        else:
            seeds.append(int(part))
    if not seeds or any(x < 0 for x in seeds):
        raise argparse.ArgumentTypeError(f"invalid seed list {s!r}")
    return seeds


def _float_list(s):
    try:
        vals = [float(v) for v in s.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {s!r}") from None
    if not vals or not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError(f"expected finite numbers, got {s!r}")
    return vals


def _add_generation_flags(p, num_obstacles=5):
    g = p.add_argument_group("trajectory generation")
    g.add_argument("--num-points", type=_count(2), default=1000)
    g.add_argument("--num-obstacles", type=_count(0), default=num_obstacles)
    g.add_argument("--noise-level", type=_nonneg_float, default=0.1)
    g.add_argument("--t-start", type=_finite_float, default=0.0)
    g.add_argument("--t-end", type=_finite_float, default=4 * math.pi)
    g.add_argument("--half-width", type=_count(0), default=50,
                   help="obstacle half window in samples")


def _traj_config(args, parser):
    try:
        return TrajectoryConfig(num_points=args.num_points, num_obstacles=args.num_obstacles,
                                noise_level=args.noise_level, t_start=args.t_start,
                                t_end=args.t_end, obstacle_half_width=args.half_width)
    except ValueError as exc:
        parser.error(str(exc))


def _add_seed_flag(p):
    p.add_argument("--seed", type=_seed, default=None,
                   help=f"random seed (default: ${SEED_ENV} or 0)")


def _resolve_seed(args, parser):
    if args.seed is not None:
        return args.seed
    env = os.environ.get(SEED_ENV)
    if env is None:
        return 0
    try:
        return _seed(env)
    except (ValueError, argparse.ArgumentTypeError):
        parser.error(f"{SEED_ENV}={env!r} is not a valid seed")


def _target(out, default_name):
    """``--out`` naming a file (has a suffix) or a directory."""
    out = Path(out)
    if out.suffix:
        path = out
    else:
        path = out / default_name
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliFailure(f"cannot create output directory {path.parent}: {exc}") from exc
    return path


def _sibling(path, name):
    return path.parent / name


# ---------------------------------------------------------------- commands

def cmd_generate(args, parser):
    cfg = _traj_config(args, parser)
    seed = _resolve_seed(args, parser)
    traj = generate_dynamic_trajectory(cfg, seed)
    path = _target(args.out, f"trajectory.{args.format}")
    if args.format == "json":
        d = io.trajectory_to_dict(traj)
        d["seed"] = seed
        io.write_json(path, d)
    else:
        io.write_trajectory_csv(path, traj)
    if args.svg:
        shade = [(traj.t[a], traj.t[b - 1]) for a, b in traj.obstacle_windows() if b > a]
        line_plot(args.svg, traj.t, {"trajectory": traj.y},
                  title="Perturbed trajectory", shade=shade)
    log.info("wrote %s", path)


def _read_input(path):
    p = Path(path)
    try:
        if p.suffix == ".json":
            return io.trajectory_from_dict(json.loads(p.read_text(encoding="utf-8")))
        return io.read_trajectory_csv(p)
    except (OSError, ValueError, KeyError) as exc:
        raise CliFailure(f"cannot read trajectory {path}: {exc}") from exc


def cmd_segment(args, parser):
    seed = _resolve_seed(args, parser)
    traj = _read_input(args.input)
    y = traj.y
    if args.method == "peaks":
        seg = segment_with_fallback(y, args.n_clusters, seed)
        out = io.segmentation_to_dict(seg)
        out["method"] = "peaks"
    else:
        n = len(y)
        window = min(args.window, n)
        feats = delay_embed(y, window)
        stride = max(1, math.ceil(len(feats) / args.max_rows))
        feats = feats[::stride]
        k = min(args.n_clusters, len(feats))
        if k < args.n_clusters:
            log.warning("only %d feature rows; reducing n_clusters to %d", len(feats), k)
        try:
            labels = spectral_clusters(feats, SpectralConfig(k, args.sigma, window), seed)
        except ValueError as exc:
            raise CliFailure(f"spectral clustering failed: {exc}") from exc
        seg = Segmentation(peak_indices=np.zeros(0, dtype=int),
                           peak_labels=np.zeros(0, dtype=int),
                           intervals=labels_to_intervals(labels, n, stride), n_clusters=k)
        out = io.segmentation_to_dict(seg)
        out.update(method="spectral", window=window, stride=stride,
                   row_labels=[int(l) for l in labels])
    path = _target(args.out, "segmentation.json")
    io.write_json(path, out)
    if args.svg:
        markers = [(traj.t[p], y[p], PALETTE[l % len(PALETTE)])
                   for p, l in zip(seg.peak_indices, seg.peak_labels)]
        shade = [(traj.t[a], traj.t[b - 1]) for a, b in seg.intervals[1::2]]
        line_plot(args.svg, traj.t, {"trajectory": y}, title="Segmentation",
                  markers=markers, shade=shade)
    log.info("wrote %s", path)


def _pipeline_one(args, cfg, seed):
    try:
        return run_pipeline(cfg, args.num_bases, args.n_clusters, seed)
    except StageError as exc:
        raise CliFailure(f"seed {seed}: {exc}") from exc


def _write_pipeline(res, outdir, svg, timings=False):
    outdir.mkdir(parents=True, exist_ok=True)
    rep = res.report
    io.write_json(outdir / "report.json", rep.to_dict())
    if timings:
        # wall-clock numbers live apart so the other files stay byte-stable
        io.write_json(outdir / "timings.json", {"seed": rep.seed, "runtime_ms": rep.runtime_ms})
    io.write_csv(outdir / "reconstruction.csv",
                 {"t": res.trajectory.t, "y_original": res.trajectory.y,
                  "y_global": res.y_global, "y_segmented": res.y_segmented})
    io.write_json(outdir / "model.json",
                  {"global": io.promp_to_dict(res.promp),
                   "segmented": io.segmented_promp_to_dict(res.segmented),
                   "segmentation": io.segmentation_to_dict(res.segmentation)})
    if svg:
        line_plot(outdir / "overlay.svg", res.trajectory.t,
                  {"original": res.trajectory.y, "global": res.y_global,
                   "segmented": res.y_segmented},
                  title="Original vs reconstructed")


def cmd_pipeline(args, parser):
    cfg = _traj_config(args, parser)
    try:
        outroot = Path(args.out)
        outroot.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliFailure(f"cannot create {args.out}: {exc}") from exc
    if args.seeds is None:
        seed = _resolve_seed(args, parser)
        res = _pipeline_one(args, cfg, seed)
        _write_pipeline(res, outroot, args.svg, args.timings)
        rep = res.report
        log.info("seed %d: mse_global=%.6g mse_segmented=%.6g",
                 seed, rep.mse_global, rep.mse_segmented)
        return
    reports = []
    for seed in sorted(set(args.seeds)):
        res = _pipeline_one(args, cfg, seed)
        reports.append(res.report)
        if not args.summary:
            _write_pipeline(res, outroot / f"seed_{seed}", args.svg, args.timings)
    if args.summary:
        summary = summarize(reports)
        summary["config"] = reports[0].config
        io.write_json(outroot / "summary.json", summary)
        log.info("median mse_global=%.6g over %d seeds",
                 summary["mse_global"]["median"], len(reports))


def cmd_condition(args, parser):
    cfg = _traj_config(args, parser)
    if len(args.train_seeds) < 2:
        parser.error("--train-seeds: need at least 2 training runs")
    if cfg.num_obstacles < 1:
        parser.error("--num-obstacles: contexts are obstacle multipliers, need >= 1")
    if len(args.context) != cfg.num_obstacles:
        parser.error(f"--context: expected {cfg.num_obstacles} values "
                     f"(one per obstacle), got {len(args.context)}")
    gp_cfg = GpConfig(args.length_scale, args.signal_var, args.noise_var)
    try:
        res = condition_runs(args.train_seeds, args.context, cfg, args.num_bases, gp_cfg)
    except (ArithmeticError, ValueError) as exc:
        raise CliFailure(f"conditioning failed: {exc}") from exc
    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliFailure(str(exc)) from exc
    io.write_csv(outdir / "conditional.csv", {"t": res.t, "mean": res.mean, "std": res.std})
    io.write_json(outdir / "condition.json", {
        "train_seeds": res.seeds,
        "contexts": res.contexts.tolist(),
        "context": res.context.tolist(),
        "predicted_weights": res.weights.tolist(),
        "variance": res.variance,
        "num_bases": args.num_bases,
        "gp_model": io.gp_model_to_dict(res.model),
    })
    if args.svg:
        line_plot(outdir / "conditional.svg", res.t,
                  {"mean": res.mean, "mean+2std": res.mean + 2 * res.std,
                   "mean-2std": res.mean - 2 * res.std},
                  title=f"Conditional trajectory at c={res.context.tolist()}")


def cmd_adapt(args, parser):
    cfg = _traj_config(args, parser)
    seed = _resolve_seed(args, parser)
    res = adaptation_stream(seed, cfg, args.num_bases, args.decay, args.ridge,
                            args.batch, inject=not args.no_obstacle)
    outdir = Path(args.out)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliFailure(str(exc)) from exc
    io.write_csv(outdir / "adapt.csv", {"t": res.t, "stream": res.stream,
                                        "static": res.pred_static,
                                        "adapted": res.pred_adapted})
    io.write_json(outdir / "adapt.json", {
        "seed": seed, "batch": args.batch, "decay": args.decay, "ridge": args.ridge,
        "obstacle_center": res.obstacle_center,
        "obstacle_multiplier": res.obstacle_multiplier,
        "rolling_mse_static": res.rolling_mse_static,
        "rolling_mse_adapted": res.rolling_mse_adapted,
        "weights_initial": res.weights_initial.tolist(),
        "weights_final": res.weights_final.tolist(),
        "max_weight_change": float(np.max(np.abs(res.weights_final - res.weights_initial))),
    })
    if args.svg:
        line_plot(outdir / "adapt.svg", res.t,
                  {"stream": res.stream, "static plan": res.pred_static,
                   "adapted": res.pred_adapted}, title="Online adaptation")
    log.info("rolling mse static=%.6g adapted=%.6g",
             res.rolling_mse_static, res.rolling_mse_adapted)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="prompseg",
        description="Trajectory segmentation and probabilistic movement primitives.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a perturbed sine trajectory")
    _add_generation_flags(p)
    _add_seed_flag(p)
    p.add_argument("--out", default="trajectory.csv", help="output file or directory")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--svg", default=None, help="optional SVG plot path")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("segment", help="segment a trajectory")
    p.add_argument("--input", required=True, help="trajectory CSV (t,y) or JSON")
    p.add_argument("--method", choices=["peaks", "spectral"], default="peaks")
    p.add_argument("--n-clusters", type=_count(1), default=3)
    p.add_argument("--window", type=_count(1), default=10, help="delay-embedding window")
    p.add_argument("--sigma", type=_pos_float, default=None,
                   help="affinity kernel scale (default: median distance)")
    p.add_argument("--max-rows", type=_count(1), default=2000,
                   help="cap on spectral feature rows (stride subsampling)")
    _add_seed_flag(p)
    p.add_argument("--out", default="segmentation.json")
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("pipeline", help="generate, segment, learn, reconstruct")
    _add_generation_flags(p)
    _add_seed_flag(p)
    p.add_argument("--seeds", type=parse_seeds, default=None, help="e.g. 1..100")
    p.add_argument("--summary", action="store_true",
                   help="with --seeds, write only summary.json")
    p.add_argument("--num-bases", type=_count(2), default=10)
    p.add_argument("--n-clusters", type=_count(1), default=3)
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--svg", action="store_true", help="also write overlay.svg")
    p.add_argument("--timings", action="store_true",
                   help="also write per-stage wall-clock times to timings.json")
    p.set_defaults(func=cmd_pipeline)

    p = sub.add_parser("condition", help="GP-conditioned trajectory from several runs")
    _add_generation_flags(p, num_obstacles=1)
    p.add_argument("--train-seeds", type=parse_seeds, default=[1, 2, 3])
    p.add_argument("--context", type=_float_list, default=[0.0],
                   help="comma-separated obstacle multipliers")
    p.add_argument("--num-bases", type=_count(2), default=10)
    p.add_argument("--length-scale", type=_pos_float, default=0.5)
    p.add_argument("--signal-var", type=_pos_float, default=1.0)
    p.add_argument("--noise-var", type=_nonneg_float, default=1e-6)
    p.add_argument("--out", default=".")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_condition)

    p = sub.add_parser("adapt", help="online adaptation to an injected obstacle")
    _add_generation_flags(p)
    _add_seed_flag(p)
    p.add_argument("--batch", type=_count(1), default=10)
    p.add_argument("--decay", type=_pos_float, default=0.9)
    p.add_argument("--ridge", type=_nonneg_float, default=1e-6)
    p.add_argument("--num-bases", type=_count(2), default=10)
    p.add_argument("--no-obstacle", action="store_true")
    p.add_argument("--out", default=".")
    p.add_argument("--svg", action="store_true")
    p.set_defaults(func=cmd_adapt)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(format="%(levelname)s: %(message)s", stream=sys.stderr)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    if getattr(args, "decay", 1.0) > 1:
        parser.error("--decay: must be in (0, 1]")
    try:
        args.func(args, parser)
    except CliFailure as exc:
        print(f"prompseg: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, InvalidInputError, ArithmeticError) as exc:
        print(f"prompseg: error: {exc}", file=sys.stderr)
        return 1
    return 0


def run():
    sys.exit(main())
