"""Acceptance suite. Each test prints exactly one ``ACCEPT <n> PASS|FAIL`` line."""
import json
import math
import time

import numpy as np
import pytest

from oracles import (brute_force_peaks, connected_components, exhaustive_two_partition_inertia,
                     normal_equations_fit)
from prompseg.basis import gaussian_basis_matrix
from prompseg.cli import main
from prompseg.experiments import adaptation_stream, run_pipeline
from prompseg.gp_promp import GpConfig, gp_fit, gp_predict
from prompseg.numerics import Rng64, kmeans, pseudoinverse, sym_eig
from prompseg.promp import generate, learn_weights
from prompseg.segment import SpectralConfig, find_peaks, laplacian, spectral_clusters
from prompseg.trajgen import TrajectoryConfig


@pytest.fixture
def verdict(capsys):
    def emit(n, title, ok, detail):
        with capsys.disabled():
            print(f"\nACCEPT {n:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}")
        assert ok, detail
    return emit


def test_1_mse_band(tmp_path, verdict):
    start = time.perf_counter()
    assert main(["pipeline", "--seeds", "1..100", "--summary", "--out", str(tmp_path)]) == 0
    elapsed = time.perf_counter() - start
    summary = json.loads((tmp_path / "summary.json").read_text())
    vals = np.array([r["mse_global"] for r in summary["per_seed"]])
    median = float(np.median(vals))
    frac = float(np.mean((vals >= 0.03) & (vals <= 0.09)))
    ok = len(vals) == 100 and 0.01 <= median <= 0.25 and frac >= 0.20 and elapsed < 10
    verdict(1, "MSE band over seeds 1-100", ok,
            f"median={median:.4f} in-band={frac:.0%} time={elapsed:.2f}s")


def test_2_noise_free_recovery(verdict):
    start = time.perf_counter()
    res = run_pipeline(TrajectoryConfig(noise_level=0, num_obstacles=0), seed=1)
    t, y = res.trajectory.t, res.trajectory.y
    phi = gaussian_basis_matrix(t)
    oracle = float(np.mean((phi @ normal_equations_fit(phi, y) - y) ** 2))
    err_mse = abs(res.report.mse_global - oracle)
    rng = np.random.default_rng(2)
    err_w = 0.0
    for _ in range(20):
        w_true = rng.standard_normal(10)
        err_w = max(err_w, float(np.max(np.abs(learn_weights(phi, phi @ w_true) - w_true))))
    elapsed = time.perf_counter() - start
    ok = err_mse <= 1e-8 and err_w <= 1e-8 and elapsed < 1
    verdict(2, "noise-free recovery", ok,
            f"|mse-oracle|={err_mse:.2e} max|w-w_true|={err_w:.2e} time={elapsed:.3f}s")


def test_3_penrose(verdict):
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(200):
        m, n = (int(v) for v in rng.integers(1, 30, size=2))
        r = int(rng.integers(1, min(m, n) + 1))
        A = rng.standard_normal((m, r)) @ rng.standard_normal((r, n))
        P = pseudoinverse(A)
        na, npn = np.linalg.norm(A, 2), np.linalg.norm(P, 2)
        worst = max(worst,
                    np.linalg.norm(A @ P @ A - A, 2) / na,
                    np.linalg.norm(P @ A @ P - P, 2) / npn,
                    np.linalg.norm(A @ P - (A @ P).T, 2) / max(na * npn, 1.0),
                    np.linalg.norm(P @ A - (P @ A).T, 2) / max(na * npn, 1.0))
    verdict(3, "Moore-Penrose conditions on 200 matrices", worst <= 1e-8,
            f"worst relative residual={worst:.2e}")


def test_4_peak_oracle(verdict):
    rng = np.random.default_rng(4)
    mismatches = 0
    for _ in range(1000):
        n = int(rng.integers(3, 201))
        y = rng.integers(0, 4, size=n).astype(float)
        if rng.random() < 0.5:
            y = np.repeat(y, rng.integers(1, 4, size=n))[:n]
        mismatches += find_peaks(y).tolist() != brute_force_peaks(y)
    verdict(4, "find_peaks vs brute force on 1000 sequences", mismatches == 0,
            f"mismatches={mismatches}")


def test_5_kmeans_optimality(verdict):
    rng = np.random.default_rng(5)
    misses, monotone = [], True
    for i in range(50):
        X = rng.standard_normal((int(rng.integers(2, 9)), 2))
        runs = [kmeans(X, 2, seed=s) for s in range(20)]
        monotone &= all(b <= a for r in runs
                        for a, b in zip(r.inertia_history, r.inertia_history[1:]))
        gap = min(r.inertia for r in runs) - exhaustive_two_partition_inertia(X)
        if abs(gap) > 1e-10:
            misses.append(f"#{i} n={len(X)} gap={gap:.3g}")
    verdict(5, "k-means best-of-20 vs exhaustive optimum", not misses and monotone,
            f"misses={misses or 'none'} monotone={monotone}")


def test_6_laplacian_spectrum(verdict):
    rng = np.random.default_rng(6)
    details, ok = [], True
    for sizes in [(5, 7), (4, 6, 5)]:
        n = sum(sizes)
        W = np.zeros((n, n))
        s = 0
        for b in sizes:
            B = rng.uniform(0.2, 1.0, (b, b))
            W[s:s + b, s:s + b] = (B + B.T) / 2
            s += b
        L = laplacian(W)
        vals, _ = sym_eig(L)
        zeros = int(np.sum(vals < 1e-8))
        rows = float(np.max(np.abs(L.sum(axis=1))))
        ok &= zeros == len(sizes) == connected_components(W > 0)
        ok &= bool(vals.min() >= -1e-8) and rows <= 1e-10
        details.append(f"{len(sizes)} blocks -> {zeros} zero eigs, min={vals.min():.1e}, "
                       f"rowsum={rows:.1e}")
    sigma = 1.0
    X = np.vstack([rng.standard_normal((10, 2)) * 0.3,
                   rng.standard_normal((10, 2)) * 0.3 + [100 * sigma, 0]])
    labels = spectral_clusters(X, SpectralConfig(n_clusters=2, sigma=sigma), seed=0)
    blobs = len(set(labels[:10])) == 1 and len(set(labels[10:])) == 1 and labels[0] != labels[10]
    ok &= blobs
    details.append(f"blobs recovered={blobs}")
    verdict(6, "Laplacian spectrum", ok, "; ".join(details))


def test_7_gp_interpolation_reversion(verdict):
    rng = np.random.default_rng(7)
    C = rng.uniform(-2, 2, (6, 2))
    W = rng.standard_normal((6, 10))
    cfg = GpConfig(length_scale=0.8, signal_var=1.7, noise_var=0.0)
    m = gp_fit(C, W, cfg)
    interp = max(float(np.max(np.abs(gp_predict(m, c).mean - w))) for c, w in zip(C, W))
    var_train = max(gp_predict(m, c).variance for c in C)
    far = gp_predict(m, C.mean(axis=0) + [15 * cfg.length_scale + 4, 0])
    rev_mean = float(np.max(np.abs(far.mean - W.mean(axis=0))))
    rev_var = abs(far.variance - cfg.signal_var)
    ok = interp <= 1e-6 and var_train <= 1e-8 and rev_mean <= 1e-6 and rev_var <= 1e-6
    verdict(7, "GP interpolation and prior reversion", ok,
            f"interp={interp:.1e} var@train={var_train:.1e} "
            f"far mean={rev_mean:.1e} far var={rev_var:.1e}")


def test_8_sampling_statistics(verdict):
    t = np.linspace(0, 4 * math.pi, 1000)
    phi = gaussian_basis_matrix(t)
    w = np.random.default_rng(8).standard_normal(10)
    rng = Rng64(8)
    draws = np.array([generate(phi, w, 0.1, rng) for _ in range(200)])
    frac = float(np.mean(np.abs(draws.mean(axis=0) - phi @ w) <= 3 * 0.1 / math.sqrt(200)))
    verdict(8, "trajectory sampling mean", frac >= 0.99, f"within bound={frac:.1%}")


def test_9_adaptation(verdict):
    wins = 0
    for seed in range(1, 21):
        r = adaptation_stream(seed)
        wins += r.rolling_mse_adapted < r.rolling_mse_static
    fixed = adaptation_stream(1, inject=False)
    drift = float(np.max(np.abs(fixed.weights_final - fixed.weights_initial)))
    ok = wins >= 18 and drift <= 1e-6
    verdict(9, "online adaptation", ok, f"wins={wins}/20 no-obstacle drift={drift:.1e}")


COMMANDS = [
    ["generate", "--seed", "5", "--out", "{d}/traj.csv"],
    ["generate", "--seed", "5", "--format", "json", "--out", "{d}/traj.json"],
    ["segment", "--input", "{d}/traj.csv", "--out", "{d}/seg.json"],
    ["segment", "--method", "spectral", "--input", "{d}/traj.csv", "--out", "{d}/spectral.json"],
    ["pipeline", "--seed", "5", "--out", "{d}/pipe"],
    ["pipeline", "--seeds", "1..3", "--summary", "--out", "{d}/sweep"],
    ["condition", "--context", "0.3", "--out", "{d}/cond"],
    ["adapt", "--seed", "5", "--out", "{d}/adapt"],
]


def _snapshot(root):
    return {p.relative_to(root).as_posix(): p.read_bytes()
            for p in sorted(root.rglob("*")) if p.is_file()}


def test_10_determinism(tmp_path, verdict):
    snaps = []
    for rep in ("a", "b"):
        d = tmp_path / rep
        d.mkdir()
        for cmd in COMMANDS:
            assert main([arg.format(d=d) for arg in cmd]) == 0
        snaps.append(_snapshot(d))
    identical = snaps[0] == snaps[1] and len(snaps[0]) > 10
    worst = 0.0
    for seed in range(1, 6):
        start = time.perf_counter()
        run_pipeline(seed=seed)
        worst = max(worst, time.perf_counter() - start)
    verdict(10, "determinism and per-seed runtime", identical and worst < 1,
            f"{len(snaps[0])} files identical={identical} slowest seed={worst:.3f}s")
