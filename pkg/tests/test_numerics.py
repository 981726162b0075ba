import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import exhaustive_two_partition_inertia
from prompseg.errors import InvalidInputError
from prompseg.numerics import Rng64, kmeans, pseudoinverse, sym_eig


# ------------------------------------------------------------------ Rng64

def test_same_seed_same_stream():
    a, b = Rng64(0), Rng64(0)
    assert [a.next_u64() for _ in range(50)] == [b.next_u64() for _ in range(50)]
    a, b = Rng64(0), Rng64(0)
    assert [a.normal() for _ in range(51)] == [b.normal() for _ in range(51)]


def test_distinct_seeds_differ():
    a, b = Rng64(1), Rng64(2)
    assert [a.random() for _ in range(100)] != [b.random() for _ in range(100)]


def test_splitmix64_reference_values():
    # published SplitMix64 outputs for seed 0
    r = Rng64(0)
    assert r.next_u64() == 0xE220A8397B1DCDAF
    assert r.next_u64() == 0x6E789E6AA1B965F4


def test_seed42_golden(data_dir):
    golden = json.loads((data_dir / "rng_seed42.json").read_text())
    r = Rng64(42)
    assert [str(r.next_u64()) for _ in range(16)] == golden["next_u64"]
    r = Rng64(42)
    assert [r.random() for _ in range(8)] == golden["random"]
    r = Rng64(42)
    assert [r.normal() for _ in range(8)] == golden["normal"]


def test_uniform_degenerate_width():
    # 5 + 2**-52 rounds to 5.0 in binary64; the next representable double is used
    hi = math.nextafter(5.0, math.inf)
    r = Rng64(3)
    assert all(r.uniform(5.0, hi) == 5.0 for _ in range(100))


@pytest.mark.parametrize("lo,hi", [(1.0, 1.0), (2.0, 1.0)])
def test_uniform_invalid_range(lo, hi):
    with pytest.raises(ValueError):
        Rng64(0).uniform(lo, hi)


def test_uniform_moments_and_range():
    r = Rng64(11)
    u = r.uniforms(100_000)
    # sigma/sqrt(n) = 0.2887/316 ~ 9e-4, so 0.01 is > 10 sigma
    assert abs(u.mean() - 0.5) < 0.01
    v = r.uniforms(100_000, -1.0, 1.0)
    assert v.min() >= -1.0 and v.max() < 1.0


def test_normal_zero_std_exact():
    r = Rng64(5)
    assert r.normal(3.0, 0.0) == 3.0
    with pytest.raises(ValueError):
        r.normal(0.0, -1.0)


def test_normal_moments():
    z = Rng64(12).normals(100_000)
    assert abs(z.mean()) < 0.02
    assert 0.99 <= z.std() <= 1.01
    # P(|Z| <= 1) = erf(1/sqrt 2)
    frac = np.mean(np.abs(z) <= 1.0)
    assert abs(frac - math.erf(1 / math.sqrt(2))) < 0.01
    assert abs(math.erf(1 / math.sqrt(2)) - 0.6827) < 1e-4


def test_integers_uniform_and_bounded():
    r = Rng64(9)
    draws = [r.integers(7) for _ in range(70_000)]
    counts = np.bincount(draws, minlength=7)
    assert min(draws) >= 0 and max(draws) < 7
    assert np.all(np.abs(counts - 10_000) < 500)


def test_rng_copy_is_independent():
    r = Rng64(4)
    r.normal()
    c = r.copy()
    assert [r.normal() for _ in range(5)] == [c.normal() for _ in range(5)]


# ---------------------------------------------------------- pseudoinverse

def test_pinv_identity():
    assert np.allclose(pseudoinverse(np.eye(3)), np.eye(3), atol=1e-12, rtol=0)


def test_pinv_full_column_rank():
    A = np.array([[1.0, 0], [0, 1], [1, 1]])
    expected = np.array([[2, -1, 1], [-1, 2, 1]]) / 3
    assert np.allclose(pseudoinverse(A), expected, atol=1e-12, rtol=0)


def test_pinv_rank_one():
    A = np.ones((2, 2))
    assert np.allclose(pseudoinverse(A), np.full((2, 2), 0.25), atol=1e-12, rtol=0)


def test_pinv_rejects_nonfinite():
    with pytest.raises(InvalidInputError):
        pseudoinverse(np.array([[1.0, np.nan]]))


def test_pinv_empty():
    assert pseudoinverse(np.zeros((0, 3))).shape == (3, 0)


def random_rank_matrix(rng, m, n, r):
    return rng.standard_normal((m, r)) @ rng.standard_normal((r, n))


def penrose_residuals(A, P):
    return (np.max(np.abs(A @ P @ A - A)) / max(np.max(np.abs(A)), 1e-300),
            np.max(np.abs(P @ A @ P - P)) / max(np.max(np.abs(P)), 1e-300),
            np.max(np.abs(A @ P - (A @ P).T)),
            np.max(np.abs(P @ A - (P @ A).T)))


@settings(max_examples=60, deadline=None)
@given(m=st.integers(1, 12), n=st.integers(1, 12), data=st.data())
def test_pinv_penrose_property(m, n, data):
    r = data.draw(st.integers(1, min(m, n)))
    seed = data.draw(st.integers(0, 2**32 - 1))
    A = random_rank_matrix(np.random.default_rng(seed), m, n, r)
    assert all(v <= 1e-8 for v in penrose_residuals(A, pseudoinverse(A)))


# ----------------------------------------------------------------- sym_eig

def test_sym_eig_diagonal():
    vals, vecs = sym_eig(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(vals, [1, 2, 3])
    assert np.allclose(np.abs(vecs), np.eye(3)[:, [1, 2, 0]])


def test_sym_eig_2x2():
    vals, vecs = sym_eig(np.array([[2.0, 1.0], [1.0, 2.0]]))
    assert np.allclose(vals, [1.0, 3.0], atol=1e-12)
    s = 1 / math.sqrt(2)
    # sign convention: first nonzero component positive
    assert np.allclose(vecs[:, 0], [s, -s], atol=1e-12)
    assert np.allclose(vecs[:, 1], [s, s], atol=1e-12)


def test_sym_eig_rejects_bad_input():
    with pytest.raises(InvalidInputError):
        sym_eig(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(InvalidInputError):
        sym_eig(np.ones((2, 3)))


def test_sym_eig_random_reconstruction(np_rng):
    for _ in range(20):
        B = np_rng.standard_normal((5, 5))
        S = B + B.T
        vals, V = sym_eig(S)
        norm = np.max(np.abs(S))
        assert np.all(np.diff(vals) >= 0)
        assert np.max(np.abs(V @ np.diag(vals) @ V.T - S)) <= 1e-8 * norm
        assert np.max(np.abs(S @ V - V * vals)) <= 1e-8 * norm
        assert np.max(np.abs(V.T @ V - np.eye(5))) <= 1e-8
        assert abs(vals.sum() - np.trace(S)) <= 1e-8 * norm


# ------------------------------------------------------------------ kmeans

def test_kmeans_saturation():
    X = np.array([[0.0], [1.5], [3.0], [7.0]])
    res = kmeans(X, 4, seed=2)
    assert res.inertia == 0.0
    assert sorted(res.labels.tolist()) == [0, 1, 2, 3]


def test_kmeans_two_pairs():
    X = np.array([0.0, 0.1, 10.0, 10.1])
    assert math.isclose(exhaustive_two_partition_inertia(X), 0.01, abs_tol=1e-12)
    for seed in range(10):
        res = kmeans(X, 2, seed=seed)
        assert sorted(res.centers.ravel().round(12).tolist()) == [0.05, 10.05]
        assert math.isclose(res.inertia, 0.01, abs_tol=1e-12)


def test_kmeans_identical_points():
    res = kmeans(np.full((6, 2), 1.5), 1, seed=0)
    assert np.allclose(res.centers, [[1.5, 1.5]])
    assert res.inertia == 0.0


def test_kmeans_identical_points_k2_nonempty():
    res = kmeans(np.full(4, 1.0), 2, seed=7)
    assert set(res.labels.tolist()) == {0, 1}
    assert res.inertia == 0.0


@pytest.mark.parametrize("k", [0, 5])
def test_kmeans_invalid_k(k):
    with pytest.raises(ValueError):
        kmeans(np.zeros((4, 1)), k)


def test_kmeans_deterministic(np_rng):
    X = np_rng.standard_normal((40, 3))
    a, b = kmeans(X, 4, seed=3), kmeans(X, 4, seed=3)
    assert np.array_equal(a.labels, b.labels) and a.inertia == b.inertia


def test_kmeans_monotone_and_nonempty(np_rng):
    for trial in range(30):
        X = np_rng.standard_normal((int(np_rng.integers(5, 60)), 2))
        k = int(np_rng.integers(1, 6))
        res = kmeans(X, k, seed=trial)
        h = res.inertia_history
        assert all(b <= a + 1e-12 for a, b in zip(h, h[1:]))
        assert len(set(res.labels.tolist())) == k


def test_kmeans_matches_exhaustive_optimum(np_rng):
    for _ in range(20):
        n = int(np_rng.integers(3, 9))
        X = np_rng.standard_normal((n, 2))
        best = min(kmeans(X, 2, seed=s).inertia for s in range(20))
        assert abs(best - exhaustive_two_partition_inertia(X)) <= 1e-10
