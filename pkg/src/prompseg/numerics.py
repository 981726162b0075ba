"""
Seeded randomness and dense linear-algebra kernels.

Rng64: SplitMix64 generator with Box-Muller normals.
pseudoinverse(): Moore-Penrose inverse through the SVD.
sym_eig(): eigen-decomposition of a symmetric matrix, ascending.
kmeans(): Lloyd iterations with k-means++ seeding.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, NumericalError

_MASK64 = (1 << 64) - 1
_GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_TWO_POW_M53 = 2.0 ** -53


class Rng64:
    """SplitMix64 pseudo-random generator.

    The stream is a pure function of the seed: no global state is read or
    written. Normal draws use the Box-Muller transform and keep the second
    variate of each pair as a spare for the next call.

    Parameters
    ----------
    seed : int
        Any integer, reduced modulo 2**64.
    """

    __slots__ = ("state", "cached_normal")

    def __init__(self, seed=0):
        self.state = int(seed) & _MASK64
        self.cached_normal = None

    def __repr__(self):
        return f"Rng64(state={self.state:#018x})"

    def copy(self):
        other = Rng64.__new__(Rng64)
        other.state = self.state
        other.cached_normal = self.cached_normal
        return other

    def next_u64(self):
        self.state = (self.state + _GOLDEN_GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def random(self):
        """Uniform double in [0, 1) built from the top 53 bits."""
        return (self.next_u64() >> 11) * _TWO_POW_M53

    def uniform(self, lo=0.0, hi=1.0):
        """Uniform draw on [lo, hi)."""
        if not lo < hi:
            raise ValueError(f"invalid range: lo={lo!r} must be < hi={hi!r}")
        x = lo + (hi - lo) * self.random()
        if x >= hi:
            # rounding can land on hi for very narrow intervals
            x = math.nextafter(hi, -math.inf)
        return x

    def integers(self, n):
        """Uniform integer in [0, n) by multiply-shift with rejection."""
        if n < 1:
            raise ValueError(f"n must be >= 1, got {n}")
        m = self.next_u64() * n
        low = m & _MASK64
        if low < n:
            threshold = ((1 << 64) - n) % n
            while low < threshold:
                m = self.next_u64() * n
                low = m & _MASK64
        return m >> 64

    def normal(self, mean=0.0, std=1.0):
        """Draw from N(mean, std**2). ``std == 0`` returns ``mean`` exactly."""
        if std < 0:
            raise ValueError(f"std must be >= 0, got {std!r}")
        if self.cached_normal is not None:
            z = self.cached_normal
            self.cached_normal = None
        else:
            u1 = 1.0 - self.random()  # (0, 1], keeps log finite
            u2 = self.random()
            r = math.sqrt(-2.0 * math.log(u1))
            z = r * math.cos(2.0 * math.pi * u2)
            self.cached_normal = r * math.sin(2.0 * math.pi * u2)
        return mean + std * z

    def normals(self, n, mean=0.0, std=1.0):
        """Array of ``n`` consecutive normal draws."""
        return np.array([self.normal(mean, std) for _ in range(n)], dtype=float)

    def uniforms(self, n, lo=0.0, hi=1.0):
        return np.array([self.uniform(lo, hi) for _ in range(n)], dtype=float)


def _as_finite_matrix(A, name="A"):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2:
        raise InvalidInputError(f"{name} must be 2-D, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return A


def pseudoinverse(A, rcond=None):
    """
    Moore-Penrose pseudoinverse of a real matrix.

    Singular values below ``rcond * sigma_max`` are treated as zero.

    Parameters
    ----------
    A : (m, n) array_like
    rcond : float, optional
        Relative cutoff. Defaults to ``eps * max(m, n)``.

    Returns
    -------
    (n, m) ndarray
    """
    A = _as_finite_matrix(A)
    m, n = A.shape
    if rcond is None:
        rcond = np.finfo(float).eps * max(m, n)
    if rcond < 0:
        raise ValueError(f"rcond must be >= 0, got {rcond!r}")
    if A.size == 0:
        return np.zeros((n, m))
    try:
        U, s, Vt = np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc
    cutoff = rcond * s[0]
    s_inv = np.zeros_like(s)
    keep = s > cutoff
    s_inv[keep] = 1.0 / s[keep]
    return (Vt.T * s_inv) @ U.T


def sym_eig(S, tol=1e-10):
    """
    Eigen-decomposition of a symmetric matrix.

    Returns eigenvalues in ascending order and the matching orthonormal
    eigenvectors as columns. Each eigenvector's sign is fixed so that its
    first non-negligible component is positive.
    """
    S = _as_finite_matrix(S, "S")
    if S.shape[0] != S.shape[1]:
        raise InvalidInputError(f"S must be square, got shape {S.shape}")
    scale = max(1.0, float(np.max(np.abs(S)))) if S.size else 1.0
    if S.size and np.max(np.abs(S - S.T)) > tol * scale:
        raise InvalidInputError("S is not symmetric")
    try:
        vals, vecs = np.linalg.eigh(S)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigen-decomposition failed: {exc}") from exc
    for j in range(vecs.shape[1]):
        col = vecs[:, j]
        big = np.flatnonzero(np.abs(col) > 1e-10)
        if big.size and col[big[0]] < 0:
            vecs[:, j] = -col
    return vals, vecs


@dataclass
class KMeansResult:
    labels: np.ndarray
    centers: np.ndarray
    inertia: float
    n_iter: int
    inertia_history: list = field(default_factory=list)


def _sq_dists(X, centers):
    return ((X[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)


def _kmeanspp_init(X, k, rng):
    n = len(X)
    chosen = [rng.integers(n)]
    closest = ((X - X[chosen[0]]) ** 2).sum(axis=1)
    for _ in range(1, k):
        total = closest.sum()
        if total > 0:
            # inverse-CDF over the D^2 weights
            target = rng.random() * total
            idx = int(np.searchsorted(np.cumsum(closest), target, side="right"))
            idx = min(idx, n - 1)
            while closest[idx] == 0:  # guard against cumsum rounding
                idx = (idx - 1) % n
        else:
            remaining = [i for i in range(n) if i not in chosen]
            idx = remaining[rng.integers(len(remaining))]
        chosen.append(idx)
        closest = np.minimum(closest, ((X - X[idx]) ** 2).sum(axis=1))
    return X[chosen].copy()


def _fill_empty(X, labels, centers, k):
    """Move the globally farthest point into every empty cluster."""
    for j in range(k):
        if np.any(labels == j):
            continue
        counts = np.bincount(labels, minlength=k)
        d = ((X - centers[labels]) ** 2).sum(axis=1)
        d[counts[labels] < 2] = -1.0  # never empty another cluster
        i = int(np.argmax(d))
        labels[i] = j
        centers[j] = X[i]
    return labels, centers


def kmeans(points, k, seed=0, max_iter=300):
    """
    Lloyd's algorithm from k-means++ seeding.

    Ties in the assignment step go to the lowest cluster index. Clusters
    that end up empty are reseeded with the point farthest from its own
    center, so all ``k`` clusters are always populated.

    Parameters
    ----------
    points : (n, d) or (n,) array_like
    k : int
        Number of clusters, ``1 <= k <= n``.
    seed : int
        Seed for the :class:`Rng64` driving the initial centers.
    max_iter : int

    Returns
    -------
    KMeansResult
        ``inertia_history`` holds the inertia after every iteration.
    """
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    X = _as_finite_matrix(X, "points")
    n = len(X)
    if k < 1 or k > n:
        raise ValueError(f"invalid k={k} for {n} points")
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")

    rng = Rng64(seed)
    centers = _kmeanspp_init(X, k, rng)
    labels = None
    history = []
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        new_labels = np.argmin(_sq_dists(X, centers), axis=1)
        new_labels, centers = _fill_empty(X, new_labels, centers, k)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for j in range(k):
            centers[j] = X[labels == j].mean(axis=0)
        history.append(float(((X - centers[labels]) ** 2).sum()))
    else:
        n_iter = max_iter

    inertia = float(((X - centers[labels]) ** 2).sum())
    return KMeansResult(labels=labels, centers=centers, inertia=inertia,
                        n_iter=n_iter, inertia_history=history)
