"""
Movement primitives as weight vectors over Gaussian bases.

A trajectory is modelled as ``tau = Phi @ w + eps``. Weights are learned by
the Moore-Penrose pseudoinverse, optionally per segment, and can be updated
online from streamed observations with an exponentially weighted ridge
re-fit anchored at the current weights.
"""

import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .basis import BasisConfig, gaussian_basis_matrix
from .errors import InvalidInputError, NumericalError
from .numerics import pseudoinverse


class ExtrapolationWarning(UserWarning):
    """Evaluation times fall outside the span the basis was built over."""


@dataclass(frozen=True)
class ProMP:
    weights: np.ndarray
    basis: BasisConfig
    t_start: float
    t_end: float
    noise_std: float = 0.0

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        if w.ndim != 1 or len(w) != self.basis.num_bases:
            raise InvalidInputError(
                f"expected {self.basis.num_bases} weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)):
            raise InvalidInputError("weights must be finite")
        if self.noise_std < 0:
            raise ValueError("noise_std must be >= 0")
        object.__setattr__(self, "weights", w)

    @property
    def width(self):
        return self.basis.resolve_width(self.t_start, self.t_end)

    def design_matrix(self, t):
        return gaussian_basis_matrix(t, self.basis, (self.t_start, self.t_end))

    def is_extrapolation(self, t):
        t = np.asarray(t, dtype=float)
        return bool(t.size and (t.min() < self.t_start or t.max() > self.t_end))


@dataclass
class SegmentedProMP:
    segments: list = field(default_factory=list)  # [((start, end), ProMP), ...]

    @property
    def intervals(self):
        return [iv for iv, _ in self.segments]

    @property
    def n_samples(self):
        return self.segments[-1][0][1] if self.segments else 0


def learn_weights(phi, y):
    """Minimum-norm least-squares weights ``pinv(phi) @ y``."""
    phi = np.asarray(phi, dtype=float)
    y = np.asarray(y, dtype=float)
    if phi.ndim != 2 or y.ndim != 1 or phi.shape[0] != len(y) or len(y) < 1:
        raise InvalidInputError(
            f"shape mismatch: phi {phi.shape} vs y {y.shape}")
    return pseudoinverse(phi) @ y


def fit_promp(t, y, basis=None, noise_std=0.0):
    """Build the basis over the span of ``t`` and learn weights on ``y``."""
    if basis is None:
        basis = BasisConfig()
    t = np.asarray(t, dtype=float)
    phi = gaussian_basis_matrix(t, basis)
    w = learn_weights(phi, y)
    return ProMP(weights=w, basis=basis, t_start=float(t.min()),
                 t_end=float(t.max()), noise_std=noise_std)


def generate(phi, w, sigma_tau=0.0, rng=None):
    """Sample ``phi @ w + eps`` with i.i.d. ``eps ~ N(0, sigma_tau**2)``."""
    if sigma_tau < 0:
        raise ValueError(f"sigma_tau must be >= 0, got {sigma_tau}")
    mean = np.asarray(phi, dtype=float) @ np.asarray(w, dtype=float)
    if sigma_tau == 0:
        return mean
    if rng is None:
        raise ValueError("an Rng64 is required when sigma_tau > 0")
    return mean + rng.normals(len(mean), 0.0, sigma_tau)


def reconstruct(promp, t):
    """
    Noise-free trajectory ``Phi(t) @ w``.

    Times outside ``[t_start, t_end]`` are evaluated anyway but raise an
    :class:`ExtrapolationWarning`.
    """
    if promp.is_extrapolation(t):
        warnings.warn(
            f"evaluating outside the trained span [{promp.t_start}, {promp.t_end}]",
            ExtrapolationWarning, stacklevel=2)
    return promp.design_matrix(t) @ promp.weights


def mse(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.size == 0:
        raise InvalidInputError(f"mse needs equal, non-empty shapes: {a.shape} vs {b.shape}")
    return float(np.mean((a - b) ** 2))


def _usable_intervals(intervals):
    """Merge intervals shorter than 2 samples into a neighbour."""
    merged = []
    for a, b in intervals:
        if b - a < 2 and merged:
            merged[-1] = (merged[-1][0], b)
        else:
            merged.append((a, b))
    # a short leading interval has no predecessor; fold it forward
    if len(merged) > 1 and merged[0][1] - merged[0][0] < 2:
        merged[1] = (merged[0][0], merged[1][1])
        merged.pop(0)
    return merged


def learn_segmented(traj, seg, basis_K=10):
    """
    Fit one primitive per interval.

    Each segment gets its own basis spanning that segment's times with
    width ``span / K``. ``K`` shrinks to the segment length (minimum 2) for
    short segments, and segments of a single sample are merged into their
    predecessor.

    Parameters
    ----------
    traj : Trajectory
        Anything with ``t`` and ``y`` arrays.
    seg : Segmentation or list of (start, end)
        Half-open ranges partitioning ``[0, n)``.
    basis_K : int
    """
    t = np.asarray(traj.t, dtype=float)
    y = np.asarray(traj.y, dtype=float)
    intervals = getattr(seg, "intervals", seg)
    if len(t) != len(y):
        raise InvalidInputError("t and y differ in length")
    _check_partition(intervals, len(t))
    if len(t) < 2:
        raise InvalidInputError("need at least 2 samples")
    segments = []
    for a, b in _usable_intervals(intervals):
        K = max(2, min(basis_K, b - a))
        segments.append(((a, b), fit_promp(t[a:b], y[a:b], BasisConfig(K))))
    return SegmentedProMP(segments=segments)


def _check_partition(intervals, n):
    pos = 0
    for a, b in intervals:
        if a != pos or b <= a:
            raise InvalidInputError(f"intervals do not partition [0, {n})")
        pos = b
    if pos != n:
        raise InvalidInputError(f"intervals do not partition [0, {n})")


def reconstruct_segmented(sp, t):
    """Concatenate per-segment reconstructions over the training grid."""
    t = np.asarray(t, dtype=float)
    if len(t) != sp.n_samples:
        raise InvalidInputError(
            f"grid has {len(t)} samples, model was trained on {sp.n_samples}")
    parts = []
    for (a, b), p in sp.segments:
        ts = t[a:b]
        if not (np.isclose(ts[0], p.t_start, rtol=0, atol=1e-12)
                and np.isclose(ts[-1], p.t_end, rtol=0, atol=1e-12)):
            raise InvalidInputError("grid does not match the training grid")
        parts.append(p.design_matrix(ts) @ p.weights)
    return np.concatenate(parts)


def adapt_weights(promp, t_obs, y_obs, decay=0.98, ridge=1e-6):
    """
    Re-fit weights to streamed observations.

    Minimizes ``sum_i decay**(m-1-i) * (y_i - Phi(t_i) @ w)**2
    + ridge * |w - w_old|**2`` so recent samples count most. The problem is
    solved as the equivalent stacked least-squares system, which has the
    same solution as the weighted normal equations but better conditioning.

    Returns
    -------
    ProMP
        Copy of ``promp`` with the new weights; the input is not modified.
    """
    if not 0 < decay <= 1:
        raise ValueError(f"decay must be in (0, 1], got {decay}")
    if ridge < 0:
        raise ValueError(f"ridge must be >= 0, got {ridge}")
    t_obs = np.atleast_1d(np.asarray(t_obs, dtype=float))
    y_obs = np.atleast_1d(np.asarray(y_obs, dtype=float))
    m = len(t_obs)
    if m < 1 or len(y_obs) != m:
        raise InvalidInputError("t_obs and y_obs must be non-empty and equally long")

    phi = promp.design_matrix(t_obs)
    K = phi.shape[1]
    sw = np.sqrt(decay ** np.arange(m - 1, -1, -1, dtype=float))
    A = phi * sw[:, None]
    rhs = y_obs * sw
    if ridge > 0:
        A = np.vstack([A, np.sqrt(ridge) * np.eye(K)])
        rhs = np.concatenate([rhs, np.sqrt(ridge) * promp.weights])
    w, _, rank, _ = np.linalg.lstsq(A, rhs, rcond=None)
    if rank < K:
        raise NumericalError(
            f"adaptation system is singular (rank {rank} < {K}); use ridge > 0")
    return replace(promp, weights=w)
