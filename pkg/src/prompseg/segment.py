"""
Unsupervised segmentation of scalar trajectories.

Two segmenters live here. The peak segmenter finds significant maxima of
``|y|`` and clusters their amplitudes with k-means. The spectral segmenter
embeds the series with a sliding window, builds a Gaussian affinity graph,
and clusters the low eigenvectors of its unnormalized Laplacian.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateScaleError, InsufficientPeaksError, InvalidInputError
from .numerics import kmeans, sym_eig


@dataclass
class Segmentation:
    peak_indices: np.ndarray
    peak_labels: np.ndarray
    intervals: list
    n_clusters: int = 0

    @property
    def n_samples(self):
        return self.intervals[-1][1] if self.intervals else 0

    def label_histogram(self):
        return np.bincount(self.peak_labels, minlength=self.n_clusters).tolist()


@dataclass(frozen=True)
class SpectralConfig:
    n_clusters: int = 3
    sigma: Optional[float] = None  # None: median nonzero pairwise distance
    embed_window: int = 10

    def __post_init__(self):
        if self.n_clusters < 1:
            raise ValueError(f"n_clusters must be >= 1, got {self.n_clusters}")
        if self.embed_window < 1:
            raise ValueError(f"embed_window must be >= 1, got {self.embed_window}")
        if self.sigma is not None and not self.sigma > 0:
            raise ValueError(f"sigma must be > 0, got {self.sigma}")


def find_peaks(y, height=None):
    """
    Indices of local maxima of ``y`` with value at least ``height``.

    A maximum is a sample strictly greater than both neighbours, or a flat
    run of equal samples strictly greater than the samples on either side,
    reported at ``(first + last) // 2``. Samples touching either end of the
    array are never peaks.
    """
    y = np.asarray(y, dtype=float)
    n = len(y)
    peaks = []
    i = 1
    while i < n - 1:
        if y[i - 1] < y[i]:
            # walk to the end of a possible plateau
            j = i
            while j + 1 < n - 1 and y[j + 1] == y[i]:
                j += 1
            if y[j + 1] < y[i]:
                peaks.append((i + j) // 2)
            i = j + 1
        else:
            i += 1
    peaks = np.array(peaks, dtype=int)
    if height is not None and peaks.size:
        peaks = peaks[y[peaks] >= height]
    return peaks


def significant_peaks(y):
    """Peaks of ``|y|`` at least as high as the population std of ``y``."""
    y = np.asarray(y, dtype=float)
    if y.size == 0:
        raise InvalidInputError("y is empty")
    return find_peaks(np.abs(y), height=np.std(y))


def peaks_to_intervals(peaks, n):
    """
    Split ``[0, n)`` at every peak index into half-open intervals.

    Empty intervals (a peak at 0) are dropped.
    """
    peaks = [int(p) for p in peaks]
    if any(p < 0 or p >= n for p in peaks):
        raise InvalidInputError(f"peak indices must lie in [0, {n})")
    if any(b <= a for a, b in zip(peaks, peaks[1:])):
        raise InvalidInputError("peak indices must be strictly ascending")
    bounds = [0] + peaks + [n]
    return [(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]


def segment_trajectory(y, n_clusters=3, seed=0):
    """
    Peak-based segmentation.

    Significant peaks are clustered by their signed amplitude ``y[peak]``
    as one-dimensional points; time intervals run between consecutive
    peaks.

    Raises
    ------
    InsufficientPeaksError
        If fewer peaks than ``n_clusters`` are found. ``exc.n_peaks``
        carries the count so callers can retry with a smaller ``k``.
    """
    if n_clusters < 1:
        raise ValueError(f"n_clusters must be >= 1, got {n_clusters}")
    y = np.asarray(y, dtype=float)
    peaks = significant_peaks(y)
    if len(peaks) < n_clusters:
        raise InsufficientPeaksError(len(peaks), n_clusters)
    labels = kmeans(y[peaks].reshape(-1, 1), n_clusters, seed=seed).labels
    return Segmentation(peak_indices=peaks, peak_labels=labels,
                        intervals=peaks_to_intervals(peaks, len(y)),
                        n_clusters=n_clusters)


def delay_embed(y, m):
    """Sliding windows of length ``m``: row ``i`` is ``y[i:i+m]``."""
    y = np.asarray(y, dtype=float)
    if m < 1 or m > len(y):
        raise ValueError(f"invalid window m={m} for series of length {len(y)}")
    return np.lib.stride_tricks.sliding_window_view(y, m).copy()


def _pairwise_sq_dists(X):
    sq = (X * X).sum(axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * X @ X.T
    np.maximum(d2, 0.0, out=d2)
    np.fill_diagonal(d2, 0.0)
    return d2


def affinity_matrix(features, sigma):
    """Gaussian kernel ``W_ij = exp(-|h_i - h_j|^2 / (2 sigma^2))``."""
    if not sigma > 0:
        raise ValueError(f"sigma must be > 0, got {sigma}")
    X = np.asarray(features, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    W = np.exp(-_pairwise_sq_dists(X) / (2.0 * sigma * sigma))
    return 0.5 * (W + W.T)


def laplacian(W):
    """Unnormalized graph Laplacian ``D - W``."""
    W = np.asarray(W, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise InvalidInputError(f"W must be square, got shape {W.shape}")
    if np.max(np.abs(W - W.T), initial=0.0) > 1e-10:
        raise InvalidInputError("W is not symmetric")
    if np.any(W < 0):
        raise InvalidInputError("W has negative entries")
    return np.diag(W.sum(axis=1)) - W


def median_sigma(features):
    X = np.asarray(features, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    iu = np.triu_indices(len(X), k=1)
    d = np.sqrt(_pairwise_sq_dists(X)[iu])
    d = d[d > 0]
    if d.size == 0:
        raise DegenerateScaleError("all features are identical; cannot infer sigma")
    return float(np.median(d))


def spectral_clusters(features, cfg=None, seed=0):
    """
    Cluster feature rows through the Laplacian eigenvectors.

    The eigenvectors belonging to the ``k`` smallest eigenvalues form an
    ``(n, k)`` embedding whose rows are grouped with k-means.

    Returns
    -------
    (n,) int ndarray of labels.
    """
    if cfg is None:
        cfg = SpectralConfig()
    X = np.asarray(features, dtype=float)
    if X.ndim == 1:
        X = X.reshape(-1, 1)
    n, k = len(X), cfg.n_clusters
    if k > n:
        raise ValueError(f"invalid k={k} for {n} feature rows")
    if k == 1:
        return np.zeros(n, dtype=int)
    sigma = cfg.sigma if cfg.sigma is not None else median_sigma(X)
    _, vecs = sym_eig(laplacian(affinity_matrix(X, sigma)))
    return kmeans(vecs[:, :k], k, seed=seed).labels


def labels_to_intervals(labels, n=None, stride=1):
    """
    Contiguous runs of equal labels as half-open sample ranges.

    Label ``i`` is taken to describe samples starting at ``i * stride``; the
    last run is extended to ``n``.
    """
    labels = np.asarray(labels)
    if n is None:
        n = len(labels) * stride
    change = np.flatnonzero(np.diff(labels)) + 1
    bounds = [0] + [int(c) * stride for c in change] + [n]
    return [(a, b) for a, b in zip(bounds, bounds[1:]) if b > a]
