"""
Gaussian basis functions over time.

Each column of the design matrix is a normal density whose mean is one of
``K`` evenly spaced centers and whose VARIANCE is ``width``. The default
width is ``(t_max - t_min) / K``, so for 10 bases over ``[0, 4*pi]`` each
Gaussian has standard deviation ``sqrt(4*pi/10) ~ 1.12``. Densities are
not rescaled to unit height; weights absorb the scale.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class BasisConfig:
    num_bases: int = 10
    width: Optional[float] = None  # variance; None means span / num_bases

    def __post_init__(self):
        if self.num_bases < 2:
            raise ValueError(f"num_bases must be >= 2, got {self.num_bases}")
        if self.width is not None and not self.width > 0:
            raise ValueError(f"width must be > 0, got {self.width}")

    def resolve_width(self, t_min, t_max):
        if self.width is not None:
            return float(self.width)
        return (t_max - t_min) / self.num_bases


def basis_centers(t, K):
    """``K`` evenly spaced centers from ``min(t)`` to ``max(t)`` inclusive."""
    if K < 2:
        raise ValueError(f"need at least 2 bases, got K={K}")
    t = np.asarray(t, dtype=float)
    if t.size == 0:
        raise ValueError("t is empty")
    return np.linspace(t.min(), t.max(), K)


def gaussian_basis_matrix(t, cfg=None, t_range=None):
    """
    Design matrix Phi with ``Phi[i, j] = N(t[i]; c_j, width)``.

    Parameters
    ----------
    t : (n,) array_like
        Evaluation times.
    cfg : BasisConfig, optional
    t_range : (float, float), optional
        Interval the centers span. Defaults to ``(min(t), max(t))``; pass the
        training span explicitly when evaluating on a different grid.

    Returns
    -------
    (n, K) ndarray, columns ordered by ascending center.
    """
    if cfg is None:
        cfg = BasisConfig()
    t = np.asarray(t, dtype=float)
    if t_range is None:
        t_range = (float(t.min()), float(t.max()))
    t_min, t_max = t_range
    width = cfg.resolve_width(t_min, t_max)
    if not width > 0:
        raise ValueError(f"basis width must be > 0, got {width}")
    centers = np.linspace(t_min, t_max, cfg.num_bases)
    d = t[:, None] - centers[None, :]
    return np.exp(-d * d / (2.0 * width)) / math.sqrt(2.0 * math.pi * width)
