"""
Synthetic robot paths: a sine base path with additive Gaussian noise and
windowed multiplicative "obstacle" disturbances.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .numerics import Rng64


def linspace(start, end, n):
    """``n`` evenly spaced samples from ``start`` to ``end`` inclusive."""
    if n < 2:
        raise ValueError(f"need at least 2 points, got n={n}")
    if not end > start:
        raise ValueError(f"end ({end!r}) must be greater than start ({start!r})")
    return np.linspace(start, end, n)


@dataclass(frozen=True)
class TrajectoryConfig:
    num_points: int = 1000
    num_obstacles: int = 5
    noise_level: float = 0.1
    t_start: float = 0.0
    t_end: float = 4 * math.pi
    obstacle_half_width: int = 50

    def __post_init__(self):
        if self.num_points < 2:
            raise ValueError(f"num_points must be >= 2, got {self.num_points}")
        if self.num_obstacles < 0:
            raise ValueError(f"num_obstacles must be >= 0, got {self.num_obstacles}")
        if not (self.noise_level >= 0 and math.isfinite(self.noise_level)):
            raise ValueError(f"noise_level must be finite and >= 0, got {self.noise_level}")
        if not self.t_end > self.t_start:
            raise ValueError("t_end must be greater than t_start")
        if self.obstacle_half_width < 0:
            raise ValueError("obstacle_half_width must be >= 0")


@dataclass
class Trajectory:
    t: np.ndarray
    y: np.ndarray
    obstacle_centers: list = field(default_factory=list)
    obstacle_multipliers: list = field(default_factory=list)
    obstacle_half_width: int = 50

    def __len__(self):
        return len(self.t)

    def obstacle_windows(self):
        """Half-open sample ranges touched by each obstacle, in draw order."""
        n = len(self.t)
        h = self.obstacle_half_width
        return [(max(0, c - h), min(n, c + h)) for c in self.obstacle_centers]


def generate_dynamic_trajectory(cfg=None, seed=0):
    """
    Sine path perturbed by noise and obstacles.

    Draw order is fixed: all noise samples in index order, then for each
    obstacle its center index followed by its multiplier. Every obstacle
    scales ``y`` over ``[c - h, c + h)`` (clipped to the grid) by one scalar
    drawn on ``[-1, 1)``; overlapping windows compound. Duplicate centers
    are kept.

    Parameters
    ----------
    cfg : TrajectoryConfig, optional
    seed : int

    Returns
    -------
    Trajectory
    """
    if cfg is None:
        cfg = TrajectoryConfig()
    rng = Rng64(seed)
    n = cfg.num_points
    t = linspace(cfg.t_start, cfg.t_end, n)
    y = np.sin(t) + rng.normals(n, 0.0, cfg.noise_level)

    centers, multipliers = [], []
    h = cfg.obstacle_half_width
    for _ in range(cfg.num_obstacles):
        c = rng.integers(n)
        m = rng.uniform(-1.0, 1.0)
        y[max(0, c - h):min(n, c + h)] *= m
        centers.append(int(c))
        multipliers.append(m)

    return Trajectory(t=t, y=y, obstacle_centers=centers,
                      obstacle_multipliers=multipliers, obstacle_half_width=h)
