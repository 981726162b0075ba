"""
Gaussian-process model of primitive weights as a function of context.

Every weight dimension is an independent scalar GP with a squared-
exponential kernel and a constant mean equal to the empirical mean of the
training weights. All dimensions share one kernel, so the Gram matrix is
factorized once. Predictive variance is the same scalar for every weight
and is propagated to trajectory space as ``sqrt(v) * |Phi row|``.
"""

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .basis import gaussian_basis_matrix
from .errors import InvalidInputError, NumericalError

MAX_JITTER = 1e-6


@dataclass(frozen=True)
class GpConfig:
    length_scale: float = 1.0
    signal_var: float = 1.0
    noise_var: float = 0.0
    jitter: float = 1e-9

    def __post_init__(self):
        if not self.length_scale > 0:
            raise ValueError(f"length_scale must be > 0, got {self.length_scale}")
        if not self.signal_var > 0:
            raise ValueError(f"signal_var must be > 0, got {self.signal_var}")
        if not self.noise_var >= 0:
            raise ValueError(f"noise_var must be >= 0, got {self.noise_var}")
        if not self.jitter >= 0:
            raise ValueError(f"jitter must be >= 0, got {self.jitter}")


@dataclass(frozen=True)
class GpModel:
    contexts: np.ndarray      # (m, d)
    weight_table: np.ndarray  # (m, K)
    mean_row: np.ndarray      # (K,)
    gram_factor: np.ndarray   # lower triangular, (m, m)
    alpha: np.ndarray         # (m, K), Gram^-1 (weights - mean)
    config: GpConfig
    jitter_used: float


class GpPrediction(NamedTuple):
    mean: np.ndarray
    variance: float


def _as_contexts(c):
    c = np.asarray(c, dtype=float)
    if c.ndim == 0:
        c = c.reshape(1, 1)
    elif c.ndim == 1:
        c = c.reshape(-1, 1)
    return c


def kernel_matrix(A, B, cfg):
    A = _as_contexts(A)
    B = _as_contexts(B)
    if A.shape[1] != B.shape[1]:
        raise InvalidInputError(f"context dims differ: {A.shape[1]} vs {B.shape[1]}")
    d2 = ((A[:, None, :] - B[None, :, :]) ** 2).sum(axis=2)
    return cfg.signal_var * np.exp(-d2 / (2.0 * cfg.length_scale ** 2))


def rbf_kernel(c1, c2, cfg):
    """``signal_var * exp(-|c1 - c2|^2 / (2 length_scale^2))``."""
    c1 = np.atleast_1d(np.asarray(c1, dtype=float))
    c2 = np.atleast_1d(np.asarray(c2, dtype=float))
    if c1.shape != c2.shape:
        raise InvalidInputError(f"context dims differ: {c1.shape} vs {c2.shape}")
    d2 = float(np.sum((c1 - c2) ** 2))
    return cfg.signal_var * float(np.exp(-d2 / (2.0 * cfg.length_scale ** 2)))


def gp_fit(contexts, weight_table, cfg=None):
    """
    Condition the weight GP on ``m`` (context, weights) pairs.

    The Gram matrix gets ``noise_var + jitter`` on its diagonal. If the
    Cholesky factorization fails, jitter grows tenfold per retry up to
    1e-6 before giving up.

    Parameters
    ----------
    contexts : (m, d) or (m,) array_like
    weight_table : (m, K) array_like
    cfg : GpConfig, optional

    Raises
    ------
    NumericalError
        When the Gram matrix cannot be factorized, including the singular
        case of repeated contexts with conflicting weights and zero noise.
    """
    if cfg is None:
        cfg = GpConfig()
    C = _as_contexts(contexts)
    Wt = np.asarray(weight_table, dtype=float)
    if Wt.ndim == 1:
        Wt = Wt.reshape(-1, 1)
    m = len(C)
    if m < 1 or Wt.shape[0] != m:
        raise InvalidInputError(
            f"contexts ({m} rows) and weight_table ({Wt.shape[0]} rows) must align")

    if cfg.noise_var == 0 and m > 1:
        # jitter would otherwise mask an exactly singular Gram matrix
        d2 = ((C[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)
        for i, j in zip(*np.nonzero(np.triu(d2 == 0, k=1))):
            if not np.array_equal(Wt[i], Wt[j]):
                raise NumericalError(
                    f"singular Gram matrix: contexts {i} and {j} coincide with "
                    "different weights and noise_var=0")

    mean_row = Wt.mean(axis=0)
    gram = kernel_matrix(C, C, cfg)
    jitter = cfg.jitter
    while True:
        try:
            L = np.linalg.cholesky(gram + (cfg.noise_var + jitter) * np.eye(m))
            break
        except np.linalg.LinAlgError:
            if jitter >= MAX_JITTER:
                raise NumericalError(
                    f"Gram matrix not positive definite with jitter {jitter:g}") from None
            jitter = min(max(jitter * 10, 1e-9), MAX_JITTER)

    alpha = cho_solve((L, True), Wt - mean_row)
    return GpModel(contexts=C, weight_table=Wt, mean_row=mean_row,
                   gram_factor=L, alpha=alpha, config=cfg, jitter_used=jitter)


def _predict_raw(model, c_star):
    c_star = np.atleast_1d(np.asarray(c_star, dtype=float)).reshape(1, -1)
    if c_star.shape[1] != model.contexts.shape[1]:
        raise InvalidInputError(
            f"context has dim {c_star.shape[1]}, model expects {model.contexts.shape[1]}")
    k_star = kernel_matrix(model.contexts, c_star, model.config)[:, 0]
    mean = model.mean_row + k_star @ model.alpha
    v = solve_triangular(model.gram_factor, k_star, lower=True)
    return mean, model.config.signal_var - float(v @ v)


def gp_predict(model, c_star):
    """Posterior mean weights and shared (clamped) variance at ``c_star``."""
    mean, var = _predict_raw(model, c_star)
    return GpPrediction(mean=mean, variance=max(var, 0.0))


def conditional_trajectory(model, c_star, t, basis, t_range=None):
    """
    Mean trajectory and pointwise standard deviation at context ``c_star``.

    Returns
    -------
    trajectory, pointwise_std : (n,) ndarrays
    """
    mean, var = gp_predict(model, c_star)
    phi = gaussian_basis_matrix(t, basis, t_range)
    if phi.shape[1] != len(mean):
        raise InvalidInputError(
            f"basis has {phi.shape[1]} functions, model predicts {len(mean)} weights")
    return phi @ mean, np.sqrt(var) * np.linalg.norm(phi, axis=1)
