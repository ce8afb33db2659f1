"""Latent prior density and the path regularizer scalar.

The regularizer at a latent point is

    rho(z) = -log p(z) + 1/2 log |det g(z)|

which, by the change of variables through f, is the negative log of the
density the generator pushes forward onto its manifold. Curves through
regions the generator stretches hard (holes in the data) have large
rho.
"""

import numpy as np

from . import geometry
from .errors import DimensionMismatch

LOG_2PI = float(np.log(2.0 * np.pi))


class StandardNormalPrior:
    """N(0, I) latent prior; the GAN/VAE sampling convention."""

    kind = "standard_normal"

    def __init__(self, dim):
        if dim < 1:
            raise DimensionMismatch("prior dimension must be >= 1")
        self.dim = int(dim)

    def log_prob(self, z):
        z = np.asarray(z, dtype=np.float64)
        if z.shape != (self.dim,):
            raise DimensionMismatch(
                f"prior expects a vector of length {self.dim}, got {z.shape}"
            )
        return float(-0.5 * z @ z - 0.5 * self.dim * LOG_2PI)

    def log_prob_many(self, Z):
        Z = np.asarray(Z, dtype=np.float64)
        return -0.5 * np.sum(Z * Z, axis=1) - 0.5 * self.dim * LOG_2PI

    def grad_neg_log_prob_many(self, Z):
        # analytic gradient of -log p; for N(0, I) this is just z
        return np.asarray(Z, dtype=np.float64)


def log_prior(prior, z):
    return prior.log_prob(z)


def regularizer(f, prior, z, ridge=None):
    """rho(z) = -log p(z) + 1/2 log det(g(z) + ridge I)."""
    g = geometry.pullback_metric(f.jacobian(z))
    if ridge is None:
        ridge = geometry.default_ridge(g)
    return -prior.log_prob(z) + 0.5 * geometry.metric_log_det(g, ridge)


def regularizer_many(f, prior, Z, ridge=None):
    """Vectorized rho over rows of Z. Non-PD points come back as +inf."""
    Z = np.asarray(Z, dtype=np.float64)
    _, J = f.jacobian_many(Z)
    g = geometry.pullback_metric_many(J)
    if ridge is None:
        ridge_vec = 1e-9 * np.trace(g, axis1=-2, axis2=-1) / g.shape[-1]
    else:
        ridge_vec = np.full(Z.shape[0], float(ridge))
    g = g + ridge_vec[:, None, None] * np.eye(g.shape[-1])
    sign, logdet = np.linalg.slogdet(g)
    half_logdet = np.where(sign > 0, 0.5 * logdet, np.inf)
    return -prior.log_prob_many(Z) + half_logdet


def regularizer_grad(f, prior, z, ridge=None, h=None):
    """Central finite difference of rho per latent coordinate."""
    z = np.asarray(z, dtype=np.float64)
    h = geometry.default_fd_step(z) if h is None else h
    grads = regularizer_grad_many(f, prior, z[None, :], ridge=ridge, h=h)
    return grads[0]


def regularizer_grad_many(f, prior, Z, ridge=None, h=None):
    """Batched central-difference gradient of rho.

    Evaluates rho at 2 * d_z perturbed copies of every row in a single
    batch so the generator's vectorized Jacobian path does the work.
    """
    Z = np.asarray(Z, dtype=np.float64)
    n, d = Z.shape
    if h is None:
        h = 1e-4 * (1.0 + np.max(np.abs(Z), axis=1))  # per-point step
    else:
        h = np.full(n, float(h))
    offsets = np.eye(d)
    plus = Z[:, None, :] + h[:, None, None] * offsets
    minus = Z[:, None, :] - h[:, None, None] * offsets
    stacked = np.concatenate([plus, minus], axis=1).reshape(2 * n * d, d)
    rho = regularizer_many(f, prior, stacked, ridge=ridge).reshape(n, 2, d)
    return (rho[:, 0, :] - rho[:, 1, :]) / (2.0 * h[:, None])
