"""Differential-geometric primitives on the pullback metric g = J^T J.

The ambient metric is Euclidean throughout, so the metric induced on
latent space by a generator f is g(z) = J(z)^T J(z). Christoffel
symbols are provided only as a finite-difference verification tool; the
solver never needs them because the update is computed in ambient
coordinates and pulled back.
"""

import numpy as np

from .errors import SingularMetric


def default_fd_step(z):
    """Central-difference step scaled to the point: 1e-4 * (1 + ||z||_inf)."""
    z = np.asarray(z, dtype=np.float64)
    return 1e-4 * (1.0 + float(np.max(np.abs(z))))


def default_ridge(g):
    """Ridge used when none is given: 1e-9 * trace(g) / d_z."""
    g = np.asarray(g)
    return 1e-9 * float(np.trace(g)) / g.shape[0]


def pullback_metric(J):
    """Metric induced by the Euclidean ambient metric: g = J^T J."""
    J = np.asarray(J, dtype=np.float64)
    g = J.T @ J
    # exact symmetrization; J^T J is symmetric up to rounding only
    return 0.5 * (g + g.T)


def pullback_metric_many(J):
    """Batched g = J^T J for J of shape (n, d_x, d_z)."""
    g = np.swapaxes(J, -1, -2) @ J
    return 0.5 * (g + np.swapaxes(g, -1, -2))


def _chol_or_singular(m, what, ridge):
    """Cholesky factor, raising SingularMetric on numerical singularity.

    LAPACK happily factors matrices that are singular up to rounding
    (the last pivot comes out around sqrt(eps)), so the diagonal ratio
    is checked explicitly.
    """
    try:
        L = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise SingularMetric(
            f"{what} not positive definite with ridge={ridge:g}; "
            "raise the ridge or avoid the degenerate point"
        ) from exc
    d = np.diag(L)
    if (d.min() / d.max()) ** 2 < 1e-14:
        raise SingularMetric(
            f"{what} numerically singular with ridge={ridge:g} "
            f"(condition above ~1e14); raise the ridge"
        )
    return L


def metric_log_det(g, ridge=0.0):
    """log det(g + ridge * I) via Cholesky factorization.

    Raises SingularMetric when the ridged matrix is not (numerically)
    positive definite, which signals a rank-deficient Jacobian.
    """
    g = np.asarray(g, dtype=np.float64)
    m = g + ridge * np.eye(g.shape[0])
    L = _chol_or_singular(m, "metric", ridge)
    return 2.0 * float(np.sum(np.log(np.diag(L))))


def metric_log_det_many(g, ridge=0.0):
    """Batched log det with +inf sentinel for non-PD entries."""
    g = np.asarray(g, dtype=np.float64)
    m = g + ridge * np.eye(g.shape[-1])
    sign, logdet = np.linalg.slogdet(m)
    out = np.where(sign > 0, logdet, np.inf)
    return out


def pullback_vector(J, a, ridge=0.0):
    """Least-squares pullback b = (J^T J + ridge I)^{-1} J^T a.

    Solves the ridged normal equations with a symmetric (Cholesky)
    solve rather than forming an explicit inverse.
    """
    J = np.asarray(J, dtype=np.float64)
    a = np.asarray(a, dtype=np.float64)
    g = pullback_metric(J) + ridge * np.eye(J.shape[1])
    rhs = J.T @ a
    L = _chol_or_singular(g, "normal equations", ridge)
    y = np.linalg.solve(L, rhs)
    return np.linalg.solve(L.T, y)


def pullback_vector_many(J, a, ridge):
    """Batched ridged pullback; J: (n, d_x, d_z), a: (n, d_x), ridge: (n,)."""
    g = pullback_metric_many(J)
    d_z = g.shape[-1]
    g = g + ridge[:, None, None] * np.eye(d_z)
    rhs = (np.swapaxes(J, -1, -2) @ a[..., None])[..., 0]
    try:
        return np.linalg.solve(g, rhs[..., None])[..., 0]
    except np.linalg.LinAlgError as exc:
        raise SingularMetric("ridged normal equations singular in batch") from exc


def metric_fd(f, z, h=None):
    """Metric built from a central-difference Jacobian (verification only)."""
    z = np.asarray(z, dtype=np.float64)
    h = default_fd_step(z) if h is None else h
    cols = []
    for m in range(z.shape[0]):
        dz = np.zeros_like(z)
        dz[m] = h
        cols.append((f.forward(z + dz) - f.forward(z - dz)) / (2.0 * h))
    J = np.stack(cols, axis=1)
    return pullback_metric(J)


def christoffel_fd(f, z, h=None):
    """Christoffel symbols of g = J^T J by central differences.

    Gamma^k_{mn} = 1/2 g^{kl} (d_m g_{ln} + d_n g_{lm} - d_l g_{mn})

    Verification oracle only; raises SingularMetric when g(z) is not
    invertible.
    """
    z = np.asarray(z, dtype=np.float64)
    d = z.shape[0]
    h = default_fd_step(z) if h is None else h
    g0 = pullback_metric(f.jacobian(z))
    try:
        g_inv = np.linalg.inv(g0)
    except np.linalg.LinAlgError as exc:
        raise SingularMetric("metric not invertible at the requested point") from exc
    dg = np.empty((d, d, d))  # dg[m] = d g / d z^m
    for m in range(d):
        dz = np.zeros_like(z)
        dz[m] = h
        g_plus = pullback_metric(f.jacobian(z + dz))
        g_minus = pullback_metric(f.jacobian(z - dz))
        dg[m] = (g_plus - g_minus) / (2.0 * h)
    # lower-index symbol: Gamma_{l,mn} = 1/2 (d_m g_{ln} + d_n g_{lm} - d_l g_{mn})
    lower = 0.5 * (
        np.einsum("mln->lmn", dg) + np.einsum("nlm->lmn", dg) - dg
    )
    return np.einsum("kl,lmn->kmn", g_inv, lower, optimize=True)


def christoffel_contract(gamma, v, w=None):
    """Gamma(v, w) with w defaulting to v."""
    w = v if w is None else w
    return np.einsum("kmn,m,n->k", gamma, v, w, optimize=True)
