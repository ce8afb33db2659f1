"""Discrete geodesic descent with optional density regularization.

A curve between two latent points is approximated by K points with
pinned endpoints. Each iteration, in ambient coordinates:

    v^k = (x^{k+1} - x^k) / ||x^{k+1} - x^k||        k = 1..K-1
    a^k = v^k - v^{k-1}                              k = 2..K-1
    b^k = (J^k^T J^k + ridge I)^{-1} J^k^T a^k       k = 2..K-1
    z^k <- z^k + eta (b^k - mu d/dz rho(z))|_{z^k}

with rho(z) = 1/2 log det g(z) - log p(z). All per-point quantities of
one iteration are computed from the same snapshot of the curve and the
positions are updated together (Jacobi style), so a solve is
deterministic and the endpoints never move.

Two stabilization knobs beyond the bare update loop, both off-switchable:

* ``resample_every``: periodically re-spaces interior points to uniform
  ambient chord length along the current polyline. Too many points
  otherwise cluster and the curve loses smoothness. A proposed
  resampling is rejected if it would increase the discrete energy.
* ``init_bump``: adds a deterministic transverse half-sine bump to the
  straight-line initialization. Straight initializations can sit on an
  exactly symmetric saddle of the energy (a rotationally symmetric
  generator with antipodal endpoints preserves the symmetry for every
  following iteration, in exact arithmetic and in floats), and the bump
  is the escape. Zero by default, which keeps the initialization the
  plain straight line.
"""

from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np

from . import density, geometry
from .errors import DegenerateSegment, DimensionMismatch, InvalidConfig

_MIN_CHORD = 1e-12

METHODS = ("straight_z", "geod", "geod_reg")


@dataclass(frozen=True)
class SolverConfig:
    K: int = 35              # curve points, endpoints included
    eta: float = 0.02        # learning rate; the normalized-chord update is
                             # stable only for eta below roughly half the
                             # typical ambient chord length L/(K-1)
    mu: float = 0.02         # density regularizer weight
    max_iters: int = 2000
    tol: float = 1e-6        # convergence: max interior update norm
    ridge: Optional[float] = None    # None = 1e-9 * trace(g) / d_z per point
    fd_step: Optional[float] = None  # None = 1e-4 * (1 + ||z||_inf) per point
    resample_every: int = 50         # 0 = never
    init_bump: float = 0.0           # transverse bump, relative to ||z_b - z_a||
    max_step: Optional[float] = 1.0  # per-point update cap, in units of the
                                     # initial point spacing; None disables.
                                     # Only engages where the pullback is
                                     # near-singular (folded generators);
                                     # never reached on smooth instances.

    def __post_init__(self):
        if self.K < 3:
            raise InvalidConfig(f"K must be >= 3, got {self.K}")
        if not self.eta > 0:
            raise InvalidConfig(f"eta must be > 0, got {self.eta}")
        if self.mu < 0:
            raise InvalidConfig(f"mu must be >= 0, got {self.mu}")
        if not self.tol > 0:
            raise InvalidConfig(f"tol must be > 0, got {self.tol}")
        if self.max_iters < 1:
            raise InvalidConfig(f"max_iters must be >= 1, got {self.max_iters}")
        if self.resample_every < 0:
            raise InvalidConfig("resample_every must be >= 0")
        if self.init_bump < 0:
            raise InvalidConfig("init_bump must be >= 0")
        if self.max_step is not None and not self.max_step > 0:
            raise InvalidConfig("max_step must be positive or None")


@dataclass
class DiscreteCurve:
    """Ordered latent points with fixed endpoints."""

    points: np.ndarray  # (K, d_z)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[0] < 2:
            raise InvalidConfig("a curve needs at least 2 points of equal dimension")
        if not np.all(np.isfinite(pts)):
            raise InvalidConfig("curve contains non-finite coordinates")
        self.points = pts

    @property
    def K(self):
        return self.points.shape[0]

    @property
    def d_z(self):
        return self.points.shape[1]

    @property
    def endpoints(self):
        return self.points[0].copy(), self.points[-1].copy()


@dataclass
class SolveTrace:
    energy: List[float] = field(default_factory=list)
    loss: List[float] = field(default_factory=list)
    max_update: List[float] = field(default_factory=list)
    termination: str = "max_iters"

    @property
    def iterations(self):
        return len(self.max_update)


def straight_z(z_a, z_b, K):
    """K points linearly interpolated between z_a and z_b, inclusive."""
    z_a = np.asarray(z_a, dtype=np.float64)
    z_b = np.asarray(z_b, dtype=np.float64)
    if z_a.shape != z_b.shape or z_a.ndim != 1:
        raise DimensionMismatch(
            f"endpoints must be vectors of equal length, got {z_a.shape} and {z_b.shape}"
        )
    t = np.linspace(0.0, 1.0, int(K))
    return DiscreteCurve(z_a[None, :] + t[:, None] * (z_b - z_a)[None, :])


def _transverse_unit(u):
    """Deterministic unit vector orthogonal to u (||u|| = 1)."""
    d = u.shape[0]
    idx = int(np.argmin(np.abs(u)))
    n = np.zeros(d)
    n[idx] = 1.0
    n = n - (n @ u) * u
    return n / np.linalg.norm(n)


def initial_curve(z_a, z_b, cfg):
    """StraightZ initialization, plus the optional transverse bump."""
    curve = straight_z(z_a, z_b, cfg.K)
    chord = np.asarray(z_b, dtype=np.float64) - np.asarray(z_a, dtype=np.float64)
    span = float(np.linalg.norm(chord))
    if cfg.init_bump > 0 and span > 0:
        u = chord / span
        n = _transverse_unit(u)
        t = np.linspace(0.0, 1.0, cfg.K)
        curve.points[1:-1] += (
            cfg.init_bump * span * np.sin(np.pi * t[1:-1])[:, None] * n[None, :]
        )
    return curve


def discrete_energy(X):
    """E = sum ||x^{k+1} - x^k||^2 / (2 dt) with dt = 1/(K-1)."""
    X = np.asarray(X, dtype=np.float64)
    K = X.shape[0]
    seg = np.diff(X, axis=0)
    return 0.5 * (K - 1) * float(np.sum(seg * seg))


def _chords(X, trace=None):
    seg = np.diff(X, axis=0)
    norms = np.linalg.norm(seg, axis=1)
    if np.any(norms <= _MIN_CHORD):
        k = int(np.argmin(norms))
        raise DegenerateSegment(
            f"ambient points {k} and {k + 1} collapsed "
            f"(distance {norms[k]:.3e}); lower eta or K",
            trace=trace,
        )
    return seg, norms


def _ridge_vector(g, cfg_ridge):
    if cfg_ridge is not None:
        return np.full(g.shape[0], float(cfg_ridge))
    return 1e-9 * np.trace(g, axis1=-2, axis2=-1) / g.shape[-1]


def pulled_back_acceleration(f, Z, ridge=None, trace=None):
    """The b^k of one iteration for every interior point of Z.

    Returns (b, X) with b of shape (K-2, d_z). Exposed separately so the
    update can be validated against the geodesic equation.
    """
    X = f.forward_many(Z)
    seg, norms = _chords(X, trace)
    v = seg / norms[:, None]
    a = v[1:] - v[:-1]
    _, J = f.jacobian_many(Z[1:-1])
    g = geometry.pullback_metric_many(J)
    b = geometry.pullback_vector_many(J, a, _ridge_vector(g, ridge))
    return b, X


def _iterate(f, prior, Z, cfg, trace):
    """One Jacobi update of the interior points, in place. Returns max ||dz||."""
    b, _ = pulled_back_acceleration(f, Z, ridge=cfg.ridge, trace=trace)
    update = b
    if cfg.mu > 0:
        grad = density.regularizer_grad_many(
            f, prior, Z[1:-1], ridge=cfg.ridge, h=cfg.fd_step
        )
        update = b - cfg.mu * grad
    step_vecs = cfg.eta * update
    if cfg.max_step is not None:
        spacing = float(np.linalg.norm(Z[-1] - Z[0])) / (Z.shape[0] - 1)
        if spacing > 0:
            cap = cfg.max_step * spacing
            norms = np.linalg.norm(step_vecs, axis=1)
            mask = norms > cap
            if np.any(mask):
                step_vecs[mask] *= (cap / norms[mask])[:, None]
    if not np.all(np.isfinite(step_vecs)):
        raise DegenerateSegment(
            "update became non-finite; the generator is likely rank-deficient "
            "along the path (raise ridge or adjust endpoints)",
            trace=trace,
        )
    Z[1:-1] += step_vecs
    return float(np.max(np.linalg.norm(step_vecs, axis=1)))


def step(f, prior, curve, cfg):
    """One solver iteration on a copy of the curve.

    Returns (new_curve, max_update_norm); endpoints are untouched.
    """
    Z = curve.points.copy()
    max_norm = _iterate(f, prior, Z, cfg, trace=None)
    return DiscreteCurve(Z), max_norm


def resample_uniform_chord(f, Z):
    """Re-space interior points to uniform ambient chord length.

    Targets are uniform positions along the current polyline's ambient
    arc length; new latent points are linear interpolations within the
    segment that contains each target. Endpoints stay fixed.
    """
    X = f.forward_many(Z)
    seg = np.diff(X, axis=0)
    norms = np.linalg.norm(seg, axis=1)
    cum = np.concatenate([[0.0], np.cumsum(norms)])
    total = cum[-1]
    if total <= _MIN_CHORD:
        return Z.copy()
    K = Z.shape[0]
    targets = np.linspace(0.0, total, K)[1:-1]
    idx = np.searchsorted(cum, targets, side="right") - 1
    idx = np.clip(idx, 0, K - 2)
    local = (targets - cum[idx]) / np.maximum(norms[idx], _MIN_CHORD)
    Z_new = Z.copy()
    Z_new[1:-1] = Z[idx] + local[:, None] * (Z[idx + 1] - Z[idx])
    return Z_new


def solve(f, prior, z_a, z_b, cfg):
    """Run the descent from the straight-line initialization.

    Returns (curve, trace). Iterates until the largest interior update
    falls below cfg.tol or max_iters is reached. A DegenerateSegment
    aborts the run; the exception carries the trace collected so far.
    """
    z_a = np.asarray(z_a, dtype=np.float64)
    z_b = np.asarray(z_b, dtype=np.float64)
    if z_a.shape != (f.d_z,) or z_b.shape != (f.d_z,):
        raise DimensionMismatch(
            f"endpoints must have dimension {f.d_z}, got {z_a.shape} and {z_b.shape}"
        )
    trace = SolveTrace()
    if np.allclose(z_a, z_b, rtol=0.0, atol=0.0):
        trace.termination = "converged"
        return DiscreteCurve(np.tile(z_a, (cfg.K, 1))), trace

    curve = initial_curve(z_a, z_b, cfg)
    Z = curve.points
    for it in range(cfg.max_iters):
        max_norm = _iterate(f, prior, Z, cfg, trace)
        X = f.forward_many(Z)
        energy = discrete_energy(X)
        if cfg.mu > 0:
            rho = density.regularizer_many(f, prior, Z, ridge=cfg.ridge)
            dt = 1.0 / (cfg.K - 1)
            loss = energy + cfg.mu * float(np.trapezoid(rho, dx=dt))
        else:
            loss = energy
        trace.energy.append(energy)
        trace.loss.append(loss)
        trace.max_update.append(max_norm)
        if max_norm < cfg.tol:
            trace.termination = "converged"
            break
        if cfg.resample_every > 0 and (it + 1) % cfg.resample_every == 0:
            Z_prop = resample_uniform_chord(f, Z)
            if discrete_energy(f.forward_many(Z_prop)) <= energy * (1.0 + 1e-12):
                Z[:] = Z_prop
    return DiscreteCurve(Z), trace


def interpolate(method, f, prior, z_a, z_b, cfg):
    """Dispatch to one of the three interpolation methods.

    ``geod`` forces mu = 0; ``geod_reg`` requires mu > 0.
    """
    name = method.replace("-", "_")
    if name not in METHODS:
        raise InvalidConfig(
            f"unknown method {method!r}; valid methods: straight_z, geod, geod_reg"
        )
    if name == "straight_z":
        return straight_z(z_a, z_b, cfg.K)
    if name == "geod":
        curve, _ = solve(f, prior, z_a, z_b, replace(cfg, mu=0.0))
        return curve
    if cfg.mu <= 0:
        raise InvalidConfig("geod_reg requires mu > 0; use method 'geod' for mu = 0")
    curve, _ = solve(f, prior, z_a, z_b, cfg)
    return curve
