"""Smooth generative maps f: Z -> X with exact Jacobians.

Three kinds are supported:

* ``linear``      x = A z + b
* ``mlp``         dense layers with identity/tanh/relu/sigmoid activations
* ``radial_warp`` the analytic annulus-pushing map on R^2 (see
  :class:`RadialWarpGenerator` for the closed form)

All generators are immutable after construction and their evaluations
are deterministic, so they are safe to share across workers.

Weight file schema (JSON, ``schema_version`` "1")
-------------------------------------------------
::

    {
      "schema_version": "1",
      "d_z": <int>, "d_x": <int>,
      "generator": {
        "kind": "mlp",
        "layers": [
          {"weights": [[...], ...],   # d_out x d_in, row major
           "bias": [...],             # d_out
           "activation": "tanh"},     # identity|tanh|relu|sigmoid
          ...
        ]
      },
      "metadata": { ... }             # free-form provenance
    }

``linear`` generators store ``{"kind": "linear", "matrix": [[...]],
"offset": [...]}``; ``radial_warp`` stores ``{"kind": "radial_warp",
"inner_radius": r0, "sharpness": s}``. This file is the contract with
the external trainer; loaders must reject non-finite parameters and
mismatched layer dimensions.
"""

import json

import numpy as np

from . import kernels
from .errors import DimensionMismatch, ParseError, SchemaError

SCHEMA_VERSION = "1"
ACTIVATIONS = ("identity", "tanh", "relu", "sigmoid")

# Default analytic benchmark instance. Tuned so the density hole at the
# origin is pronounced while the hole's image (radius inner_radius/2)
# stays small relative to the benchmark endpoints at |z| = 1.2.
RADIAL_WARP_DEFAULTS = {"inner_radius": 0.15, "sharpness": 8.0}


def _check_point(z, d_z, name="z"):
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 1 or z.shape[0] != d_z:
        raise DimensionMismatch(
            f"{name} must be a vector of length {d_z}, got shape {z.shape}"
        )
    return z


class Generator:
    """Base interface: dimensions, forward map, exact Jacobian."""

    kind = None
    d_z = None
    d_x = None

    def forward(self, z):
        return self.forward_many(_check_point(z, self.d_z)[None, :])[0]

    def jacobian(self, z):
        return self.jacobian_many(_check_point(z, self.d_z)[None, :])[1][0]

    def forward_many(self, Z):
        """Vectorized forward over rows of Z, shape (n, d_z) -> (n, d_x)."""
        raise NotImplementedError

    def jacobian_many(self, Z):
        """Returns (X, J) with X: (n, d_x) and J: (n, d_x, d_z)."""
        raise NotImplementedError

    def to_dict(self):
        raise NotImplementedError

    def _check_batch(self, Z):
        Z = np.ascontiguousarray(Z, dtype=np.float64)
        if Z.ndim != 2 or Z.shape[1] != self.d_z:
            raise DimensionMismatch(
                f"batch must have shape (n, {self.d_z}), got {Z.shape}"
            )
        return Z


class LinearGenerator(Generator):
    """f(z) = A z + b. The Jacobian is A everywhere."""

    kind = "linear"

    def __init__(self, matrix, offset=None):
        A = np.asarray(matrix, dtype=np.float64)
        if A.ndim != 2:
            raise SchemaError("linear matrix must be 2-D")
        self.matrix = A
        self.offset = (
            np.zeros(A.shape[0]) if offset is None
            else np.asarray(offset, dtype=np.float64)
        )
        if self.offset.shape != (A.shape[0],):
            raise SchemaError("linear offset length must equal matrix rows")
        if not (np.all(np.isfinite(A)) and np.all(np.isfinite(self.offset))):
            raise SchemaError("linear generator has non-finite parameters")
        self.d_x, self.d_z = A.shape

    def forward_many(self, Z):
        Z = self._check_batch(Z)
        return Z @ self.matrix.T + self.offset

    def jacobian_many(self, Z):
        Z = self._check_batch(Z)
        X = Z @ self.matrix.T + self.offset
        J = np.broadcast_to(self.matrix, (Z.shape[0],) + self.matrix.shape).copy()
        return X, J

    def to_dict(self):
        return {
            "kind": "linear",
            "matrix": self.matrix.tolist(),
            "offset": self.offset.tolist(),
        }


class MlpLayer:
    def __init__(self, weights, bias, activation):
        W = np.ascontiguousarray(weights, dtype=np.float64)
        b = np.ascontiguousarray(bias, dtype=np.float64)
        if W.ndim != 2:
            raise SchemaError("layer weights must be a 2-D matrix")
        if b.shape != (W.shape[0],):
            raise SchemaError(
                f"bias length {b.shape} does not match weight rows {W.shape[0]}"
            )
        if activation not in ACTIVATIONS:
            raise SchemaError(f"unknown activation {activation!r}")
        if not (np.all(np.isfinite(W)) and np.all(np.isfinite(b))):
            raise SchemaError("layer has non-finite parameters")
        self.weights = W
        self.bias = b
        self.activation = activation

    @property
    def d_in(self):
        return self.weights.shape[1]

    @property
    def d_out(self):
        return self.weights.shape[0]


class MlpGenerator(Generator):
    """Dense feed-forward network evaluated through the kernel backend."""

    kind = "mlp"

    def __init__(self, layers):
        if not layers:
            raise SchemaError("mlp needs at least one layer")
        self.layers = list(layers)
        for i in range(1, len(self.layers)):
            if self.layers[i].d_in != self.layers[i - 1].d_out:
                raise SchemaError(
                    f"layer {i} expects input of size {self.layers[i].d_in} "
                    f"but layer {i - 1} outputs {self.layers[i - 1].d_out}"
                )
        self.d_z = self.layers[0].d_in
        self.d_x = self.layers[-1].d_out
        acts = [kernels.ACT_CODES[l.activation] for l in self.layers]
        self._packs = kernels.pack_all(
            [l.weights for l in self.layers], [l.bias for l in self.layers], acts
        )

    def forward_many(self, Z):
        Z = self._check_batch(Z)
        return kernels.mlp_forward(Z, self._packs)

    def jacobian_many(self, Z):
        Z = self._check_batch(Z)
        X, J = kernels.mlp_forward_jacobian(Z, self._packs)
        return X, J

    def to_dict(self):
        return {
            "kind": "mlp",
            "layers": [
                {
                    "weights": l.weights.tolist(),
                    "bias": l.bias.tolist(),
                    "activation": l.activation,
                }
                for l in self.layers
            ],
        }


class RadialWarpGenerator(Generator):
    """Annulus-pushing smooth map on R^2.

    Closed form, with r = ||z||:

        x = z * (r0 + r) / (r * (1 + exp(-s * r)))

    Writing rho(r) = (r0 + r) / (1 + exp(-s r)), the image of z is the
    point at radius rho(r) in the direction of z. rho is strictly
    increasing with rho(0) = r0 / 2, so the map pushes the whole plane
    onto the exterior of the disk of radius r0/2: the disk is a hole
    that no latent point reaches, and the pullback density accordingly
    collapses near z = 0 (the Jacobian blows up like r0 / (2 r)).

    The closed form is singular at exactly z = 0 (0/0). Evaluation
    substitutes r_eff = sqrt(||z||^2 + eps^2) with eps = 1e-12 so that
    forward/jacobian are total functions; for ||z|| >> eps this is the
    closed form to machine precision, and f(0) = 0 with a finite but
    enormous Jacobian, which is the honest picture of the hole.
    """

    kind = "radial_warp"
    _eps = 1e-12

    def __init__(self, inner_radius=None, sharpness=None):
        r0 = RADIAL_WARP_DEFAULTS["inner_radius"] if inner_radius is None else float(inner_radius)
        s = RADIAL_WARP_DEFAULTS["sharpness"] if sharpness is None else float(sharpness)
        if not (r0 > 0 and np.isfinite(r0)):
            raise SchemaError("radial_warp inner_radius must be positive")
        if not (s > 0 and np.isfinite(s)):
            raise SchemaError("radial_warp sharpness must be positive")
        self.inner_radius = r0
        self.sharpness = s
        self.d_z = 2
        self.d_x = 2

    def _rho(self, r):
        return (self.inner_radius + r) / (1.0 + np.exp(-self.sharpness * r))

    def _rho_prime(self, r):
        e = np.exp(-self.sharpness * r)
        denom = 1.0 + e
        return (denom + (self.inner_radius + r) * self.sharpness * e) / (denom * denom)

    def forward_many(self, Z):
        Z = self._check_batch(Z)
        r = np.sqrt(np.sum(Z * Z, axis=1) + self._eps**2)
        beta = self._rho(r) / r
        return Z * beta[:, None]

    def jacobian_many(self, Z):
        Z = self._check_batch(Z)
        r = np.sqrt(np.sum(Z * Z, axis=1) + self._eps**2)
        rho = self._rho(r)
        beta = rho / r
        # d beta / d r, exact derivative of the implemented forward
        beta_prime = (self._rho_prime(r) * r - rho) / (r * r)
        X = Z * beta[:, None]
        eye = np.eye(2)
        outer = Z[:, :, None] * Z[:, None, :]
        J = beta[:, None, None] * eye + (beta_prime / r)[:, None, None] * outer
        return X, J

    def to_dict(self):
        return {
            "kind": "radial_warp",
            "inner_radius": self.inner_radius,
            "sharpness": self.sharpness,
        }


def generator_from_dict(d):
    """Build a Generator from its schema dictionary."""
    if not isinstance(d, dict) or "kind" not in d:
        raise SchemaError("generator entry must be an object with a 'kind' field")
    kind = d["kind"]
    if kind == "linear":
        if "matrix" not in d:
            raise SchemaError("linear generator needs a 'matrix' field")
        return LinearGenerator(d["matrix"], d.get("offset"))
    if kind == "mlp":
        raw_layers = d.get("layers")
        if not isinstance(raw_layers, list) or not raw_layers:
            raise SchemaError("mlp generator needs a non-empty 'layers' list")
        layers = []
        for i, entry in enumerate(raw_layers):
            try:
                layers.append(
                    MlpLayer(entry["weights"], entry["bias"], entry["activation"])
                )
            except KeyError as exc:
                raise SchemaError(f"layer {i} is missing field {exc}") from exc
            except SchemaError as exc:
                raise SchemaError(f"layer {i}: {exc}") from exc
        try:
            return MlpGenerator(layers)
        except SchemaError as exc:
            raise SchemaError(str(exc)) from exc
    if kind == "radial_warp":
        return RadialWarpGenerator(d.get("inner_radius"), d.get("sharpness"))
    raise SchemaError(f"unknown generator kind {kind!r}")


def load_weight_file(path):
    """Load and validate a weight file; returns the Generator."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError:
        raise
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"{path}: top level must be an object")
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SchemaError(
            f"{path}: schema_version must be {SCHEMA_VERSION!r}, got {version!r}"
        )
    if "generator" not in doc:
        raise SchemaError(f"{path}: missing 'generator' field")
    try:
        gen = generator_from_dict(doc["generator"])
    except SchemaError as exc:
        raise SchemaError(f"{path}: {exc}") from exc
    for field in ("d_z", "d_x"):
        if field in doc and doc[field] != getattr(gen, field):
            raise SchemaError(
                f"{path}: declared {field}={doc[field]} but generator has "
                f"{field}={getattr(gen, field)}"
            )
    return gen


def save_weight_file(gen, path, metadata=None):
    """Write a Generator to the weight file schema; load is a fixed point."""
    doc = {
        "schema_version": SCHEMA_VERSION,
        "d_z": gen.d_z,
        "d_x": gen.d_x,
        "generator": gen.to_dict(),
        "metadata": dict(metadata or {}),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def make_lambertian(d_x=24, latent_dim=9, gain=0.8, seed=7):
    """Synthetic analog of a linearly-embedded 9-D manifold.

    f(z) = A tanh(gain * z) + c with A of full column rank. The image is
    an open subset of an affine 9-D subspace, so ambient-space geodesics
    on it are straight lines; the componentwise tanh makes straight
    latent paths curve in the ambient space.
    """
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(d_x, latent_dim))
    # re-condition so the manifold is well scaled
    u, _, vt = np.linalg.svd(A, full_matrices=False)
    A = u @ np.diag(np.linspace(1.0, 2.0, latent_dim)) @ vt
    c = rng.normal(size=d_x) * 0.1
    layers = [
        MlpLayer(gain * np.eye(latent_dim), np.zeros(latent_dim), "tanh"),
        MlpLayer(A, c, "identity"),
    ]
    return MlpGenerator(layers)


def builtin(name, **overrides):
    """Named generators available without a weight file."""
    if name == "radial-warp":
        return RadialWarpGenerator(
            overrides.get("inner_radius"), overrides.get("sharpness")
        )
    if name == "identity":
        d = int(overrides.get("dim", 2))
        return LinearGenerator(np.eye(d))
    if name == "lambertian":
        return make_lambertian(**overrides)
    raise KeyError(
        f"unknown builtin generator {name!r} "
        "(available: radial-warp, identity, lambertian)"
    )
