"""Diagnostics: lengths, density profiles, and the brute-force oracle.

The grid-graph oracle is deliberately independent of the descent
solver: it discretizes a box of latent space, connects neighboring
nodes, weights every edge by the ambient chord length (optionally
density-penalized), and runs Dijkstra. Agreement between the two is the
main correctness check for the solver.
"""

import csv
import io
import json
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from . import density, solver
from .errors import DegenerateSegment, InvalidConfig, UnreachableEndpoint


def curve_length(f, curve):
    """Chordal ambient length: sum of ||f(z^{k+1}) - f(z^k)||."""
    X = f.forward_many(curve.points)
    return float(np.sum(np.linalg.norm(np.diff(X, axis=0), axis=1)))


def nll_profile(f, prior, curve, ridge=None):
    """Per-point rho(z^k); non-PD metric points come back as +inf."""
    rho = density.regularizer_many(f, prior, curve.points, ridge=ridge)
    return [float(v) for v in rho]


def cosine_dissimilarity(f, curve, direction):
    """Per-segment 1 - cos(angle to a reference ambient direction)."""
    direction = np.asarray(direction, dtype=np.float64)
    dnorm = np.linalg.norm(direction)
    if dnorm <= 0:
        raise InvalidConfig("reference direction must be non-zero")
    X = f.forward_many(curve.points)
    seg = np.diff(X, axis=0)
    norms = np.linalg.norm(seg, axis=1)
    if np.any(norms <= 1e-12):
        k = int(np.argmin(norms))
        raise DegenerateSegment(f"curve segment {k} has zero ambient length")
    cos = seg @ direction / (norms * dnorm)
    return [float(v) for v in 1.0 - cos]


@dataclass(frozen=True)
class OracleConfig:
    extent: tuple = ((-1.5, 1.5), (-1.5, 1.5))  # (lo, hi) per latent dim
    resolution: int = 128                       # nodes per dimension
    neighbors: int = 16                         # 2-D: 8 or 16; 3-D: 26
    mu: float = 0.0                             # density penalty on edges

    def __post_init__(self):
        if len(self.extent) > 3:
            raise InvalidConfig("grid oracle only supports d_z <= 3")
        if self.resolution < 16:
            raise InvalidConfig("oracle resolution must be >= 16 per dimension")
        if self.mu < 0:
            raise InvalidConfig("oracle mu must be >= 0")


def _neighbor_offsets(d, neighbors):
    if d == 1:
        return [(1,)]
    if d == 2:
        base = [(1, 0), (0, 1), (1, 1), (1, -1)]
        if neighbors >= 16:
            base += [(2, 1), (2, -1), (1, 2), (1, -2)]
        return base
    # d == 3: the 26-neighborhood, half of it (undirected edges)
    offs = []
    for dx in (-1, 0, 1):
        for dy in (-1, 0, 1):
            for dz in (-1, 0, 1):
                if (dx, dy, dz) > (0, 0, 0):
                    offs.append((dx, dy, dz))
    return offs


def graph_geodesic_oracle(f, prior, z_a, z_b, oc):
    """Brute-force shortest path on a latent grid graph.

    Edge weight = chord * (1 + mu * mean(rho at the edge endpoints)).
    Returns (path_points, ambient_length); the length is the plain
    chordal ambient length of the chosen path, without the penalty.
    """
    z_a = np.asarray(z_a, dtype=np.float64)
    z_b = np.asarray(z_b, dtype=np.float64)
    d = len(oc.extent)
    if f.d_z != d:
        raise InvalidConfig(
            f"oracle extent has {d} dimensions but generator has d_z={f.d_z}"
        )
    for q, name in ((z_a, "z_a"), (z_b, "z_b")):
        for i, (lo, hi) in enumerate(oc.extent):
            if not (lo <= q[i] <= hi):
                raise InvalidConfig(f"{name} outside oracle extent in dim {i}")

    axes = [np.linspace(lo, hi, oc.resolution) for lo, hi in oc.extent]
    mesh = np.meshgrid(*axes, indexing="ij")
    nodes = np.stack([m.ravel() for m in mesh], axis=1)
    shape = tuple(oc.resolution for _ in range(d))
    n_grid = nodes.shape[0]

    # append the exact endpoints as extra nodes
    nodes = np.vstack([nodes, z_a[None, :], z_b[None, :]])
    i_a, i_b = n_grid, n_grid + 1

    X = f.forward_many(nodes)
    if oc.mu > 0:
        rho = density.regularizer_many(f, prior, nodes)
    else:
        rho = None

    rows, cols = [], []
    strides = np.array(
        [int(np.prod(shape[i + 1:])) for i in range(d)], dtype=np.int64
    )
    grid_idx = np.arange(n_grid, dtype=np.int64)
    coords = np.stack(np.unravel_index(grid_idx, shape), axis=1)
    for off in _neighbor_offsets(d, oc.neighbors):
        off = np.asarray(off, dtype=np.int64)
        nb = coords + off
        ok = np.all((nb >= 0) & (nb < oc.resolution), axis=1)
        src = grid_idx[ok]
        dst = (nb[ok] * strides).sum(axis=1)
        rows.append(src)
        cols.append(dst)

    # connect the endpoint nodes to every grid node within a small radius
    spacing = max((hi - lo) / (oc.resolution - 1) for lo, hi in oc.extent)
    for endpoint, ei in ((z_a, i_a), (z_b, i_b)):
        dist = np.linalg.norm(nodes[:n_grid] - endpoint, axis=1)
        near = np.where(dist <= 2.5 * spacing)[0]
        rows.append(near.astype(np.int64))
        cols.append(np.full(near.shape[0], ei, dtype=np.int64))

    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    chord = np.linalg.norm(X[rows] - X[cols], axis=1)
    weight = chord.copy()
    if rho is not None:
        weight = chord * (1.0 + oc.mu * 0.5 * (rho[rows] + rho[cols]))
    # Dijkstra needs strictly positive weights; collapsed chords get a floor
    weight = np.maximum(weight, 1e-15)

    n_total = n_grid + 2
    graph = coo_matrix((weight, (rows, cols)), shape=(n_total, n_total)).tocsr()
    dist, pred = dijkstra(
        graph, directed=False, indices=i_a, return_predecessors=True
    )
    if not np.isfinite(dist[i_b]):
        raise UnreachableEndpoint(
            "no grid path between the endpoints; enlarge the extent or resolution"
        )
    path_idx = [i_b]
    while path_idx[-1] != i_a:
        p = pred[path_idx[-1]]
        if p < 0:
            raise UnreachableEndpoint("predecessor chain broken")
        path_idx.append(int(p))
    path_idx.reverse()
    path = nodes[path_idx]
    length = float(
        np.sum(np.linalg.norm(np.diff(X[path_idx], axis=0), axis=1))
    )
    return path, length


@dataclass
class InterpolationReport:
    method: str
    ambient_length: float
    energy: float
    nll_profile: List[float]
    min_log_density: float
    oracle_length_gap: Optional[float] = None
    cosine_dissimilarity_profile: Optional[List[float]] = None

    def to_dict(self):
        def _clean(v):
            if isinstance(v, float) and not np.isfinite(v):
                return None  # JSON has no Infinity
            return v

        return {
            "method": self.method,
            "ambient_length": self.ambient_length,
            "energy": self.energy,
            "nll_profile": [_clean(v) for v in self.nll_profile],
            "min_log_density": _clean(self.min_log_density),
            "oracle_length_gap": _clean(self.oracle_length_gap)
            if self.oracle_length_gap is not None
            else None,
            "cosine_dissimilarity_profile": self.cosine_dissimilarity_profile,
        }


CSV_COLUMNS = ["method", "length", "energy", "min_log_density", "oracle_gap"]


def reports_to_csv(reports):
    """One row per method, columns: method,length,energy,min_log_density,oracle_gap."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in reports:
        writer.writerow(
            [
                r.method,
                repr(r.ambient_length),
                repr(r.energy),
                repr(r.min_log_density) if np.isfinite(r.min_log_density) else "",
                repr(r.oracle_length_gap) if r.oracle_length_gap is not None else "",
            ]
        )
    return buf.getvalue()


def build_report(f, prior, method, curve, ridge=None, oracle_length=None,
                 direction=None):
    profile = nll_profile(f, prior, curve, ridge=ridge)
    length = curve_length(f, curve)
    X = f.forward_many(curve.points)
    report = InterpolationReport(
        method=method,
        ambient_length=length,
        energy=solver.discrete_energy(X),
        nll_profile=profile,
        min_log_density=float(-np.max(profile)),
    )
    if oracle_length is not None and oracle_length > 0:
        report.oracle_length_gap = (length - oracle_length) / oracle_length
    if direction is not None:
        report.cosine_dissimilarity_profile = cosine_dissimilarity(
            f, curve, direction
        )
    return report


def compare(f, prior, z_a, z_b, cfg, oracle=None, direction=None):
    """Run straight_z, geod and geod_reg on the same endpoints.

    ``oracle`` may be an OracleConfig (d_z <= 3 only); the oracle length
    is computed once with the oracle's own mu and reported as a relative
    gap per method.
    """
    oracle_length = None
    if oracle is not None:
        _, oracle_length = graph_geodesic_oracle(f, prior, z_a, z_b, oracle)
    reports = []
    for method in solver.METHODS:
        curve = solver.interpolate(method, f, prior, z_a, z_b, cfg)
        reports.append(
            build_report(
                f, prior, method, curve,
                ridge=cfg.ridge, oracle_length=oracle_length, direction=direction,
            )
        )
    return reports


def report_to_json(report, indent=2):
    return json.dumps(report.to_dict(), indent=indent, sort_keys=True)
