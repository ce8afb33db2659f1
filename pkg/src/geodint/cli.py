"""Command-line interface.

Subcommands
-----------
interpolate       solve one method and write curve.json + report.json
compare           run all three methods, write per-method reports + compare.csv
validate-weights  schema check plus an fd spot check of a weight file

Precedence for every solver option: command-line flag > --config file >
built-in default. The effective configuration is echoed to
``<out>/config.json`` so a run can be reproduced exactly.

Output files
------------
curve.json    {"schema_version": "1", "K", "d_z", "d_x",
               "latent": [[...]], "ambient": [[...]], "rho": [...]}
report.json   InterpolationReport fields (non-finite floats become null)
compare.csv   method,length,energy,min_log_density,oracle_gap
"""

import argparse
import json
import os
import re
import sys

import numpy as np

from . import density, evaluation, generators, geometry, solver
from .errors import (
    GeodintError,
    InvalidConfig,
    ParseError,
    SchemaError,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_IO = 2

_SOLVER_KEYS = (
    "k", "eta", "mu", "max_iters", "tol", "ridge", "fd_step",
    "resample_every", "init_bump",
)


def _add_common(p):
    p.add_argument("--generator", default=None,
                   help="builtin generator name (radial-warp, identity, lambertian)")
    p.add_argument("--weights", default=None, help="path to a weight file")
    p.add_argument("--from", dest="z_from", default=None,
                   help="start point, comma separated (or @file.json)")
    p.add_argument("--to", dest="z_to", default=None,
                   help="end point, comma separated (or @file.json)")
    p.add_argument("--mu", type=float, default=None)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--k", type=int, default=None, help="curve points (default 35)")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--ridge", type=float, default=None)
    p.add_argument("--fd-step", type=float, default=None)
    p.add_argument("--resample-every", type=int, default=None)
    p.add_argument("--init-bump", type=float, default=None)
    p.add_argument("--inner-radius", type=float, default=None,
                   help="radial-warp override")
    p.add_argument("--sharpness", type=float, default=None,
                   help="radial-warp override")
    p.add_argument("--config", default=None, help="JSON file with defaults")
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--seed", type=int, default=0,
                   help="recorded in config.json; all current choices are deterministic")


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        super().__init__(*args, **kwargs)
        # accept "-1.2,0" as a value for --from/--to rather than an option
        self._negative_number_matcher = re.compile(r"^-(?:\d|\.\d)[\d.,eE+\-]*$")


def build_parser():
    parser = _Parser(
        prog="geodint",
        description="Geodesic interpolation on generative-model manifolds",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p_int = sub.add_parser("interpolate", help="run one interpolation method")
    _add_common(p_int)
    p_int.add_argument("--method", default="geod",
                       help="straight-z | geod | geod-reg")

    p_cmp = sub.add_parser("compare", help="run all three methods")
    _add_common(p_cmp)
    p_cmp.add_argument("--oracle", action="store_true",
                       help="add the grid-graph oracle column (d_z <= 3)")
    p_cmp.add_argument("--oracle-resolution", type=int, default=128)
    p_cmp.add_argument("--oracle-neighbors", type=int, default=16)

    p_val = sub.add_parser("validate-weights", help="check a weight file")
    p_val.add_argument("path")
    p_val.add_argument("--points", type=int, default=10)
    p_val.add_argument("--tol", type=float, default=1e-4)
    p_val.add_argument("--seed", type=int, default=0)
    return parser


def _parse_point(text, name):
    if text is None:
        raise InvalidConfig(f"missing required endpoint --{name}")
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return np.asarray(json.load(fh), dtype=np.float64)
    try:
        return np.asarray([float(v) for v in text.split(",")], dtype=np.float64)
    except ValueError as exc:
        raise InvalidConfig(f"--{name} must be comma-separated floats: {exc}") from exc


def _load_config_file(path):
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise InvalidConfig("config file must hold a JSON object")
    return doc


def _effective_solver_config(args, file_cfg):
    defaults = solver.SolverConfig()
    values = {}
    for key in _SOLVER_KEYS:
        attr = "K" if key == "k" else key
        flag = getattr(args, key, None)
        if flag is not None:
            values[attr] = flag
        elif key in file_cfg:
            values[attr] = file_cfg[key]
        else:
            values[attr] = getattr(defaults, attr)
    return solver.SolverConfig(**values)


def _resolve_generator(args, file_cfg):
    weights = args.weights or file_cfg.get("weights")
    name = args.generator or file_cfg.get("generator")
    if weights:
        return generators.load_weight_file(weights), {"weights": weights}
    if not name:
        raise InvalidConfig("give either --generator <builtin> or --weights <file>")
    overrides = {}
    if name == "radial-warp":
        if args.inner_radius is not None:
            overrides["inner_radius"] = args.inner_radius
        if args.sharpness is not None:
            overrides["sharpness"] = args.sharpness
    try:
        gen = generators.builtin(name, **overrides)
    except KeyError as exc:
        raise InvalidConfig(str(exc.args[0])) from exc
    return gen, {"generator": name, **overrides}


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _curve_document(f, prior, curve, ridge):
    X = f.forward_many(curve.points)
    rho = evaluation.nll_profile(f, prior, curve, ridge=ridge)
    return {
        "schema_version": "1",
        "K": curve.K,
        "d_z": curve.d_z,
        "d_x": f.d_x,
        "latent": curve.points.tolist(),
        "ambient": X.tolist(),
        "rho": [v if np.isfinite(v) else None for v in rho],
    }


def _echo_config(out_dir, args, cfg, gen_info):
    doc = {
        "command": args.command,
        "generator": gen_info,
        "solver": {
            "k": cfg.K, "eta": cfg.eta, "mu": cfg.mu,
            "max_iters": cfg.max_iters, "tol": cfg.tol, "ridge": cfg.ridge,
            "fd_step": cfg.fd_step, "resample_every": cfg.resample_every,
            "init_bump": cfg.init_bump,
        },
        "seed": args.seed,
    }
    if getattr(args, "z_from", None) is not None:
        doc["from"] = args.z_from
        doc["to"] = args.z_to
    if getattr(args, "method", None) is not None:
        doc["method"] = args.method
    if getattr(args, "oracle", False):
        doc["oracle"] = {
            "resolution": args.oracle_resolution,
            "neighbors": args.oracle_neighbors,
        }
    _write_json(os.path.join(out_dir, "config.json"), doc)


def _prepare_run(args):
    file_cfg = _load_config_file(args.config)
    cfg = _effective_solver_config(args, file_cfg)
    gen, gen_info = _resolve_generator(args, file_cfg)
    z_a = _parse_point(args.z_from or file_cfg.get("from"), "from")
    z_b = _parse_point(args.z_to or file_cfg.get("to"), "to")
    if z_a.shape != (gen.d_z,) or z_b.shape != (gen.d_z,):
        raise InvalidConfig(
            f"endpoints must have dimension {gen.d_z}, got "
            f"{z_a.shape[0]} and {z_b.shape[0]}"
        )
    prior = density.StandardNormalPrior(gen.d_z)
    return cfg, gen, gen_info, prior, z_a, z_b


def cmd_interpolate(args):
    cfg, gen, gen_info, prior, z_a, z_b = _prepare_run(args)
    curve = solver.interpolate(args.method, gen, prior, z_a, z_b, cfg)
    os.makedirs(args.out, exist_ok=True)
    _echo_config(args.out, args, cfg, gen_info)
    _write_json(os.path.join(args.out, "curve.json"),
                _curve_document(gen, prior, curve, cfg.ridge))
    report = evaluation.build_report(
        gen, prior, args.method.replace("-", "_"), curve, ridge=cfg.ridge
    )
    _write_json(os.path.join(args.out, "report.json"), report.to_dict())
    print(f"wrote {args.out}/curve.json and {args.out}/report.json")
    return EXIT_OK


def cmd_compare(args):
    cfg, gen, gen_info, prior, z_a, z_b = _prepare_run(args)
    oracle = None
    if args.oracle:
        if gen.d_z > 3:
            raise InvalidConfig("the grid oracle needs d_z <= 3")
        span = float(np.max(np.abs(np.stack([z_a, z_b])))) * 1.25 + 0.25
        oracle = evaluation.OracleConfig(
            extent=tuple((-span, span) for _ in range(gen.d_z)),
            resolution=args.oracle_resolution,
            neighbors=args.oracle_neighbors,
            mu=0.0,
        )
    reports = evaluation.compare(gen, prior, z_a, z_b, cfg, oracle=oracle)
    os.makedirs(args.out, exist_ok=True)
    _echo_config(args.out, args, cfg, gen_info)
    for report in reports:
        _write_json(
            os.path.join(args.out, f"report_{report.method}.json"),
            report.to_dict(),
        )
    with open(os.path.join(args.out, "compare.csv"), "w", encoding="utf-8") as fh:
        fh.write(evaluation.reports_to_csv(reports))
    for report in reports:
        gap = (f"  oracle_gap={report.oracle_length_gap:+.4f}"
               if report.oracle_length_gap is not None else "")
        print(
            f"{report.method:10s} length={report.ambient_length:.6f} "
            f"min_log_density={report.min_log_density:.4f}{gap}"
        )
    return EXIT_OK


def cmd_validate_weights(args):
    try:
        gen = generators.load_weight_file(args.path)
    except (ParseError, SchemaError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR
    rng = np.random.default_rng(args.seed)
    worst = 0.0
    for _ in range(args.points):
        z = rng.normal(size=gen.d_z)
        J = gen.jacobian(z)
        h = geometry.default_fd_step(z)
        J_fd = np.stack(
            [
                (gen.forward(z + h * e) - gen.forward(z - h * e)) / (2 * h)
                for e in np.eye(gen.d_z)
            ],
            axis=1,
        )
        denom = max(float(np.linalg.norm(J)), 1e-12)
        worst = max(worst, float(np.linalg.norm(J - J_fd)) / denom)
    print(
        f"schema OK (kind={gen.kind}, d_z={gen.d_z}, d_x={gen.d_x}); "
        f"max Jacobian fd discrepancy over {args.points} points: {worst:.3e}"
    )
    if worst > args.tol:
        print(f"FAIL: discrepancy exceeds tolerance {args.tol:g}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "interpolate":
            return cmd_interpolate(args)
        if args.command == "compare":
            return cmd_compare(args)
        return cmd_validate_weights(args)
    except OSError as exc:
        filename = getattr(exc, "filename", None)
        where = f" ({filename})" if filename else ""
        print(f"I/O error{where}: {exc}", file=sys.stderr)
        return EXIT_IO
    except GeodintError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
