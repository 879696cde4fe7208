"""Command-line front end: ``run``, ``sweep`` and ``verify``.

Exit codes: 0 when the run completed within its guarantees, 2 when a
guarantee was violated (iteration bound exceeded, ``g(x) > eps`` or a
failed verification check), 1 on configuration errors.
"""

from __future__ import annotations

import argparse
import copy
import json
import math
import sys
from pathlib import Path

import jsonschema
import numpy as np

from . import deterministic, stochastic
from .bounds import check_sigma
from .problems import instance_from_dict
from .reports import report_to_dict

EXIT_OK, EXIT_CONFIG, EXIT_VIOLATED = 0, 1, 2

DETERMINISTIC = {
    "adaptive_md": deterministic.adaptive_md,
    "restarted_md": deterministic.restarted_md,
    "general_md": deterministic.general_md,
}
STOCHASTIC = {
    "adaptive_smd": stochastic.adaptive_smd,
    "fixed_smd": stochastic.fixed_smd,
    "restarted_smd_expectation": stochastic.restarted_smd_expectation,
    "restarted_smd_deviation": stochastic.restarted_smd_deviation,
}

_vec = {"type": "array", "items": {"type": "number"}}
_mat = {"type": "array", "items": _vec}
_quad = {
    "type": "object",
    "properties": {"Q": {"type": ["array", "null"], "items": _vec}, "q": _vec, "c": {"type": "number"}},
    "additionalProperties": False,
}
_set = {
    "type": "object",
    "properties": {"kind": {"enum": ["simplex", "box"]}, "dim": {"type": "integer"},
                   "lower": _vec, "upper": _vec},
    "required": ["kind"],
    "additionalProperties": False,
}
_setup = {
    "oneOf": [
        {"enum": ["entropy", "euclidean"]},
        {
            "type": "object",
            "properties": {"name": {"enum": ["entropy", "euclidean"]}, "set": _set, "center": _vec},
            "required": ["name"],
            "additionalProperties": False,
        },
    ]
}
INSTANCE_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {"enum": ["linear_max", "quadratic_simplex", "quadratic"]},
        "setup": _setup,
        "c": _vec,
        "constraint_vectors": _mat,
        "offsets": _vec,
        "A": _mat,
        "objective": _quad,
        "constraints": {"type": "array", "items": _quad},
        "theta0_sq": {"type": "number", "exclusiveMinimum": 0},
        "mu": {"type": "number", "minimum": 0},
        "constraint_mu": {"type": "number", "minimum": 0},
        "seed": {"type": "integer"},
        "x0": _vec,
        "r0_sq": {"type": "number", "exclusiveMinimum": 0},
        "noise": {
            "type": "object",
            "properties": {"objective": {"type": "number", "minimum": 0},
                           "constraint": {"type": "number", "minimum": 0}},
            "additionalProperties": False,
        },
        "known_optimum": {
            "type": "object",
            "properties": {"f_star": {"type": "number"}, "x_star": _vec,
                           "provenance": {"enum": ["analytic", "grid", "vertex_enumeration"]},
                           "resolution": {"type": "number"}},
            "required": ["f_star", "x_star"],
            "additionalProperties": False,
        },
    },
    "required": ["kind"],
    "additionalProperties": False,
}
CONFIG_SCHEMA = {
    "type": "object",
    "properties": {
        "schema_version": {"const": 1},
        "instance": INSTANCE_SCHEMA,
        "solver": {"enum": sorted(DETERMINISTIC) + sorted(STOCHASTIC)},
        "params": {
            "type": "object",
            "properties": {
                "epsilon": {"type": "number", "exclusiveMinimum": 0},
                "sigma": {"type": "number"},
                "mu": {"type": "number"},
                "omega": {"type": "number", "exclusiveMinimum": 0},
                "theta0_sq": {"type": "number", "exclusiveMinimum": 0},
                "r0_sq": {"type": "number", "exclusiveMinimum": 0},
                "x0": _vec,
                "N": {"type": "integer", "minimum": 1},
                "max_iterations_guard": {"type": "integer", "minimum": 1},
                "recover_dual": {"type": "boolean"},
                "audit": {"type": "boolean"},
            },
            "required": ["epsilon"],
            "additionalProperties": False,
        },
        "seed": {"type": "integer", "minimum": 0, "maximum": 2**64 - 1},
        "n_seeds": {"type": "integer", "minimum": 1},
        "outputs": {
            "type": "object",
            "properties": {"trace": {"type": "string"}, "report": {"type": "string"}},
            "additionalProperties": False,
        },
    },
    "required": ["schema_version", "instance", "solver", "params"],
    "additionalProperties": False,
}


class ConfigError(ValueError):
    pass


def load_config(path):
    """Parse and schema-validate a config file; raise ``ConfigError`` with
    line or field diagnostics."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from e
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    validate_config(cfg)
    return cfg


def validate_config(cfg):
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"invalid config at {where}: {e.message}") from e
    sigma = cfg["params"].get("sigma")
    if sigma is not None:
        try:
            check_sigma(sigma)
        except ValueError as e:
            raise ConfigError(str(e)) from e


def _solver_config(cfg, seed, trace):
    prm = cfg["params"]
    common = {k: prm[k] for k in ("mu", "omega", "theta0_sq", "r0_sq") if k in prm}
    if "x0" in prm:
        common["x0"] = np.asarray(prm["x0"], dtype=float)
    if cfg["solver"] in DETERMINISTIC:
        return deterministic.SolverConfig(
            epsilon=prm["epsilon"],
            max_iterations_guard=prm.get("max_iterations_guard"),
            record_trace=trace,
            recover_dual=prm.get("recover_dual", True),
            audit=prm.get("audit", False),
            **common,
        )
    return stochastic.StochasticRunConfig(
        epsilon=prm["epsilon"], sigma=prm.get("sigma"), seed=seed, fixed_N=prm.get("N"),
        record_trace=trace, **common,
    )


def execute(cfg, seed=None, trace=False):
    """Build the instance and run the configured solver.  Returns
    ``(instance, report)``."""
    seed = cfg.get("seed", 0) if seed is None else seed
    try:
        instance = instance_from_dict(cfg["instance"])
        solver_cfg = _solver_config(cfg, seed, trace)
    except (ValueError, KeyError, TypeError) as e:
        raise ConfigError(f"cannot build run: {e}") from e
    name = cfg["solver"]
    solver = DETERMINISTIC.get(name) or STOCHASTIC[name]
    try:
        report = solver(instance, solver_cfg)
    except ValueError as e:
        raise ConfigError(f"{name}: {e}") from e
    return instance, report


def violated(report):
    if report.within_bound is False:
        return True
    return report.g_bar is not None and report.g_bar > report.epsilon


def report_document(cfg, seed, instance, report):
    resolved = copy.deepcopy(cfg)
    resolved["seed"] = seed
    resolved.setdefault("params", {})
    resolved["resolved"] = {"theta0_sq": instance.theta0_sq}
    doc = {"config": resolved}
    doc.update(report_to_dict(report))
    return doc


def _write_json(path, doc):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(doc, indent=2, allow_nan=True) + "\n")


def cmd_run(args):
    cfg = load_config(args.config)
    seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    outputs = cfg.get("outputs", {})
    want_trace = args.trace or "trace" in outputs
    instance, report = execute(cfg, seed, want_trace)
    out = Path(args.out_dir)
    _write_json(out / outputs.get("report", "report.json"), report_document(cfg, seed, instance, report))
    if want_trace and report.trace is not None:
        tpath = out / outputs.get("trace", "trace.csv")
        tpath.parent.mkdir(parents=True, exist_ok=True)
        tpath.write_text(report.trace.to_csv())
    bad = violated(report)
    print(f"{cfg['solver']}: iterations={report.iterations} bound={report.theoretical_bound} "
          f"f_bar={report.f_bar} g_bar={report.g_bar} -> {'VIOLATED' if bad else 'ok'}")
    return EXIT_VIOLATED if bad else EXIT_OK


def _reference_value(instance):
    if instance.known_optimum is not None:
        return instance.known_optimum.f_star
    from .verify import grid_optimum

    return grid_optimum(instance, 1e-3).f_star


def cmd_sweep(args):
    cfg = load_config(args.config)
    base_seed = args.seed if args.seed is not None else cfg.get("seed", 0)
    n_seeds = cfg.get("n_seeds", 1)
    eps = cfg["params"]["epsilon"]
    sigma = cfg["params"].get("sigma")
    out = Path(args.out_dir)
    gaps, failures, empty = [], 0, 0
    replicates = []
    f_star = None
    for i in range(n_seeds):
        seed = base_seed + i
        instance, report = execute(cfg, seed, args.trace)
        if f_star is None:
            f_star = _reference_value(instance)
        if args.trace and report.trace is not None:
            tpath = out / "traces" / f"trace_seed{seed}.csv"
            tpath.parent.mkdir(parents=True, exist_ok=True)
            tpath.write_text(report.trace.to_csv())
        ok = report.x_bar is not None and report.f_bar - f_star <= eps and report.g_bar <= eps
        failures += not ok
        if report.x_bar is None:
            empty += 1
        else:
            gaps.append(report.f_bar - f_star)
        replicates.append({"seed": seed, "iterations": report.iterations,
                           "f_bar": report.f_bar, "g_bar": report.g_bar, "failed": not ok})
    gaps_arr = np.array(gaps)
    doc = {
        "config": dict(cfg, seed=base_seed),
        "n_seeds": n_seeds,
        "f_star": f_star,
        "failures": failures,
        "failure_rate": failures / n_seeds,
        "empty_outputs": empty,
        "mean_gap": float(gaps_arr.mean()) if gaps else None,
        "std_gap": float(gaps_arr.std(ddof=1)) if len(gaps) > 1 else None,
        "replicates": replicates,
    }
    bad = False
    if sigma is not None:
        band = sigma + 3.0 * math.sqrt(sigma * (1 - sigma) / n_seeds)
        doc["failure_band"] = band
        bad = doc["failure_rate"] > band
    doc["within_band"] = not bad
    _write_json(out / cfg.get("outputs", {}).get("report", "sweep_report.json"), doc)
    print(f"sweep {cfg['solver']}: {failures}/{n_seeds} failures -> {'VIOLATED' if bad else 'ok'}")
    return EXIT_VIOLATED if bad else EXIT_OK


def cmd_verify(args):
    from .verify import verify_suite

    results = verify_suite(corrupt_bregman=args.corrupt_bregman)
    failed = [r for r in results if r.status == "fail"]
    for r in results:
        print(f"{r.status.upper():4s} {r.name}: {r.detail}")
    if failed:
        print("failed invariants: " + ", ".join(r.name for r in failed))
        return EXIT_VIOLATED
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="switchmd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, fn in (("run", cmd_run), ("sweep", cmd_sweep)):
        p = sub.add_parser(verb)
        p.add_argument("--config", required=True)
        p.add_argument("--out-dir", default=".")
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--trace", action="store_true")
        p.set_defaults(func=fn)
    p = sub.add_parser("verify")
    p.add_argument("--corrupt-bregman", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
