"""Command line front end: ``hltlab <command> [options]``.

Every command prints a human readable summary, or with ``--json`` a single
JSON document whose only run-dependent field is ``timestamp``.  Exit codes:
0 success, 1 a pass-class check failed, 2 malformed input or configuration,
3 an input outside a routine's domain, 4 a file could not be read or written.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from . import acceptance as acc
from . import constants as K
from . import inequalities as I
from .errors import ConfigError, DomainError
from .fields import (GENERATOR_KINDS, VectorField, biot_savart_with_report, curl, divergence, generate_field,
                     lp_norm, make_grid)
from .io import read_field, read_matrix, write_field, write_matrix
from .localization import ERROR_MODES, b_for_shells, build_partition, localization_inequality_check
from .operators import KINDS, assemble_hamiltonian
from .oracles import TRIALS, run_oracle
from .spectra import summarize

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3, 4


def default_seed() -> int:
    raw = os.environ.get("HLTLAB_SEED", "0")
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"HLTLAB_SEED must be an integer, got {raw!r}") from None


# --------------------------------------------------------------------------
# report configuration schema
# --------------------------------------------------------------------------

FIELD_OPTIONS = {
    "V": {"amplitude": float, "negative": bool, "width": float, "bumps": int, "bandlimit": str},
    "A": {"amplitude": float, "width": float, "bumps": int, "bandlimit": str, "solenoidal": bool},
    "psi": {"width": float, "bumps": int, "amplitude": float, "bandlimit": str},
}
SCALAR_KEYS = {"s": float, "gamma": float, "gamma_mix": float, "eps": float, "r": float, "lam": float,
               "u": float, "beta": float, "cap": float, "basis": str}
TOP_KEYS = {"name", "grid", "seeds", *SCALAR_KEYS, *FIELD_OPTIONS}


def _typed(value, kind, where: str):
    if kind is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            if value in ("inf", "Infinity"):
                return math.inf
            raise ConfigError(f"{where} must be a number, got {value!r}")
        return float(value)
    if kind is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{where} must be an integer, got {value!r}")
        return value
    if not isinstance(value, kind):
        raise ConfigError(f"{where} must be {kind.__name__}, got {value!r}")
    return value


def _reject_unknown(d: dict, allowed, where: str) -> None:
    if not isinstance(d, dict):
        raise ConfigError(f"{where} must be an object")
    extra = set(d) - set(allowed)
    if extra:
        raise ConfigError(f"unknown keys in {where}: {sorted(extra)}")


def validate_report_config(cfg: Any) -> dict:
    """Check a report configuration against the schema and return a normalized copy.

    Unknown keys anywhere are rejected before any computation starts.
    """
    _reject_unknown(cfg, TOP_KEYS, "config")
    if cfg.get("name") not in I.REPORT_NAMES:
        raise ConfigError(f"config.name must be one of {I.REPORT_NAMES}, got {cfg.get('name')!r}")
    out: dict[str, Any] = {"name": cfg["name"]}
    grid = cfg.get("grid", {})
    _reject_unknown(grid, {"n", "box", "offset"}, "config.grid")
    out["grid"] = {"n": _typed(grid.get("n", 8), int, "grid.n"),
                   "box": _typed(grid.get("box", 2 * math.pi), float, "grid.box"),
                   "offset": _typed(grid.get("offset", True), bool, "grid.offset")}
    seeds = cfg.get("seeds", {})
    _reject_unknown(seeds, FIELD_OPTIONS, "config.seeds")
    out["seeds"] = {k: _typed(v, int, f"seeds.{k}") for k, v in seeds.items()}
    for key, kind in SCALAR_KEYS.items():
        if key in cfg:
            out[key] = _typed(cfg[key], kind, key)
    for key, opts in FIELD_OPTIONS.items():
        if key in cfg:
            _reject_unknown(cfg[key], opts, f"config.{key}")
            out[key] = {k: _typed(v, opts[k], f"{key}.{k}") for k, v in cfg[key].items()}
    return out


def load_config(path) -> dict:
    try:
        raw = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return validate_report_config(raw)


# --------------------------------------------------------------------------
# output helpers
# --------------------------------------------------------------------------

def jsonable(obj):
    """Plain JSON types; non-finite floats become the strings 'inf', '-inf', 'nan'."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else ("nan" if math.isnan(x) else ("inf" if x > 0 else "-inf"))
    return obj


def dump(command: str, result, path=None) -> str:
    doc = {"command": command, "version": __version__,
           "timestamp": datetime.now(timezone.utc).isoformat(), "result": jsonable(result)}
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path:
        Path(path).write_text(text)
    return text


def write_csv(path, rows: list[dict]) -> None:
    keys = list(dict.fromkeys(k for row in rows for k in row))
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=keys)
        writer.writeheader()
        writer.writerows(jsonable(rows))


@dataclass
class Outcome:
    result: Any
    lines: list[str] = field(default_factory=list)
    failed: bool = False


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _parse_params(items) -> dict[str, float]:
    out = {}
    for item in (piece for group in items or [] for piece in group.split(",") if piece):
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"parameters are key=value, got {item!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise ConfigError(f"parameter {key} needs a number, got {value!r}") from None
    return out


def float_list(text: str) -> list[float]:
    """Comma separated numbers, for options such as ``--moments 0.5,1``."""
    try:
        return [float(x) for x in text.split(",") if x]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated numbers, got {text!r}") from None


def grid_arg(text: str) -> dict:
    """``n=8,box=6.283,offset=true`` as a dict."""
    out = {}
    for piece in text.split(","):
        key, _, value = piece.partition("=")
        if key == "n":
            out["n"] = int(value)
        elif key == "box":
            out["box"] = float(value)
        elif key == "offset":
            out["offset"] = value.lower() in ("1", "true", "yes")
        else:
            raise argparse.ArgumentTypeError(f"unknown grid key {key!r}; use n, box, offset")
    return out


def _grid(args):
    spec = {"n": args.n, "box": args.box, **(args.grid or {})}
    return make_grid(spec["n"], spec["box"], spec.get("offset", True))


def _flatten(groups) -> list[float]:
    return [x for g in groups for x in g]


def cmd_constants(args) -> Outcome:
    if args.name and not args.all_defaults:
        params = {**K.DEFAULT_PARAMS.get(args.name, {}), **_parse_params(args.param)}
        value = K.evaluate(args.name, **params)
        rows = [{"name": args.name, "value": value, **params}]
    else:
        table = K.default_table()
        rows = [{"name": k, "value": v, **table.params[k]} for k, v in table.values.items()]
    if args.csv:
        write_csv(args.csv, rows)
    lines = [f"{r['name']:<26s} {r['value']:.16g}" for r in rows]
    return Outcome(rows, lines)


def cmd_field_gen(args) -> Outcome:
    grid = _grid(args)
    seed = default_seed() if args.seed is None else args.seed
    opts = {"bumps": args.bumps, "width": args.width, "amplitude": args.amplitude,
            "negative": args.negative, "bandlimit": args.bandlimit}
    f = generate_field(seed, args.kind, grid, **opts)
    write_field(args.out, f)
    info = _field_info(f)
    return Outcome({"path": str(args.out), "seed": seed, "kind": args.kind, **info},
                   [f"wrote {args.kind} field to {args.out}"] + [f"{k}: {v}" for k, v in info.items()])


def _field_info(f) -> dict:
    info = {"grid": f.grid.as_dict(), "components": f.components,
            "l2": lp_norm(f, 2), "sup": lp_norm(f, math.inf)}
    if isinstance(f, VectorField):
        B = curl(f)
        _, report = biot_savart_with_report(B)
        info.update(divergence_sup=float(np.max(np.abs(divergence(f).values))),
                    field_energy=float(lp_norm(B, 2) ** 2),
                    curl_solenoidal=not report.projected)
    return info


def cmd_field_info(args) -> Outcome:
    info = _field_info(read_field(args.path))
    return Outcome(info, [f"{k}: {v}" for k, v in info.items()])


def cmd_op_build(args) -> Outcome:
    grid = _grid(args)
    A = read_field(args.A) if args.A else None
    V = read_field(args.V) if args.V else None
    cap = math.inf if args.cap is None else args.cap
    H = assemble_hamiltonian(args.kind, grid, args.s, A=A, hardy_weight=args.hardy_weight, cap=cap, V=V,
                             basis=args.basis)
    write_matrix(args.out, H, kind=args.kind, s=args.s, hardy_weight=args.hardy_weight,
                 cap=jsonable(cap))
    res = {"path": str(args.out), "dim": H.dim, "basis": H.basis, "norm": H.norm()}
    return Outcome(res, [f"wrote {H.dim}x{H.dim} {H.basis} operator to {args.out}"])


def cmd_spectrum(args) -> Outcome:
    H, header = read_matrix(args.path)
    summary = summarize(H, _flatten(args.moments), _flatten(args.levels))
    res = summary.as_dict(include_eigenvalues=args.eigenvalues)
    lines = [f"dim {res['dim']}, spectrum [{res['min']:.6g}, {res['max']:.6g}]"]
    lines += [f"Tr(H)_-^{g} = {v:.10g}" for g, v in res["negative_trace_moments"].items()]
    lines += [f"#(eig <= {a}) = {c}" for a, c in res["counts"].items()]
    return Outcome(res, lines)


def cmd_oracle(args) -> Outcome:
    seed = default_seed() if args.seed is None else args.seed
    names = list(TRIALS) if args.name == "all" else [args.name]
    res, lines, failed = {}, [], False
    for name in names:
        summ = run_oracle(name, args.trials, seed)
        res[name] = summ.as_dict()
        control = name == "monotonicity_control"
        ok = summ.failures >= 1 if control else summ.failures == 0
        failed |= not ok
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {summ.failures}/{summ.trials} failures"
                     + (" (counterexamples expected)" if control else ""))
    return Outcome(res, lines, failed)


def cmd_localize(args) -> Outcome:
    grid = _grid(args)
    A = read_field(args.A) if args.A else generate_field(args.seed, "A", grid, amplitude=args.amplitude)
    b = args.b if args.b is not None else b_for_shells(grid, args.l)
    part = build_partition(b, args.l, args.count, grid)
    v = localization_inequality_check(grid, A, args.s, part, mode=args.mode)
    res = {"name": v.name, "s": v.s, "b": v.b, "l": v.l, "count": v.count, "extended": part.extended,
           "partition_residual": part.residual(), "min_eigenvalue_of_gap": v.min_eigenvalue_of_gap,
           "tolerance": v.tolerance, "passed": v.passed, "errors": list(v.errors)}
    line = (f"[{'PASS' if v.passed else 'FAIL'}] {v.name} s={v.s} l={v.l} b={v.b:.4g}: "
            f"min eig {v.min_eigenvalue_of_gap:.4g} (tol {v.tolerance:.2g})")
    return Outcome(res, [line], failed=not v.passed)


def _run_job(job):
    cfg, scale = job
    return I.run_report(cfg, scale).as_dict()


def cmd_report(args) -> Outcome:
    if args.config:
        configs = [load_config(args.config)]
        if configs[0]["name"] != args.name:
            raise ConfigError(f"config names {configs[0]['name']!r} but --name is {args.name!r}")
    else:
        if args.name not in I.REPORT_NAMES:
            raise ConfigError(f"--name must be one of {I.REPORT_NAMES}")
        configs = [I.batch_config(args.name, i, args.n, variant=args.variant) for i in range(args.batch)]
    jobs = [(c, args.scale) for c in configs]
    if args.jobs > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            # map keeps submission order, so results merge by job index
            reports = list(pool.map(_run_job, jobs))
    else:
        reports = [_run_job(j) for j in jobs]
    failed = any(r["verdict"] == "fail" for r in reports)
    if args.csv:
        write_csv(args.csv, [{"index": i, "name": r["name"], "lhs": r["lhs"], "ratio": r["ratio"],
                              "verdict": r["verdict"], **r["rhs_terms"]} for i, r in enumerate(reports)])
    lines = [f"{i:3d} {r['name']}: lhs {r['lhs']:.6g} ratio {r['ratio']:.6g} [{r['verdict']}]"
             for i, r in enumerate(reports)]
    if len(reports) > 1:
        lines.append(f"sup ratio {max(r['ratio'] for r in reports):.6g}")
    result = reports[0] if len(reports) == 1 else {"reports": reports,
                                                   "sup_ratio": max(r["ratio"] for r in reports)}
    if args.out:
        Path(args.out).write_text(json.dumps(jsonable(result), indent=2, sort_keys=True) + "\n")
    return Outcome(result, lines, failed)


def cmd_acceptance(args) -> Outcome:
    results = acc.run_all(args.only)
    return Outcome([r.as_dict() for r in results], [r.line() for r in results],
                   failed=not all(r.passed for r in results))


# --------------------------------------------------------------------------
# parser
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS lets the flags appear before or after the subcommand
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="print a JSON document instead of text")
    common.add_argument("--out-json", metavar="PATH", default=argparse.SUPPRESS,
                        help="also write the JSON document to PATH")

    p = argparse.ArgumentParser(prog="hltlab", parents=[common],
                                description="Lattice experiments for fractional Pauli trace inequalities.")
    p.add_argument("--version", action="version", version=f"hltlab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", parents=[common], help="evaluate explicit constants")
    c.add_argument("--name", choices=sorted(K.REGISTRY))
    c.add_argument("--param", "--params", dest="param", action="append", metavar="KEY=VALUE[,...]")
    c.add_argument("--all-defaults", action="store_true", help="the full default table (also the default)")
    c.add_argument("--csv", metavar="PATH")
    c.set_defaults(func=cmd_constants)

    f = sub.add_parser("field", parents=[common], help="generate or inspect field files")
    fsub = f.add_subparsers(dest="field_command", required=True)
    g = fsub.add_parser("gen", parents=[common])
    g.add_argument("--kind", choices=GENERATOR_KINDS, required=True)
    g.add_argument("--n", type=int, default=8)
    g.add_argument("--box", type=float, default=2 * math.pi)
    g.add_argument("--grid", type=grid_arg, metavar="n=8,box=6.283", help="overrides --n/--box")
    g.add_argument("--seed", type=int)
    g.add_argument("--bumps", type=int, default=3)
    g.add_argument("--width", type=float, default=0.6)
    g.add_argument("--amplitude", type=float, default=1.0)
    g.add_argument("--negative", action="store_true")
    g.add_argument("--bandlimit", choices=["half"])
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_field_gen)
    fi = fsub.add_parser("info", parents=[common])
    fi.add_argument("path")
    fi.set_defaults(func=cmd_field_info)

    o = sub.add_parser("op", parents=[common], help="assemble operators")
    osub = o.add_subparsers(dest="op_command", required=True)
    ob = osub.add_parser("build", parents=[common])
    ob.add_argument("--kind", choices=KINDS, required=True)
    ob.add_argument("--n", type=int, default=8)
    ob.add_argument("--box", type=float, default=2 * math.pi)
    ob.add_argument("--grid", type=grid_arg, metavar="n=8,box=6.283", help="overrides --n/--box")
    ob.add_argument("--s", type=float, default=1.0)
    ob.add_argument("--A", metavar="PATH")
    ob.add_argument("--V", metavar="PATH")
    ob.add_argument("--hardy-weight", type=float, default=0.0)
    ob.add_argument("--cap", type=float)
    ob.add_argument("--basis", choices=["scalar", "spinor"])
    ob.add_argument("--out", required=True)
    ob.set_defaults(func=cmd_op_build)

    s = sub.add_parser("spectrum", parents=[common], help="eigenvalues and negative trace moments")
    s.add_argument("path")
    s.add_argument("--moments", type=float_list, nargs="+", default=[[0.0, 0.5, 1.0]])
    s.add_argument("--levels", "--count-below", dest="levels", type=float_list, nargs="+", default=[[0.0]])
    s.add_argument("--eigenvalues", action="store_true")
    s.set_defaults(func=cmd_spectrum)

    r = sub.add_parser("oracle", parents=[common], help="randomized matrix inequality suites")
    rsub = r.add_subparsers(dest="oracle_command", required=True)
    rr = rsub.add_parser("run", parents=[common])
    rr.add_argument("--name", choices=[*TRIALS, "all"], default="all")
    rr.add_argument("--trials", type=int, default=500)
    rr.add_argument("--seed", type=int)
    rr.set_defaults(func=cmd_oracle)

    lo = sub.add_parser("localize", parents=[common], help="lattice localization inequality")
    lo.add_argument("--s", type=float, default=0.5)
    lo.add_argument("--l", type=float, default=2.0)
    lo.add_argument("--b", type=float)
    lo.add_argument("--count", type=int, default=3)
    lo.add_argument("--n", type=int, default=8)
    lo.add_argument("--box", type=float, default=2 * math.pi)
    lo.add_argument("--grid", type=grid_arg, metavar="n=8,box=6.283", help="overrides --n/--box")
    lo.add_argument("--A", metavar="PATH")
    lo.add_argument("--seed", type=int, default=5)
    lo.add_argument("--amplitude", type=float, default=0.5)
    lo.add_argument("--mode", choices=ERROR_MODES, default="accumulated")
    lo.set_defaults(func=cmd_localize)

    rp = sub.add_parser("report", parents=[common], help="lhs versus rhs reports")
    rp.add_argument("--name", choices=I.REPORT_NAMES, required=True)
    rp.add_argument("--config", metavar="PATH", help="JSON report configuration")
    rp.add_argument("--out", metavar="PATH", help="write the report JSON here")
    rp.add_argument("--batch", type=int, default=1, help="number of default seeded configs")
    rp.add_argument("--variant", choices=["r_inf", "r_2"])
    rp.add_argument("--n", type=int, default=8)
    rp.add_argument("--scale", type=float, default=1.0)
    rp.add_argument("--jobs", type=int, default=1)
    rp.add_argument("--csv", metavar="PATH")
    rp.set_defaults(func=cmd_report)

    a = sub.add_parser("acceptance", parents=[common], help="run the acceptance suite")
    a.add_argument("--only", type=int, nargs="+", choices=sorted(acc.CRITERIA))
    a.set_defaults(func=cmd_acceptance)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = " ".join(x for x in (args.command, getattr(args, "field_command", None),
                                   getattr(args, "op_command", None), getattr(args, "oracle_command", None)) if x)
    try:
        outcome = args.func(args)
    except ConfigError as exc:
        print(f"hltlab: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"hltlab: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"hltlab: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"hltlab: {exc}", file=sys.stderr)
        return EXIT_IO
    as_json = getattr(args, "json", False)
    text = dump(command, outcome.result, getattr(args, "out_json", None))
    print(text if as_json else "\n".join(outcome.lines), end="" if as_json else "\n")
    return EXIT_FAIL if outcome.failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
