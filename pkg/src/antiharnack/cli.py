"""Reproducible experiment runner.

Every run is described by a RunConfig (command, parameters, quadrature
settings, optional field and seeds, output destination).  Configs load
from a JSON file and individual flags override file values, so a run is
reproducible from its config alone.  Data rows go to CSV with shortest
round-trip float formatting (diff-able artifacts); a JSON summary is
echoed to standard output.

Exit codes: 0 success, 1 numerical rejection or failed check, 2 usage
error.  The only environment variable consulted is the thread-count
override; results never depend on it.
"""

import argparse
import csv
import dataclasses
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from . import acceptance, fields, fraclap, harnack, poisson, quad, special
from .errors import DomainError, QuadratureError, RejectionError
from .fields import Monomial_x1, field_from_json, random_nonneg_antisym
from .poisson import BallProblem
from .quad import QuadSpec
from .special import Params

__all__ = ["RunConfig", "main", "run", "config_to_json", "config_from_json"]

THREADS_ENV = "ANTIHARNACK_THREADS"

COMMANDS = (
    "constants",
    "norms",
    "fraclap",
    "poisson",
    "meanvalue",
    "psi",
    "barrier",
    "harnack_boundary",
    "harnack_interior",
    "harnack_battery",
    "counterexample",
    "validate_all",
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    params: Params = Params(1, 0.5)
    quad: QuadSpec = QuadSpec()
    field: Optional[object] = None
    seeds: Optional[Tuple[int, ...]] = None
    output_path: str = ""
    format: str = "csv"
    rho: float = 0.5
    grid_n: Optional[int] = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        if self.format not in ("csv", "json"):
            raise DomainError(f"unknown format {self.format!r}")


def config_to_json(config):
    d = {
        "command": config.command,
        "params": {"n": config.params.n, "s": config.params.s},
        "quad": json.loads(quad.quadspec_to_json(config.quad)),
        "field": None if config.field is None else json.loads(fields.field_to_json(config.field)),
        "seeds": None if config.seeds is None else list(config.seeds),
        "output_path": config.output_path,
        "format": config.format,
        "rho": config.rho,
        "grid_n": config.grid_n,
    }
    return json.dumps(d, indent=2, sort_keys=True)


def config_from_json(text):
    d = json.loads(text)
    return _config_from_dict(d)


def _config_from_dict(d):
    params = Params(**d.get("params", {"n": 1, "s": 0.5}))
    qspec = quad.quadspec_from_json(json.dumps(d["quad"])) if d.get("quad") else QuadSpec()
    fld = None
    if d.get("field") is not None:
        fld = field_from_json(json.dumps(d["field"]))
    seeds = None if d.get("seeds") is None else tuple(int(x) for x in d["seeds"])
    return RunConfig(
        command=d["command"],
        params=params,
        quad=qspec,
        field=fld,
        seeds=seeds,
        output_path=d.get("output_path", ""),
        format=d.get("format", "csv"),
        rho=d.get("rho", 0.5),
        grid_n=d.get("grid_n"),
    )


def _fmt(x):
    """Shortest round-trip decimal for floats; plain text otherwise."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return str(x)


def _jsonable(x):
    if isinstance(x, float) and not math.isfinite(x):
        return repr(x)
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    return x


def _write_rows(config, header, rows):
    if not config.output_path:
        return
    if config.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(v) for v in row])
        with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        payload = [dict(zip(header, [_jsonable(v) for v in row])) for row in rows]
        with open(config.output_path, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")


def _default_field(config):
    if config.field is not None:
        return config.field
    seed = config.seeds[0] if config.seeds else 0
    return random_nonneg_antisym(seed=seed, count=4, p=config.params)


def _axis_point(x1, n):
    x = np.zeros(n)
    x[0] = x1
    return x


def _cmd_constants(config):
    p, q = config.params, config.quad
    pexp = p.n + 2.0 * p.s

    def f(z):
        z = np.asarray(z, dtype=float)
        e1 = np.zeros(z.shape[-1])
        e1[0] = 1.0
        return np.sum((e1 + z) ** 2, axis=-1) ** (-0.5 * pexp)

    res = quad.integrate_halfspace_weighted(f, p, q, tail=quad.TailModel(-pexp))
    summary = {
        "c_ns": special.c_ns(p),
        "c_1s": special.c_1s(p.s),
        "gamma_ns": special.gamma_ns(p),
        "tilde_c": special.tilde_c_ns(p),
        "halfspace_integral": special.halfspace_integral_closed(p),
        "halfspace_integral_quadrature": res.value,
        "quadrature_error_bound": res.error,
    }
    rows = [(k, v) for k, v in summary.items()]
    _write_rows(config, ("name", "value"), rows)
    return 0, summary


def _cmd_norms(config):
    p, q = config.params, config.quad
    g = _default_field(config)
    summary = {"field": json.loads(fields.field_to_json(g))}
    rows = []
    try:
        a = fields.anorm(g, p, q)
        summary["anorm"] = a
        rows.append(("anorm", a))
    except RejectionError as exc:
        summary["anorm"] = None
        summary["anorm_rejection"] = str(exc)
    try:
        ls = fields.lsnorm(g, p, q)
        summary["lsnorm"] = ls
        rows.append(("lsnorm", ls))
    except RejectionError as exc:
        summary["lsnorm"] = None
        summary["lsnorm_rejection"] = str(exc)
    _write_rows(config, ("name", "value"), rows)
    status = 0 if rows else 1
    return status, summary


def _cmd_fraclap(config):
    p, q = config.params, config.quad
    g = _default_field(config)
    rows = []
    worst = 0.0
    for x1 in np.linspace(0.2, 2.0, 20):
        x = _axis_point(x1, p.n)
        a = fraclap.classical_fraclap(g, x, p, q)
        b = fraclap.antisym_fraclap(g, x, p, q)
        worst = max(worst, abs(a - b))
        rows.append(tuple(x) + (a, b, abs(a - b)))
    header = tuple(f"x{i+1}" for i in range(p.n)) + ("classical", "antisym", "gap")
    _write_rows(config, header, rows)
    return 0, {"points": len(rows), "max_gap": worst}


def _poisson_grid(n):
    xs = np.linspace(0.5 / 64.0, 0.5, 64)
    return [_axis_point(x1, n) for x1 in xs]


def _cmd_poisson(config):
    p, q = config.params, config.quad
    g = _default_field(config)
    bp = BallProblem(1.0, g, p)
    antisym = g.meta.antisymmetric
    rows = []
    for x in _poisson_grid(p.n):
        if antisym:
            u = poisson.poisson_eval_antisym(bp, x, q)
        else:
            u = poisson.poisson_eval(bp, x, q)
        bound = q.rel_tol * abs(u) + q.abs_tol
        rows.append(tuple(x) + (u, bound))
    header = tuple(f"x{i+1}" for i in range(p.n)) + ("value", "error_bound")
    _write_rows(config, header, rows)
    return 0, {"points": len(rows), "antisymmetric_route": antisym}


def _cmd_meanvalue(config):
    p, q = config.params, config.quad
    g = _default_field(config)
    radii = (0.25, 0.5, 1.0)
    rows = []
    vals = []
    for r in radii:
        v = poisson.mean_value_antisym_gradient(g, r, p, q)
        vals.append(v)
        rows.append((r, v))
    mean = sum(vals) / len(vals)
    spread = (max(vals) - min(vals)) / abs(mean)
    _write_rows(config, ("r", "gradient"), rows)
    return 0, {"radii": list(radii), "values": vals, "relative_spread": spread}


def _cmd_psi(config):
    p, q = config.params, config.quad
    g = _default_field(config)
    rad = np.concatenate([[0.0], np.geomspace(1e-3, 100.0, 400)])
    vals = poisson.psi_eval(rad, p)
    weight = 1.0 + rad ** (p.n + 2.0 * p.s + 2.0)
    rows = [(r, v, v * w) for r, v, w in zip(rad, vals, weight)]
    grad = poisson.gradient_via_psi(g, p, q)
    envelope = float(np.max(vals * weight) / np.min(vals * weight))
    _write_rows(config, ("radius", "psi", "psi_weighted"), rows)
    return 0, {"gradient_via_psi": grad, "envelope_ratio": envelope}


def _cmd_barrier(config):
    p, q = config.params, config.quad
    xs = np.linspace(0.5 / 64.0, 0.5, 64)
    rows = []
    quot = []
    for x1 in xs:
        v = poisson.barrier_phi3(_axis_point(x1, p.n), p, q)
        quot.append(v / x1)
        rows.append((x1, v, v / x1))
    _write_rows(config, ("x1", "phi3", "quotient"), rows)
    return 0, {"max_quotient": max(quot), "min_quotient": min(quot),
               "comparability_ratio": max(quot) / min(quot)}


_HARNACK_HEADER = ("seed", "sup_q", "inf_q", "ratio", "anorm", "c_lower", "c_upper")


def _harnack_row(rep):
    return (rep.seed if rep.seed is not None else "", rep.sup_quotient, rep.inf_quotient,
            rep.ratio, rep.anorm_value, rep.c_lower, rep.c_upper)


def _cmd_harnack_boundary(config):
    p, q = config.params, config.quad
    g = _default_field(config)
    rep = harnack.boundary_quotient_profile(g, p, q, grid_n=config.grid_n,
                                            seed=config.seeds[0] if config.seeds else None)
    _write_rows(config, _HARNACK_HEADER, [_harnack_row(rep)])
    return 0, dataclasses.asdict(rep)


def _cmd_harnack_interior(config):
    p, q = config.params, config.quad
    g = _default_field(config)
    rep = harnack.interior_harnack_check(g, config.rho, p, q, grid_n=config.grid_n,
                                         seed=config.seeds[0] if config.seeds else None)
    _write_rows(config, _HARNACK_HEADER, [_harnack_row(rep)])
    return 0, dataclasses.asdict(rep)


def _cmd_harnack_battery(config):
    p, q = config.params, config.quad
    seeds = config.seeds if config.seeds is not None else tuple(range(50))
    bat = harnack.comparability_battery(seeds, p, q, grid_n=config.grid_n)
    _write_rows(config, _HARNACK_HEADER, [_harnack_row(r) for r in bat.reports])
    return 0, {"seeds": list(bat.seeds), "band_lower": bat.band_lower,
               "band_upper": bat.band_upper}


def _cmd_counterexample(config):
    p, q = config.params, config.quad
    ks = config.seeds if config.seeds is not None else (1, 2, 4, 8, 16, 32)
    run_ = harnack.counterexample_run(ks, p, q, grid_n=config.grid_n)
    rows = [(k, run_.m_bar, s, i, r)
            for k, s, i, r in zip(run_.ks, run_.sups, run_.infs, run_.ratios)]
    _write_rows(config, ("k", "m_bar", "sup", "inf", "ratio"), rows)
    return 0, {"m_bar": run_.m_bar, "m_bar_bisect": run_.m_bar_bisect,
               "ks": list(run_.ks), "ratios": list(run_.ratios),
               "blowup_factor": run_.ratios[-1] / run_.ratios[0]}


def _cmd_validate_all(config):
    results = acceptance.run_all(config.params, config.quad)
    rows = [(r.number, r.name, r.passed, r.measured, r.tolerance, r.runtime_seconds, r.detail)
            for r in results]
    _write_rows(config, ("number", "name", "passed", "measured", "tolerance",
                         "runtime_seconds", "detail"), rows)
    all_pass = all(r.passed for r in results)
    summary = {
        "all_passed": all_pass,
        "criteria": [
            {"number": r.number, "name": r.name, "passed": r.passed,
             "measured": _jsonable(r.measured), "tolerance": _jsonable(r.tolerance),
             "runtime_seconds": r.runtime_seconds, "detail": r.detail}
            for r in results
        ],
    }
    return (0 if all_pass else 1), summary


_DISPATCH = {
    "constants": _cmd_constants,
    "norms": _cmd_norms,
    "fraclap": _cmd_fraclap,
    "poisson": _cmd_poisson,
    "meanvalue": _cmd_meanvalue,
    "psi": _cmd_psi,
    "barrier": _cmd_barrier,
    "harnack_boundary": _cmd_harnack_boundary,
    "harnack_interior": _cmd_harnack_interior,
    "harnack_battery": _cmd_harnack_battery,
    "counterexample": _cmd_counterexample,
    "validate_all": _cmd_validate_all,
}


def _check_threads_env():
    threads = os.environ.get(THREADS_ENV)
    if threads is not None:
        try:
            if int(threads) < 1:
                raise ValueError
        except ValueError:
            raise DomainError(f"{THREADS_ENV} must be a positive integer")
        # accepted for interface stability; the engine is serial and
        # results are thread-count independent by construction


def run(config):
    """Execute a config; returns (exit status, JSON-ready summary dict)."""
    _check_threads_env()
    return _DISPATCH[config.command](config)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="antiharnack",
        description="Experiments around the antisymmetric fractional Laplacian.",
    )
    parser.add_argument("command", nargs="*", help="one of: " + ", ".join(COMMANDS)
                        + " (harnack boundary/interior/battery also accepted as two words)")
    parser.add_argument("--config", help="JSON config file; flags override its values")
    parser.add_argument("--n", type=int, help="ambient dimension (1, 2 or 3)")
    parser.add_argument("--s", type=float, help="fractional order in (0, 1)")
    parser.add_argument("--field", help="field description as JSON text or a path to one")
    parser.add_argument("--seeds", help="comma-separated integers (battery seeds or counterexample ks)")
    parser.add_argument("--rho", type=float, help="interior Harnack ball scale in (0, 1/2]")
    parser.add_argument("--grid-n", type=int, dest="grid_n", help="evaluation grid resolution")
    parser.add_argument("--output", help="output file path for data rows")
    parser.add_argument("--format", choices=("csv", "json"), help="data row format (default csv)")
    parser.add_argument("--rel-tol", type=float, dest="rel_tol")
    parser.add_argument("--abs-tol", type=float, dest="abs_tol")
    parser.add_argument("--truncation-radius", type=float, dest="truncation_radius")
    parser.add_argument("--pv-excision", type=float, dest="pv_excision")
    parser.add_argument("--angular-points", type=int, dest="angular_points")
    parser.add_argument("--max-depth", type=int, dest="max_subdivision_depth")
    return parser


def _merge_config(args):
    base = {}
    if args.config:
        with open(args.config, "r", encoding="utf-8") as fh:
            base = json.load(fh)
        if not isinstance(base, dict):
            raise DomainError("config file must contain a JSON object")
    if args.command:
        cmd = "_".join(args.command) if args.command[0] == "harnack" else args.command[0]
        if len(args.command) > 1 and args.command[0] != "harnack":
            raise DomainError(f"unexpected extra command words: {args.command[1:]}")
        base["command"] = cmd.replace("-", "_")
    if "command" not in base:
        raise DomainError("no command given (positional argument or config file)")

    params = dict(base.get("params", {"n": 1, "s": 0.5}))
    if args.n is not None:
        params["n"] = args.n
    if args.s is not None:
        params["s"] = args.s
    base["params"] = params

    qdict = dict(base.get("quad") or {})
    for key in ("rel_tol", "abs_tol", "truncation_radius", "pv_excision",
                "angular_points", "max_subdivision_depth"):
        val = getattr(args, key)
        if val is not None:
            qdict[key] = val
    if qdict:
        defaults = json.loads(quad.quadspec_to_json(QuadSpec()))
        defaults.update(qdict)
        base["quad"] = defaults

    if args.field is not None:
        text = args.field
        if os.path.exists(text):
            with open(text, "r", encoding="utf-8") as fh:
                text = fh.read()
        base["field"] = json.loads(text)
    if args.seeds is not None:
        base["seeds"] = [int(tok) for tok in args.seeds.split(",") if tok.strip()]
    if args.rho is not None:
        base["rho"] = args.rho
    if args.grid_n is not None:
        base["grid_n"] = args.grid_n
    if args.output is not None:
        base["output_path"] = args.output
    if args.format is not None:
        base["format"] = args.format
    return _config_from_dict(base)


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        _check_threads_env()
        config = _merge_config(args)
    except (DomainError, ValueError, KeyError, TypeError, OSError,
            json.JSONDecodeError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    try:
        status, summary = run(config)
    except (RejectionError, QuadratureError, DomainError) as exc:
        print(json.dumps({"error": str(exc), "kind": type(exc).__name__}, indent=2))
        return 1
    print(json.dumps(summary, indent=2, sort_keys=True, default=_jsonable))
    return status


if __name__ == "__main__":
    sys.exit(main())
