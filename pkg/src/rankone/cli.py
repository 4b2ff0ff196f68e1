"""Command-line front end.

Subcommands emit CSV (header row, 17 significant digits) or JSON (sorted
keys) on stdout, or into ``--out``.  Exit codes: 0 success or pass, 1
numerical failure or failed verification, 2 bad arguments or configuration.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
import warnings

import numpy as np

from . import certify, checks, radial, spherical, transform
from .config import ConfigError, RunConfig, load_config
from .errors import DomainError, RankOneError
from .geometry import GroupDatum

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# Parsing helpers
# ---------------------------------------------------------------------------


def parse_complex(text: str) -> complex:
    """'re,im' or a bare real number."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"expected 're,im' or a number, got {text!r}")


def parse_grid(text: str) -> np.ndarray:
    """'t0' or 't0:t1:steps' (inclusive, steps points)."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return np.array([float(parts[0])])
        if len(parts) == 3:
            lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
            if n < 1:
                raise ValueError
            return np.linspace(lo, hi, n)
    except ValueError:
        pass
    raise UsageError(f"expected 'x' or 'lo:hi:steps', got {text!r}")


def parse_params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"parameter {item!r} is not key=value")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def fmt(x: float) -> str:
    return "%.17g" % x


def jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, (complex, np.complexfloating)):
        return [jsonable(float(obj.real)), jsonable(float(obj.imag))]
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        return x if math.isfinite(x) else repr(x)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dump_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2) + "\n"


def dump_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(x) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()


def emit(text: str, out: str | None, default_name: str):
    if out is None:
        sys.stdout.write(text)
        return
    path = os.path.join(out, default_name) if os.path.isdir(out) else out
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def error_report(command: str, exc: Exception) -> dict:
    return {"command": command, "status": "error", "error": {"type": type(exc).__name__, "message": str(exc)}}


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_eval(args, cfg: RunConfig, g: GroupDatum):
    lam = parse_complex(args.lam)
    t = parse_grid(args.t)
    v = np.atleast_1d(np.asarray(spherical.evaluate(args.function, lam, t, g), dtype=complex))
    rows = [(float(ti), float(vi.real), float(vi.imag)) for ti, vi in zip(t, v)]
    name = f"eval-{args.function}.csv"
    emit(dump_csv(["t", "re", "im"], rows), cfg.out, name)
    return EXIT_OK


def _radial_from_args(args):
    if args.csv:
        try:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")  # empty files are reported below
                data = np.loadtxt(args.csv, delimiter=",", skiprows=1, ndmin=2)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read {args.csv}: {exc}") from None
        if data.shape[1] < 2:
            raise UsageError("CSV needs columns t, value")
        return radial.Sampled(data[:, 0], data[:, 1])
    if not args.family:
        raise UsageError("give --family or --csv")
    return radial.from_family(args.family, parse_params(args.params))


def cmd_transform(args, cfg, g):
    f = _radial_from_args(args)
    lam_re = parse_grid(args.lambda_grid)
    lams = lam_re + 1j * args.lambda_im
    q = cfg.quadrature()
    res = transform.transform_detailed(f, lams, g, q)
    val = np.atleast_1d(res.value)
    err = np.atleast_1d(res.error) + np.atleast_1d(res.tail_bound)
    rows = [(float(l.real), float(l.imag), float(v.real), float(v.imag), float(e)) for l, v, e in zip(lams, val, err)]
    emit(dump_csv(["lambda_re", "lambda_im", "value_re", "value_im", "err_est"], rows), cfg.out, "transform.csv")
    return EXIT_OK


def _pw_from_args(args):
    params = {k: float(v) for k, v in parse_params(args.params).items()}
    try:
        builder = transform.PW_EXPRESSIONS[args.expression]
    except KeyError:
        raise UsageError(f"unknown expression {args.expression!r}; choose {', '.join(transform.PW_EXPRESSIONS)}") from None
    return builder(**params)


def cmd_synthesize(args, cfg, g):
    expr = _pw_from_args(args)
    p = transform.PWSpec(expr, halfwidth=args.halfwidth, truncation_tol=args.truncation_tol)
    t = parse_grid(args.t)
    res = transform.synthesize_from_pw(p, t, g, cfg.quadrature())
    rows = [
        (float(ti), float(v.real), float(v.imag), float(b), float(e))
        for ti, v, b, e in zip(res.t, res.value, res.truncation_bound, res.quadrature_error)
    ]
    header = ["t", "value_re", "value_im", "truncation_bound", "err_est"]
    emit(dump_csv(header, rows), cfg.out, "synthesize.csv")
    return EXIT_OK


def cmd_resolvent(args, cfg, g):
    q = cfg.quadrature()
    ims = parse_grid(args.lambda_im_grid)
    lams = args.lambda_re + 1j * ims
    f = transform.annihilating_combination(radial.Bump(1.0), radial.Bump(2.0), args.xi0, g, q)
    gfun = radial.Spherical(args.xi0)
    rows, worst = [], 0.0
    for lam in lams:
        exact = 1 / (args.xi0**2 - lam**2)
        row = {"lambda": lam, "closed_form": exact}
        try:
            branch = transform.resolvent_branch(lam, g)
            if args.branch != "auto" and args.branch != branch:
                row.update(branch=args.branch, status="skipped", reason=f"lambda lies in the {branch} region")
                rows.append(row)
                continue
            r = transform.resolvent_transform(gfun, lam, g, f=f, q=q, branch=branch)
            d = abs(r.value - exact) / abs(exact)
            worst = max(worst, d)
            row.update(branch=branch, value=r.value, relative_discrepancy=d, status="ok")
            if r.fhat is not None:
                row["fhat_lambda"] = r.fhat
        except DomainError as exc:
            row.update(status="excluded", reason=str(exc))
        rows.append(row)
    tol = cfg.tol if cfg.tol is not None else 1e-5
    report = {
        "group": g.as_dict(),
        "xi0": args.xi0,
        "g": "phi_xi0",
        "f": "bump(1) - (hat bump1(xi0) / hat bump2(xi0)) bump(2)",
        "rows": rows,
        "max_relative_discrepancy": worst,
        "tolerance": tol,
        "status": "pass" if worst <= tol else "fail",
    }
    emit(dump_json(report), cfg.out, "resolvent.json")
    return EXIT_OK if worst <= tol else EXIT_FAIL


def cmd_verify(args, cfg, g):
    if args.lemma_id not in checks.SUITES:
        raise UsageError(f"unknown lemma id {args.lemma_id!r}; choose from {', '.join(checks.SUITES)}")
    rep = checks.run_suite(args.lemma_id, g, cfg.quadrature(), cfg.tol)
    d = rep.as_dict()
    if not args.timing:
        # wall-clock time would break bit-identical output
        d["runtime_ms"] = None
    emit(dump_json(d), cfg.out, f"verify-{args.lemma_id}-{g.m1}-{g.m2}.json")
    if cfg.verbose:
        print(f"{args.lemma_id} {g.name}: {rep.status} ({rep.runtime_ms} ms)", file=sys.stderr)
    return EXIT_OK if rep.status == "pass" else EXIT_FAIL


def cmd_scan(args, cfg, g):
    if args.lemma_id not in checks.SCANS:
        raise UsageError(f"unknown scan {args.lemma_id!r}; choose from {', '.join(checks.SCANS)}")
    fit = checks.SCANS[args.lemma_id](g, cfg.quadrature())
    out = {
        "lemma_id": args.lemma_id,
        "group": g.as_dict(),
        "fitted_constant": fit.constant,
        "fitted_exponent": fit.exponent,
        "residual": fit.residual,
        "grid": fit.grid,
        "note": checks.SCANS[args.lemma_id].__doc__.strip(),
    }
    emit(dump_json(out), cfg.out, f"scan-{args.lemma_id}-{g.m1}-{g.m2}.json")
    return EXIT_OK


def cmd_certify(args, cfg, g):
    cert = certify.build_bound_polynomial(args.R1, args.R2, args.k)
    rng = np.random.default_rng(args.seed)
    worst, worst_rel, viol = math.inf, 0.0, 0
    for a, b, c, x in certify.sample_admissible(cert, args.samples, rng):
        r = certify.check_bound(cert, a, b, c, x)
        worst = min(worst, r.margin)
        worst_rel = max(worst_rel, r.value / r.bound)
        viol += not r.ok
    out = {
        "certificate": cert.as_dict(),
        "samples": args.samples,
        "seed": args.seed,
        "violations": viol,
        "worst_margin": worst,
        "worst_value_over_bound": worst_rel,
        "status": "pass" if viol == 0 else "fail",
    }
    emit(dump_json(out), cfg.out, f"certify-k{args.k}.json")
    return EXIT_OK if viol == 0 else EXIT_FAIL


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def _common(defaults: bool) -> argparse.ArgumentParser:
    # the global flags are accepted before or after the subcommand
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--group", default=d("1,0"), help="'m1,m2' or a catalog name (default 1,0)")
    p.add_argument("--tol", type=float, default=d(None), help="tolerance override for verify/resolvent")
    p.add_argument("--out", default=d(None), help="output file or directory (default stdout)")
    p.add_argument("--config", default=d(None), help="key = value config file (else $RANKONE_CONFIG)")
    p.add_argument("--verbose", "-v", action="count", default=d(0))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rankone", description=__doc__.splitlines()[0], parents=[_common(True)])
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(False)

    p = sub.add_parser("eval", parents=[common], help="evaluate phi, Phi, b or c on a t-grid")
    p.add_argument("--function", required=True, choices=["phi", "Phi", "b", "c"])
    p.add_argument("--lambda", dest="lam", required=True, help="'re,im'")
    p.add_argument("--t", required=True, help="'t0' or 't0:t1:steps'")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("transform", parents=[common], help="spherical transform on a lambda grid")
    p.add_argument("--family", choices=sorted(radial.FAMILIES))
    p.add_argument("--params", nargs="*", default=[], help="key=value (complex values as 're,im')")
    p.add_argument("--csv", help="sampled function: CSV with header and columns t, value")
    p.add_argument("--lambda-grid", required=True, help="real parts 'lo:hi:steps'")
    p.add_argument("--lambda-im", type=float, default=0.0, help="common imaginary part")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("synthesize", parents=[common], help="contour synthesis from a Paley-Wiener transform")
    p.add_argument("--expression", required=True, help=", ".join(transform.PW_EXPRESSIONS))
    p.add_argument("--params", nargs="*", default=[], help="key=value, e.g. n=8 a=0.5")
    p.add_argument("--t", required=True, help="'t0:t1:steps' with t > 0")
    p.add_argument("--halfwidth", type=float, default=None, help="contour half-width R (default: automatic)")
    p.add_argument("--truncation-tol", type=float, default=1e-6)
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("resolvent", parents=[common], help="resolvent transform of phi_xi0 on a lambda grid")
    p.add_argument("--xi0", type=float, required=True)
    p.add_argument("--lambda-re", type=float, default=0.5)
    p.add_argument("--lambda-im-grid", default=None, help="'lo:hi:steps' (default 0.2 rho : 2 rho : 10)")
    p.add_argument("--branch", choices=["auto", "kernel", "T"], default="auto")
    p.set_defaults(func=cmd_resolvent)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("lemma_id")
    p.add_argument("--timing", action="store_true", help="record runtime_ms (output no longer bit-reproducible)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("scan-estimate", parents=[common], help="fit an unnamed growth exponent")
    p.add_argument("lemma_id")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("certify-bound", parents=[common], help="test the polynomial certificate on random samples")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--R1", type=float, required=True)
    p.add_argument("--R2", type=float, required=True)
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_certify)
    return parser


_NEGATIVE = re.compile(r"^-[\d.]")


def _glue_negative_values(argv):
    """Turn ``--opt -5:5:41`` into ``--opt=-5:5:41`` so argparse accepts it."""
    out = []
    for tok in argv:
        if out and _NEGATIVE.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_glue_negative_values(argv))
    try:
        cfg = load_config(args.config).merged(tol=args.tol, out=args.out, verbose=args.verbose or None)
        g = GroupDatum.parse(args.group)
        if args.command == "resolvent" and args.lambda_im_grid is None:
            args.lambda_im_grid = f"{0.2 * g.rho}:{2.0 * g.rho}:10"
        np.seterr(all="ignore")
        return args.func(args, cfg, g)
    except (UsageError, ConfigError, DomainError) as exc:
        print(f"rankone: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RankOneError as exc:
        emit(dump_json(error_report(args.command, exc)), getattr(args, "out", None), f"{args.command}-error.json")
        print(f"rankone: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
