"""Command-line front end.

CSV column orders
  bohr-upper, bohr-lower   condenser,direction,R,method,residual
  faber                    n,k,re,im            (coefficient of z**k in F_n)
  norms                    n,value,kind,isExact
  asymptotic               r,lowerB,upperB,Mprime,epsilonUp,epsilonDown,lowerMethod
  angular                  file,V,normBound,bohrRoot

Exit codes: 0 ok, 1 failed check, 2 usage, 3 unknown condenser,
4 malformed file, 5 out-of-range parameter, 6 numeric failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bohr, faber, gallery, norms, reproduce
from .exceptions import DiagnosticFailure, DomainError, NotPositiveClass, OracleFailure
from .laurent import get_precision

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_UNKNOWN, EXIT_MALFORMED, EXIT_RANGE, EXIT_NUMERIC = range(7)

SAMPLED_INFLATION = 1 + 1e-4

MODEL_ALIASES = {
    "exact": None,
    "convex": norms.BOUND_CONVEX,
    "general": norms.BOUND_GENERAL,
    "positive": norms.EXACT_POSITIVE,
    "sampled": norms.SAMPLED,
}


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def fmt(x):
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (float, np.floating)):
        return f"{float(x) + 0.0:.12g}"           # + 0.0 drops the sign of -0.0
    return str(x)


def _json_default(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, complex):
        return [x.real, x.imag]
    return float(x)


def _round(x):
    return float(f"{x:.12g}") if isinstance(x, float) and math.isfinite(x) else x


def emit(args, header, rows, records=None):
    """Write ``rows`` as CSV or ``records`` (defaulting to dict rows) as JSON."""
    buf = io.StringIO()
    if args.format == "json":
        recs = records if records is not None else [dict(zip(header, r)) for r in rows]
        recs = [{k: _round(v) for k, v in r.items()} if isinstance(r, dict) else r for r in recs]
        buf.write(json.dumps(recs, indent=2, default=_json_default) + "\n")
    else:
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])
    text = buf.getvalue()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def parse_list(text, name):
    """Comma list ``a,b,c`` or range ``start:stop:step`` (stop included)."""
    try:
        if ":" in text:
            start, stop, step = (float(t) for t in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [round(start + i * step, 12) for i in range(count)]
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise CliError(f"--{name}: expected a comma list or start:stop:step, got {text!r}",
                       EXIT_USAGE) from None


def condenser(args):
    ident = args.cond_pos or args.cond
    if not ident:
        raise CliError("a condenser id is required (positional or --cond)", EXIT_USAGE)
    try:
        return gallery.get_condenser(ident)
    except gallery.UnknownCondenser as exc:
        raise CliError(exc.args[0], EXIT_UNKNOWN) from None
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CliError(f"malformed condenser file: {exc}", EXIT_MALFORMED) from None
    except ValueError as exc:
        code = EXIT_MALFORMED if ident.startswith("file:") else EXIT_RANGE
        raise CliError(str(exc), code) from None


def model_for(cond, spec):
    if spec is None or spec == "exact":
        if spec == "exact" and cond.exact_norms is None:
            raise CliError(f"{cond.name} has no exact norm model", EXIT_RANGE)
        return cond.upper_model()
    spec = MODEL_ALIASES.get(spec, spec)
    try:
        return gallery.parse_norm_model(spec, cond.map)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_USAGE) from None


def cmd_reproduce(args):
    try:
        results = reproduce.run(args.only)
    except KeyError as exc:
        raise CliError(exc.args[0], EXIT_USAGE) from None
    text = "".join(r.line() + "\n" for r in results)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAILED


def cmd_bohr_upper(args):
    cond = condenser(args)
    M = model_for(cond, args.model)
    if M.is_sampled and args.inflation is None:
        args.inflation = SAMPLED_INFLATION       # asking for sampled norms opts in
    if args.r is not None:
        r = parse_list(args.r, "r")
        if len(r) != 1 or r[0] <= 1:
            raise CliError("--r must be a single level > 1", EXIT_RANGE)
        rep = bohr.solve_upper_annulus(M, r[0], tol=args.tol, sampled_inflation=args.inflation)
    else:
        rep = bohr.solve_upper(M, tol=args.tol, sampled_inflation=args.inflation)
    header = ["condenser", "direction", "R", "method", "residual"]
    emit(args, header, [rep.row(cond.name)])
    return EXIT_OK


def cmd_bohr_lower(args):
    cond = condenser(args)
    M = model_for(cond, args.model)
    Rgrid = parse_list(args.R or "2.5:4:0.01", "R")
    r1grid = parse_list(args.r1, "r1") if args.r1 else bohr.DEFAULT_R1GRID
    if any(R <= 1 for R in Rgrid) or any(not 0 < r1 < 1 for r1 in r1grid):
        raise CliError("need R > 1 and 0 < r1 < 1", EXIT_RANGE)
    rep = bohr.lower_scan(cond.map, M, Rgrid, r1grid)
    emit(args, ["condenser", "direction", "R", "method", "residual"], [rep.row(cond.name)])
    return EXIT_OK


def cmd_faber(args):
    cond = condenser(args)
    if args.n is None or args.n < 0:
        raise CliError("--n must be a nonnegative integer", EXIT_RANGE)
    polys = faber.faber_polys(cond.map, args.n)
    rows, records = [], []
    for p in polys:
        coeffs = [complex(c) for c in p.z_coeffs]
        rows.extend((p.n, k, c.real, c.imag) for k, c in enumerate(coeffs))
        records.append({"degree": p.n, "zCoeffs": [[c.real, c.imag] for c in coeffs],
                        "alphaTail": [[complex(a).real, complex(a).imag] for a in p.alpha_tail],
                        "residual": float(p.residual),
                        "compositionResidual": float(p.composition_residual())})
    emit(args, ["n", "k", "re", "im"], rows, records)
    return EXIT_OK


def cmd_norms(args):
    cond = condenser(args)
    if args.nmax is None or args.nmax < 1:
        raise CliError("--nmax must be a positive integer", EXIT_RANGE)
    M = model_for(cond, args.model)
    emit(args, ["n", "value", "kind", "isExact"], norms.norm_table(M, args.nmax))
    return EXIT_OK


def cmd_asymptotic(args):
    cond = condenser(args)
    r_list = parse_list(args.r or "2,4,8,16,32", "r")
    if any(r <= 1 for r in r_list):
        raise CliError("every level in --r must exceed 1", EXIT_RANGE)
    try:
        rows = bohr.theorem2_experiment(cond.map, r_list, tol=args.tol)
    except DomainError as exc:
        raise CliError(str(exc), EXIT_RANGE) from None
    header = ["r", "lowerB", "upperB", "Mprime", "epsilonUp", "epsilonDown", "lowerMethod"]
    emit(args, header, [tuple(getattr(row, h) for h in header) for row in rows])
    return EXIT_OK


def cmd_angular(args):
    path = Path(args.polygon)
    try:
        poly = norms.PolygonCurve.from_json(path.read_text())
    except OSError as exc:
        raise CliError(f"cannot read polygon file: {exc}", EXIT_MALFORMED) from None
    except (ValueError, TypeError) as exc:
        raise CliError(f"malformed polygon file {path}: {exc}", EXIT_MALFORMED) from None
    V = norms.angular_variation(poly)
    root = bohr.solve_upper(norms.NormModel(norms.BOUND_ANGULAR, param=V), tol=args.tol).R
    emit(args, ["file", "V", "normBound", "bohrRoot"],
         [(path.name, V, norms.angular_norm_bound(V), root)])
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="bohrlab", description="Bohr radii of Faber-Green condensers.",
                                epilog=__doc__.split("\n", 2)[2],
                                formatter_class=argparse.RawDescriptionHelpFormatter)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cond", help="condenser id: disk, segment, h<m>, level:<base>:<r>, file:<path>")
    common.add_argument("--n", type=int)
    common.add_argument("--nmax", type=int)
    common.add_argument("--R", help="level list or start:stop:step")
    common.add_argument("--r", help="level list")
    common.add_argument("--r1", help="extremal-family parameter list")
    common.add_argument("--tol", type=float, default=1e-9)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--only", help="run a single reproduction check")
    common.add_argument("--model", help="exact, convex, general, positive, sampled or a kind name")
    common.add_argument("--inflation", type=float, help="safety factor for sampled norms (default 1.0001)")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, helptext, cond=True):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        if cond:
            sp.add_argument("cond_pos", nargs="?", metavar="COND")
        sp.set_defaults(func=fn)
        return sp

    add("reproduce", cmd_reproduce, "run the reproduction checks", cond=False)
    add("bohr-upper", cmd_bohr_upper, "upper bound on the Bohr radius")
    add("bohr-lower", cmd_bohr_lower, "certified lower bound by grid scan")
    add("faber", cmd_faber, "Faber polynomials F_0..F_n")
    add("norms", cmd_norms, "sup-norm table")
    add("asymptotic", cmd_asymptotic, "bracket the Bohr radius of level sets")
    sp = add("angular", cmd_angular, "angular variation of a polygon file", cond=False)
    sp.add_argument("polygon", metavar="POLYGON.json")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        get_precision()
    except ValueError as exc:
        print(f"bohrlab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not args.tol > 0:
        print("bohrlab: --tol must be positive", file=sys.stderr)
        return EXIT_RANGE
    try:
        return args.func(args)
    except CliError as exc:
        print(f"bohrlab: {exc}", file=sys.stderr)
        return exc.code
    except (DomainError, NotPositiveClass) as exc:
        print(f"bohrlab: {exc}", file=sys.stderr)
        return EXIT_RANGE
    except (OracleFailure, DiagnosticFailure, ArithmeticError) as exc:
        print(f"bohrlab: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"bohrlab: {exc}", file=sys.stderr)
        return EXIT_RANGE


if __name__ == "__main__":
    sys.exit(main())
