"""Command-line front end: ``raman-nath <command> [options]``.

Commands
--------
eigenvalues   j, beta_numerical, beta_bohr_sommerfeld, beta_modified
blochwave     j, n, y, b_method, b_oracle, abs_diff, valid
farfield      zeta, n, y, intensity[, intensity_oracle]
validate      check, value, target, tolerance, passed
lambda        lambda

CSV floats carry 12 significant digits; empty cells mean "no value" (for
example no Bohr-Sommerfeld root, or a guarded WKB point).  JSON output is a
list of records with the same fields, null for empty cells.

Exit codes: 0 success, 2 usage error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys

import numpy as np

from .errors import ConvergenceError, DomainError, NoRootError, RegimeError

METHODS = ("numerical", "wkb", "uniform", "separatrix", "auto")
HBAR_SI = 1.054571817e-34

_PI_RE = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)?\s*\*?\s*pi\s*(?:/\s*(\d+(?:\.\d*)?))?\s*$")


class UsageError(Exception):
    pass


def parse_number(text):
    """Float parser that also accepts pi multiples: ``pi``, ``0.5pi``, ``81pi/2``, ``3*pi/2``."""
    s = text.strip().lower()
    m = _PI_RE.match(s)
    if m:
        coef = float(m.group(1)) if m.group(1) not in (None, "") else 1.0
        den = float(m.group(2)) if m.group(2) else 1.0
        return coef * math.pi / den
    try:
        return float(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def parse_list(conv):
    def parse(text):
        return [conv(p) for p in text.split(",") if p.strip()]

    return parse


def _int(text):
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None


def fmt(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    x = float(x)
    if not math.isfinite(x):
        return ""
    return f"{x:.12g}"


def _json_value(x):
    s = fmt(x)
    if s == "":
        return None
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(s)


def emit(rows, fields, fmt_name, out):
    if fmt_name == "json":
        recs = [{f: _json_value(r.get(f)) for f in fields} for r in rows]
        out.write(json.dumps(recs, indent=1))
        out.write("\n")
        return
    w = csv.writer(out, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([fmt(r.get(f)) for f in fields])


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _oracle(lam, margin):
    from .rn_oracle import eigensolve_even
    from .states import ModelParams

    return eigensolve_even(ModelParams.from_lambda(lam, margin))


def _default_js(lam):
    from .wkb_core import j_max

    top = j_max(lam)
    top -= top % 2
    return list(range(max(top - 14, 0), top + 1, 2))


def _check_js(js, nstates):
    for j in js:
        if j < 0 or j % 2 or j // 2 >= nstates:
            raise UsageError(f"j={j} invalid: use even j in [0, {2 * (nstates - 1)}]")


def cmd_eigenvalues(args):
    from .separatrix import modified_eigenvalue
    from .wkb_core import bohr_sommerfeld_eigenvalue

    sol = _oracle(args.lam, args.margin)
    js = args.j or _default_js(args.lam)
    _check_js(js, len(sol.states))
    rows = []
    for j in js:
        try:
            bs = bohr_sommerfeld_eigenvalue(args.lam, j, xtol=min(args.tol_eig, 1e-10))
        except NoRootError:
            bs = None
        try:
            mod = modified_eigenvalue(args.lam, j)
        except NoRootError:
            mod = None
        rows.append(
            {
                "j": j,
                "beta_numerical": sol.state(j).beta,
                "beta_bohr_sommerfeld": bs,
                "beta_modified": mod,
                "regime": sol.state(j).regime,
            }
        )
    return rows, ["j", "beta_numerical", "beta_bohr_sommerfeld", "beta_modified", "regime"], None


def _method_wave(lam, j, method, n_max):
    from .separatrix import (
        auto_eigenvector,
        free_eigenvector,
        modified_eigenvalue,
        separatrix_eigenvector,
    )
    from .uniform_bound import uniform_eigenvector
    from .wkb_core import bohr_sommerfeld_eigenvalue, wkb_eigenvector

    if method == "auto":
        return auto_eigenvector(lam, j, n_max=n_max)
    if method == "uniform":
        return uniform_eigenvector(lam, j, n_max=n_max, renormalize=True)
    if method == "wkb":
        return wkb_eigenvector(lam, bohr_sommerfeld_eigenvalue(lam, j), j=j, n_max=n_max)
    if method == "separatrix":
        beta = modified_eigenvalue(lam, j)
        if beta < 1.0:
            return separatrix_eigenvector(lam, j, beta, n_max=n_max)
        return free_eigenvector(lam, beta, j=j, n_max=n_max)
    raise UsageError(f"unknown method {method}")


def cmd_blochwave(args):
    sol = _oracle(args.lam, args.margin)
    js = args.j or [0]
    _check_js(js, len(sol.states))
    n_max = sol.params.truncation_n
    rows = []
    summary = []
    for j in js:
        oracle = sol.wave(j).amplitudes
        if args.method == "numerical":
            b = oracle.copy()
            valid = np.ones(b.size, bool)
        else:
            w = _method_wave(args.lam, j, args.method, n_max)
            b = w.padded(n_max + 1)
            valid = np.zeros(n_max + 1, bool)
            valid[: w.valid.size] = w.valid[: n_max + 1]
            valid[w.valid.size :] = True
            b = np.where(valid, b, np.nan)
        sign = 1.0 if np.nansum(b * oracle) >= 0 else -1.0
        b = sign * b
        diff = np.abs(b - oracle)
        peak = np.max(np.abs(oracle))
        dv = diff[valid]
        summary.append(
            f"j={j} method={args.method} max_dev={fmt(dv.max() / peak)} rms_dev={fmt(math.sqrt(np.mean(dv * dv)) / peak)} "
            f"guarded={int((~valid).sum())}"
        )
        y = np.arange(n_max + 1) / math.sqrt(args.lam)
        for n in range(n_max + 1):
            rows.append(
                {
                    "j": j,
                    "n": n,
                    "y": y[n],
                    "b_method": b[n] if valid[n] else None,
                    "b_oracle": oracle[n],
                    "abs_diff": diff[n] if valid[n] else None,
                    "valid": bool(valid[n]),
                }
            )
    return rows, ["j", "n", "y", "b_method", "b_oracle", "abs_diff", "valid"], summary


def cmd_farfield(args):
    from .diffraction import (
        equation_depth,
        propagate_solution,
        propagate_spectral,
        semiclassical_basis,
        superposition_coefficients,
    )

    if args.method == "wkb":
        raise UsageError("farfield needs finite Bloch waves: use numerical, uniform, separatrix or auto")
    zetas = args.zeta or [0.5 * math.pi]
    sol = _oracle(args.lam, args.margin)
    basis = None
    if args.method != "numerical":
        basis = semiclassical_basis(args.lam, n_max=sol.params.truncation_n)
        coeffs, _ = superposition_coefficients(basis)
    rows = []
    summary = []
    for z in zetas:
        ze = equation_depth(args.lam, z) if args.depth_units == "classical" else z
        ref = propagate_solution(sol, ze, bound_only=args.bound_only)
        pat = ref if basis is None else propagate_spectral(basis, coeffs, ze)
        summary.append(f"zeta={fmt(z)} total={fmt(pat.total())} deficit={fmt(pat.completeness_deficit)}")
        for k, n in enumerate(pat.n):
            if n < 0 and not args.both_sides:
                continue
            r = {"zeta": z, "n": int(n), "y": pat.y[k], "intensity": pat.intensities[k]}
            if args.compare:
                r["intensity_oracle"] = ref.intensities[k]
            rows.append(r)
    fields = ["zeta", "n", "y", "intensity"] + (["intensity_oracle"] if args.compare else [])
    return rows, fields, summary


def cmd_validate(args):
    from .validation import run_checks

    rows = run_checks(args.lam, margin=args.margin)
    failed = [r for r in rows if not r["passed"]]
    summary = [f"{len(rows) - len(failed)}/{len(rows)} checks passed"]
    return rows, ["check", "value", "target", "tolerance", "passed"], summary


def lambda_from_physical(v0, kwave, mass, hbar=HBAR_SI):
    """Lambda = m V0 / (4 hbar^2 K^2) (dimensionless for consistent units)."""
    for name, v in (("v0", v0), ("kwave", kwave), ("mass", mass), ("hbar", hbar)):
        if not (v > 0 and math.isfinite(v)):
            raise UsageError(f"{name} must be positive, got {v}")
    return mass * v0 / (4.0 * hbar * hbar * kwave * kwave)


def cmd_lambda(args):
    lam = lambda_from_physical(args.v0, args.kwave, args.mass, args.hbar)
    return [{"lambda": lam}], ["lambda"], None


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser():
    p = argparse.ArgumentParser(prog="raman-nath", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, need_lambda=True):
        if need_lambda:
            sp.add_argument("--lambda", dest="lam", type=parse_number, required=True)
        sp.add_argument("--margin", type=float, default=1.3)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", default="-")
        sp.add_argument("--tol-eig", type=float, default=1e-9)

    sp = sub.add_parser("eigenvalues", help="numerical / Bohr-Sommerfeld / modified eigenvalue table")
    common(sp)
    sp.add_argument("--j", type=parse_list(_int), default=None)
    sp.set_defaults(func=cmd_eigenvalues)

    sp = sub.add_parser("blochwave", help="Bloch-wave amplitudes against the exact eigenvector")
    common(sp)
    sp.add_argument("--j", type=parse_list(_int), default=None)
    sp.add_argument("--method", choices=METHODS, default="auto")
    sp.set_defaults(func=cmd_blochwave)

    sp = sub.add_parser("farfield", help="diffracted-beam intensities at given depths")
    common(sp)
    sp.add_argument("--zeta", type=parse_list(parse_number), default=None)
    sp.add_argument("--method", choices=METHODS, default="auto")
    sp.add_argument(
        "--depth-units",
        choices=("classical", "equation"),
        default="classical",
        help="classical: harmonic refocusing at multiples of pi (default); equation: the amplitude equations' own depth",
    )
    sp.add_argument("--bound-only", action=argparse.BooleanOptionalAction, default=True)
    sp.add_argument("--compare", action="store_true", help="add the exact-basis intensity column")
    sp.add_argument("--both-sides", action="store_true", help="emit n < 0 as well")
    sp.set_defaults(func=cmd_farfield)

    sp = sub.add_parser("validate", help="run the built-in consistency checks")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("lambda", help="semiclassical parameter from physical inputs")
    common(sp, need_lambda=False)
    sp.add_argument("--v0", type=parse_number, required=True, help="well depth (energy)")
    sp.add_argument("--kwave", type=parse_number, required=True, help="grating wavenumber K")
    sp.add_argument("--mass", type=parse_number, required=True)
    sp.add_argument("--hbar", type=parse_number, default=HBAR_SI)
    sp.set_defaults(func=cmd_lambda)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "lam") and not args.lam > 0:
        parser.error("--lambda must be positive")
    if args.margin < 1:
        parser.error("--margin must be >= 1")
    try:
        rows, fields, summary = args.func(args)
    except (UsageError, DomainError, RegimeError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NoRootError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    buf = io.StringIO()
    emit(rows, fields, args.format, buf)
    if args.out == "-":
        sys.stdout.write(buf.getvalue())
    else:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    for line in summary or ():
        print(line, file=sys.stderr)
    if args.command == "validate" and any(not r["passed"] for r in rows):
        return 3
    return 0
