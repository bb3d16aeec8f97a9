"""Command-line front end.

Vertex labels on the command line are 1-based with the hub labelled
``n + 1``.  Exit codes: 0 success, 1 computation fault (overflow, failed
check, unattainable tolerance), 2 usage error, 3 a formula could not be
reconciled.
"""
from __future__ import annotations

import argparse
import io
import json
import re
import sys

import numpy as np

from . import closed_form, errata, metrics, oracle, pipeline
from .errors import (
    AxiomViolationError,
    ChebyshevOverflowError,
    DomainError,
    SingularMatrixError,
    UnresolvedReconstructionError,
)
from .wheel import WheelParams, build_laplacian

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_FAULT, EXIT_USAGE, EXIT_UNRESOLVED = 0, 1, 2, 3
# below this, double-precision rounding alone defeats every comparison
TOL_FLOOR = 1e-15


class UsageError(Exception):
    pass


def fmt(x) -> str:
    """Ten significant digits, locale independent, no negative zero."""
    s = f"{float(x):.10g}"
    return "0" if s == "-0" else s


def _normalize(obj):
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        if not np.isfinite(obj):
            return None
        return float(fmt(obj))
    if isinstance(obj, dict):
        return {k: _normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _normalize(obj.tolist())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def envelope(params, method, payload, errata_records=None) -> dict:
    out = {
        "schema_version": SCHEMA_VERSION,
        "params": params.as_dict() if params is not None else None,
        "method": method,
        "payload": payload,
    }
    if errata_records is not None:
        out["errata"] = errata_records
    return _normalize(out)


def dumps_json(env: dict) -> str:
    return json.dumps(env, indent=2, ensure_ascii=True, allow_nan=False) + "\n"


def dumps_csv(payload, header: bool) -> str:
    buf = io.StringIO()
    if np.ndim(payload) == 0:
        if header:
            buf.write("value\n")
        buf.write(fmt(payload) + "\n")
        return buf.getvalue()
    rows = np.asarray(payload, dtype=float)
    if header:
        buf.write(",".join(str(k) for k in range(1, rows.shape[1] + 1)) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _params(args) -> WheelParams:
    return WheelParams(args.m, args.d, args.a, args.c)


def _green(p, method):
    if method == "pipeline":
        return pipeline.assemble_group_inverse(p)
    if method == "oracle":
        return oracle.dense_group_inverse(build_laplacian(p))
    if method == "theorem":
        return closed_form.theorem_matrix(p)
    raise UsageError(f"unknown method {method!r}")


def _label(name, value, p):
    N = p.n + 1
    if not 1 <= value <= N:
        raise UsageError(f"--{name} {value} out of range: labels run 1..{N} (hub = {N})")
    return value - 1


def _output(args, p, method, payload):
    if args.format == "csv":
        _emit(dumps_csv(payload, args.header), args.out)
    else:
        _emit(dumps_json(envelope(p, method, payload)), args.out)


def cmd_ginv(args) -> int:
    p = _params(args)
    _output(args, p, args.method, _green(p, args.method))
    return EXIT_OK


def cmd_resistance(args) -> int:
    p = _params(args)
    if not args.all and (args.i is None or args.j is None):
        raise UsageError("give --i and --j, or --all")
    closed = args.method == "theorem"
    G = None if closed else _green(p, args.method)
    if args.all:
        if closed:
            N = p.n + 1
            payload = np.array([[metrics.resistance_closed(p, i, j) for j in range(N)] for i in range(N)])
            payload = 0.5 * (payload + payload.T)
        else:
            payload = metrics.resistance_matrix(G)
    else:
        i, j = _label("i", args.i, p), _label("j", args.j, p)
        payload = metrics.resistance_closed(p, i, j) if closed else metrics.effective_resistance(G, i, j)
    _output(args, p, args.method, payload)
    return EXIT_OK


def cmd_kirchhoff(args) -> int:
    p = _params(args)
    if args.method == "theorem":
        value = metrics.kirchhoff_wheel(p) if p.d == 1 else metrics.kirchhoff_closed(p)
    else:
        value = metrics.kirchhoff_green(_green(p, args.method))
    _output(args, p, args.method, value)
    return EXIT_OK


_RANGE = re.compile(r"^(\d+)(?:\.\.(\d+))?$")


def parse_sweep(text: str):
    """Parse ``"m=2..6,d=1..5"`` with optional ``ac=1:1/2:0.5``."""
    spec = {"m": range(2, 7), "d": range(1, 6), "ac": errata.AC_PAIRS}
    for part in filter(None, (s.strip() for s in text.split(","))):
        key, sep, val = part.partition("=")
        key = key.strip()
        if not sep or key not in spec:
            raise UsageError(f"bad sweep component {part!r}; expected m=.., d=.. or ac=..")
        if key == "ac":
            try:
                pairs = tuple(tuple(float(x) for x in pr.split(":")) for pr in val.split("/"))
            except ValueError:
                raise UsageError(f"bad ac list {val!r}") from None
            if not pairs or any(len(pr) != 2 for pr in pairs):
                raise UsageError(f"bad ac list {val!r}; expected a:c/a:c")
            spec["ac"] = pairs
            continue
        mt = _RANGE.match(val.strip())
        if not mt:
            raise UsageError(f"bad range {val!r}; expected lo..hi")
        lo = int(mt.group(1))
        hi = int(mt.group(2) or lo)
        if hi < lo:
            raise UsageError(f"empty range {val!r}")
        spec[key] = range(lo, hi + 1)
    return errata.default_sweep(spec["m"], spec["d"], spec["ac"])


def run_validation(sweep, tol: float, operators_only: bool = False):
    """Run every check over ``sweep``; returns ``(report, ledger, exit_code)``."""
    rec = errata.Reconciliation(sweep, operators_only=operators_only)
    ledger = rec.run()
    unresolved = ledger.unresolved()
    theorem_ok = not {"thm21_Nk", "thm21_border", "thm21_corner"} & set(unresolved)
    nk = ledger["thm21_Nk"].accepted_options
    border = ledger["thm21_border"].accepted_options
    checks = []
    axiom_fail = compare_fail = False
    for p in rec.sweep:
        A = rec.references(p).green
        L = build_laplacian(p)
        res = oracle.group_inverse_residuals(L, A)
        ok = max(res.values()) <= tol
        axiom_fail |= not ok
        checks.append({"check": "axioms", "params": p.as_dict(), "residuals": res, "passed": ok})

        cmp = oracle.compare(A, oracle.dense_group_inverse(L), tol)
        compare_fail |= not cmp.passed
        checks.append({"check": "pipeline_vs_oracle", "params": p.as_dict(), **cmp.as_dict()})

        if theorem_ok:
            T = closed_form.theorem_matrix(p, nk["ops"], nk["index"], border["reading"])
            dev = float(np.abs(T - A).max())
            compare_fail |= dev > tol
            checks.append({"check": "theorem_vs_pipeline", "params": p.as_dict(),
                           "max_abs_diff": dev, "passed": dev <= tol})
        else:
            checks.append({"check": "theorem_vs_pipeline", "params": p.as_dict(),
                           "status": "skipped-unresolved"})

        R = metrics.resistance_matrix(A)
        kg = metrics.kirchhoff_green(A)
        dev = abs(kg - 0.5 * R.sum())
        compare_fail |= dev > tol
        checks.append({"check": "kirchhoff_identity", "params": p.as_dict(),
                       "max_abs_diff": dev, "passed": dev <= tol})

    if axiom_fail or compare_fail:
        code = EXIT_FAULT
    elif unresolved:
        code = EXIT_UNRESOLVED
    else:
        code = EXIT_OK
    report = {
        "tol": tol,
        "sweep_size": len(rec.sweep),
        "checks": checks,
        "summary": {
            "axiom_failures": sum(1 for c in checks if c["check"] == "axioms" and not c["passed"]),
            "comparison_failures": sum(1 for c in checks if c["check"] != "axioms" and c.get("passed") is False),
            "unresolved": unresolved,
            "exit_code": code,
        },
    }
    return report, ledger, code


def cmd_validate(args) -> int:
    if not args.tol > 0:
        raise UsageError("--tol must be positive")
    sweep = parse_sweep(args.sweep) if args.sweep else errata.default_sweep()
    report, ledger, code = run_validation(sweep, args.tol, args.operators_only)
    _emit(dumps_json(envelope(None, "pipeline", report, ledger.as_list())), args.out)
    if args.tol < TOL_FLOOR and code == EXIT_FAULT:
        print(f"wheelgreen: tolerance {args.tol:g} is below the double-precision floor "
              f"({TOL_FLOOR:g}); comparisons fail on rounding alone", file=sys.stderr)
    elif code == EXIT_FAULT:
        print("wheelgreen: validation failed; see report", file=sys.stderr)
    elif code == EXIT_UNRESOLVED:
        print("wheelgreen: unresolved formulas: " + ", ".join(report["summary"]["unresolved"]), file=sys.stderr)
    return code


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="wheelgreen", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def wheel_args(sp, methods):
        sp.add_argument("--m", type=int, required=True, help="number of spokes (> 1)")
        sp.add_argument("--d", type=int, required=True, help="spoke spacing (>= 1)")
        sp.add_argument("--a", type=float, required=True, help="hub conductance")
        sp.add_argument("--c", type=float, required=True, help="cycle conductance")
        sp.add_argument("--method", default="pipeline", choices=methods)
        sp.add_argument("--format", default="json", choices=("json", "csv"))
        sp.add_argument("--header", action="store_true", help="CSV header row")
        sp.add_argument("--out", help="write to this file instead of stdout")

    sp = sub.add_parser("ginv", help="Green matrix (group inverse of the Laplacian)")
    wheel_args(sp, ("pipeline", "theorem", "oracle"))
    sp.set_defaults(func=cmd_ginv)

    sp = sub.add_parser("resistance", help="effective resistance")
    wheel_args(sp, ("pipeline", "theorem", "closed", "oracle"))
    sp.add_argument("--i", type=int, help="1-based label, hub = n+1")
    sp.add_argument("--j", type=int, help="1-based label, hub = n+1")
    sp.add_argument("--all", action="store_true", help="full pairwise table")
    sp.set_defaults(func=cmd_resistance)

    sp = sub.add_parser("kirchhoff", help="Kirchhoff index")
    wheel_args(sp, ("pipeline", "theorem", "closed", "oracle"))
    sp.set_defaults(func=cmd_kirchhoff)

    sp = sub.add_parser("validate", help="sweep checks and errata ledger")
    sp.add_argument("--sweep", help='e.g. "m=2..6,d=1..5" or "m=3,d=1..2,ac=1:1/2:0.5"')
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--operators-only", action="store_true",
                    help="only accept readings that insert missing + or - operators")
    sp.add_argument("--out", help="write to this file instead of stdout")
    sp.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "method", None) == "closed":
        args.method = "theorem"
    try:
        return args.func(args)
    except (UsageError, DomainError, IndexError) as exc:
        print(f"wheelgreen: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ChebyshevOverflowError, SingularMatrixError, AxiomViolationError,
            UnresolvedReconstructionError) as exc:
        print(f"wheelgreen: computation failed: {exc}", file=sys.stderr)
        return EXIT_FAULT


if __name__ == "__main__":
    sys.exit(main())
