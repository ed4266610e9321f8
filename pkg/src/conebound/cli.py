"""Command-line front end.

    conebound mu --theory dacosta --alpha 2 --l 1
    conebound classify --theory kg --alpha 1.5
    conebound energy --theory dacosta --alpha 2 --l 1 --method all
    conebound sweep --theory kg --alpha-min 1.1 --alpha-max 4 --steps 30 --l-max 3
    conebound check gauss-bonnet --alpha 0.5
    conebound oracle --theory kg --alpha 2 --l 0
    conebound convergence --theory kg --alpha 2 --l-max 3

Exit codes: 0 success, 2 domain error, 3 numeric failure, 64 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from . import geometry, oracle, spectra
from .errors import ConeError, DomainError, NoRealClosedForm, NumericError, OutOfWindowError
from .geometry import ConeGeometry, Theory, mu_squared

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NUMERIC = 3
EXIT_USAGE = 64

HBAR_SI = 1.054571817e-34

CSV_FIELDS = ["alpha", "l", "theory", "mu2", "order_kind", "e_scaled", "method", "status"]
METHODS = ("closed_form", "saep_root", "oracle")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _theory(name: str) -> Theory:
    try:
        return Theory.parse(name)
    except ConeError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _finite(text: str) -> float:
    v = float(text)
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text}")
    return v


def _positive(text: str) -> float:
    v = float(text)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _json_clean(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {str(k): _json_clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_clean(v) for v in obj]
    return obj


def dump_json(obj) -> str:
    return json.dumps(_json_clean(obj), indent=2, sort_keys=True) + "\n"


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def state_rows(theory: Theory, alpha: float, l: int, a: float = 1.0,
               methods: Sequence[str] = METHODS) -> List[dict]:
    """One record per method for a (theory, alpha, l) state."""
    geom = ConeGeometry(alpha, a)
    m = mu_squared(theory, alpha, l)
    base = {"alpha": alpha, "l": l, "theory": theory.value, "mu2": m.mu_squared,
            "order_kind": m.order_kind.value}
    rows = []
    for method in methods:
        if method == "closed_form":
            e, status = oracle.closed_form_outcome(theory, alpha, l, geom)
        elif method == "saep_root":
            e, status = oracle.saep_outcome(theory, alpha, l, geom)
        elif method == "oracle":
            e, status, _ = oracle.oracle_outcome(theory, alpha, l, geom)
        else:
            raise DomainError(f"unknown method {method!r}")
        rows.append(dict(base, e_scaled=e, method=method, status=status))
    return rows


def _sort_rows(rows: List[dict]) -> List[dict]:
    return sorted(rows, key=lambda r: (r["alpha"], r["l"], r["method"]))


def _add_physical(rows: List[dict], args) -> List[str]:
    if not args.physical:
        return CSV_FIELDS
    scale = args.hbar**2 / (args.mass * args.a**2)
    for r in rows:
        r["e_physical"] = None if r["e_scaled"] is None else r["e_scaled"] * scale
    return CSV_FIELDS + ["e_physical"]


def rows_csv(rows: List[dict], fields: Sequence[str] = CSV_FIELDS) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for r in rows:
        w.writerow([_fmt(r.get(f)) for f in fields])
    return buf.getvalue()


def _emit(text: str, output: Optional[str]) -> None:
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _methods(choice: str) -> Sequence[str]:
    return METHODS if choice == "all" else (choice,)


# --------------------------------------------------------------------------


def cmd_mu(args) -> int:
    m = mu_squared(args.theory, args.alpha, args.l)
    _emit(dump_json(dict(m.as_dict(), theory=args.theory.value, alpha=args.alpha)), args.output)
    return EXIT_OK


def cmd_classify(args) -> int:
    report = spectra.classify(args.theory, args.alpha, l_max=args.l_max, with_roots=not args.no_roots)
    _emit(dump_json(report.as_dict()), args.output)
    return EXIT_OK


def cmd_energy(args) -> int:
    rows = state_rows(args.theory, args.alpha, args.l, args.a, _methods(args.method))
    if args.method == "closed_form" and args.orientation != "matching":
        geom = ConeGeometry(args.alpha, args.a)
        try:
            rows[0]["e_scaled"] = spectra.energy_real_order(
                args.theory, args.alpha, args.l, geom, args.orientation).e_scaled
            rows[0]["status"] = "ok"
        except NoRealClosedForm:
            rows[0]["e_scaled"], rows[0]["status"] = None, oracle.STATUS_NO_REAL
        except OutOfWindowError:
            rows[0]["e_scaled"], rows[0]["status"] = None, oracle.STATUS_OUT
        rows[0]["orientation"] = args.orientation
    fields = _add_physical(rows, args)
    rows = _sort_rows(rows)
    if args.format == "csv":
        _emit(rows_csv(rows, fields), args.output)
    else:
        _emit(dump_json(rows), args.output)
    return EXIT_OK


def _sweep_alpha(job):
    theory, alpha, l_max, a = job
    rows = []
    for l in range(-l_max, l_max + 1):
        rows.extend(state_rows(theory, alpha, l, a))
    return rows


def cmd_sweep(args) -> int:
    if args.steps < 2:
        raise UsageError("--steps must be at least 2")
    if args.alpha_max <= args.alpha_min:
        raise UsageError("--alpha-max must exceed --alpha-min")
    alphas = [float(x) for x in np.linspace(args.alpha_min, args.alpha_max, args.steps)]
    jobs = [(args.theory, al, args.l_max, args.a) for al in alphas]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(_sweep_alpha, jobs))
    else:
        chunks = [_sweep_alpha(j) for j in jobs]
    rows = _sort_rows([r for chunk in chunks for r in chunk])
    fields = _add_physical(rows, args)
    if args.format == "json":
        _emit(dump_json(rows), args.output)
    else:
        _emit(rows_csv(rows, fields), args.output)
    return EXIT_OK


def cmd_check(args) -> int:
    geom = ConeGeometry(args.alpha, args.a)
    reg = geometry.build_regulator(geom, args.profile)
    target = 2.0 * math.pi * (1.0 - args.alpha)
    analytic = geometry.gauss_bonnet_total(reg, "analytic")
    quad = geometry.gauss_bonnet_total(reg, "quadrature")
    out = {
        "alpha": args.alpha,
        "a": args.a,
        "profile": reg.profile.value,
        "target": target,
        "analytic": analytic,
        "quadrature": quad,
        "residual_analytic": analytic - target,
        "residual_quadrature": quad - target,
    }
    _emit(dump_json(out), args.output)
    return EXIT_OK


def cmd_oracle(args) -> int:
    geom = ConeGeometry(args.alpha, args.a)
    prob = oracle.RegularizedEigenproblem.for_state(args.theory, args.alpha, args.l, geom, args.profile)
    res = oracle.eigen_solve(prob)
    out = {"theory": args.theory.value, "alpha": args.alpha, "l": args.l, "mu": prob.mu,
           "c": prob.c, "profile": prob.reg.profile.value}
    if isinstance(res, oracle.NoRoot):
        out.update(status="no_root", reason=res.reason, roots=[])
    else:
        out.update(status="ok", roots=[lvl.e_scaled for lvl in res])
    _emit(dump_json(out), args.output)
    return EXIT_OK


def cmd_convergence(args) -> int:
    alphas = args.alpha
    rows = oracle.convergence_study(args.theory, alphas, range(-args.l_max, args.l_max + 1),
                                    profiles=[args.profile], a=args.a)
    _emit(oracle.convergence_csv(rows), args.output)
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="conebound", description="Bound states of a quantum particle on a cone.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, theory=True, output=True):
        if theory:
            sp.add_argument("--theory", type=_theory, required=True, help="dacosta | kg")
        sp.add_argument("--a", type=_finite, default=1.0, help="tip radius (default 1)")
        if output:
            sp.add_argument("--output", "-o", default=None, help="output path (default stdout)")

    sp = sub.add_parser("mu", help="effective angular momentum mu^2")
    common(sp)
    sp.add_argument("--alpha", type=_finite, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.set_defaults(func=cmd_mu)

    sp = sub.add_parser("classify", help="allowed angular momenta as JSON")
    common(sp)
    sp.add_argument("--alpha", type=_finite, required=True)
    sp.add_argument("--l-max", type=int, default=None)
    sp.add_argument("--no-roots", action="store_true", help="skip the numerical root verdicts")
    sp.set_defaults(func=cmd_classify)

    def physical(sp):
        sp.add_argument("--physical", action="store_true", help="add e_physical = e_scaled hbar^2/(m a^2)")
        sp.add_argument("--mass", type=_positive, default=1.0)
        sp.add_argument("--hbar", type=_positive, default=HBAR_SI)

    sp = sub.add_parser("energy", help="bound-state energy by one or all methods")
    common(sp)
    sp.add_argument("--alpha", type=_finite, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--method", choices=("closed_form", "saep_root", "oracle", "all"), default="all")
    sp.add_argument("--orientation", choices=spectra.ORIENTATIONS, default="matching",
                    help="real-order bracket orientation for --method closed_form")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    physical(sp)
    sp.set_defaults(func=cmd_energy)

    sp = sub.add_parser("sweep", help="CSV rows for every (alpha, l) and every method")
    common(sp)
    sp.add_argument("--alpha-min", type=_finite, required=True)
    sp.add_argument("--alpha-max", type=_finite, required=True)
    sp.add_argument("--steps", type=int, required=True)
    sp.add_argument("--l-max", type=int, required=True)
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--jobs", type=int, default=1)
    physical(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("check", help="consistency checks")
    checks = sp.add_subparsers(dest="check", required=True, parser_class=_Parser)
    gb = checks.add_parser("gauss-bonnet", help="total regulator curvature vs 2 pi (1 - alpha)")
    common(gb, theory=False)
    gb.add_argument("--alpha", type=_finite, required=True)
    gb.add_argument("--profile", default="uniform_disk")
    gb.set_defaults(func=cmd_check)

    sp = sub.add_parser("oracle", help="all roots of the regularized-tip problem")
    common(sp)
    sp.add_argument("--alpha", type=_finite, required=True)
    sp.add_argument("--l", type=int, required=True)
    sp.add_argument("--profile", default="uniform_disk")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("convergence", help="closed form vs extension root vs oracle table (CSV)")
    common(sp)
    sp.add_argument("--alpha", type=_finite, nargs="+", required=True)
    sp.add_argument("--l-max", type=int, required=True)
    sp.add_argument("--profile", default="uniform_disk")
    sp.set_defaults(func=cmd_convergence)
    return p


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"conebound: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"conebound: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ConeError as exc:
        print(f"conebound: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
