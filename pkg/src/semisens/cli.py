"""Command-line entry point.

Exit codes: 0 success, 1 invalid configuration, 2 numerical discrepancy or
failed validation.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from .errata import errata_report
from .errors import ConfigError, SemisensError
from .functionals import dirac, gaussian_moments, moments_from_sequence, pair
from .models import ou_family, wf_basis, wf_family, wf_xi_sensitivity
from .operators import load_family
from .oracle import OracleConfig, central_difference_sensitivity
from .polynomial import Polynomial, as_scalar, format_scalar
from .semigroup import apply_v0, default_tol
from .sensitivity import nu_functional, sensitivity_report
from . import validate as validation

EXIT_OK, EXIT_CONFIG, EXIT_DISCREPANCY = 0, 1, 2
DEFAULT_DEGREE = 16

_MONOMIAL = re.compile(r"^\s*x\s*(\^\s*(\d+))?\s*$")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def parse_xi(spec: str) -> tuple[str, Polynomial]:
    """``x^k`` / ``x`` / ``1`` shorthand or a JSON coefficient array."""
    spec = spec.strip()
    m = _MONOMIAL.match(spec)
    if m:
        k = int(m.group(2)) if m.group(2) else 1
        return ("x" if k == 1 else f"x^{k}"), Polynomial.monomial(k)
    if spec == "1":
        return "1", Polynomial.monomial(0)
    try:
        coeffs = json.loads(spec)
    except json.JSONDecodeError:
        raise ConfigError(f"cannot parse test function {spec!r}; use x^k or a JSON coefficient array") from None
    if not isinstance(coeffs, list) or not coeffs:
        raise ConfigError(f"test function {spec!r} must be a non-empty JSON array")
    try:
        poly = Polynomial([as_scalar(c) for c in coeffs])
    except (TypeError, ValueError, ZeroDivisionError):
        raise ConfigError(f"bad coefficient in {spec!r}") from None
    return json.dumps(coeffs, separators=(",", ":")), poly


def parse_pi0(spec: str, n: int):
    kind, _, rest = spec.partition(":")
    try:
        if kind == "dirac":
            return dirac(as_scalar(rest or "0"), n)
        if kind == "gaussian":
            mean, var = rest.split(",")
            return gaussian_moments(as_scalar(mean), as_scalar(var), n)
        if kind == "moments":
            values = json.loads(rest)
            mu = moments_from_sequence(values)
            if mu.n < n:
                raise ConfigError(f"pi0 moments known to degree {mu.n}, need {n}")
            return mu.restrict(n)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad --pi0 {spec!r}: {exc}") from None
    raise ConfigError(f"unknown --pi0 kind {kind!r} (dirac:a, gaussian:mean,var, moments:[...])")


def _times(values) -> list[float]:
    out = []
    for v in values:
        for part in str(v).split(","):
            if part.strip():
                try:
                    out.append(float(as_scalar(part)))
                except (ValueError, ZeroDivisionError):
                    raise ConfigError(f"bad time {part!r}") from None
    if not out:
        raise ConfigError("at least one --t is required")
    if any(t < 0 for t in out):
        raise ConfigError("times must be nonnegative")
    return out


def _tol(args) -> float:
    try:
        tol = args.tol if args.tol is not None else default_tol()
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    if not tol > 0:
        raise ConfigError("--tol must be positive")
    return tol


def _kappa(raw):
    try:
        kappa = as_scalar(raw)
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"bad --kappa {raw!r}") from None
    if not kappa > 0:
        raise ConfigError("--kappa must be positive")
    return kappa


def _write(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def cmd_sensitivity(args) -> int:
    n = args.degree
    if n < 0:
        raise ConfigError("--degree must be nonnegative")
    tol = _tol(args)
    times = _times(args.t)
    parsed = [parse_xi(s) for s in (args.xi or ["x"])]
    too_big = [label for label, p in parsed if p.degree > n]
    if too_big:
        raise ConfigError(f"test functions {too_big} exceed --degree {n}")
    if args.model == "wf":
        family = wf_family(_kappa(args.kappa), half_diffusion=args.half_diffusion)
        pi0 = parse_pi0(args.pi0 or "dirac:0", n)
    elif args.model == "ou":
        family = ou_family()
        pi0 = parse_pi0(args.pi0 or "gaussian:0,1/2", n)
    else:
        if not args.family:
            raise ConfigError("--model custom needs --family PATH")
        family = load_family(args.family)
        pi0 = parse_pi0(args.pi0 or "dirac:0", n)
    oracle = OracleConfig(tol_report=args.oracle_tol) if args.oracle else None
    report = sensitivity_report(
        family, pi0, [p for _, p in parsed], times, n, tol,
        labels=[label for label, _ in parsed], oracle=oracle,
    )
    _write(report.to_json() if args.format == "json" else report.to_csv(), args.out)
    if oracle is not None and report.max_abs_discrepancy > oracle.tol_report:
        print(
            f"oracle discrepancy {report.max_abs_discrepancy:.3e} exceeds {oracle.tol_report:.1e}",
            file=sys.stderr,
        )
        return EXIT_DISCREPANCY
    return EXIT_OK


def cmd_wf_recursion(args) -> int:
    if args.n < 2:
        raise ConfigError("--n must be >= 2")
    kappa = _kappa(args.kappa)
    tol = _tol(args)
    times = _times(args.t)
    degree = args.degree
    if args.n > degree:
        print(f"warning: basis element n={args.n} needs degree > {degree}; using degree {args.n}",
              file=sys.stderr)
        degree = args.n
    basis = wf_basis(args.n, kappa)
    family = wf_family(kappa)
    pi0 = dirac(0, degree)
    nu = nu_functional(family, pi0, degree)
    rows = []
    worst = 0.0
    bs = None
    for t in times:
        rec = wf_xi_sensitivity(args.n, kappa, t, args.kmax, tol)
        engine = float(pair(apply_v0(family, basis.xi_n, t, degree, tol), nu))
        oracle = central_difference_sensitivity(family, pi0, basis.xi_n, t, degree).value
        diff = max(abs(rec.value - engine), abs(rec.value - oracle))
        worst = max(worst, diff)
        if bs is None or len(rec.bs) > len(bs):
            bs = rec.bs
        rows.append({
            "t": t, "recursion": rec.value, "tail_bound": rec.tail_bound, "kmax": rec.kmax,
            "engine": engine, "oracle": oracle, "discrepancy": diff,
        })
    doc = {
        "n": args.n,
        "kappa": format_scalar(kappa),
        "lambda_n": format_scalar(basis.lambda_n),
        "gammas": {str(m): format_scalar(g) for m, g in basis.gammas.items()},
        "b": [format_scalar(b) for b in bs[: args.show_b + 1]],
        "rows": rows,
    }
    if args.format == "json":
        _write(json.dumps(doc, indent=2, sort_keys=True), args.out)
    else:
        lines = [f"n = {args.n}, kappa = {doc['kappa']}, lambda_n = {doc['lambda_n']}"]
        lines += [f"gamma_{args.n},{m} = {g}" for m, g in doc["gammas"].items()]
        lines += [f"b_{args.n},{k} = {b}" for k, b in enumerate(doc["b"])]
        lines.append("t,recursion,engine,oracle,discrepancy,tail_bound,kmax")
        lines += [
            f"{r['t']!r},{r['recursion']!r},{r['engine']!r},{r['oracle']!r},{r['discrepancy']!r},"
            f"{r['tail_bound']!r},{r['kmax']}"
            for r in rows
        ]
        _write("\n".join(lines) + "\n", args.out)
    return EXIT_DISCREPANCY if worst > args.max_discrepancy else EXIT_OK


def cmd_validate(args) -> int:
    scope = "errata" if args.errata else args.scope
    if scope == "errata":
        entries = errata_report()
        _write(json.dumps({"errata": entries}, indent=2, sort_keys=True), args.out)
        checks = validation.errata_suite(entries)
    else:
        checks = validation.run(scope)
        for c in checks:
            print(f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.detail})")
    failed = [c for c in checks if not c.passed]
    if failed:
        print(f"first failure: {failed[0].name}: {failed[0].detail}", file=sys.stderr)
        return EXIT_DISCREPANCY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="semisens", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sensitivity", help="d/dtheta <xi | U_theta(t)* pi0> at theta = 0")
    p.add_argument("--model", choices=["wf", "ou", "custom"], default="wf")
    p.add_argument("--kappa", default="1")
    p.add_argument("--half-diffusion", action="store_true",
                   help="WF only: put a factor 1/2 on the diffusion term")
    p.add_argument("--family", help="JSON family document (with --model custom)")
    p.add_argument("--pi0", help="dirac:a | gaussian:mean,var | moments:[m0,m1,...]")
    p.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    p.add_argument("--t", action="append", required=True, help="time(s); repeat or comma-separate")
    p.add_argument("--xi", action="append", help="x^k or JSON coefficient array; repeatable")
    p.add_argument("--tol", type=float)
    p.add_argument("--oracle", action="store_true", help="add finite-difference oracle columns")
    p.add_argument("--oracle-tol", type=float, default=1e-6, help="discrepancy bound for exit code 2")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sensitivity)

    p = sub.add_parser("wf-recursion", help="quasi-eigenbasis recursion for Wright-Fisher")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kappa", default="1")
    p.add_argument("--t", action="append", default=None)
    p.add_argument("--kmax", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--degree", type=int, default=DEFAULT_DEGREE)
    p.add_argument("--show-b", type=int, default=10, help="number of b_{n,k} to print")
    p.add_argument("--max-discrepancy", type=float, default=1e-8)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.add_argument("--out")
    p.set_defaults(func=cmd_wf_recursion)

    p = sub.add_parser("validate", help="run a validation suite")
    p.add_argument("scope", nargs="?", default="all",
                   choices=["all", "stationarity", "lemma", "theorem", "recursion", "errata"])
    p.add_argument("--errata", action="store_true", help="same as scope 'errata'")
    p.add_argument("--out")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    if getattr(args, "t", None) is None and args.command == "wf-recursion":
        args.t = ["1"]
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"semisens: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SemisensError as exc:
        print(f"semisens: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG if isinstance(exc, ValueError) else EXIT_DISCREPANCY
    except ValueError as exc:
        print(f"semisens: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
