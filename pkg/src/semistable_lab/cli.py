"""Command-line entry point.

    semistable-lab disc --hyperelliptic "x^3+x+1"
    semistable-lab classify --plane "x^3+y^3+z^3"
    semistable-lab run --family fixture:standard-hyperelliptic-1 --B 100 --out out/

Exit codes: 0 success, 2 configuration or parse error, 3 degenerate algebra.
"""

from __future__ import annotations

import argparse
import os
import sys
import tempfile
from fractions import Fraction
from pathlib import Path

from .arith import factorize
from .families import ConfigError, CurveFamily, Mode, default_cutoff, fixture, load_family, specialize
from .macaulay import (DegenerateMinorError, TernaryForm, ZeroHessianMinorError, plane_disc_proxy,
                       transversality_resultant)
from .poly import BinaryForm, IntPoly, PolynomialSyntaxError, binary_discriminant, homogenize_binary, parse_poly
from .stats import EXHAUSTIVE_LIMIT, DegenerateSpecializationError, histogram_dat, omega_of, records_csv, run_experiment

EXIT_CONFIG = 2
EXIT_DEGENERATE = 3


class CliError(Exception):
    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def _format_factorization(n: int) -> str:
    if n == 0:
        return "0"
    fac = factorize(n)
    parts = [f"{p}^{e}" if e > 1 else str(p) for p, e in fac.factors]
    if fac.residual != 1:
        parts.append(f"[{fac.residual}]")
    body = " * ".join(parts) if parts else "1"
    return ("-" if fac.sign < 0 else "") + body


def _hyper_form(text: str) -> BinaryForm:
    f = parse_poly(text, ("x",))
    deg = f.degree()
    if deg < 3:
        raise CliError("a hyperelliptic curve y^2 = f(x) needs deg f >= 3", EXIT_CONFIG)
    g = (deg - 1) // 2
    return homogenize_binary(f, 2 * g + 2)


def _get_family(source: str) -> CurveFamily:
    if source.startswith("fixture:"):
        return fixture(source.split(":", 1)[1])
    return load_family(source)


def _parse_point(text: str) -> list[int]:
    try:
        return [int(v) for v in text.replace(",", " ").split()]
    except ValueError:
        raise CliError(f"bad parameter point {text!r}", EXIT_CONFIG) from None


def _curve_from_args(args):
    """(curve, family or None, point or None, kind)."""
    if args.hyperelliptic:
        return _hyper_form(args.hyperelliptic), None, None, "hyperelliptic"
    if args.plane:
        form = TernaryForm.parse(args.plane)
        if form.degree < 3:
            raise CliError("plane curves need degree >= 3", EXIT_CONFIG)
        return form, None, None, "plane"
    if args.family:
        fam = _get_family(args.family)
        if args.at is None:
            raise CliError("--family needs --at", EXIT_CONFIG)
        t = _parse_point(args.at)
        if len(t) != fam.n:
            raise CliError(f"family has {fam.n} parameters, got {len(t)}", EXIT_CONFIG)
        return fam.curve_at(t), fam, t, fam.kind
    raise CliError("give one of --hyperelliptic, --plane, --family", EXIT_CONFIG)


def cmd_disc(args) -> int:
    curve, fam, t, kind = _curve_from_args(args)
    if kind == "hyperelliptic":
        d = binary_discriminant(curve)
        print(f"Delta = {d}")
        print(f"      = {_format_factorization(d)}")
        if args.with_codisc:
            e = binary_discriminant(curve.x_derivative())
            print(f"Delta' = {e}")
            print(f"       = {_format_factorization(e)}")
    else:
        d = plane_disc_proxy(curve)
        print(f"D = {d}")
        print(f"  = {_format_factorization(d)}")
        if args.with_codisc:
            r = transversality_resultant(curve)
            print(f"R = {r}")
            print(f"  = {_format_factorization(r)}")
    return 0


def _explicit_family(curve, kind: str) -> CurveFamily:
    # wrap a single curve as a constant one-parameter family
    params = ("t1",)
    if kind == "hyperelliptic":
        coeffs = tuple(IntPoly.constant(params, c) for c in curve.coeffs)
        g = (curve.degree - 2) // 2
        return CurveFamily("curve", kind, g, 1, coeffs, 1, default_cutoff(kind, g), Mode.MINIMALLY_BAD)
    coeffs = tuple(IntPoly.constant(params, c) for c in curve.coeff_vector())
    return CurveFamily("curve", kind, curve.degree, 1, coeffs, 1, default_cutoff(kind, curve.degree),
                       Mode.MINIMALLY_BAD)


def cmd_classify(args) -> int:
    curve, fam, t, kind = _curve_from_args(args)
    if fam is None:
        fam, t = _explicit_family(curve, kind), [0]
    mode = _resolve_mode(args.mode, fam)
    sp = specialize(fam, t)
    if sp.degenerate:
        raise CliError("degenerate specialization excluded by \u0394(\U0001d42d) \u2260 0", EXIT_DEGENERATE)
    rec = omega_of(t, fam, mode)
    print(f"Delta = {sp.disc}   A = {fam.cutoff}   omega = {rec.omega}   omega1 = {rec.omega1}")
    header = f"{'p':>12} {'v':>3} {'class':<24} {'m':>4} {'c':>4} {'toric':>6} tamagawa_one"
    print(header)

    def fmt(x):
        return "-" if x is None else str(x)

    for v in rec.verdicts:
        print(f"{v.p:>12} {v.v_delta:>3} {v.verdict.value:<24} {fmt(v.m):>4} {fmt(v.c_bar):>4} "
              f"{fmt(v.toric_rank):>6} {str(v.tamagawa_one).lower()}")
    if not any(v.p > fam.cutoff for v in rec.verdicts):
        print(f"all primes p > {fam.cutoff} are good")
    return 0


def _resolve_mode(name: str | None, fam: CurveFamily) -> Mode:
    if name is None:
        return fam.mode
    if name == "minimal":
        return Mode.MINIMALLY_BAD
    return Mode.WEAK_HYPERELLIPTIC if fam.kind == "hyperelliptic" else Mode.WEAK_PLANE


def _write_atomic(out: Path, files: dict[str, str]) -> None:
    out.mkdir(parents=True, exist_ok=True)
    umask = os.umask(0)
    os.umask(umask)
    staged = []
    for name, text in files.items():
        fd, tmp = tempfile.mkstemp(dir=out, prefix=f".{name}.")
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.chmod(tmp, 0o666 & ~umask)
        staged.append((tmp, out / name))
    for tmp, dest in staged:
        os.replace(tmp, dest)


def cmd_run(args) -> int:
    fam = _get_family(args.family)
    mode = _resolve_mode(args.mode, fam)
    if args.B < 16:
        raise CliError("--B must be at least 16", EXIT_CONFIG)
    if args.sample is not None and args.sample < 1:
        raise CliError("--sample must be at least 1", EXIT_CONFIG)
    if (2 * args.B + 1) ** fam.n > EXHAUSTIVE_LIMIT and args.seed is None:
        raise CliError("the box is sampled at this B, so --seed is required", EXIT_CONFIG)
    probes = []
    if args.probe_primes:
        try:
            probes = [int(p) for p in args.probe_primes.replace(",", " ").split()]
        except ValueError:
            raise CliError(f"bad --probe-primes {args.probe_primes!r}", EXIT_CONFIG) from None
    report, records = run_experiment(fam, args.B, mode, sample=args.sample, seed=args.seed, probe_primes=probes)
    files = {"report.json": report.to_json(), "histogram.dat": histogram_dat(report)}
    if args.csv:
        files["records.csv"] = records_csv(records)
    _write_atomic(Path(args.out), files)
    m = report.moments
    print(f"family {report.family}  mode {report.mode}  B {report.B}  sample {report.sample_size}"
          f"  degenerate {report.degenerate}")
    print(f"KS distance {report.ks_distance:.4f}")
    print(f"moments m1 {m[0]:.4f}  m2 {m[1]:.4f}  m3 {m[2]:.4f}  m4 {m[3]:.4f}")
    print(f"threshold {report.threshold}: proportion {report.threshold_proportion:.4f}"
          f"  (count >= 1: {report.surrogate_proportion:.4f})")
    print(f"residual fraction {report.residual_fraction:.4f}")
    if report.exclusion_covers_all:
        print("all bad primes divide the exclusion divisor")
    for d in report.densities:
        print(f"p={d['p']}: rho {d['rho']}  empirical {float(Fraction(d['empirical'])):.6f}"
              f"  deviation {d['deviation']:.6f}  bound {d['bound']:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="semistable-lab",
                                     description="Bad semistable reduction and Erdos-Kac statistics for curve families.")
    sub = parser.add_subparsers(dest="command", required=True)

    def curve_args(p):
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--hyperelliptic", metavar="F", help="y^2 = F(x), F a polynomial in x")
        g.add_argument("--plane", metavar="F", help="homogeneous F(x, y, z)")
        g.add_argument("--family", metavar="PATH", help="family JSON file or fixture:NAME")
        p.add_argument("--at", metavar="T", help="parameter point, comma separated")

    p = sub.add_parser("disc", help="print the discriminant and its factorization")
    curve_args(p)
    p.add_argument("--with-codisc", "--with-R", dest="with_codisc", action="store_true",
                   help="also print Delta' (hyperelliptic) or R (plane)")
    p.set_defaults(func=cmd_disc)

    p = sub.add_parser("classify", help="print the per-prime reduction table")
    curve_args(p)
    p.add_argument("--mode", choices=("minimal", "weak"))
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("run", help="run an omega-statistics experiment over a box")
    p.add_argument("--family", required=True, metavar="PATH", help="family JSON file or fixture:NAME")
    p.add_argument("--B", type=int, required=True, help="box radius")
    p.add_argument("--mode", choices=("minimal", "weak"))
    p.add_argument("--sample", type=int, help="number of sampled points for large boxes")
    p.add_argument("--seed", type=int)
    p.add_argument("--probe-primes", metavar="LIST", help="primes for the residue-density check")
    p.add_argument("--out", default=".", metavar="DIR")
    p.add_argument("--csv", action="store_true", help="also write records.csv")
    p.set_defaults(func=cmd_run)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (ConfigError, PolynomialSyntaxError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DegenerateMinorError, ZeroHessianMinorError, DegenerateSpecializationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
