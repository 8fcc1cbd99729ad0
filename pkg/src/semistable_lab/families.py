"""Curve families over Z^n: config files, specialization and bundled fixtures.

A hyperelliptic family is y^2 = a_{2g+2}(t) x^{2g+2} + ... + a_0(t) and is
always specialized to the binary form of formal degree 2g + 2, so a leading
coefficient that vanishes at t becomes a root at infinity rather than a
drop in degree.  A plane family lists one coefficient per monomial of
degree d in the order of ``macaulay.monomials`` (x^d first, z^d last).
"""

from __future__ import annotations

import enum
import json
import math
import random
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .arith import factorize
from .macaulay import MAX_PLANE_DEGREE, TernaryForm, monomials, plane_disc_proxy, transversality_resultant
from .poly import MAX_PARAMETERS, BinaryForm, IntPoly, binary_discriminant, parse_poly


class ConfigError(ValueError):
    """Malformed or inconsistent family configuration."""


class Mode(str, enum.Enum):
    MINIMALLY_BAD = "minimally-bad"
    WEAK_HYPERELLIPTIC = "weak-hyperelliptic"
    WEAK_PLANE = "weak-plane"


CONFIG_KEYS = {"kind", "g", "d", "n", "coeffs", "c", "A", "mode"}
NODAL_CUBIC = "x^3 + y^3 - x*y*z"


def nodal_plane_curve(d: int = 3) -> TernaryForm:
    """x^d + y^d - x y z^(d-2): a single node at (0:0:1)."""
    zpart = "*z" if d == 3 else f"*z^{d - 2}"
    return TernaryForm.parse(f"x^{d} + y^{d} - x*y{zpart}")


def default_cutoff(kind: str, degree: int) -> int:
    if kind == "hyperelliptic":
        return 2 * degree + 2
    return max(degree, 3 * (degree - 1))


@dataclass(frozen=True)
class CurveFamily:
    name: str
    kind: str
    degree: int  # genus g for hyperelliptic families, plane degree d otherwise
    n: int
    coeffs: tuple[IntPoly, ...]
    declared_c: int
    cutoff: int
    mode: Mode

    def __post_init__(self):
        if self.kind not in ("hyperelliptic", "plane"):
            raise ConfigError(f"unknown kind {self.kind!r}")
        # the full families carry one parameter per coefficient, which for the
        # plane cubic is 10; anything else is held to the general bound
        if not 1 <= self.n <= max(MAX_PARAMETERS, len(self.coeffs)):
            raise ConfigError(f"n must lie in 1..{max(MAX_PARAMETERS, len(self.coeffs))}")
        if self.declared_c < 1:
            raise ConfigError("declared c must be positive")
        if self.kind == "hyperelliptic":
            if self.degree < 1:
                raise ConfigError("genus must be at least 1")
            expected = 2 * self.degree + 3
            if self.mode == Mode.WEAK_PLANE:
                raise ConfigError("weak-plane mode needs a plane family")
        else:
            if not 3 <= self.degree <= MAX_PLANE_DEGREE:
                raise ConfigError(f"plane degree must lie in 3..{MAX_PLANE_DEGREE}")
            expected = len(monomials(self.degree))
            if self.mode == Mode.WEAK_HYPERELLIPTIC:
                raise ConfigError("weak-hyperelliptic mode needs a hyperelliptic family")
        if len(self.coeffs) != expected:
            raise ConfigError(f"expected {expected} coefficient polynomials, got {len(self.coeffs)}")
        if self.cutoff < default_cutoff(self.kind, self.degree):
            raise ConfigError(f"cutoff A must be at least {default_cutoff(self.kind, self.degree)}")
        for c in self.coeffs:
            if c.variables != self.parameters:
                raise ConfigError("coefficient polynomials must use the variables t1..tn")
        top = self.coeffs[-2:] if self.kind == "hyperelliptic" else self.coeffs
        if all(c.is_zero() for c in top):
            raise ConfigError("family is degenerate: leading coefficients vanish identically")

    @property
    def parameters(self) -> tuple[str, ...]:
        return tuple(f"t{i + 1}" for i in range(self.n))

    @property
    def formal_degree(self) -> int:
        return 2 * self.degree + 2 if self.kind == "hyperelliptic" else self.degree

    @property
    def genus(self) -> int:
        if self.kind == "hyperelliptic":
            return self.degree
        return (self.degree - 1) * (self.degree - 2) // 2

    def curve_at(self, t: Sequence[int]) -> BinaryForm | TernaryForm:
        if len(t) != self.n:
            raise ValueError(f"expected {self.n} parameters, got {len(t)}")
        vals = [c.evaluate(t) for c in self.coeffs]
        if self.kind == "hyperelliptic":
            return BinaryForm(self.formal_degree, tuple(vals))
        return TernaryForm.from_coeffs(self.degree, vals)

    def to_dict(self) -> dict:
        out = {"kind": self.kind, ("g" if self.kind == "hyperelliptic" else "d"): self.degree,
               "n": self.n, "coeffs": [str(c) for c in self.coeffs], "c": self.declared_c,
               "A": self.cutoff, "mode": self.mode.value}
        return out


def _parse_coeffs(texts: Sequence[str], n: int) -> tuple[IntPoly, ...]:
    params = tuple(f"t{i + 1}" for i in range(n))
    out = []
    for s in texts:
        if not isinstance(s, (str, int)):
            raise ConfigError(f"coefficient {s!r} is not a polynomial string")
        s = str(s)
        if n == 1:
            # a lone parameter may be written t
            s = _rename_t(s)
        try:
            out.append(parse_poly(s, params))
        except ValueError as exc:
            raise ConfigError(f"bad coefficient {s!r}: {exc}") from None
    return tuple(out)


def _rename_t(s: str) -> str:
    return re.sub(r"\bt\b", "t1", s)


def family_from_dict(data: dict, name: str = "family") -> CurveFamily:
    if not isinstance(data, dict):
        raise ConfigError("family config must be a JSON object")
    unknown = set(data) - CONFIG_KEYS
    if unknown:
        raise ConfigError(f"unknown keys: {sorted(unknown)}")
    try:
        kind = data["kind"]
        n = int(data["n"])
        if kind == "hyperelliptic":
            degree = int(data["g"])
        elif kind == "plane":
            degree = int(data["d"])
        else:
            raise ConfigError(f"unknown kind {kind!r}")
        coeffs = _parse_coeffs(data["coeffs"], n)
        c = int(data.get("c", 1))
        cutoff = int(data.get("A", default_cutoff(kind, degree)))
        mode = Mode(data.get("mode", Mode.MINIMALLY_BAD.value))
    except KeyError as exc:
        raise ConfigError(f"missing key {exc.args[0]!r}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(str(exc)) from None
    return CurveFamily(name, kind, degree, n, coeffs, c, cutoff, mode)


def load_family(path: str | Path) -> CurveFamily:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None
    return family_from_dict(data, path.stem)


# fixtures

def _hyper_from_poly(name: str, f: IntPoly, g: int, c: int, mode: Mode) -> CurveFamily:
    """Family y^2 = f(t1, x), read off coefficient by coefficient in x."""
    f = f.with_variables(("t1", "x"))
    cols = f.coeffs("x")
    cols += [IntPoly(("t1",))] * (2 * g + 3 - len(cols))
    return CurveFamily(name, "hyperelliptic", g, 1, tuple(cols), c, 2 * g + 2, mode)


def standard_hyperelliptic(g: int = 1) -> CurveFamily:
    """All curves y^2 = a_{2g+2} x^{2g+2} + ... + a_0, one parameter per coefficient."""
    n = 2 * g + 3
    params = tuple(f"t{i + 1}" for i in range(n))
    coeffs = tuple(IntPoly.var(params, v) for v in params)
    return CurveFamily(f"standard-hyperelliptic-{g}", "hyperelliptic", g, n, coeffs, 1, 2 * g + 2,
                       Mode.MINIMALLY_BAD)


def isotrivial(ell: int = 3) -> CurveFamily:
    """y^2 = x^ell + t, modelled as a binary form of degree 2g + 2."""
    if ell < 3:
        raise ValueError("need ell >= 3")
    g = (ell - 1) // 2
    return _hyper_from_poly(f"isotrivial-{ell}", parse_poly(f"x^{ell} + t1", ("t1", "x")), g, 1,
                            Mode.WEAK_HYPERELLIPTIC)


def twist(f: str = "x^3 + x + 1") -> CurveFamily:
    """t y^2 = f(x), i.e. y^2 = t f(x) after rescaling y."""
    base = parse_poly(f, ("x",))
    g = (base.degree() - 1) // 2
    return _hyper_from_poly("twist", parse_poly(f"t1*({f})", ("t1", "x")), g, 1, Mode.WEAK_HYPERELLIPTIC)


QM_POLY = "(x^2 + 2*x - 2)*(x^4 + 4*x^3 + (2*t1^2 - 8)*x - t1^2 + 4)"


def qm_family() -> CurveFamily:
    """A genus-2 family with quaternionic multiplication; Delta has the factors t, t - 2, t + 2."""
    return _hyper_from_poly("qm", parse_poly(QM_POLY, ("t1", "x")), 2, 3, Mode.WEAK_HYPERELLIPTIC)


def standard_plane(d: int = 3) -> CurveFamily:
    mons = monomials(d)
    params = tuple(f"t{i + 1}" for i in range(len(mons)))
    coeffs = tuple(IntPoly.var(params, v) for v in params)
    return CurveFamily(f"standard-plane-{'cubic' if d == 3 else d}", "plane", d, len(params), coeffs, 1,
                       default_cutoff("plane", d), Mode.MINIMALLY_BAD)


def bundled_fixtures() -> list[CurveFamily]:
    return [standard_hyperelliptic(1), isotrivial(3), twist(), qm_family(), standard_plane(3)]


def fixture(name: str) -> CurveFamily:
    """Look up a fixture by name; the numbered ones take any genus or exponent."""
    if name.startswith("standard-hyperelliptic-"):
        return standard_hyperelliptic(int(name.rsplit("-", 1)[1]))
    if name.startswith("isotrivial-"):
        return isotrivial(int(name.rsplit("-", 1)[1]))
    table = {"twist": twist, "qm": qm_family, "standard-plane-cubic": standard_plane}
    if name not in table:
        raise ConfigError(f"unknown fixture {name!r}")
    return table[name]()


# specialization


@dataclass(frozen=True)
class Specialization:
    t: tuple[int, ...]
    curve: BinaryForm | TernaryForm
    disc: int
    degenerate: bool
    reason: str | None = None


def disc_at(family: CurveFamily, t: Sequence[int]) -> int:
    """Delta(t) for hyperelliptic families, D(f_t) for plane ones; specialize first, then eliminate."""
    curve = family.curve_at(t)
    if curve.is_zero():
        return 0
    if family.kind == "hyperelliptic":
        return binary_discriminant(curve)
    return plane_disc_proxy(curve)


def codisc_at(family: CurveFamily, t: Sequence[int]) -> int:
    """Delta'(t), the discriminant of F_x at formal degree 2g + 1, or R(f_t) for plane families."""
    curve = family.curve_at(t)
    if curve.is_zero():
        return 0
    if family.kind == "hyperelliptic":
        return binary_discriminant(curve.x_derivative())
    return transversality_resultant(curve)


def specialize(family: CurveFamily, t: Sequence[int]) -> Specialization:
    t = tuple(int(v) for v in t)
    curve = family.curve_at(t)
    if curve.is_zero():
        return Specialization(t, curve, 0, True, "curve vanishes identically")
    d = disc_at(family, t)
    if d == 0:
        return Specialization(t, curve, 0, True, "discriminant vanishes")
    return Specialization(t, curve, d, False)


def spot_check(family: CurveFamily, samples: int = 24, radius: int = 50, seed: int = 0) -> list[str]:
    """Numeric sanity checks of the family hypotheses; returns warnings, never raises.

    Checks that Delta is not identically zero, that some sampled Delta(t) has
    a prime above A to the first power (Delta not squarefull), and in weak
    modes that the exclusion divisor does not swallow every bad prime.
    """
    rng = random.Random(seed)
    warnings = []
    discs, covered, excl_zero = [], 0, 0
    squarefree_seen = False
    for _ in range(samples):
        t = [rng.randint(-radius, radius) for _ in range(family.n)]
        d = disc_at(family, t)
        if d == 0:
            continue
        discs.append(d)
        fac = factorize(d, rho_cap=20000)
        big = [(p, e) for p, e in fac.factors if p > family.cutoff]
        if any(e == 1 for _, e in big):
            squarefree_seen = True
        if family.mode != Mode.MINIMALLY_BAD:
            try:
                e = codisc_at(family, t)
            except ArithmeticError:
                e = 0
            if e == 0:
                excl_zero += 1
            if all(e % p == 0 for p, _ in big):
                covered += 1
    if not discs:
        warnings.append("discriminant vanished at every sampled point; family looks degenerate")
        return warnings
    if family.mode == Mode.MINIMALLY_BAD and not squarefree_seen:
        warnings.append("no sampled discriminant had a simple prime factor above A; Delta may be squarefull")
    if family.mode != Mode.MINIMALLY_BAD:
        if excl_zero == len(discs):
            warnings.append("exclusion divisor vanished at every sampled point")
        if covered == len(discs):
            warnings.append("every bad prime of every sample divides the exclusion divisor")
    g = 0
    for d in discs:
        g = math.gcd(g, d)
    fixed = [p for p in factorize(g).primes if p > family.cutoff] if len(discs) > 1 else []
    if fixed:
        warnings.append(f"primes {fixed} above A divide every sampled discriminant")
    return warnings
