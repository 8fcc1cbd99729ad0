"""Ternary forms and the Macaulay resultant of three of them.

The resultant is det(M) / det(M') where M is the Macaulay matrix in the
critical degree d1 + d2 + d3 - 2 and M' its extraneous minor (rows and
columns of monomials divisible by x_i^d_i for more than one i).  When M'
happens to be singular the forms are moved by a seeded SL_3(Z) change of
coordinates, which leaves the resultant unchanged.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Mapping, Sequence

from .poly import IntPoly, bareiss_det

XYZ = ("x", "y", "z")
MAX_PLANE_DEGREE = 5
COORDINATE_RETRIES = 8


class DegenerateMinorError(ArithmeticError):
    """The extraneous minor stayed singular after every coordinate change."""


class ZeroHessianMinorError(ArithmeticError):
    """H_xy vanishes identically, so the transversality test does not apply."""


def monomials(degree: int) -> list[tuple[int, int, int]]:
    """Exponent triples of the given degree, lexicographically descending."""
    return [(i, j, degree - i - j) for i in range(degree, -1, -1) for j in range(degree - i, -1, -1)]


@dataclass(frozen=True)
class TernaryForm:
    """Homogeneous f(x, y, z) = sum c * x^i y^j z^k over i + j + k = degree."""

    degree: int
    terms: tuple[tuple[tuple[int, int, int], int], ...]

    def __init__(self, degree: int, terms: Mapping[tuple[int, int, int], int] | None = None):
        if degree < 0:
            raise ValueError("degree must be nonnegative")
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != 3 or sum(exp) != degree or min(exp) < 0:
                raise ValueError(f"exponent {exp} is not a degree-{degree} monomial")
            c = int(c)
            if c:
                clean[exp] = clean.get(exp, 0) + c
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "terms", tuple(sorted(((e, c) for e, c in clean.items() if c), reverse=True)))

    @classmethod
    def from_poly(cls, f: IntPoly) -> TernaryForm:
        if f.is_zero():
            raise ValueError("zero polynomial has no degree")
        f = f.with_variables(XYZ)
        degs = {sum(e) for e in f.terms}
        if len(degs) != 1:
            raise ValueError("polynomial is not homogeneous")
        return cls(degs.pop(), dict(f.terms))

    @classmethod
    def parse(cls, text: str) -> TernaryForm:
        return cls.from_poly(IntPoly.parse(text, XYZ))

    @classmethod
    def from_coeffs(cls, degree: int, coeffs: Sequence[int]) -> TernaryForm:
        """Coefficients listed in the order of ``monomials(degree)``."""
        mons = monomials(degree)
        if len(coeffs) != len(mons):
            raise ValueError(f"degree {degree} needs {len(mons)} coefficients")
        return cls(degree, dict(zip(mons, coeffs)))

    def as_dict(self) -> dict:
        return dict(self.terms)

    def coeff_vector(self) -> list[int]:
        d = self.as_dict()
        return [d.get(m, 0) for m in monomials(self.degree)]

    def to_poly(self) -> IntPoly:
        return IntPoly(XYZ, self.as_dict())

    def is_zero(self) -> bool:
        return not self.terms

    def derivative(self, var: str) -> TernaryForm:
        i = XYZ.index(var)
        out = {}
        for exp, c in self.terms:
            if exp[i]:
                e = list(exp)
                e[i] -= 1
                out[tuple(e)] = c * exp[i]
        return TernaryForm(max(self.degree - 1, 0), out)

    def evaluate(self, point: Sequence[int]) -> int:
        x, y, z = point
        return sum(c * x**i * y**j * z**k for (i, j, k), c in self.terms)

    def reduce_mod(self, p: int) -> TernaryForm:
        return TernaryForm(self.degree, {e: c % p for e, c in self.terms})

    def scale(self, lam: int) -> TernaryForm:
        return TernaryForm(self.degree, {e: c * lam for e, c in self.terms})

    def transform(self, matrix: Sequence[Sequence[int]]) -> TernaryForm:
        """f(M (x, y, z)^T), i.e. x -> m00 x + m01 y + m02 z and so on."""
        lin = [IntPoly(XYZ, {(1, 0, 0): row[0], (0, 1, 0): row[1], (0, 0, 1): row[2]}) for row in matrix]
        g = self.to_poly().substitute(dict(zip(XYZ, lin)))
        return TernaryForm(self.degree, dict(g.terms))

    def __mul__(self, other: TernaryForm) -> TernaryForm:
        return TernaryForm(self.degree + other.degree, dict((self.to_poly() * other.to_poly()).terms))

    def __sub__(self, other: TernaryForm) -> TernaryForm:
        if self.degree != other.degree:
            raise ValueError("degrees differ")
        return TernaryForm(self.degree, dict((self.to_poly() - other.to_poly()).terms))

    def __str__(self):
        return str(self.to_poly()) if self.terms else "0"


def gradient(f: TernaryForm) -> tuple[TernaryForm, TernaryForm, TernaryForm]:
    return f.derivative("x"), f.derivative("y"), f.derivative("z")


def hessian_minor_xy(f: TernaryForm) -> TernaryForm:
    """H_xy = f_xx f_yy - f_xy^2, a form of degree 2(d - 2).

    >>> str(hessian_minor_xy(TernaryForm.parse("x^3 + y^3 + z^3")))
    '36*x*y'
    """
    if f.degree < 2:
        raise ValueError("Hessian minor needs degree >= 2")
    fx = f.derivative("x")
    fxx, fxy, fyy = fx.derivative("x"), fx.derivative("y"), f.derivative("y").derivative("y")
    return fxx * fyy - fxy * fxy


def _macaulay_matrices(forms: Sequence[TernaryForm]):
    degs = [g.degree for g in forms]
    D = sum(degs) - 2
    mons = monomials(D)
    index = {m: i for i, m in enumerate(mons)}
    rows = []
    reduced = []
    for m in mons:
        divisible = [i for i in range(3) if m[i] >= degs[i]]
        i = divisible[0]
        shift = list(m)
        shift[i] -= degs[i]
        row = [0] * len(mons)
        for exp, c in forms[i].terms:
            row[index[(exp[0] + shift[0], exp[1] + shift[1], exp[2] + shift[2])]] = c
        rows.append(row)
        reduced.append(len(divisible) == 1)
    extra = [k for k, r in enumerate(reduced) if not r]
    minor = [[rows[a][b] for b in extra] for a in extra]
    return rows, minor


def _random_sl3(rng: random.Random) -> list[list[int]]:
    # product of elementary matrices, so the determinant is exactly 1
    m = [[1, 0, 0], [0, 1, 0], [0, 0, 1]]
    for _ in range(6):
        i, j = rng.sample(range(3), 2)
        k = rng.choice((-2, -1, 1, 2))
        for r in range(3):
            m[r][j] += k * m[r][i]
    return m


def macaulay_resultant(g1: TernaryForm, g2: TernaryForm, g3: TernaryForm, *, seed: int = 0) -> int:
    """Res(g1, g2, g3), normalized so that Res(x^a, y^b, z^c) = 1.

    >>> macaulay_resultant(*(TernaryForm.parse(s) for s in ("x", "y", "z")))
    1
    """
    forms = [g1, g2, g3]
    for g in forms:
        if g.is_zero():
            raise ValueError("resultant of a zero form is undefined")
        if g.degree < 1:
            raise ValueError("forms must have positive degree")
    rng = random.Random(seed)
    current = forms
    for _ in range(COORDINATE_RETRIES + 1):
        rows, minor = _macaulay_matrices(current)
        denom = bareiss_det(minor)
        if denom:
            num = bareiss_det(rows)
            q, r = divmod(num, denom)
            if r:
                raise ArithmeticError("extraneous factor does not divide the Macaulay determinant")
            return q
        m = _random_sl3(rng)
        current = [g.transform(m) for g in forms]
    raise DegenerateMinorError(f"extraneous minor singular after {COORDINATE_RETRIES} coordinate changes")


def plane_disc_proxy(f: TernaryForm, *, seed: int = 0) -> int:
    """D(f) = Res(f_x, f_y, f_z); zero iff the curve f = 0 is singular."""
    if f.degree < 2:
        raise ValueError("plane discriminant needs degree >= 2")
    if f.degree > MAX_PLANE_DEGREE:
        raise ValueError(f"plane degree above {MAX_PLANE_DEGREE} is not supported")
    fx, fy, fz = gradient(f)
    if fx.is_zero() or fy.is_zero() or fz.is_zero():
        # a vanishing partial means the curve is a cone over a point: singular
        return 0
    return macaulay_resultant(fx, fy, fz, seed=seed)


def transversality_resultant(f: TernaryForm, *, seed: int = 0) -> int:
    """R(f) = Res(H_xy, f_x, f_y)."""
    if f.degree < 3:
        raise ValueError("transversality resultant needs degree >= 3")
    if f.degree > MAX_PLANE_DEGREE:
        raise ValueError(f"plane degree above {MAX_PLANE_DEGREE} is not supported")
    h = hessian_minor_xy(f)
    if h.is_zero():
        raise ZeroHessianMinorError("H_xy is identically zero")
    fx, fy = f.derivative("x"), f.derivative("y")
    if fx.is_zero() or fy.is_zero():
        return 0
    return macaulay_resultant(h, fx, fy, seed=seed)
