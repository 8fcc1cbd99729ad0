"""Sparse multivariate integer polynomials, Sylvester resultants, discriminants.

Polynomial literals use ``+ - * ^`` and parentheses over integer constants and
variable names (``t1``..``tn``, ``x``, ``y``, ``z``); whitespace is ignored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

MAX_UNIVARIATE_DEGREE = 64
MAX_PARAMETERS = 8


class PolynomialSyntaxError(ValueError):
    pass


class IntPoly:
    """Polynomial with integer coefficients in a fixed ordered list of variables.

    Terms are stored as ``{exponent tuple: coefficient}`` with no zero
    coefficients.  Instances are treated as immutable.
    """

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, int] | None = None):
        self.variables = tuple(variables)
        nv = len(self.variables)
        clean = {}
        for exp, c in (terms or {}).items():
            exp = tuple(exp)
            if len(exp) != nv:
                raise ValueError(f"exponent {exp} does not match variables {self.variables}")
            if c:
                clean[exp] = clean.get(exp, 0) + int(c)
                if not clean[exp]:
                    del clean[exp]
        self.terms = clean

    # construction

    @classmethod
    def constant(cls, variables, c: int) -> IntPoly:
        return cls(variables, {(0,) * len(tuple(variables)): c})

    @classmethod
    def var(cls, variables, name: str) -> IntPoly:
        variables = tuple(variables)
        exp = tuple(1 if v == name else 0 for v in variables)
        if name not in variables:
            raise ValueError(f"unknown variable {name!r}")
        return cls(variables, {exp: 1})

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[int], var: str = "x") -> IntPoly:
        """Univariate polynomial with ``coeffs[i]`` the coefficient of var**i."""
        return cls((var,), {(i,): c for i, c in enumerate(coeffs)})

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] | None = None) -> IntPoly:
        return parse_poly(text, variables)

    def with_variables(self, variables: Sequence[str]) -> IntPoly:
        """Re-embed into a superset of variables (order may change)."""
        variables = tuple(variables)
        idx = []
        for v in self.variables:
            if v not in variables:
                raise ValueError(f"variable {v!r} missing from {variables}")
            idx.append(variables.index(v))
        terms = {}
        for exp, c in self.terms.items():
            new = [0] * len(variables)
            for i, e in zip(idx, exp):
                new[i] = e
            terms[tuple(new)] = c
        return IntPoly(variables, terms)

    def _coerce(self, other) -> IntPoly:
        if isinstance(other, IntPoly):
            if other.variables == self.variables:
                return other
            merged = self.variables + tuple(v for v in other.variables if v not in self.variables)
            if merged != self.variables:
                raise ValueError("mixed variable sets; call with_variables first")
            return other.with_variables(merged)
        if isinstance(other, int):
            return IntPoly.constant(self.variables, other)
        return NotImplemented

    # arithmetic

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return IntPoly(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return IntPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return IntPoly(self.variables, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result = IntPoly.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly.constant(self.variables, other)
        if not isinstance(other, IntPoly):
            return NotImplemented
        if other.variables != self.variables:
            try:
                other = other.with_variables(self.variables)
            except ValueError:
                return False
        return self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"IntPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp in sorted(self.terms, reverse=True):
            c = self.terms[exp]
            mono = "*".join(
                v if e == 1 else f"{v}^{e}" for v, e in zip(self.variables, exp) if e
            )
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append(("-" if c < 0 else "+", body))
        sign, first = parts[0]
        out = ("-" if sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    # queries

    def is_zero(self) -> bool:
        return not self.terms

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(e) for e in self.terms)

    def degree(self, var: str | None = None) -> int:
        """Degree in ``var`` (total degree if omitted); -1 for the zero polynomial."""
        if var is None:
            return self.total_degree()
        i = self.variables.index(var)
        if not self.terms:
            return -1
        return max(e[i] for e in self.terms)

    def evaluate(self, point: Sequence[int]) -> int:
        """Exact value at an integer point (one entry per variable)."""
        if len(point) != len(self.variables):
            raise ValueError(f"expected {len(self.variables)} values, got {len(point)}")
        total = 0
        for exp, c in self.terms.items():
            term = c
            for x, e in zip(point, exp):
                if e:
                    term *= x**e
            total += term
        return total

    def derivative(self, var: str) -> IntPoly:
        """Formal partial derivative."""
        i = self.variables.index(var)
        terms = {}
        for exp, c in self.terms.items():
            if exp[i]:
                new = list(exp)
                new[i] -= 1
                terms[tuple(new)] = c * exp[i]
        return IntPoly(self.variables, terms)

    def specialize(self, assignment: Mapping[str, int]) -> IntPoly:
        """Substitute integers for some variables; the rest are kept in order."""
        keep = [i for i, v in enumerate(self.variables) if v not in assignment]
        new_vars = tuple(self.variables[i] for i in keep)
        terms: dict = {}
        for exp, c in self.terms.items():
            coeff = c
            for v, e in zip(self.variables, exp):
                if e and v in assignment:
                    coeff *= assignment[v] ** e
            key = tuple(exp[i] for i in keep)
            terms[key] = terms.get(key, 0) + coeff
        return IntPoly(new_vars, terms)

    def substitute(self, images: Mapping[str, IntPoly]) -> IntPoly:
        """Replace variables by polynomials sharing one target variable list."""
        target = next(iter(images.values())).variables
        out = IntPoly(target)
        for exp, c in self.terms.items():
            term = IntPoly.constant(target, c)
            for v, e in zip(self.variables, exp):
                if e:
                    term = term * images[v] ** e
            out = out + term
        return out

    def coeffs(self, var: str | None = None) -> list:
        """Dense coefficient list of a univariate polynomial, lowest degree first.

        With ``var`` given on a multivariate polynomial, the entries are
        IntPolys in the remaining variables.
        """
        if var is None:
            if len(self.variables) != 1:
                raise ValueError("coeffs() without var needs a univariate polynomial")
            d = self.degree()
            out = [0] * (d + 1)
            for (e,), c in self.terms.items():
                out[e] = c
            return out
        i = self.variables.index(var)
        rest = self.variables[:i] + self.variables[i + 1:]
        buckets: dict = {}
        for exp, c in self.terms.items():
            buckets.setdefault(exp[i], {})[exp[:i] + exp[i + 1:]] = c
        d = self.degree(var)
        return [IntPoly(rest, buckets.get(k, {})) for k in range(d + 1)]

    def content_is_unit(self, p: int) -> bool:
        return any(c % p for c in self.terms.values())

    def reduce_mod(self, p: int) -> IntPoly:
        return IntPoly(self.variables, {e: c % p for e, c in self.terms.items()})


# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()])|(\S))")


def _tokenize(text: str):
    text = text.replace("−", "-")
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, op, bad = m.groups()
        if bad is not None:
            raise PolynomialSyntaxError(f"unexpected character {bad!r} at offset {m.start(4)}")
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("name", name))
        elif op is not None:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
    return out


def _collect_names(tokens) -> list[str]:
    seen = []
    for kind, val in tokens:
        if kind == "name" and val not in seen:
            seen.append(val)
    return seen


def _variable_order(names: Iterable[str]) -> tuple[str, ...]:
    def key(v):
        m = re.fullmatch(r"t(\d+)", v)
        if m:
            return (0, int(m.group(1)), v)
        if v in ("x", "y", "z"):
            return (2, "xyz".index(v), v)
        return (1, 0, v)

    return tuple(sorted(names, key=key))


def parse_poly(text: str, variables: Sequence[str] | None = None) -> IntPoly:
    """Parse a polynomial literal such as ``"(x^2+2*x-2)*(t1^2 - 4)"``.

    ``variables`` fixes the variable list; names outside it are rejected.
    Without it the variables are taken from the text (parameters ``t*``
    first, then ``x, y, z``).
    """
    tokens = _tokenize(text)
    if not tokens:
        raise PolynomialSyntaxError("empty polynomial literal")
    names = _collect_names(tokens)
    if variables is None:
        variables = _variable_order(names)
    else:
        variables = tuple(variables)
        unknown = [v for v in names if v not in variables]
        if unknown:
            raise PolynomialSyntaxError(f"unknown variable(s) {unknown} (allowed: {list(variables)})")
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else (None, None)

    def take(expected=None):
        nonlocal pos
        tok = peek()
        if tok[0] is None:
            raise PolynomialSyntaxError("unexpected end of input")
        if expected is not None and tok != ("op", expected):
            raise PolynomialSyntaxError(f"expected {expected!r}, got {tok[1]!r}")
        pos += 1
        return tok

    def expr():
        node = term()
        while peek() in (("op", "+"), ("op", "-")):
            _, op = take()
            rhs = term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def term():
        node = unary()
        while peek() == ("op", "*"):
            take()
            node = node * unary()
        return node

    def unary():
        if peek() == ("op", "-"):
            take()
            return -unary()
        if peek() == ("op", "+"):
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() == ("op", "^"):
            take()
            kind, val = take()
            if kind != "num":
                raise PolynomialSyntaxError("exponents must be nonnegative decimal integers")
            return base**val
        return base

    def atom():
        kind, val = take()
        if kind == "num":
            return IntPoly.constant(variables, val)
        if kind == "name":
            return IntPoly.var(variables, val)
        if (kind, val) == ("op", "("):
            node = expr()
            take(")")
            return node
        raise PolynomialSyntaxError(f"unexpected token {val!r}")

    result = expr()
    if pos != len(tokens):
        raise PolynomialSyntaxError(f"trailing input at token {tokens[pos][1]!r}")
    return result


# exact linear algebra


def bareiss_det(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free Gaussian elimination (row pivoting)."""
    a = [list(row) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rowk = a[k]
        for i in range(k + 1, n):
            rowi = a[i]
            aik = rowi[k]
            for j in range(k + 1, n):
                rowi[j] = (rowi[j] * akk - aik * rowk[j]) // prev
            rowi[k] = 0
        prev = akk
    return sign * a[n - 1][n - 1]


def det_mod_p(matrix: Sequence[Sequence[int]], p: int) -> int:
    """Determinant over F_p, returned in [0, p)."""
    a = [[x % p for x in row] for row in matrix]
    n = len(a)
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        akk = a[k][k]
        det = det * akk % p
        inv = pow(akk, p - 2, p)
        for i in range(k + 1, n):
            f = a[i][k] * inv % p
            if f:
                rowi, rowk = a[i], a[k]
                for j in range(k + 1, n):
                    rowi[j] = (rowi[j] - f * rowk[j]) % p
    return det % p


# resultants and discriminants


def sylvester_matrix(f: Sequence[int], g: Sequence[int]) -> list[list[int]]:
    """Sylvester matrix of two dense coefficient lists (lowest degree first).

    The lengths fix the formal degrees, so leading zeros are allowed.
    """
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    fd, gd = list(reversed(f)), list(reversed(g))
    rows = []
    for i in range(n):
        rows.append([0] * i + fd + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + gd + [0] * (size - n - 1 - i))
    return rows


def _univariate_coeffs(f: IntPoly) -> list[int]:
    if len(f.variables) != 1:
        raise ValueError(f"expected a univariate polynomial, got variables {f.variables}")
    return f.coeffs()


def sylvester_resultant(f: IntPoly, g: IntPoly) -> int:
    """Res(f, g): determinant of the (deg f + deg g)-square Sylvester matrix."""
    if f.is_zero() or g.is_zero():
        raise ValueError("resultant with the zero polynomial is undefined")
    if f.variables != g.variables:
        raise ValueError("resultant needs both polynomials in the same variable")
    fc, gc = _univariate_coeffs(f), _univariate_coeffs(g)
    if len(fc) + len(gc) - 2 < 1:
        raise ValueError("resultant of two constants is undefined")
    if max(len(fc), len(gc)) - 1 > MAX_UNIVARIATE_DEGREE:
        raise ValueError(f"degree exceeds {MAX_UNIVARIATE_DEGREE}")
    if len(gc) == 1:
        return gc[0] ** (len(fc) - 1)
    if len(fc) == 1:
        return fc[0] ** (len(gc) - 1)
    return bareiss_det(sylvester_matrix(fc, gc))


def discriminant(f: IntPoly) -> int:
    """(-1)^(n(n-1)/2) Res(f, f') / lc(f) for univariate f of degree n >= 2."""
    fc = _univariate_coeffs(f)
    n = len(fc) - 1
    if n < 2:
        raise ValueError("discriminant needs degree >= 2")
    return _formal_discriminant(fc)


def _disc_matrix(coeffs: Sequence[int]) -> list[list[int]]:
    # Sylvester(F, F') has first column lc*(1, 0.., N, 0..); dividing that
    # column by lc is exact, so lc = 0 needs no special case.
    n = len(coeffs) - 1
    deriv = [i * coeffs[i] for i in range(1, n + 1)]
    mat = sylvester_matrix(list(coeffs), deriv)
    for row in mat:
        row[0] = 0
    mat[0][0] = 1
    mat[n - 1][0] = n
    return mat


def _formal_discriminant(coeffs: Sequence[int]) -> int:
    n = len(coeffs) - 1
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * bareiss_det(_disc_matrix(coeffs))


def formal_discriminant_mod(coeffs: Sequence[int], p: int) -> int:
    """The formal-degree discriminant reduced mod p, by elimination over F_p."""
    n = len(coeffs) - 1
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * det_mod_p(_disc_matrix(coeffs), p) % p


@dataclass(frozen=True)
class BinaryForm:
    """F(x, z) = sum coeffs[i] * x^i * z^(degree - i)."""

    degree: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.degree < 1:
            raise ValueError("binary form degree must be positive")
        if len(self.coeffs) != self.degree + 1:
            raise ValueError(f"degree {self.degree} form needs {self.degree + 1} coefficients")

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def dehomogenize(self, var: str = "x") -> IntPoly:
        """F(x, 1)."""
        return IntPoly.from_coeffs(self.coeffs, var)

    def evaluate(self, x: int, z: int) -> int:
        return sum(c * x**i * z ** (self.degree - i) for i, c in enumerate(self.coeffs))

    def x_derivative(self) -> BinaryForm:
        return BinaryForm(self.degree - 1, tuple(i * self.coeffs[i] for i in range(1, self.degree + 1)))

    def reduce_mod(self, p: int) -> BinaryForm:
        return BinaryForm(self.degree, tuple(c % p for c in self.coeffs))

    def __str__(self):
        n = self.degree
        parts = []
        for i in range(n, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "*".join(
                s for s in (
                    "" if i == 0 else ("x" if i == 1 else f"x^{i}"),
                    "" if n - i == 0 else ("z" if n - i == 1 else f"z^{n - i}"),
                ) if s
            )
            parts.append((c, mono))
        if not parts:
            return "0"
        out = ""
        for k, (c, mono) in enumerate(parts):
            sign = "-" if c < 0 else "+"
            body = mono if (abs(c) == 1 and mono) else (f"{abs(c)}*{mono}" if mono else str(abs(c)))
            if k == 0:
                out = ("-" if c < 0 else "") + body
            else:
                out += f" {sign} {body}"
        return out


def homogenize_binary(f: IntPoly, target_degree: int) -> BinaryForm:
    """Homogenize univariate f to a binary form of the given formal degree."""
    fc = _univariate_coeffs(f) if not f.is_zero() else [0]
    if len(fc) - 1 > target_degree:
        raise ValueError(f"degree {len(fc) - 1} exceeds target degree {target_degree}")
    if target_degree > MAX_UNIVARIATE_DEGREE:
        raise ValueError(f"degree exceeds {MAX_UNIVARIATE_DEGREE}")
    return BinaryForm(target_degree, tuple(fc) + (0,) * (target_degree + 1 - len(fc)))


def binary_discriminant(form: BinaryForm) -> int:
    """Discriminant of a binary form at its formal degree.

    Agrees with ``discriminant`` of the dehomogenization whenever the
    leading coefficient is nonzero; a vanishing leading coefficient means a
    root at infinity and is handled without division.
    """
    if form.degree < 2:
        raise ValueError("discriminant needs degree >= 2")
    return _formal_discriminant(form.coeffs)
