"""Per-prime reduction types of hyperelliptic and plane curves.

Node and component counts are geometric, i.e. over the algebraic closure of
F_p, which is what the toric-rank formula m - c + 1 needs.
"""

from __future__ import annotations

import enum
import random
from dataclasses import asdict, dataclass

import numpy as np

from . import finite_field as ffl
from .finite_field import ExtField, FpPoly, factor_list, fp_factorize  # noqa: F401
from .macaulay import COORDINATE_RETRIES, TernaryForm, _random_sl3, gradient
from .poly import BinaryForm

ENUMERATION_MAX_PRIME = 101
ENUMERATION_MAX_POINTS = 2_000_000


class VerdictClass(str, enum.Enum):
    GOOD = "Good"
    MINIMALLY_BAD = "MinimallyBad"
    BAD_SEMISTABLE_NODAL = "BadSemistableNodal"
    NOT_SEMISTABLE_OR_UNKNOWN = "NotSemistableOrUnknown"
    SMALL_PRIME_EXCLUDED = "SmallPrimeExcluded"
    RESIDUAL_UNKNOWN = "ResidualUnknown"


@dataclass(frozen=True)
class PrimeVerdict:
    p: int
    v_delta: int
    verdict: VerdictClass
    m: int | None = None
    c_bar: int | None = None
    toric_rank: int | None = None
    tamagawa_one: bool = False
    rational_components: int | None = None
    rational_singular_points: int | None = None

    @property
    def bad_semistable(self) -> bool:
        return self.verdict in (VerdictClass.MINIMALLY_BAD, VerdictClass.BAD_SEMISTABLE_NODAL)

    def as_dict(self) -> dict:
        d = asdict(self)
        d["verdict"] = self.verdict.value
        return d


def toric_rank(m: int, c: int) -> int:
    """m - c + 1 for a semistable fiber with m nodes and c components."""
    if m < 0 or c < 1:
        raise ValueError("need m >= 0 and c >= 1")
    r = m - c + 1
    if r < 0:
        raise ValueError(f"inconsistent counts m={m}, c={c}")
    return r


# hyperelliptic side

@dataclass(frozen=True)
class MultiplicityProfile:
    """Irreducible factors of F mod p as (degree, multiplicity), plus the root at infinity."""

    degree: int
    factors: tuple[tuple[int, int], ...]
    infinity: int = 0
    leading: int = 1
    p: int = 0

    def __post_init__(self):
        total = sum(d * m for d, m in self.factors) + self.infinity
        if total != self.degree:
            raise AssertionError(f"profile degrees sum to {total}, expected {self.degree}")

    def multiplicities(self) -> list[int]:
        """Multiplicity of every geometric root, infinity included."""
        out = [m for d, m in self.factors for _ in range(d)]
        if self.infinity:
            out.append(self.infinity)
        return out

    @property
    def max_multiplicity(self) -> int:
        return max(self.multiplicities(), default=0)

    @property
    def repeated_roots(self) -> int:
        """Distinct geometric roots of multiplicity >= 2 (the singular points of y^2 = F)."""
        return sum(1 for m in self.multiplicities() if m >= 2)

    @property
    def double_roots(self) -> int:
        return sum(1 for m in self.multiplicities() if m == 2)

    @property
    def all_even(self) -> bool:
        return all(m % 2 == 0 for m in self.multiplicities())


def multiplicity_profile(form: BinaryForm, p: int) -> MultiplicityProfile:
    """Factor F mod p over F_p and read off geometric root multiplicities.

    >>> prof = multiplicity_profile(BinaryForm(6, (2, -5, 4, -1, 0, 0, 0)), 101)
    >>> prof.factors, prof.infinity
    (((1, 1), (1, 2)), 3)
    """
    if p <= form.degree:
        raise ValueError(f"prime {p} must exceed the formal degree {form.degree}")
    coeffs = [c % p for c in form.coeffs]
    if not any(coeffs):
        raise ValueError(f"form vanishes identically mod {p}")
    while coeffs[-1] == 0:
        coeffs.pop()
    infinity = form.degree - (len(coeffs) - 1)
    if len(coeffs) == 1:
        factors = []
    else:
        factors = [(len(g) - 1, m) for g, m in factor_list(coeffs, p)]
    factors.sort()
    return MultiplicityProfile(form.degree, tuple(factors), infinity, coeffs[-1], p)


def _is_square_mod(a: int, p: int) -> bool:
    a %= p
    return a == 0 or pow(a, (p - 1) // 2, p) == 1


def classify_hyperelliptic_prime(form: BinaryForm, p: int, cutoff: int, v_delta: int,
                                 codisc_nonzero: bool | None = None) -> PrimeVerdict:
    """Reduction type of y^2 = F(x, z) at p, F of degree 2g + 2.

    ``codisc_nonzero`` says whether p fails to divide the discriminant of
    F_x; when True, the reduction must be nodal and a triple root raises.
    """
    if form.is_zero():
        raise ValueError("form vanishes identically")
    g = (form.degree - 2) // 2
    if p <= cutoff:
        return PrimeVerdict(p, v_delta, VerdictClass.SMALL_PRIME_EXCLUDED)
    if not any(c % p for c in form.coeffs):
        # the model is not primitive at p, so nothing is read off its reduction
        return PrimeVerdict(p, v_delta, VerdictClass.NOT_SEMISTABLE_OR_UNKNOWN)
    if v_delta == 0:
        return PrimeVerdict(p, 0, VerdictClass.GOOD)
    if v_delta == 1:
        return PrimeVerdict(p, 1, VerdictClass.MINIMALLY_BAD, m=1, c_bar=1, toric_rank=1,
                            tamagawa_one=True, rational_components=1)
    prof = multiplicity_profile(form, p)
    if prof.max_multiplicity <= 2 and prof.double_roots >= 1:
        m = prof.double_roots
        c_bar = 2 if prof.all_even else 1
        rank = toric_rank(m, c_bar)
        if not (0 < rank <= g):
            raise AssertionError(f"toric rank {rank} outside 1..{g}")
        rational = (2 if _is_square_mod(prof.leading, p) else 0) if c_bar == 2 else 1
        return PrimeVerdict(p, v_delta, VerdictClass.BAD_SEMISTABLE_NODAL, m=m, c_bar=c_bar,
                            toric_rank=rank, rational_components=rational)
    if codisc_nonzero:
        raise AssertionError(f"p={p} does not divide the codiscriminant but reduction is not nodal")
    return PrimeVerdict(p, v_delta, VerdictClass.NOT_SEMISTABLE_OR_UNKNOWN)


def hyperelliptic_singular_count(form: BinaryForm, p: int) -> int:
    """Exhaustive count of geometric singular points of y^2 = F mod p.

    Affine singular points are (x, 0) with F(x, 1) = F_x(x, 1) = 0; every one
    of them for a form of degree <= 6 lies in F_{p^2} or F_{p^3}, so scanning
    both fields and removing the F_p points counted twice finds them all.  The
    chart at infinity is singular iff z^2 divides F(1, z).
    """
    if form.degree > 6:
        raise ValueError("exhaustive count supports degree <= 6")
    coeffs = [c % p for c in form.coeffs]
    deriv = [(i * coeffs[i]) % p for i in range(1, len(coeffs))]
    counts = {}
    for e in (1, 2, 3):
        F = ExtField(p, e)
        xs = F.elements()
        hit = F.is_zero(F.eval_univariate(coeffs, xs)) & F.is_zero(F.eval_univariate(deriv, xs))
        counts[e] = int(hit.sum())
    affine = counts[2] + counts[3] - counts[1]
    at_infinity = 1 if coeffs[-1] == 0 and coeffs[-2] == 0 else 0
    return affine + at_infinity


# plane curves

def _projective_points(F: ExtField) -> np.ndarray:
    """Representatives of P^2(F_q) with last nonzero coordinate 1, shape (q^2 + q + 1, 3, e)."""
    q = F.q
    el = F.elements()
    one, zero = F.constant(1), F.constant(0)
    a = np.repeat(el, q, axis=0)
    b = np.tile(el, (q, 1))
    chart_z = np.stack([a, b, np.broadcast_to(one, a.shape)], axis=1)
    chart_y = np.stack([el, np.broadcast_to(one, el.shape), np.broadcast_to(zero, el.shape)], axis=1)
    corner = np.stack([one, zero, zero])[None]
    return np.concatenate([chart_z, chart_y, corner])


def _eval_form(F: ExtField, form: TernaryForm, pts: np.ndarray) -> np.ndarray:
    x, y, z = pts[:, 0], pts[:, 1], pts[:, 2]
    n = len(pts)
    d = form.degree
    powers = []
    for v in (x, y, z):
        pw = [F.constant(1, (n,))]
        for _ in range(d):
            pw.append(F.mul(pw[-1], v))
        powers.append(pw)
    acc = F.constant(0, (n,))
    for (i, j, k), c in form.terms:
        c %= F.p
        if c:
            mono = F.mul(F.mul(powers[0][i], powers[1][j]), powers[2][k])
            acc = F.add(acc, F.scale(mono, c))
    return acc


@dataclass(frozen=True)
class SingularPoint:
    point: tuple
    node: bool


def _tag_singular(F: ExtField, form: TernaryForm, pts: np.ndarray) -> list[SingularPoint]:
    """Keep the singular points among ``pts`` and tag each by Hessian rank."""
    grads = gradient(form)
    # filter one equation at a time; after the first few almost nothing is left
    for g in (*grads, form):
        pts = pts[F.is_zero(_eval_form(F, g, pts))]
        if not len(pts):
            return []
    hess = [[_eval_form(F, gi.derivative(v), pts) for v in ("x", "y", "z")] for gi in grads]
    rank2 = np.zeros(len(pts), dtype=bool)
    for r in ((0, 1), (0, 2), (1, 2)):
        for c in ((0, 1), (0, 2), (1, 2)):
            minor = F.sub(F.mul(hess[r[0]][c[0]], hess[r[1]][c[1]]), F.mul(hess[r[0]][c[1]], hess[r[1]][c[0]]))
            rank2 |= ~F.is_zero(minor)
    return [SingularPoint(tuple(F.to_int(P[i]) for i in range(3)), bool(node)) for P, node in zip(pts, rank2)]


def _y_coefficients(F: ExtField, form: TernaryForm, xs: np.ndarray, count: int) -> list[np.ndarray]:
    """Coefficients of y^j in form(x, y, 1), evaluated at every x in xs."""
    out = []
    for j in range(count):
        coeffs = [0] * (form.degree + 1)
        for (i, jj, _), c in form.terms:
            if jj == j:
                coeffs[i] += c
        out.append(F.eval_univariate(coeffs, xs))
    return out


def _sieved_points(F: ExtField, form: TernaryForm) -> np.ndarray | None:
    """Candidate singular points of a cubic, found without scanning all of P^2.

    In the chart z = 1 a singular point has an x-coordinate at which the
    quadratics f_x(x, y, 1) and f_y(x, y, 1) share a root, so only x where
    their resultant vanishes need a full scan in y.  Returns None when the
    resultant vanishes too often (f_x and f_y share a component).
    """
    xs = F.elements()
    a0, a1, a2 = _y_coefficients(F, form.derivative("x"), xs, 3)
    b0, b1, b2 = _y_coefficients(F, form.derivative("y"), xs, 3)
    mul, sub = F.mul, F.sub
    u = sub(mul(a2, b0), mul(a0, b2))
    v = sub(mul(a2, b1), mul(a1, b2))
    w = sub(mul(a1, b0), mul(a0, b1))
    res = sub(mul(u, u), mul(v, w))
    idx = np.flatnonzero(F.is_zero(res))
    if len(idx) > 8:
        return None
    one, zero = F.constant(1), F.constant(0)
    ys, ys2 = xs, F.mul(xs, xs)
    pieces = []
    for i in idx:
        fx = F.add(F.add(a0[i], F.mul(a1[i], ys)), F.mul(a2[i], ys2))
        fy = F.add(F.add(b0[i], F.mul(b1[i], ys)), F.mul(b2[i], ys2))
        hit = ys[F.is_zero(fx) & F.is_zero(fy)]
        pieces.append(np.stack([np.broadcast_to(xs[i], hit.shape), hit,
                                np.broadcast_to(one, hit.shape)], axis=1))
    pieces.append(np.stack([xs, np.broadcast_to(one, xs.shape), np.broadcast_to(zero, xs.shape)], axis=1))
    pieces.append(np.stack([one, zero, zero])[None])
    return np.concatenate(pieces)


def singular_points_fp(form: TernaryForm, p: int, e: int = 1) -> list[SingularPoint]:
    """All singular points of f = 0 in P^2(F_{p^e}), tagged node iff the Hessian has rank 2.

    Coordinates are scaled so that the last nonzero one is 1, and each
    coordinate in F_{p^e} is written as the integer whose base-p digits are
    its power-basis coefficients; F_p points keep the same labels for every e.
    Cubics are sieved by a resultant in y; other degrees, and cubics whose
    partials share a component, are scanned exhaustively.
    """
    if e not in (1, 2, 3):
        raise ValueError("extension degree must be 1, 2 or 3")
    if p > ENUMERATION_MAX_PRIME:
        raise ValueError(f"p = {p} beyond the enumeration budget ({ENUMERATION_MAX_PRIME})")
    F = ExtField(p, e)
    pts = _sieved_points(F, form) if form.degree == 3 else None
    if pts is None:
        q = p**e
        if q * q + q + 1 > ENUMERATION_MAX_POINTS:
            raise ValueError(f"P^2 over F_{p}^{e} is too large to enumerate")
        pts = _projective_points(F)
    return _tag_singular(F, form, pts)


def geometric_singular_points(form: TernaryForm, p: int) -> list[SingularPoint] | None:
    """Singular points of a plane cubic over the algebraic closure, or None if too costly.

    A reduced cubic has at most three singular points, each defined over
    F_{p^2} or F_{p^3}; the two scans are merged by dropping the F_p points
    found twice.
    """
    if form.degree != 3 or p > ENUMERATION_MAX_PRIME:
        return None
    try:
        s1, s2, s3 = (singular_points_fp(form, p, e) for e in (1, 2, 3))
    except ValueError:
        return None
    rational = {s.point for s in s1}
    return s2 + [s for s in s3 if s.point not in rational]


class _ResidueField:
    """F_p[a]/(g) for monic irreducible g; elements are F_p coefficient lists."""

    def __init__(self, g: list[int], p: int):
        self.g, self.p = g, p

    def red(self, a):
        return ffl.rem(a, self.g, self.p) if len(a) >= len(self.g) else ffl.reduce(a, self.p)

    def mul(self, a, b):
        return self.red(ffl.mul(a, b, self.p))

    def inv(self, a):
        # a^(q - 2) with q = p^k
        return ffl.powmod(a, self.p ** (len(self.g) - 1) - 2, self.g, self.p)


def _kpoly_rem(f, h, K: _ResidueField):
    f = [list(c) for c in f]
    inv = K.inv(h[-1])
    while len(f) >= len(h):
        c = K.mul(f[-1], inv)
        shift = len(f) - len(h)
        for j, hj in enumerate(h):
            f[shift + j] = ffl.sub(f[shift + j], K.mul(c, hj), K.p)
        while f and not f[-1]:
            f.pop()
    return f


def _kpoly_gcd(f, h, K: _ResidueField):
    while h:
        f, h = h, _kpoly_rem(f, h, K)
    return f


def _distinct_common_roots(polys, K: _ResidueField) -> int:
    """Distinct roots over the closure shared by polynomials with coefficients in K."""
    polys = [[K.red(c) for c in f] for f in polys]
    polys = [f[: max((i + 1 for i, c in enumerate(f) if c), default=0)] for f in polys]
    polys = [f for f in polys if f]
    if not polys:
        raise ValueError("all polynomials vanish")
    g = polys[0]
    for f in polys[1:]:
        g = _kpoly_gcd(g, f, K)
    if len(g) <= 1:
        return 0
    dg = [K.red([(i * c) % K.p for c in g[i]]) for i in range(1, len(g))]
    while dg and not dg[-1]:
        dg.pop()
    common = _kpoly_gcd(g, dg, K) if dg else g
    return (len(g) - 1) - (len(common) - 1)


def _coeffs_in_y(form: TernaryForm, z: int, p: int) -> list[list[int]]:
    """form(x, y, z0) as a list over y of F_p[x] coefficient lists."""
    out = [[0] * (form.degree + 1) for _ in range(form.degree + 1)]
    for (i, j, k), c in form.terms:
        out[j][i] += c * z**k
    return [ffl.reduce(c, p) for c in out]


def _count_singular_cubic(form: TernaryForm, p: int) -> int | None:
    forms = (form, *gradient(form))
    a = _coeffs_in_y(forms[1], 1, p)
    b = _coeffs_in_y(forms[2], 1, p)
    a += [[]] * (3 - len(a))
    b += [[]] * (3 - len(b))
    mul, sub = (lambda u, v: ffl.mul(u, v, p)), (lambda u, v: ffl.sub(u, v, p))
    u = sub(mul(a[2], b[0]), mul(a[0], b[2]))
    v = sub(mul(a[2], b[1]), mul(a[1], b[2]))
    w = sub(mul(a[1], b[0]), mul(a[0], b[1]))
    r = sub(mul(u, u), mul(v, w))
    if not r:
        return None
    count = 0
    polys_affine = [_coeffs_in_y(f, 1, p) for f in forms]
    for g, _ in (ffl.factor_list(r, p) if len(r) > 1 else []):
        K = _ResidueField(g, p)
        # substitute x = a, the class of x in K
        count += (len(g) - 1) * _distinct_common_roots(polys_affine, K)
    # the line z = 0: points (x : 1 : 0) and (1 : 0 : 0)
    F1 = _ResidueField([0, 1], p)
    at_inf = []
    for f in forms:
        cs = [0] * (form.degree + 1)
        for (i, j, k), c in f.terms:
            if k == 0:
                cs[i] += c
        at_inf.append([[x % p] if x % p else [] for x in cs])
    count += _distinct_common_roots(at_inf, F1) if any(any(c) for f in at_inf for c in f) else p + 1
    if all(f.evaluate((1, 0, 0)) % p == 0 for f in forms):
        count += 1
    return count


def geometric_singular_count(form: TernaryForm, p: int, *, seed: int = 0) -> int | None:
    """Number of singular points of a plane cubic mod p over the algebraic closure.

    Singular points in the chart z = 1 sit above roots of Res_y(f_x, f_y);
    for each irreducible factor g of that resultant the fibre is cut out by
    a gcd over F_p[a]/(g), and each root over the residue field accounts for
    deg g conjugate points.  The line z = 0 is handled separately.  If the
    resultant vanishes identically the coordinates are moved by a seeded
    SL_3(Z) matrix; None after every retry fails.
    """
    if form.degree != 3:
        return None
    if p <= 3:
        raise ValueError("needs p > 3")
    rng = random.Random(seed)
    current = form
    for _ in range(COORDINATE_RETRIES + 1):
        n = _count_singular_cubic(current.reduce_mod(p), p)
        if n is not None:
            return n
        current = form.transform(_random_sl3(rng))
    return None


def classify_plane_prime(form: TernaryForm, p: int, cutoff: int, v_disc: int,
                         r_nonzero_mod_p: bool) -> PrimeVerdict:
    """Reduction type of the plane curve f = 0 at p from v_p(D(f)) and R(f) mod p."""
    if form.degree < 3:
        raise ValueError("plane classification needs degree >= 3")
    if form.is_zero():
        raise ValueError("form vanishes identically")
    if p <= cutoff:
        return PrimeVerdict(p, v_disc, VerdictClass.SMALL_PRIME_EXCLUDED)
    if not any(c % p for _, c in form.terms):
        return PrimeVerdict(p, v_disc, VerdictClass.NOT_SEMISTABLE_OR_UNKNOWN)
    if v_disc == 0:
        return PrimeVerdict(p, 0, VerdictClass.GOOD)
    if v_disc == 1:
        return PrimeVerdict(p, 1, VerdictClass.MINIMALLY_BAD, m=1, c_bar=1, toric_rank=1,
                            tamagawa_one=True, rational_components=1)
    if not r_nonzero_mod_p:
        return PrimeVerdict(p, v_disc, VerdictClass.NOT_SEMISTABLE_OR_UNKNOWN)
    m = c_bar = rank = None
    rational = None
    if p <= ENUMERATION_MAX_PRIME:
        rational = len(singular_points_fp(form, p, 1))
    count = geometric_singular_count(form, p) if form.degree == 3 else None
    if count and count <= 3:
        # R nonzero mod p makes every singularity a node; a reduced nodal cubic
        # is irreducible (1 node), a conic and a line (2) or three lines (3)
        m = c_bar = count
        rank = toric_rank(m, c_bar)
    return PrimeVerdict(p, v_disc, VerdictClass.BAD_SEMISTABLE_NODAL, m=m, c_bar=c_bar,
                        toric_rank=rank, rational_singular_points=rational)
