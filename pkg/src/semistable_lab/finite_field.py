"""Polynomials over F_p and vectorized arithmetic in small extensions F_{p^e}.

Univariate polynomials are coefficient lists, lowest degree first, with no
trailing zeros; ``[]`` is the zero polynomial.  ``FpPoly`` wraps such a list
together with its modulus for the public API.
"""

from __future__ import annotations

import functools
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arith import is_prime


def trim(f: list[int]) -> list[int]:
    while f and f[-1] == 0:
        f.pop()
    return f


def reduce(f: Sequence[int], p: int) -> list[int]:
    return trim([c % p for c in f])


def degree(f: Sequence[int]) -> int:
    return len(f) - 1


def add(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) + (g[i] if i < len(g) else 0)) % p for i in range(n)])


def sub(f, g, p):
    n = max(len(f), len(g))
    return trim([((f[i] if i < len(f) else 0) - (g[i] if i < len(g) else 0)) % p for i in range(n)])


def mul(f, g, p):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] += a * b
    return reduce(out, p)


def scale(f, c, p):
    return reduce([a * c for a in f], p)


def divmod_poly(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], p - 2, p)
    q = [0] * max(len(f) - dg, 0)
    for i in range(len(f) - 1, dg - 1, -1):
        c = f[i] * inv % p
        if c:
            q[i - dg] = c
            for j in range(dg + 1):
                f[i - dg + j] = (f[i - dg + j] - c * g[j]) % p
    return trim(q), trim(f[:dg] if dg > 0 else [])


def rem(f, g, p):
    return divmod_poly(f, g, p)[1]


def monic(f, p):
    if not f:
        return []
    inv = pow(f[-1], p - 2, p)
    return [c * inv % p for c in f]


def gcd(f, g, p):
    f, g = reduce(f, p), reduce(g, p)
    while g:
        f, g = g, rem(f, g, p)
    return monic(f, p)


def derivative(f, p):
    return reduce([i * f[i] for i in range(1, len(f))], p)


def powmod(f, e, m, p):
    result = [1]
    base = rem(f, m, p)
    while e:
        if e & 1:
            result = rem(mul(result, base, p), m, p)
        base = rem(mul(base, base, p), m, p)
        e >>= 1
    return result


def evaluate(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def _pth_root(f, p):
    # f' == 0 so f only has exponents divisible by p; coefficients are their own p-th roots
    return trim([f[i] for i in range(0, len(f), p)])


def squarefree_decomposition(f, p) -> list[tuple[list[int], int]]:
    """Monic squarefree, pairwise coprime (g, multiplicity) with prod g^m = f / lc."""
    f = monic(reduce(f, p), p)
    if len(f) <= 1:
        return []
    out = []
    df = derivative(f, p)
    if not df:
        return [(g, m * p) for g, m in squarefree_decomposition(_pth_root(f, p), p)]
    c = gcd(f, df, p)
    w = divmod_poly(f, c, p)[0]
    i = 1
    while len(w) > 1:
        y = gcd(w, c, p)
        fac = divmod_poly(w, y, p)[0]
        if len(fac) > 1:
            out.append((monic(fac, p), i))
        w = y
        c = divmod_poly(c, y, p)[0]
        i += 1
    if len(c) > 1:
        out.extend((g, m * p) for g, m in squarefree_decomposition(_pth_root(c, p), p))
    return out


def distinct_degree(f, p) -> list[tuple[list[int], int]]:
    """Split monic squarefree f into products of irreducibles of equal degree."""
    out = []
    i = 1
    h = [0, 1]
    x = [0, 1]
    while len(f) - 1 >= 2 * i:
        h = powmod(h, p, f, p)
        g = gcd(sub(h, x, p), f, p)
        if len(g) > 1:
            out.append((g, i))
            f = divmod_poly(f, g, p)[0]
            h = rem(h, f, p)
        i += 1
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def equal_degree(f, d, p, rng: random.Random) -> list[list[int]]:
    """Cantor-Zassenhaus splitting of monic squarefree f into degree-d irreducibles."""
    n = len(f) - 1
    if n == d:
        return [f]
    while True:
        a = trim([rng.randrange(p) for _ in range(n)])
        if len(a) < 2:
            continue
        if p == 2:
            t, acc = a, a
            for _ in range(d - 1):
                t = rem(mul(t, t, p), f, p)
                acc = add(acc, t, p)
            b = acc
        else:
            b = sub(powmod(a, (p**d - 1) // 2, f, p), [1], p)
        g = gcd(b, f, p)
        if 1 < len(g) < len(f):
            break
    return equal_degree(g, d, p, rng) + equal_degree(divmod_poly(f, g, p)[0], d, p, rng)


def factor_list(f: Sequence[int], p: int) -> list[tuple[list[int], int]]:
    """Monic irreducible factors with multiplicities, sorted by (degree, coeffs)."""
    f = reduce(f, p)
    if not f:
        raise ValueError("cannot factor the zero polynomial")
    rng = random.Random(hash((p, tuple(f))) & 0xFFFFFFFF)
    out = []
    for g, m in squarefree_decomposition(f, p):
        for h, d in distinct_degree(g, p):
            for irr in equal_degree(h, d, p, rng):
                out.append((irr, m))
    out.sort(key=lambda item: (len(item[0]), item[0][::-1], item[1]))
    return out


@dataclass(frozen=True)
class FpPoly:
    """Univariate polynomial over F_p; coefficients lowest degree first."""

    p: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(reduce(self.coeffs, self.p)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __mul__(self, other: FpPoly) -> FpPoly:
        return FpPoly(self.p, tuple(mul(self.coeffs, other.coeffs, self.p)))

    def __pow__(self, k: int) -> FpPoly:
        out = FpPoly(self.p, (1,))
        for _ in range(k):
            out = out * self
        return out

    def monic(self) -> FpPoly:
        return FpPoly(self.p, tuple(monic(list(self.coeffs), self.p)))

    def leading_coefficient(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0


def fp_factorize(f: FpPoly) -> list[tuple[FpPoly, int]]:
    """Factor over F_p into monic irreducibles with multiplicities.

    >>> [(g.coeffs, m) for g, m in fp_factorize(FpPoly(5, (1, 0, 1)))]
    [((2, 1), 1), ((3, 1), 1)]
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    if not is_prime(f.p):
        raise ValueError(f"{f.p} is not prime")
    return [(FpPoly(f.p, tuple(g)), m) for g, m in factor_list(list(f.coeffs), f.p)]


# extension fields

@functools.cache
def irreducible_modulus(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically first monic irreducible of degree e over F_p."""
    if e == 1:
        return (0, 1)
    for n in range(p**e):
        low = [(n // p**i) % p for i in range(e)]
        cand = low + [1]
        if low[0] == 0:
            continue
        fl = factor_list(cand, p)
        if len(fl) == 1 and fl[0][1] == 1 and len(fl[0][0]) == e + 1:
            return tuple(cand)
    raise RuntimeError("no irreducible polynomial found")


class ExtField:
    """F_{p^e} = F_p[a]/(modulus); elements are int64 arrays of shape (..., e)."""

    def __init__(self, p: int, e: int):
        if e < 1:
            raise ValueError("extension degree must be positive")
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = irreducible_modulus(p, e)
        # reduction table: a^(e+k) as a vector in the power basis
        red = []
        cur = [(-c) % p for c in self.modulus[:e]]
        for _ in range(e - 1):
            red.append(cur)
            nxt = [0] + cur[:-1]
            top = cur[-1]
            cur = [(nxt[i] + top * red[0][i]) % p for i in range(e)]
        red.append(cur)
        self._reduction = np.array(red[: max(e - 1, 1)], dtype=np.int64)

    def elements(self) -> np.ndarray:
        """All q elements, element i having base-p digits i."""
        idx = np.arange(self.q, dtype=np.int64)
        return np.stack([(idx // self.p**i) % self.p for i in range(self.e)], axis=-1)

    def constant(self, c: int, shape=()) -> np.ndarray:
        out = np.zeros(shape + (self.e,), dtype=np.int64)
        out[..., 0] = c % self.p
        return out

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def scale(self, a, c: int):
        return (a * (c % self.p)) % self.p

    def mul(self, a, b):
        e, p = self.e, self.p
        if e == 1:
            return (a * b) % p
        a, b = np.broadcast_arrays(a, b)
        prod = np.zeros(a.shape[:-1] + (2 * e - 1,), dtype=np.int64)
        for i in range(e):
            for j in range(e):
                prod[..., i + j] += a[..., i] * b[..., j]
        prod %= p
        out = prod[..., :e].copy()
        for k in range(e - 1):
            out += prod[..., e + k, None] * self._reduction[k]
        return out % p

    def power(self, a, k: int):
        result = self.constant(1, a.shape[:-1])
        base = a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def is_zero(self, a):
        return ~np.any(a, axis=-1)

    def frobenius(self, a):
        return self.power(a, self.p)

    def inverse(self, a):
        return self.power(a, self.q - 2)

    def to_int(self, a) -> int:
        """Index of a single element (inverse of ``elements``)."""
        return int(sum(int(a[i]) * self.p**i for i in range(self.e)))

    def eval_univariate(self, coeffs: Sequence[int], xs):
        """Integer-coefficient polynomial at every element of xs (Horner)."""
        acc = self.constant(0, xs.shape[:-1])
        for c in reversed(list(coeffs)):
            acc = self.add(self.mul(acc, xs), self.constant(c, xs.shape[:-1]))
        return acc

    def subfield_mask(self, xs, d: int):
        """Elements lying in F_{p^d} (d | e)."""
        return np.all(self.power(xs, self.p**d) == xs, axis=-1)
