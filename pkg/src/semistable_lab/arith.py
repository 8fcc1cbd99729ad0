"""Exact integer arithmetic: primality, factorization and p-adic valuations.

Factorization is total: whatever the effort budget cannot split ends up in
``Factorization.residual`` instead of raising.
"""

from __future__ import annotations

import functools
import math
import random
from collections import Counter
from dataclasses import dataclass

import numpy as np

TRIAL_BOUND = 10**6
RHO_ITERATION_CAP = 10**7

# Deterministic Miller-Rabin below this bound with the first 13 primes as witnesses.
_MR_DETERMINISTIC_LIMIT = 3317044064679887385961981
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_MR_RANDOM_ROUNDS = 64  # 4**-64 = 2**-128

_SMALL_TRIAL = 1000


@functools.cache
def primes_below(limit: int) -> tuple[int, ...]:
    """All primes p < limit, by the sieve of Eratosthenes."""
    if limit < 3:
        return ()
    sieve = bytearray([1]) * limit
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit - 1) + 1):
        if sieve[i]:
            sieve[i * i::i] = bytearray(len(range(i * i, limit, i)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _product(values) -> int:
    # balanced product tree; linear multiplication of 78k primes is quadratic
    values = list(values)
    if not values:
        return 1
    while len(values) > 1:
        paired = [values[i] * values[i + 1] for i in range(0, len(values) - 1, 2)]
        if len(values) % 2:
            paired.append(values[-1])
        values = paired
    return values[0]


@functools.cache
def _medium_primorial() -> int:
    return _product(p for p in primes_below(TRIAL_BOUND + 1) if p > _SMALL_TRIAL)


def _mr_round(n: int, a: int, d: int, s: int) -> bool:
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def is_prime(n: int) -> bool:
    """Return True iff ``n`` is prime.

    Deterministic below 3.3e24; above that, 64 Miller-Rabin rounds with
    witnesses drawn from a generator seeded by ``n`` itself, so repeated
    calls agree and the error probability is below 2**-128.

    >>> is_prime(2), is_prime(1), is_prime(419904)
    (True, False, False)
    """
    if n < 2:
        return False
    for p in primes_below(_SMALL_TRIAL):
        if n % p == 0:
            return n == p
    if n < _SMALL_TRIAL * _SMALL_TRIAL:
        return True
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    if n < _MR_DETERMINISTIC_LIMIT:
        bases = _MR_BASES
    else:
        rng = random.Random(n)
        bases = [rng.randrange(2, n - 1) for _ in range(_MR_RANDOM_ROUNDS)]
    return all(_mr_round(n, a, d, s) for a in bases)


def valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n (n nonzero, p prime)."""
    if n == 0:
        raise ValueError("valuation of zero is infinite")
    if p < 2:
        raise ValueError(f"{p} is not a prime")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def _exact_root(n: int, k: int) -> int | None:
    r = round(n ** (1.0 / k)) if n.bit_length() < 1000 else 1 << (n.bit_length() // k)
    # refine with integer Newton steps; float guesses are off for big n
    while True:
        nxt = ((k - 1) * r + n // r ** (k - 1)) // k
        if nxt >= r:
            break
        r = nxt
    for cand in (r - 1, r, r + 1):
        if cand > 1 and cand**k == n:
            return cand
    return None


def _brent(n: int, budget: int, seed: int) -> tuple[int | None, int]:
    """Pollard rho with Brent's cycle detection.

    Returns (nontrivial divisor or None, iterations used).
    """
    rng = random.Random(seed)
    used = 0
    while used < budget:
        y = rng.randrange(1, n)
        c = rng.randrange(1, n)
        m = 128
        g = r = q = 1
        x = ys = y
        while g == 1 and used < budget:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            used += r
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * (x - y) % n
                used += min(m, r - k)
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            # batch overshot; backtrack one step at a time
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(x - ys, n)
        if 1 < g < n:
            return g, used
    return None, used


def _brent_compiled(n: int, budget: int, seed: int) -> tuple[int | None, int]:
    """Same schedule as ``_brent`` with the loops in Montgomery limb arithmetic."""
    from . import _rho_kernel as kern

    k = kern.limb_count(n)
    advance, accumulate = kern.kernels(k)
    ninv = kern.neg_inverse_32(n)
    nl = kern.to_limbs(n, k)
    rng = random.Random(seed)
    used = 0
    m = 1024
    while used < budget:
        y = kern.to_limbs(rng.randrange(1, n), k)
        c = kern.to_limbs(rng.randrange(1, n), k)
        q = kern.to_limbs(1, k)
        ys = np.zeros(k, dtype=np.uint64)
        g, r = 1, 1
        x = y.copy()
        while g == 1 and used < budget:
            x = y.copy()
            advance(y, c, nl, ninv, r)
            used += r
            done = 0
            while done < r and g == 1:
                steps = min(m, r - done)
                accumulate(x, y, q, c, nl, ninv, steps, ys)
                used += steps
                g = math.gcd(kern.from_limbs(q), n)
                done += steps
            r *= 2
        if g == n:
            g = 1
            xv = kern.from_limbs(x)
            while g == 1:
                advance(ys, c, nl, ninv, 1)
                g = math.gcd(xv - kern.from_limbs(ys), n)
        if 1 < g < n:
            return g, used
    return None, used


def _rho(n: int, budget: int, seed: int) -> tuple[int | None, int]:
    if n % 2 == 0:
        return 2, 0
    if n.bit_length() <= 32 * 4:
        return _brent_compiled(n, budget, seed)
    return _brent(n, budget, seed)


@dataclass(frozen=True)
class Factorization:
    """sign * residual * prod(p**e) == the factored integer."""

    factors: tuple[tuple[int, int], ...]
    residual: int = 1
    sign: int = 1

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.factors)

    @property
    def complete(self) -> bool:
        return self.residual == 1

    def value(self) -> int:
        out = self.sign * self.residual
        for p, e in self.factors:
            out *= p**e
        return out

    def exponent(self, p: int) -> int:
        for q, e in self.factors:
            if q == p:
                return e
        return 0


def factorize(n: int, *, rho_cap: int = RHO_ITERATION_CAP) -> Factorization:
    """Factor a nonzero integer.

    Primes below 1000 are removed by trial division; what remains is split
    with Brent's rho, at most ``rho_cap`` iterations per cofactor.  A cofactor
    that survives the budget is stripped of every prime up to ``TRIAL_BOUND``
    (one gcd against their product) and whatever is left becomes the
    residual, so the residual never hides a prime below the trial bound.

    >>> factorize(-419904)
    Factorization(factors=((2, 6), (3, 8)), residual=1, sign=-1)
    """
    if n == 0:
        raise ValueError("cannot factor zero")
    sign = -1 if n < 0 else 1
    n = abs(n)
    exps: Counter = Counter()

    for p in primes_below(_SMALL_TRIAL):
        if p * p > n:
            break
        while n % p == 0:
            n //= p
            exps[p] += 1

    residual = 1
    stack = [(n, 1)]
    while stack:
        m, mult = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            exps[m] += mult
            continue
        for k in (2, 3, 5, 7):
            root = _exact_root(m, k)
            if root is not None:
                stack.append((root, mult * k))
                break
        else:
            d, _ = _rho(m, rho_cap, seed=m)
            if d is not None:
                stack.append((d, mult))
                stack.append((m // d, mult))
                continue
            g = math.gcd(m, _medium_primorial())
            if g > 1:
                stack.append((g, mult))
                stack.append((m // g, mult))
            else:
                residual *= m**mult

    return Factorization(factors=tuple(sorted(exps.items())), residual=residual, sign=sign)
