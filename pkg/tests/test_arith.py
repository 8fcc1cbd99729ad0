import math
import random

import pytest
from hypothesis import given, strategies as st

from semistable_lab.arith import TRIAL_BOUND, factorize, is_prime, primes_below, valuation


def sieve(n):
    flags = bytearray([1]) * n
    flags[:2] = b"\x00\x00"
    for i in range(2, int(n**0.5) + 1):
        if flags[i]:
            flags[i * i::i] = bytearray(len(flags[i * i::i]))
    return [i for i in range(n) if flags[i]]


def test_is_prime_matches_sieve():
    small = set(sieve(20000))
    assert [n for n in range(-5, 20000) if is_prime(n)] == sorted(small)


def test_primes_below_matches_sieve():
    assert list(primes_below(5000)) == sieve(5000)


@pytest.mark.parametrize("n", [2**61 - 1, 2**89 - 1, 10**18 + 9, 3317044064679887385961813])
def test_known_primes(n):
    assert is_prime(n)


@pytest.mark.parametrize("n", [561, 3215031751, 3825123056546413051, 2**61 + 1, 318665857834031151167461])
def test_strong_pseudoprimes_rejected(n):
    # Carmichael numbers and strong pseudoprimes to the first few bases
    assert not is_prime(n)


@given(st.integers(min_value=-(10**30), max_value=10**30).filter(bool))
def test_factorization_reconstructs(n):
    fac = factorize(n)
    assert fac.value() == n
    assert all(is_prime(p) for p in fac.primes)
    assert list(fac.primes) == sorted(set(fac.primes))


@given(st.integers(min_value=1, max_value=10**12))
def test_factorization_complete_below_trial_square(n):
    fac = factorize(n)
    assert fac.complete
    assert math.prod(p**e for p, e in fac.factors) == n


def test_semiprime_of_large_primes():
    rng = random.Random(5)
    for _ in range(5):
        p = next(q for q in iter(lambda: rng.randrange(10**9, 10**10), None) if is_prime(q))
        q = next(r for r in iter(lambda: rng.randrange(10**11, 10**12), None) if is_prime(r))
        fac = factorize(-p * q * 6)
        assert fac.factors == tuple(sorted([(2, 1), (3, 1), (p, 1), (q, 1)]))
        assert fac.sign == -1


def test_residual_never_hides_small_primes():
    p, q = 1000000000039, 1000000000061
    fac = factorize(7 * p * q, rho_cap=1)
    assert fac.value() == 7 * p * q
    if not fac.complete:
        assert all(fac.residual % r for r in primes_below(1000))
        assert fac.residual > TRIAL_BOUND


@given(st.integers(min_value=1, max_value=10**40), st.sampled_from([2, 3, 5, 7, 31, 101]))
def test_valuation(n, p):
    v = valuation(n, p)
    assert n % p**v == 0 and n % p ** (v + 1) != 0
    assert valuation(n * p**3, p) == v + 3


def test_valuation_rejects_zero():
    with pytest.raises(ValueError):
        valuation(0, 5)


def test_factor_zero_rejected():
    with pytest.raises(ValueError):
        factorize(0)
