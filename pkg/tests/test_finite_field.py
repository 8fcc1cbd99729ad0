import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from semistable_lab.finite_field import ExtField, FpPoly, factor_list, fp_factorize, irreducible_modulus

X = sympy.Symbol("x")
small_primes = st.sampled_from([2, 3, 5, 7, 11, 13, 31, 101])


def sympy_factors(coeffs, p):
    poly = sympy.Poly(list(reversed(coeffs)), X, modulus=p)
    _, facs = poly.factor_list()
    out = []
    for g, m in facs:
        c = [int(v) % p for v in reversed(g.all_coeffs())]
        inv = pow(c[-1], -1, p)
        out.append(([v * inv % p for v in c], m))
    out.sort(key=lambda item: (len(item[0]), item[0][::-1], item[1]))
    return out


@given(st.lists(st.integers(0, 200), min_size=2, max_size=9), small_primes)
def test_factor_list_matches_sympy(coeffs, p):
    coeffs = [c % p for c in coeffs]
    if not any(coeffs[1:]):
        return
    assert factor_list(coeffs, p) == sympy_factors(coeffs, p)


@given(st.lists(st.integers(0, 100), min_size=1, max_size=8), small_primes)
def test_factorization_multiplies_back(coeffs, p):
    f = FpPoly(p, tuple(coeffs))
    if f.is_zero():
        return
    prod = FpPoly(p, (f.leading_coefficient(),))
    for g, m in fp_factorize(f):
        assert g.leading_coefficient() == 1
        prod = prod * g**m
    assert prod == f


def test_small_cases():
    assert factor_list([1, 0, 1], 3) == [([1, 0, 1], 1)]
    assert factor_list([0, 0, 1], 7) == [([0, 1], 2)]
    with pytest.raises(ValueError):
        factor_list([0, 0], 5)


@pytest.mark.parametrize("p,e", [(2, 2), (3, 3), (5, 2), (7, 3), (13, 2)])
def test_extension_field_axioms(p, e):
    F = ExtField(p, e)
    assert len(irreducible_modulus(p, e)) == e + 1
    xs = F.elements()
    rng = np.random.default_rng(p * e)
    a, b, c = (xs[rng.integers(0, F.q, 200)] for _ in range(3))
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    nz = xs[1:]
    assert np.array_equal(F.mul(nz, F.inverse(nz)), F.constant(1, (len(nz),)))
    # Frobenius fixes exactly the prime field
    assert int(F.subfield_mask(xs, 1).sum()) == p
    assert np.array_equal(F.power(xs, F.q), xs)
