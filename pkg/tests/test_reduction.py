import random

import pytest
from hypothesis import given, settings, strategies as st

from semistable_lab.arith import factorize, valuation
from semistable_lab.macaulay import TernaryForm, monomials, plane_disc_proxy, transversality_resultant
from semistable_lab.poly import BinaryForm, binary_discriminant
from semistable_lab.reduction import (VerdictClass, classify_hyperelliptic_prime, classify_plane_prime,
                                      geometric_singular_count, geometric_singular_points,
                                      hyperelliptic_singular_count, multiplicity_profile, singular_points_fp,
                                      toric_rank)


def polymul(*polys):
    out = [1]
    for g in polys:
        out = [sum(out[i] * g[k - i] for i in range(len(out)) if 0 <= k - i < len(g))
               for k in range(len(out) + len(g) - 1)]
    return out


def test_toric_rank():
    assert toric_rank(1, 1) == 1
    assert toric_rank(3, 2) == 2
    with pytest.raises(ValueError):
        toric_rank(0, 2)


def test_cubic_x3_x_1_is_minimally_bad_at_31():
    form = BinaryForm(4, (1, 1, 0, 1, 0))
    assert binary_discriminant(form) == -31
    v = classify_hyperelliptic_prime(form, 31, 4, 1)
    assert v.verdict is VerdictClass.MINIMALLY_BAD
    assert (v.m, v.c_bar, v.toric_rank, v.tamagawa_one) == (1, 1, 1, True)


def test_small_prime_and_good():
    form = BinaryForm(4, (1, 1, 0, 1, 0))
    assert classify_hyperelliptic_prime(form, 3, 4, 2).verdict is VerdictClass.SMALL_PRIME_EXCLUDED
    assert classify_hyperelliptic_prime(form, 37, 4, 0).verdict is VerdictClass.GOOD


def test_two_nodes_split_fiber():
    # F = (x - 1)^2 (x - 2)^2 (x^2 + 1) mod 13: two nodes, one component
    p = 13
    form = BinaryForm(6, tuple(polymul([-1, 1], [-1, 1], [-2, 1], [-2, 1], [1, 0, 1])))
    prof = multiplicity_profile(form, p)
    assert prof.double_roots == 2 and prof.max_multiplicity == 2
    v = classify_hyperelliptic_prime(form, p, 6, 2)
    assert v.verdict is VerdictClass.BAD_SEMISTABLE_NODAL
    assert (v.m, v.c_bar, v.toric_rank) == (2, 1, 2)


def test_all_even_gives_two_components():
    # F = 3 (x^3 + x + 1)^2 in degree 6: three double roots, every multiplicity even
    p = 17
    sq = polymul([1, 1, 0, 1], [1, 1, 0, 1])
    form = BinaryForm(6, tuple(3 * c for c in sq))
    v = classify_hyperelliptic_prime(form, p, 6, 5)
    assert (v.m, v.c_bar, v.toric_rank) == (3, 2, 2)
    assert v.rational_components in (0, 2)


def test_triple_root_is_not_semistable():
    form = BinaryForm(4, (0, 0, 0, 1, 1))  # x^3 (x + 1)
    v = classify_hyperelliptic_prime(form, 11, 4, 3)
    assert v.verdict is VerdictClass.NOT_SEMISTABLE_OR_UNKNOWN
    with pytest.raises(AssertionError):
        classify_hyperelliptic_prime(form, 11, 4, 3, codisc_nonzero=True)


@given(st.lists(st.integers(-50, 50), min_size=7, max_size=7), st.sampled_from([11, 13, 17, 19, 23]))
@settings(max_examples=60)
def test_profile_matches_exhaustive_count(coeffs, p):
    form = BinaryForm(6, tuple(coeffs))
    if not any(c % p for c in coeffs):
        return
    prof = multiplicity_profile(form, p)
    assert sum(d * m for d, m in prof.factors) + prof.infinity == 6
    assert prof.repeated_roots == hyperelliptic_singular_count(form, p)
    assert (binary_discriminant(form) % p == 0) == (prof.max_multiplicity >= 2)


def test_plane_minimally_bad_has_one_node():
    rng = random.Random(3)
    found = 0
    while found < 10:
        f = TernaryForm.from_coeffs(3, [rng.randint(-3, 3) for _ in monomials(3)])
        D = plane_disc_proxy(f)
        if not D:
            continue
        for p, e in factorize(D).factors:
            if e == 1 and 6 < p <= 101:
                pts = singular_points_fp(f, p)
                assert len(pts) == 1 and pts[0].node
                v = classify_plane_prime(f, p, 6, 1, True)
                assert v.verdict is VerdictClass.MINIMALLY_BAD and v.toric_rank == 1 and v.tamagawa_one
                found += 1


def test_geometric_count_matches_enumeration():
    rng = random.Random(11)
    checked = 0
    while checked < 25:
        f = TernaryForm.from_coeffs(3, [rng.randint(-4, 4) for _ in monomials(3)])
        D = plane_disc_proxy(f)
        if not D:
            continue
        for p in (q for q, e in factorize(D).factors if 5 <= q <= 31):
            pts = geometric_singular_points(f, p)
            assert geometric_singular_count(f, p) == len(pts)
            checked += 1


def test_triangle_of_conjugate_lines():
    # x^3 + 2y^3 + 4z^3 - 6xyz splits into three lines conjugate over F_{7^3}
    f = TernaryForm.parse("x^3 + 2*y^3 + 4*z^3 - 6*x*y*z")
    assert geometric_singular_count(f, 7) == len(geometric_singular_points(f, 7)) == 3
    assert singular_points_fp(f, 7) == []


def test_plane_nodal_bad_reduction_counts():
    # x*y*z + p*(x^3 + y^3 + z^3): the special fiber is a triangle of lines
    p = 13
    f = TernaryForm.parse(f"x*y*z + {p}*x^3 + {p}*y^3 + {p}*z^3")
    v_disc = valuation(plane_disc_proxy(f), p)
    assert v_disc >= 2
    assert geometric_singular_count(f, p) == 3
    # the H_xy test cannot certify the corner at (0:0:1), so the verdict stays open
    assert transversality_resultant(f) % p == 0
    assert classify_plane_prime(f, p, 6, v_disc, False).verdict is VerdictClass.NOT_SEMISTABLE_OR_UNKNOWN
    v = classify_plane_prime(f, p, 6, v_disc, True)
    assert (v.m, v.c_bar, v.toric_rank) == (3, 3, 1)


def test_non_primitive_model():
    form = BinaryForm(4, (3, 3, 0, 3, 0))
    assert classify_hyperelliptic_prime(form, 3, 4, 6).verdict is VerdictClass.SMALL_PRIME_EXCLUDED
    form = BinaryForm(4, (7, 7, 0, 7, 0))
    assert classify_hyperelliptic_prime(form, 7, 4, 6).verdict is VerdictClass.NOT_SEMISTABLE_OR_UNKNOWN
    f = TernaryForm.parse("7*x^3 + 7*y^3 + 7*z^3")
    assert classify_plane_prime(f, 7, 6, 12, True).verdict is VerdictClass.NOT_SEMISTABLE_OR_UNKNOWN
