import json

import pytest
from hypothesis import given, strategies as st

from semistable_lab.families import (ConfigError, Mode, bundled_fixtures, codisc_at, disc_at, family_from_dict,
                                     fixture, isotrivial, load_family, qm_family, specialize, spot_check,
                                     standard_hyperelliptic)
from semistable_lab.poly import formal_discriminant_mod


@pytest.mark.parametrize("t", [t for t in range(-20, 21) if t not in (0, 2, -2)])
def test_qm_discriminant_formula(t):
    assert abs(disc_at(qm_family(), [t])) == 2**6 * 3**6 * (t * t - 4) ** 2 * t**12


def test_qm_known_values():
    fam = qm_family()
    assert disc_at(fam, [1]) == -419904
    assert codisc_at(fam, [1]) == -(2**8) * 3**9 * 11149
    for t in (0, 2, -2):
        assert specialize(fam, [t]).degenerate


@pytest.mark.parametrize("ell", [3, 4, 5, 6, 7])
def test_isotrivial_formula(ell):
    fam = isotrivial(ell)
    for t in list(range(-10, 0)) + list(range(1, 11)):
        assert abs(disc_at(fam, [t])) == ell**ell * abs(t) ** (ell - 1)
        if ell % 2:
            # odd ell: the codiscriminant of x^ell + t vanishes (x^(ell-1) has a repeated root)
            assert codisc_at(fam, [t]) == 0


def test_twist_value():
    assert disc_at(fixture("twist"), [3]) == -22599


@given(st.lists(st.integers(-10**6, 10**6), min_size=5, max_size=5), st.sampled_from([5, 7, 11, 101]))
def test_specialize_then_reduce(t, p):
    fam = standard_hyperelliptic(1)
    coeffs = [c.evaluate(t) % p for c in fam.coeffs]
    assert disc_at(fam, t) % p == formal_discriminant_mod(coeffs, p)


@pytest.mark.parametrize("fam", bundled_fixtures(), ids=lambda f: f.name)
def test_round_trip(fam, tmp_path):
    path = tmp_path / f"{fam.name}.json"
    path.write_text(json.dumps(fam.to_dict()))
    again = load_family(path)
    assert again.to_dict() == fam.to_dict()
    assert again.coeffs == fam.coeffs


def test_alias_t_for_single_parameter():
    fam = family_from_dict({"kind": "hyperelliptic", "g": 1, "n": 1,
                            "coeffs": ["t", "1", "0", "1", "0"], "mode": "weak-hyperelliptic"})
    assert str(fam.coeffs[0]) == "t1"


BASE = {"kind": "hyperelliptic", "g": 1, "n": 1, "coeffs": ["t", "1", "0", "1", "0"]}


@pytest.mark.parametrize("patch", [
    {"colour": "red"},
    {"kind": "conic"},
    {"coeffs": ["t", "1", "0", "1"]},
    {"coeffs": ["t", "1", "0", "1", "s"]},
    {"coeffs": ["t", "1", "0", "0", "0"]},
    {"A": 2},
    {"mode": "weak-plane"},
    {"mode": "sometimes"},
    {"n": 0},
    {"c": 0},
])
def test_config_errors(patch):
    with pytest.raises(ConfigError):
        family_from_dict({**BASE, **patch})


def test_missing_key():
    with pytest.raises(ConfigError):
        family_from_dict({"kind": "plane", "n": 1})


def test_load_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_family(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_family(bad)


def test_unknown_fixture():
    with pytest.raises(ConfigError):
        fixture("no-such-family")


def test_spot_check():
    assert spot_check(standard_hyperelliptic(1)) == []
    warnings = spot_check(isotrivial(3))
    assert any("exclusion divisor" in w for w in warnings)
    assert fixture("standard-plane-cubic").mode is Mode.MINIMALLY_BAD
