"""Acceptance criteria 1-10, each checked at its stated tolerance and time budget."""

import random
import time

import pytest

from conftest import ACCEPTANCE
from semistable_lab.arith import factorize
from semistable_lab.families import disc_at, isotrivial, nodal_plane_curve, qm_family, standard_hyperelliptic
from semistable_lab.macaulay import TernaryForm, monomials, plane_disc_proxy, transversality_resultant
from semistable_lab.poly import BinaryForm, binary_discriminant
from semistable_lab.reduction import (VerdictClass, classify_hyperelliptic_prime, classify_plane_prime,
                                      hyperelliptic_singular_count, multiplicity_profile, singular_points_fp)
from semistable_lab.stats import run_experiment

G1 = standard_hyperelliptic(1)
TREND_BS = (10**2, 10**3, 10**4)
TREND_SAMPLES = 10**5
SEED = 42
# the literal threshold proportion at B = 10^4, recorded on the first run and kept as a regression bound
PINNED_THRESHOLD_PROPORTION = 0.69972


def record(k, ok, detail):
    ACCEPTANCE[k] = (ok, detail)
    print(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


def test_criterion_01_qm_discriminant():
    start = time.perf_counter()
    fam = qm_family()
    bad = [t for t in range(-20, 21) if t not in (0, 2, -2)
           and abs(disc_at(fam, [t])) != 2**6 * 3**6 * (t * t - 4) ** 2 * t**12]
    elapsed = time.perf_counter() - start
    record(1, not bad and elapsed < 1, f"mismatches {bad}, {elapsed:.3f}s")


def test_criterion_02_isotrivial_discriminant():
    start = time.perf_counter()
    bad = [(ell, t) for ell in (3, 5, 7) for t in range(-10, 11)
           if t and abs(disc_at(isotrivial(ell), [t])) != ell**ell * abs(t) ** (ell - 1)]
    elapsed = time.perf_counter() - start
    record(2, not bad and elapsed < 1, f"mismatches {bad}, {elapsed:.3f}s")


def test_criterion_03_nodal_cubic():
    start = time.perf_counter()
    f = nodal_plane_curve(3)
    D, R = plane_disc_proxy(f), transversality_resultant(f)
    elapsed = time.perf_counter() - start
    record(3, D == 0 and R != 0 and elapsed < 1, f"D = {D}, R = {R}, {elapsed:.3f}s")


def test_criterion_04_hyperelliptic_oracle():
    start = time.perf_counter()
    rng = random.Random(2024)
    checked = mismatches = 0
    for _ in range(500):
        form = BinaryForm(6, tuple(rng.randint(-50, 50) for _ in range(7)))
        d = binary_discriminant(form)
        if d == 0:
            continue
        for p, e in factorize(d).factors:
            if not 11 <= p <= 47 or not any(c % p for c in form.coeffs):
                continue
            prof = multiplicity_profile(form, p)
            exhaustive = hyperelliptic_singular_count(form, p)
            verdict = classify_hyperelliptic_prime(form, p, 6, e)
            ok = prof.repeated_roots == exhaustive
            if verdict.verdict is VerdictClass.BAD_SEMISTABLE_NODAL:
                ok = ok and verdict.m == exhaustive
            if verdict.verdict is VerdictClass.MINIMALLY_BAD:
                ok = ok and exhaustive == 1
            checked += 1
            mismatches += not ok
    elapsed = time.perf_counter() - start
    record(4, checked > 0 and mismatches == 0 and elapsed < 120,
           f"{checked} prime checks, {mismatches} mismatches, {elapsed:.1f}s")


def test_criterion_05_plane_minimally_bad():
    start = time.perf_counter()
    rng = random.Random(7)
    found = violations = 0
    while found < 100:
        f = TernaryForm.from_coeffs(3, [rng.randint(-10, 10) for _ in monomials(3)])
        D = plane_disc_proxy(f)
        if not D:
            continue
        primes = [p for p, e in factorize(D).factors if e == 1 and 6 < p <= 101]
        if not primes:
            continue
        p = primes[0]
        pts = singular_points_fp(f, p)
        verdict = classify_plane_prime(f, p, 6, 1, True)
        ok = (len(pts) == 1 and pts[0].node and verdict.verdict is VerdictClass.MINIMALLY_BAD
              and verdict.toric_rank == 1 and verdict.tamagawa_one)
        found += 1
        violations += not ok
    elapsed = time.perf_counter() - start
    record(5, violations == 0 and elapsed < 120, f"{found} curves, {violations} violations, {elapsed:.1f}s")


def test_criterion_06_equidistribution():
    from semistable_lab.stats import residue_density

    start = time.perf_counter()
    checks = [residue_density(G1, p, 500) for p in (5, 7, 11, 13)]
    elapsed = time.perf_counter() - start
    ok = all(c.deviation <= c.bound for c in checks) and elapsed < 300
    detail = ", ".join(f"p={c.p} dev {c.deviation:.5f} <= {c.bound:.3f}" for c in checks)
    record(6, ok, f"{detail}, {elapsed:.1f}s")


@pytest.fixture(scope="module")
def trend_runs():
    start = time.perf_counter()
    runs = {B: run_experiment(G1, B, sample=TREND_SAMPLES, seed=SEED)[0] for B in TREND_BS}
    return runs, time.perf_counter() - start


def test_criterion_07_erdos_kac_trend(trend_runs):
    runs, elapsed = trend_runs
    ks = [runs[B].ks_distance for B in TREND_BS]
    m2 = [runs[B].moments[1] for B in TREND_BS]
    ok_start = ks[0] <= 0.35
    ok_trend = all(b <= a + 0.05 for a, b in zip(ks, ks[1:]))
    ok_m2 = all(0.3 <= m <= 3 for m in m2)
    detail = (f"KS {[round(k, 4) for k in ks]} (B=1e2 <= 0.35: {ok_start}, non-increasing within 0.05: {ok_trend}), "
              f"m2 {[round(m, 3) for m in m2]}, {elapsed:.0f}s")
    record(7, ok_start and ok_trend and ok_m2 and elapsed < 600, detail)


def test_criterion_08_threshold_surrogate(trend_runs):
    report = trend_runs[0][10**4]
    ok = report.surrogate_proportion >= 0.95
    if PINNED_THRESHOLD_PROPORTION is not None:
        ok = ok and report.threshold_proportion == pytest.approx(PINNED_THRESHOLD_PROPORTION, abs=1e-12)
    record(8, ok, f"omega >= 1 proportion {report.surrogate_proportion:.4f}, literal threshold "
                  f"{report.threshold} proportion {report.threshold_proportion:.4f}")


def test_criterion_09_moment_bounds(trend_runs):
    runs = trend_runs[0]
    ms = {B: runs[B].moments[1:] for B in TREND_BS}
    ok = all(m2 < 16 and m3 < 64 and m4 < 256 for m2, m3, m4 in ms.values())
    record(9, ok, ", ".join(f"B={B}: m2 {m[0]:.3f} m3 {m[1]:.3f} m4 {m[2]:.3f}" for B, m in ms.items()))


def test_criterion_10_determinism(trend_runs):
    start = time.perf_counter()
    again, _ = run_experiment(G1, 10**3, sample=TREND_SAMPLES, seed=SEED)
    elapsed = time.perf_counter() - start
    same = again.to_json().encode() == trend_runs[0][10**3].to_json().encode()
    record(10, same and elapsed < 120, f"byte-identical report.json: {same}, rerun {elapsed:.1f}s")
