"""Closed-form discriminants of the two named genus-2 families, checked numerically.

Run:  python3 demos/discriminants.py
"""

from semistable_lab import codisc_at, disc_at, factorize, fixture

qm = fixture("qm")
print("QM family  y^2 =", "(x^2 + 2x - 2)(x^4 + 4x^3 + (2t^2 - 8)x - t^2 + 4)")
for t in (1, 3, 5, 7):
    d = disc_at(qm, [t])
    predicted = 2**6 * 3**6 * (t * t - 4) ** 2 * t**12
    print(f"  t={t}:  Delta = {d}   |Delta| == 2^6 3^6 (t^2-4)^2 t^12: {abs(d) == predicted}")
    print(f"        Delta' = {codisc_at(qm, [t])} = {factorize(codisc_at(qm, [t])).factors}")

# every bad prime of y^2 = x^ell + t divides ell * t, and Delta' vanishes for odd ell,
# so the weak count is identically zero
for ell in (3, 5, 7):
    fam = fixture(f"isotrivial-{ell}")
    vals = [disc_at(fam, [t]) for t in (2, 3, 10)]
    print(f"isotrivial ell={ell}: Delta(2), Delta(3), Delta(10) = {vals}")
