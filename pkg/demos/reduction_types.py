"""Per-prime reduction types for a few hand-picked curves.

Run:  python3 demos/reduction_types.py
"""

from semistable_lab import TernaryForm, fixture, omega_of, plane_disc_proxy, transversality_resultant
from semistable_lab.families import nodal_plane_curve
from semistable_lab.reduction import geometric_singular_count, singular_points_fp


def show(title, rec):
    print(title)
    for v in rec.verdicts:
        print(f"  p={v.p:<8} v={v.v_delta:<3} {v.verdict.value:<24} m={v.m} c={v.c_bar} toric={v.toric_rank}")


g1 = fixture("standard-hyperelliptic-1")
show("y^2 = x^3 + x + 1", omega_of((1, 1, 0, 1, 0), g1))
# mod 13 this is (x^2 - 3x + 2)^2 = (x - 1)^2 (x - 2)^2: two nodes
show("y^2 = (x^2 - 3x + 15)^2 + 13x", omega_of((225, -77, 39, -6, 1), g1))

f = nodal_plane_curve(3)
print("\nnodal cubic x^3 + y^3 - xyz:  D =", plane_disc_proxy(f), " R =", transversality_resultant(f))
for p in (7, 11):
    print(f"  singular points over F_{p}:", [(s.point, "node" if s.node else "cusp or worse")
                                          for s in singular_points_fp(f, p)])

tri = TernaryForm.parse("x^3 + 2*y^3 + 4*z^3 - 6*x*y*z")
print("\nx^3 + 2y^3 + 4z^3 - 6xyz mod 7: geometric singular points =", geometric_singular_count(tri, 7),
      "; F_7-rational ones =", len(singular_points_fp(tri, 7)))
