"""How far omega1 is from the normal law at desk-scale B.

The normalization centres at log log B, while a typical discriminant in the
box has size about B^6, so the count is shifted upwards by roughly
log 6 minus the mass of the excluded primes.  The KS distance shrinks as B
grows, slowly.

Run:  python3 demos/erdos_kac.py
"""

from semistable_lab import fixture, run_experiment
from semistable_lab.stats import log_log

fam = fixture("standard-hyperelliptic-1")
for B in (10**2, 10**3, 10**4):
    report, _ = run_experiment(fam, B, sample=5000, seed=1)
    m = report.moments
    print(f"B=10^{len(str(B)) - 1}: mean omega1 {report.mean_count:.3f} vs log log B {log_log(B):.3f}, "
          f"KS {report.ks_distance:.3f}, m1 {m[0]:.3f}, m2 {m[1]:.3f}")
