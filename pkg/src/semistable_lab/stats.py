"""Omega counts, the Erdos-Kac normalization and the distribution report.

A run walks a box |t_i| <= B (exhaustively when it has at most 2e6 points,
otherwise by seeded uniform sampling), computes one ``OmegaRecord`` per
nondegenerate point, and summarizes the normalized counts against the
standard normal.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import os
from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .arith import RHO_ITERATION_CAP, factorize
from .families import CurveFamily, Mode, codisc_at, disc_at, specialize
from .macaulay import ZeroHessianMinorError, transversality_resultant
from .poly import IntPoly, _disc_matrix
from .reduction import PrimeVerdict, VerdictClass, classify_hyperelliptic_prime, classify_plane_prime

EXHAUSTIVE_LIMIT = 2_000_000
RESIDUE_BUDGET = 10**7
PLANE_RESIDUE_BUDGET = 200_000
DEFAULT_SAMPLE = 10_000


class DegenerateSpecializationError(ValueError):
    """Delta(t) = 0: the point lies outside the sample space."""


# counting


@dataclass(frozen=True)
class OmegaRecord:
    t: tuple[int, ...]
    omega: int
    omega1: int
    omega_all: int
    normalized: float | None
    residual_present: bool
    mode: Mode
    verdicts: tuple[PrimeVerdict, ...] = field(default=(), compare=False)

    @property
    def count(self) -> int:
        """The statistic of the mode: omega1 when counting minimally bad primes, else omega."""
        return self.omega1 if self.mode == Mode.MINIMALLY_BAD else self.omega

    def class_counts(self) -> Counter:
        return Counter(v.verdict.value for v in self.verdicts)


def log_log(B: float) -> float:
    return math.log(math.log(B))


def ek_normalize(omega: float, c: int, B: float) -> float:
    """(omega - c log log B) / sqrt(c log log B).

    >>> round(ek_normalize(5, 1, 10**4), 3)
    1.865
    """
    if B < 16:
        raise ValueError("B must be at least 16")
    if c < 1:
        raise ValueError("c must be positive")
    mu = c * log_log(B)
    return (omega - mu) / math.sqrt(mu)


def omega_of(t: Sequence[int], family: CurveFamily, mode: Mode | None = None, *, B: float | None = None,
             rho_cap: int = RHO_ITERATION_CAP) -> OmegaRecord:
    """Count the primes above A dividing Delta(t), with the mode's exclusion.

    Minimally-bad mode excludes nothing and its statistic is omega1, the
    primes with v_p(Delta(t)) = 1.  The weak modes drop primes dividing
    Delta'(t) (hyperelliptic) or R(f_t) (plane) and count each remaining
    prime once.
    """
    mode = Mode(mode or family.mode)
    sp = specialize(family, t)
    if sp.degenerate:
        raise DegenerateSpecializationError(f"degenerate specialization at t={sp.t}: {sp.reason}")
    curve, A = sp.curve, family.cutoff
    fac = factorize(sp.disc, rho_cap=rho_cap)

    excl = None
    if mode != Mode.MINIMALLY_BAD:
        excl = codisc_at(family, sp.t)

    r_value = excl if family.kind == "plane" else None
    omega = omega1 = omega_all = 0
    verdicts = []
    for p, e in fac.factors:
        if p <= A:
            verdicts.append(PrimeVerdict(p, e, VerdictClass.SMALL_PRIME_EXCLUDED))
            continue
        omega_all += 1
        if excl is None or excl % p:
            omega += 1
            if e == 1:
                omega1 += 1
        if family.kind == "hyperelliptic":
            codisc_ok = None if excl is None else excl % p != 0
            verdicts.append(classify_hyperelliptic_prime(curve, p, A, e, codisc_ok))
        else:
            if e >= 2 and r_value is None:
                try:
                    r_value = transversality_resultant(curve)
                except ZeroHessianMinorError:
                    r_value = 0
            r_ok = True if e == 1 else r_value % p != 0
            verdicts.append(classify_plane_prime(curve, p, A, e, r_ok))
    if fac.residual != 1:
        verdicts.append(PrimeVerdict(fac.residual, 0, VerdictClass.RESIDUAL_UNKNOWN))
    rec = OmegaRecord(sp.t, omega, omega1, omega_all, None, fac.residual != 1, mode, tuple(verdicts))
    if B is not None:
        rec = OmegaRecord(rec.t, omega, omega1, omega_all, ek_normalize(rec.count, family.declared_c, B),
                          rec.residual_present, mode, rec.verdicts)
    return rec


# distribution statistics


def normal_cdf(x: float) -> float:
    """Standard normal CDF.

    >>> normal_cdf(0.0)
    0.5
    """
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def ks_distance(samples: Iterable[float]) -> float:
    """Kolmogorov-Smirnov distance between the empirical CDF and the standard normal."""
    xs = np.sort(np.asarray(list(samples), dtype=float))
    n = len(xs)
    if n == 0:
        raise ValueError("ks_distance needs at least one sample")
    cdf = np.array([normal_cdf(x) for x in xs])
    i = np.arange(1, n + 1)
    return float(max(np.max(np.abs(i / n - cdf)), np.max(np.abs((i - 1) / n - cdf))))


def moments(samples: Iterable[float], k: int) -> float:
    """k-th raw moment."""
    xs = np.asarray(list(samples), dtype=float)
    if len(xs) == 0:
        raise ValueError("moments needs at least one sample")
    if not 1 <= k <= 4:
        raise ValueError("k must lie in 1..4")
    return float(np.mean(xs**k))


def threshold(B: float) -> int:
    """ceil(log log B / log log log B)."""
    if B < 16:
        raise ValueError("B must be at least 16")
    return math.ceil(log_log(B) / math.log(log_log(B)))


def threshold_proportion(records: Sequence[OmegaRecord], B: float, level: int | None = None) -> float:
    """Share of records whose count reaches ``level`` (default: the literal threshold)."""
    if not records:
        raise ValueError("threshold_proportion needs at least one record")
    level = threshold(B) if level is None else level
    return sum(1 for r in records if r.count >= level) / len(records)


# residue densities


@dataclass(frozen=True)
class DensityCheck:
    p: int
    rho: Fraction
    empirical: Fraction
    deviation: float
    bound: float
    method: str

    def as_dict(self) -> dict:
        return {"p": self.p, "rho": str(self.rho), "empirical": str(self.empirical),
                "deviation": self.deviation, "bound": self.bound, "method": self.method}

    @classmethod
    def from_dict(cls, d: dict) -> DensityCheck:
        return cls(d["p"], Fraction(d["rho"]), Fraction(d["empirical"]), d["deviation"], d["bound"], d["method"])


def _poly_mod_batch(f: IntPoly, pts: np.ndarray, p: int) -> np.ndarray:
    out = np.zeros(len(pts), dtype=np.int64)
    for exp, c in f.terms.items():
        term = np.full(len(pts), c % p, dtype=np.int64)
        for i, e in enumerate(exp):
            for _ in range(e):
                term = term * pts[:, i] % p
        out = (out + term) % p
    return out


def det_mod_p_batch(mats: np.ndarray, p: int) -> np.ndarray:
    """Determinants mod p of a stack of square integer matrices (entries in [0, p))."""
    a = mats.astype(np.int64) % p
    n_mat, n = a.shape[0], a.shape[1]
    inv = np.zeros(p, dtype=np.int64)
    inv[1:] = [pow(i, p - 2, p) for i in range(1, p)]
    det = np.ones(n_mat, dtype=np.int64)
    rows = np.arange(n_mat)
    for k in range(n):
        nz = a[:, k:, k] != 0
        has = nz.any(axis=1)
        piv = k + np.argmax(nz, axis=1)
        swap = has & (piv != k)
        if swap.any():
            idx = rows[swap]
            rk = a[idx, k].copy()
            a[idx, k] = a[idx, piv[swap]]
            a[idx, piv[swap]] = rk
            det[idx] = (-det[idx]) % p
        pivval = a[:, k, k]
        det = det * pivval % p
        factors = a[:, k + 1:, k] * inv[pivval][:, None] % p
        a[:, k + 1:, :] = (a[:, k + 1:, :] - factors[:, :, None] * a[:, k, None, :]) % p
    return det


def _hyper_disc_mod_batch(family: CurveFamily, pts: np.ndarray, p: int) -> np.ndarray:
    N = family.formal_degree
    base = np.array(_disc_matrix([0] * (N + 1)), dtype=np.int64)
    basis = np.stack([np.array(_disc_matrix([1 if j == i else 0 for j in range(N + 1)]), dtype=np.int64) - base
                      for i in range(N + 1)])
    coeffs = np.stack([_poly_mod_batch(c, pts, p) for c in family.coeffs], axis=1)
    mats = (base[None] + np.tensordot(coeffs, basis, axes=(1, 0))) % p
    return det_mod_p_batch(mats, p)


def _residues(p: int, n: int, chunk: int = 1 << 16):
    total = p**n
    powers = p ** np.arange(n, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield (idx[:, None] // powers[None, :]) % p


def residue_density(family: CurveFamily, p: int, B: int) -> DensityCheck:
    """Density of {t : p | Delta(t)} in the box |t_i| <= B against #Upsilon / p^n.

    rho is counted by brute force over (Z/p)^n with determinants over F_p.
    The box side is counted exactly with integer discriminants: literally
    point by point for boxes of at most 2e6 points, otherwise by evaluating
    Delta at one box point of each residue class (p | Delta(t) depends only
    on t mod p) and weighting the class by its number of box points.
    """
    n = family.n
    if p**n > RESIDUE_BUDGET:
        raise ValueError(f"p^n = {p**n} exceeds the residue budget {RESIDUE_BUDGET}")
    if family.kind == "plane" and p**n > PLANE_RESIDUE_BUDGET:
        raise ValueError(f"p^n = {p**n} exceeds the plane residue budget {PLANE_RESIDUE_BUDGET}")
    upsilon = 0
    for chunk in _residues(p, n):
        if family.kind == "hyperelliptic":
            upsilon += int(np.count_nonzero(_hyper_disc_mod_batch(family, chunk, p) == 0))
        else:
            upsilon += sum(1 for r in chunk.tolist() if disc_at(family, r) % p == 0)
    rho = Fraction(upsilon, p**n)

    side = 2 * B + 1
    if side**n <= EXHAUSTIVE_LIMIT:
        hits = sum(1 for t in itertools.product(range(-B, B + 1), repeat=n) if disc_at(family, t) % p == 0)
        empirical, method = Fraction(hits, side**n), "enumeration"
    else:
        # number of box points in each residue class, and one representative of it
        count_of = [((B - r) // p) - ((-B - 1 - r) // p) for r in range(p)]
        rep_of = [r - p * ((r + B) // p) for r in range(p)]
        weight = 0
        for chunk in _residues(p, n):
            for r in chunk.tolist():
                if disc_at(family, [rep_of[i] for i in r]) % p == 0:
                    w = 1
                    for i in r:
                        w *= count_of[i]
                    weight += w
        empirical, method = Fraction(weight, side**n), "class-aggregation"
    return DensityCheck(p, rho, empirical, abs(float(empirical - rho)), 3 * n * p / B, method)


# the run harness


@dataclass
class DistributionReport:
    family: str
    kind: str
    mode: str
    statistic: str
    B: int
    n: int
    c: int
    A: int
    seed: int | None
    sampled: bool
    sample_size: int
    degenerate: int
    log_log_B: float
    mean_count: float
    drift: float
    ks_distance: float
    moments: list[float]
    threshold: int
    threshold_proportion: float
    surrogate_proportion: float
    residual_fraction: float
    exclusion_covers_all: bool | None
    class_counts: dict[str, int]
    densities: list[dict]
    histogram: list[list[float]]

    def __post_init__(self):
        if self.sample_size <= 0:
            raise ValueError("report needs a positive sample size")
        if not 0.0 <= self.ks_distance <= 1.0:
            raise ValueError("KS distance outside [0, 1]")

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> DistributionReport:
        return cls(**json.loads(text))


def box_points(n: int, B: int, sample: int | None, seed: int | None) -> tuple[list[tuple[int, ...]], bool]:
    """All points of the box if it is small enough, else ``sample`` seeded uniform draws."""
    if (2 * B + 1) ** n <= EXHAUSTIVE_LIMIT:
        return list(itertools.product(range(-B, B + 1), repeat=n)), False
    rng = np.random.default_rng(0 if seed is None else seed)
    draws = rng.integers(-B, B, size=(sample or DEFAULT_SAMPLE, n), endpoint=True)
    return [tuple(int(v) for v in row) for row in draws], True


def _records_for(args) -> tuple[list[OmegaRecord], int]:
    family, mode, B, points = args
    out, degenerate = [], 0
    for t in points:
        try:
            out.append(omega_of(t, family, mode, B=B))
        except DegenerateSpecializationError:
            degenerate += 1
    return out, degenerate


def worker_count() -> int:
    raw = os.environ.get("SEMISTABLE_LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def collect_records(family: CurveFamily, B: int, mode: Mode | None = None, *, sample: int | None = None,
                    seed: int | None = None, workers: int | None = None):
    """(records, degenerate count, sampled flag) for the box of radius B.

    Points are fixed before any work is split, and chunks are merged in
    order, so the output does not depend on the number of workers.
    """
    mode = Mode(mode or family.mode)
    points, sampled = box_points(family.n, B, sample, seed)
    workers = workers or worker_count()
    if workers <= 1 or len(points) < 1000:
        records, degenerate = _records_for((family, mode, B, points))
        return records, degenerate, sampled
    from concurrent.futures import ProcessPoolExecutor

    size = -(-len(points) // (4 * workers))
    chunks = [(family, mode, B, points[i:i + size]) for i in range(0, len(points), size)]
    records, degenerate = [], 0
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for recs, deg in pool.map(_records_for, chunks):
            records.extend(recs)
            degenerate += deg
    return records, degenerate, sampled


def histogram(records: Sequence[OmegaRecord], c: int, B: float) -> list[list[float]]:
    """Density of the normalized statistic, one bin per integer count."""
    mu = c * log_log(B)
    width = 1 / math.sqrt(mu)
    counts = Counter(r.count for r in records)
    N = len(records)
    return [[ek_normalize(k, c, B), counts.get(k, 0) / (N * width)]
            for k in range(min(counts), max(counts) + 1)]


def build_report(family: CurveFamily, B: int, records: Sequence[OmegaRecord], *, mode: Mode | None = None,
                 degenerate: int = 0, sampled: bool = False, seed: int | None = None,
                 densities: Sequence[DensityCheck] = ()) -> DistributionReport:
    mode = Mode(mode or family.mode)
    if not records:
        raise ValueError("no nondegenerate points in the box")
    z = [r.normalized for r in records]
    counts = [r.count for r in records]
    classes: Counter = Counter()
    for r in records:
        classes.update(r.class_counts())
    covers = None
    if mode != Mode.MINIMALLY_BAD:
        covers = all(r.omega == 0 for r in records) and any(r.omega_all for r in records)
    mean = sum(counts) / len(counts)
    return DistributionReport(
        family=family.name, kind=family.kind, mode=mode.value,
        statistic="omega1" if mode == Mode.MINIMALLY_BAD else "omega",
        B=B, n=family.n, c=family.declared_c, A=family.cutoff, seed=seed if sampled else None,
        sampled=sampled, sample_size=len(records), degenerate=degenerate,
        log_log_B=log_log(B), mean_count=mean, drift=mean / log_log(B),
        ks_distance=ks_distance(z), moments=[moments(z, k) for k in range(1, 5)],
        threshold=threshold(B), threshold_proportion=threshold_proportion(records, B),
        surrogate_proportion=threshold_proportion(records, B, level=1),
        residual_fraction=sum(r.residual_present for r in records) / len(records),
        exclusion_covers_all=covers, class_counts=dict(sorted(classes.items())),
        densities=[d.as_dict() for d in densities], histogram=histogram(records, family.declared_c, B),
    )


def run_experiment(family: CurveFamily, B: int, mode: Mode | None = None, *, sample: int | None = None,
                   seed: int | None = None, probe_primes: Sequence[int] = (),
                   workers: int | None = None) -> tuple[DistributionReport, list[OmegaRecord]]:
    if B < 16:
        raise ValueError("B must be at least 16")
    records, degenerate, sampled = collect_records(family, B, mode, sample=sample, seed=seed, workers=workers)
    densities = [residue_density(family, p, B) for p in probe_primes]
    report = build_report(family, B, records, mode=mode, degenerate=degenerate, sampled=sampled,
                          seed=seed, densities=densities)
    return report, records


# output files

CSV_CLASSES = [v.value for v in VerdictClass]


def records_csv(records: Sequence[OmegaRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t", "omega", "omega1", "normalized", *CSV_CLASSES])
    for r in records:
        cc = r.class_counts()
        w.writerow([" ".join(map(str, r.t)), r.omega, r.omega1, repr(r.normalized),
                    *(cc.get(k, 0) for k in CSV_CLASSES)])
    return buf.getvalue()


def histogram_dat(report: DistributionReport) -> str:
    lines = ["# bin_center value"]
    lines += [f"{c:.10g} {v:.10g}" for c, v in report.histogram]
    return "\n".join(lines) + "\n"
