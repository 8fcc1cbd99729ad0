"""Compiled inner loops for Brent's rho on odd moduli below 2**128.

Numbers are held as little-endian arrays of 32-bit limbs inside uint64 slots
and multiplied in Montgomery form (CIOS), so each product of limbs fits in
64 bits.  The iteration map is x -> x*x/R + c, which is still a quadratic
map mod every prime factor of n.

The limb loops are unrolled per limb count: source for each k is generated
once and compiled with numba, keeping every limb in a scalar register.
"""

from __future__ import annotations

import functools

import numpy as np
from numba import njit

LIMB_BITS = 32
MAX_LIMBS = 4


def _montmul_src(a, b, out, k, ind):
    """Unrolled CIOS product a*b/R mod n into the names ``out``."""
    L = []
    w = lambda s: L.append(ind + s)  # noqa: E731
    for j in range(k + 2):
        w(f"t{j} = Z")
    for i in range(k):
        w("cy = Z")
        for j in range(k):
            w(f"s = t{j} + {a[j]} * {b[i]} + cy")
            w(f"t{j} = s & M")
            w("cy = s >> S")
        w(f"s = t{k} + cy")
        w(f"t{k} = s & M")
        w(f"t{k + 1} = s >> S")
        w("mm = (t0 * ninv) & M")
        w("s = t0 + mm * n0")
        w("cy = s >> S")
        for j in range(1, k):
            w(f"s = t{j} + mm * n{j} + cy")
            w(f"t{j - 1} = s & M")
            w("cy = s >> S")
        w(f"s = t{k} + cy")
        w(f"t{k - 1} = s & M")
        w(f"t{k} = t{k + 1} + (s >> S)")
    # t may lie in [n, 2n): subtract once if so
    w("bw = Z")
    for j in range(k):
        w(f"s = t{j} + W - n{j} - bw")
        w(f"d{j} = s & M")
        w("bw = O - (s >> S)")
    w(f"if t{k} != Z or bw == Z:")
    for j in range(k):
        w(f"    {out[j]} = d{j}")
    w("else:")
    for j in range(k):
        w(f"    {out[j]} = t{j}")
    return L


def _addmod_src(a, b, out, k, ind):
    L = []
    w = lambda s: L.append(ind + s)  # noqa: E731
    w("cy = Z")
    for j in range(k):
        w(f"s = {a[j]} + {b[j]} + cy")
        w(f"e{j} = s & M")
        w("cy = s >> S")
    w("bw = Z")
    for j in range(k):
        w(f"s = e{j} + W - n{j} - bw")
        w(f"d{j} = s & M")
        w("bw = O - (s >> S)")
    w("if cy != Z or bw == Z:")
    for j in range(k):
        w(f"    {out[j]} = d{j}")
    w("else:")
    for j in range(k):
        w(f"    {out[j]} = e{j}")
    return L


def _submod_src(a, b, out, k, ind):
    L = []
    w = lambda s: L.append(ind + s)  # noqa: E731
    w("bw = Z")
    for j in range(k):
        w(f"s = {a[j]} + W - {b[j]} - bw")
        w(f"{out[j]} = s & M")
        w("bw = O - (s >> S)")
    w("if bw != Z:")
    w("    cy = Z")
    for j in range(k):
        w(f"    s = {out[j]} + n{j} + cy")
        w(f"    {out[j]} = s & M")
        w("    cy = s >> S")
    return L


def _names(prefix, k):
    return [f"{prefix}{j}" for j in range(k)]


def _kernel_source(k: int) -> str:
    y, c, x, q, diff, tmp = (_names(p, k) for p in ("y", "c", "x", "q", "df", "tm"))
    head = ["M = np.uint64(0xFFFFFFFF)", "S = np.uint64(32)", "Z = np.uint64(0)",
            "O = np.uint64(1)", "W = np.uint64(1 << 32)"]
    src = ["def advance(ya, ca, na, ninv, steps):"]
    src += ["    " + h for h in head]
    for j in range(k):
        src.append(f"    y{j} = ya[{j}]; c{j} = ca[{j}]; n{j} = na[{j}]")
    src.append("    for _ in range(steps):")
    src += _montmul_src(y, y, tmp, k, "        ")
    src += _addmod_src(tmp, c, y, k, "        ")
    for j in range(k):
        src.append(f"    ya[{j}] = y{j}")
    src.append("")
    src.append("def accumulate(xa, ya, qa, ca, na, ninv, steps, ysa):")
    src += ["    " + h for h in head]
    for j in range(k):
        src.append(f"    x{j} = xa[{j}]; y{j} = ya[{j}]; q{j} = qa[{j}]; c{j} = ca[{j}]; n{j} = na[{j}]")
        src.append(f"    ysa[{j}] = y{j}")
    src.append("    for _ in range(steps):")
    src += _montmul_src(y, y, tmp, k, "        ")
    src += _addmod_src(tmp, c, y, k, "        ")
    src += _submod_src(x, y, diff, k, "        ")
    src += _montmul_src(q, diff, q, k, "        ")
    for j in range(k):
        src.append(f"    ya[{j}] = y{j}; qa[{j}] = q{j}")
    return "\n".join(src) + "\n"


@functools.cache
def kernels(k: int):
    """(advance, accumulate) compiled for k limbs."""
    if not 1 <= k <= MAX_LIMBS:
        raise ValueError(f"limb count {k} outside 1..{MAX_LIMBS}")
    namespace = {"np": np}
    exec(compile(_kernel_source(k), f"<rho kernel k={k}>", "exec"), namespace)
    return njit(namespace["advance"]), njit(namespace["accumulate"])


def to_limbs(v: int, k: int) -> np.ndarray:
    out = np.zeros(k, dtype=np.uint64)
    for j in range(k):
        out[j] = v & 0xFFFFFFFF
        v >>= LIMB_BITS
    return out


def from_limbs(a: np.ndarray) -> int:
    v = 0
    for j in range(len(a) - 1, -1, -1):
        v = (v << LIMB_BITS) | int(a[j])
    return v


def limb_count(n: int) -> int:
    return max(1, -(-n.bit_length() // LIMB_BITS))


def neg_inverse_32(n: int) -> np.uint64:
    """-n^-1 mod 2^32 for odd n, typed so numba keeps the product unsigned."""
    return np.uint64((-pow(n, -1, 1 << LIMB_BITS)) % (1 << LIMB_BITS))
