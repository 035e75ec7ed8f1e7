"""Vectorised kernels for sublattices of Z^2.

A d=2 HNF is the triple (a, b, c) for the matrix [[a, b], [0, c]] with
0 <= b < a; its basis is (a, 0), (b, c) and its index is a*c.  All functions
take parallel int64 arrays and mirror generic routines in :mod:`.lattice`,
which the tests use as the oracle.
"""

from __future__ import annotations

import numpy as np

_I64 = np.int64


def all_hnf(max_index: int, min_index: int = 1) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Every HNF with min_index <= a*c <= max_index as arrays (a, b, c)."""
    a_parts, b_parts, c_parts = [], [], []
    for a in range(1, max_index + 1):
        c_lo = max(1, -(-min_index // a))
        c_hi = max_index // a
        if c_hi < c_lo:
            continue
        cs = np.arange(c_lo, c_hi + 1, dtype=_I64)
        bs = np.arange(a, dtype=_I64)
        a_parts.append(np.full(a * cs.size, a, dtype=_I64))
        b_parts.append(np.repeat(bs, cs.size))
        c_parts.append(np.tile(cs, a))
    if not a_parts:
        empty = np.zeros(0, dtype=_I64)
        return empty, empty.copy(), empty.copy()
    return np.concatenate(a_parts), np.concatenate(b_parts), np.concatenate(c_parts)


def hnf_at_index(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Index-n HNFs in the generic enumeration order (a ascending, then b)."""
    a_parts, b_parts = [], []
    for a in range(1, n + 1):
        if n % a == 0:
            a_parts.append(np.full(a, a, dtype=_I64))
            b_parts.append(np.arange(a, dtype=_I64))
    a = np.concatenate(a_parts)
    return a, np.concatenate(b_parts), n // a


def xgcd(x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Elementwise (g, s, t) with s*x + t*y = g = gcd(x, y) >= 0."""
    r0, r1 = x.astype(_I64).copy(), y.astype(_I64).copy()
    s0, s1 = np.ones_like(r0), np.zeros_like(r0)
    t0, t1 = np.zeros_like(r0), np.ones_like(r0)
    active = r1 != 0
    while active.any():
        idx = np.nonzero(active)[0]
        q = r0[idx] // r1[idx]
        r0[idx], r1[idx] = r1[idx], r0[idx] - q * r1[idx]
        s0[idx], s1[idx] = s1[idx], s0[idx] - q * s1[idx]
        t0[idx], t1[idx] = t1[idx], t0[idx] - q * t1[idx]
        active = r1 != 0
    neg = r0 < 0
    r0[neg], s0[neg], t0[neg] = -r0[neg], -s0[neg], -t0[neg]
    return r0, s0, t0


def flip_x(a, b, c):
    """Image under (x, y) -> (-x, y)."""
    return a, (-b) % a, c


def swap_xy(a, b, c):
    """Image under (x, y) -> (y, x): basis (0, a), (c, b)."""
    g, _s, t = xgcd(a, b)
    a2 = a * c // g
    return a2, (t * c) % a2, g


def coset_images(a, b, c):
    """Images under representatives of B_2 / {±Id}: Id, flip, swap, swap∘flip."""
    fa, fb, fc = flip_x(a, b, c)
    sa, sb, sc = swap_xy(a, b, c)
    ta, tb, tc = swap_xy(fa, fb, fc)
    return [(a, b, c), (fa, fb, fc), (sa, sb, sc), (ta, tb, tc)]


def _lex_lt(x, y):
    """Elementwise (a, b, c) < (a', b', c')."""
    a1, b1, c1 = x
    a2, b2, c2 = y
    return (a1 < a2) | ((a1 == a2) & ((b1 < b2) | ((b1 == b2) & (c1 < c2))))


def _eq(x, y):
    return (x[0] == y[0]) & (x[1] == y[1]) & (x[2] == y[2])


def orbit_data(a, b, c):
    """(is_rep, orbit_size) for each lattice.

    is_rep marks the lexicographically least member of each B_2-orbit, so
    selecting is_rep picks every orbit exactly once."""
    imgs = coset_images(a, b, c)
    own = imgs[0]
    is_rep = np.ones(a.shape, dtype=bool)
    for other in imgs[1:]:
        is_rep &= ~_lex_lt(other, own)
    size = np.ones(a.shape, dtype=_I64)
    for i in range(1, 4):
        new = np.ones(a.shape, dtype=bool)
        for j in range(i):
            new &= ~_eq(imgs[i], imgs[j])
        size += new
    return is_rep, size


def swap_invariant(a, b, c):
    return _eq(swap_xy(a, b, c), (a, b, c))


def min_distance(a, b, c, cap: int | None = None) -> np.ndarray:
    """Exact L1 minimum distance, or min(md, cap) when ``cap`` is given.

    Lattice vectors are (x, k*c) with x ≡ b*k (mod a); for each k >= 1 the
    shortest has |x| = min(r, a - r), r = b*k mod a.  k = 0 contributes a."""
    best = a.copy()
    if cap is not None:
        best = np.minimum(best, cap)
    k = 1
    idx = np.nonzero(c < best)[0]
    while idx.size:
        aa, bb, cc = a[idx], b[idx], c[idx]
        r = (bb * k) % aa
        cand = k * cc + np.minimum(r, aa - r)
        best[idx] = np.minimum(best[idx], cand)
        k += 1
        keep = k * cc < best[idx]
        idx = idx[keep]
    return best
