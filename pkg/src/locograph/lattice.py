"""Finite-index sublattices of Z^d and the hyperoctahedral group acting on them.

A sublattice is stored by its Hermite normal form: an upper-triangular integer
matrix whose columns form a basis, with positive diagonal and every entry to
the right of a diagonal entry reduced modulo it.  The HNF is unique, so two
lattices are equal exactly when their matrices are.

Everything here is exact integer arithmetic and works for any ``d``; bulk d=2
workloads go through :mod:`locograph._lattice2d` instead.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import DegenerateLatticeError

Matrix = tuple[tuple[int, ...], ...]

#: Largest dimension accepted without ``allow_large_d``; |B_4| = 384.
MAX_DIM = 4


def _check_dim(d: int, allow_large_d: bool = False) -> None:
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    if d > MAX_DIM and not allow_large_d:
        raise ValueError(f"d={d} exceeds the supported range d <= {MAX_DIM}; pass allow_large_d=True")


@dataclass(frozen=True, slots=True)
class SublatticeHNF:
    """Sublattice of Z^d given by its HNF matrix (rows of an upper-triangular matrix).

    Column ``j`` of ``matrix`` is the j-th basis vector.
    """

    matrix: Matrix

    def __post_init__(self) -> None:
        m = self.matrix
        d = len(m)
        if d == 0 or any(len(row) != d for row in m):
            raise ValueError("HNF matrix must be square and non-empty")
        for i in range(d):
            if m[i][i] < 1:
                raise ValueError(f"diagonal entry ({i},{i}) must be positive")
            for j in range(d):
                if j < i and m[i][j] != 0:
                    raise ValueError("HNF matrix must be upper triangular")
                if j > i and not 0 <= m[i][j] < m[i][i]:
                    raise ValueError(f"entry ({i},{j}) not reduced modulo the diagonal")

    @classmethod
    def _trusted(cls, matrix: Matrix) -> SublatticeHNF:
        # Skips validation; callers guarantee HNF form.
        obj = object.__new__(cls)
        object.__setattr__(obj, "matrix", matrix)
        return obj

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> SublatticeHNF:
        return cls(tuple(tuple(int(x) for x in row) for row in rows))

    @classmethod
    def diagonal(cls, *diag: int) -> SublatticeHNF:
        d = len(diag)
        return cls(tuple(tuple(diag[i] if i == j else 0 for j in range(d)) for i in range(d)))

    @classmethod
    def scaled(cls, d: int, m: int) -> SublatticeHNF:
        """The lattice m·Z^d."""
        return cls.diagonal(*([m] * d))

    @property
    def d(self) -> int:
        return len(self.matrix)

    @property
    def index(self) -> int:
        return math.prod(self.matrix[i][i] for i in range(self.d))

    @property
    def diag(self) -> tuple[int, ...]:
        return tuple(self.matrix[i][i] for i in range(self.d))

    def basis(self) -> list[tuple[int, ...]]:
        """Basis vectors (the columns of the matrix)."""
        d = self.d
        return [tuple(self.matrix[i][j] for i in range(d)) for j in range(d)]

    def sort_key(self) -> tuple[int, ...]:
        """Row-major flattening; the orbit representative minimises this."""
        return tuple(x for row in self.matrix for x in row)

    def to_list(self) -> list[list[int]]:
        return [list(row) for row in self.matrix]

    def __repr__(self) -> str:
        return f"SublatticeHNF({self.to_list()})"


@dataclass(frozen=True, slots=True)
class SignedPermutation:
    """Element of B_d sending e_i to signs[i] * e_{perm[i]} (0-based indices)."""

    perm: tuple[int, ...]
    signs: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.perm) != list(range(len(self.perm))):
            raise ValueError(f"{self.perm} is not a permutation")
        if len(self.signs) != len(self.perm) or any(s not in (1, -1) for s in self.signs):
            raise ValueError("signs must be a +-1 vector matching perm")

    @property
    def d(self) -> int:
        return len(self.perm)

    @classmethod
    def identity(cls, d: int) -> SignedPermutation:
        return cls(tuple(range(d)), (1,) * d)

    @classmethod
    def negation(cls, d: int) -> SignedPermutation:
        return cls(tuple(range(d)), (-1,) * d)

    def __call__(self, v: Sequence[int]) -> tuple[int, ...]:
        out = [0] * self.d
        for i, x in enumerate(v):
            out[self.perm[i]] = self.signs[i] * x
        return tuple(out)

    def compose(self, other: SignedPermutation) -> SignedPermutation:
        """self ∘ other (apply ``other`` first)."""
        perm = tuple(self.perm[other.perm[i]] for i in range(self.d))
        signs = tuple(other.signs[i] * self.signs[other.perm[i]] for i in range(self.d))
        return SignedPermutation(perm, signs)

    def inverse(self) -> SignedPermutation:
        perm = [0] * self.d
        signs = [1] * self.d
        for i, (p, s) in enumerate(zip(self.perm, self.signs)):
            perm[p] = i
            signs[p] = s
        return SignedPermutation(tuple(perm), tuple(signs))

    def is_identity(self) -> bool:
        return self.perm == tuple(range(self.d)) and all(s == 1 for s in self.signs)


@lru_cache(maxsize=None)
def hyperoctahedral_group(d: int) -> tuple[SignedPermutation, ...]:
    """All 2^d·d! signed permutations, in a fixed order (identity first)."""
    elems = []
    for perm in itertools.permutations(range(d)):
        for signs in itertools.product((1, -1), repeat=d):
            elems.append(SignedPermutation(perm, signs))
    return tuple(elems)


def group_order(d: int) -> int:
    return 2**d * math.factorial(d)


# -- enumeration -------------------------------------------------------------


def ordered_factorizations(n: int, d: int) -> Iterator[tuple[int, ...]]:
    """Ordered d-tuples of positive integers with product n, lexicographically."""
    if d == 1:
        yield (n,)
        return
    for c in divisors(n):
        for rest in ordered_factorizations(n // c, d - 1):
            yield (c,) + rest


@lru_cache(maxsize=4096)
def divisors(n: int) -> tuple[int, ...]:
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return tuple(small + large[::-1])


def iter_hnf(d: int, n: int) -> Iterator[SublatticeHNF]:
    """Stream every index-n sublattice of Z^d once, ordered by
    (diagonal composition, off-diagonal entries in row-major order)."""
    if n < 1:
        raise ValueError("index must be >= 1")
    _check_dim(d, allow_large_d=True)
    slots = [(i, j) for i in range(d) for j in range(i + 1, d)]
    for diag in ordered_factorizations(n, d):
        ranges = [range(diag[i]) for i, _ in slots]
        for offs in itertools.product(*ranges):
            m = [[0] * d for _ in range(d)]
            for i in range(d):
                m[i][i] = diag[i]
            for (i, j), v in zip(slots, offs):
                m[i][j] = v
            yield SublatticeHNF._trusted(tuple(tuple(row) for row in m))


def enumerate_hnf(d: int, n: int) -> list[SublatticeHNF]:
    return list(iter_hnf(d, n))


def sublattice_count(d: int, n: int) -> int:
    """Number of index-n sublattices of Z^d from the divisor-composition sum."""
    total = 0
    for diag in ordered_factorizations(n, d):
        total += math.prod(c ** (d - 1 - i) for i, c in enumerate(diag))
    return total


def sublattice_count_table(d: int, x: int) -> list[int]:
    """counts[n] = number of index-n sublattices for 0 <= n <= x (counts[0] = 0).

    Uses multiplicativity-free Dirichlet convolution: the count for d is
    sum over c1 | n of c1^(d-1) * count_{d-1}(n / c1)."""
    prev = [0] + [1] * x  # d = 1
    for dim in range(2, d + 1):
        cur = [0] * (x + 1)
        e = dim - 1
        for c in range(1, x + 1):
            w = c**e
            for m in range(c, x + 1, c):
                cur[m] += w * prev[m // c]
        prev = cur
    return prev


# -- canonicalization and group action ---------------------------------------


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def hnf_canonicalize(gens: Sequence[Sequence[int]]) -> SublatticeHNF:
    """HNF of the lattice spanned by ``gens`` (d column vectors in Z^d)."""
    d = len(gens)
    if d == 0 or any(len(g) != d for g in gens):
        raise ValueError("need d generator vectors of length d")
    cols = [list(map(int, g)) for g in gens]
    for i in range(d - 1, -1, -1):
        # fold row i of columns 0..i-1 into column i via unimodular 2x2 steps
        for k in range(i):
            b = cols[k][i]
            if b == 0:
                continue
            a = cols[i][i]
            g, s, t = _xgcd(a, b)
            ci, ck = cols[i], cols[k]
            ag, bg = a // g, b // g
            cols[i] = [s * x + t * y for x, y in zip(ci, ck)]
            cols[k] = [bg * x - ag * y for x, y in zip(ci, ck)]
        if cols[i][i] == 0:
            raise DegenerateLatticeError()
        if cols[i][i] < 0:
            cols[i] = [-x for x in cols[i]]
    for j in range(1, d):
        for i in range(j - 1, -1, -1):
            q = cols[j][i] // cols[i][i]
            if q:
                cj, ci = cols[j], cols[i]
                cols[j] = [x - q * y for x, y in zip(cj, ci)]
    return SublatticeHNF._trusted(tuple(tuple(cols[j][i] for j in range(d)) for i in range(d)))


def apply_signed_perm(sigma: SignedPermutation, lat: SublatticeHNF) -> SublatticeHNF:
    if sigma.d != lat.d:
        raise ValueError("dimension mismatch")
    return hnf_canonicalize([sigma(v) for v in lat.basis()])


def is_invariant(sigma: SignedPermutation, lat: SublatticeHNF) -> bool:
    return apply_signed_perm(sigma, lat) == lat


def is_member(x: Sequence[int], lat: SublatticeHNF) -> bool:
    """Exact membership by back-substitution against the triangular basis."""
    m = lat.matrix
    d = lat.d
    if len(x) != d:
        raise ValueError("dimension mismatch")
    r = list(x)
    for i in range(d - 1, -1, -1):
        lam, rem = divmod(r[i], m[i][i])
        if rem:
            return False
        if lam:
            for k in range(i + 1):
                r[k] -= lam * m[k][i]
    return True


# -- minimum distance --------------------------------------------------------


@lru_cache(maxsize=256)
def l1_shell(d: int, t: int) -> tuple[tuple[int, ...], ...]:
    """Vectors with ||v||_1 = t, one from each +-pair (first nonzero entry > 0)."""
    out = []

    def rec(prefix: tuple[int, ...], remaining: int) -> None:
        k = len(prefix)
        if k == d - 1:
            last = (remaining, -remaining) if remaining else (0,)
            for v in last:
                out.append(prefix + (v,))
            return
        for a in range(-remaining, remaining + 1):
            rec(prefix + (a,), remaining - abs(a))

    if t > 0:
        rec((), t)
    return tuple(v for v in out if next(x for x in v if x) > 0)


def has_min_distance_at_least(lat: SublatticeHNF, t: int) -> bool:
    """True iff no nonzero lattice vector has L1 norm < t (shells 1..t-1 only)."""
    d = lat.d
    for radius in range(1, t):
        for v in l1_shell(d, radius):
            if is_member(v, lat):
                return False
    return True


def min_distance(lat: SublatticeHNF) -> int:
    """Least L1 norm of a nonzero vector of ``lat``; at most its index."""
    d = lat.d
    radius = 1
    while True:
        for v in l1_shell(d, radius):
            if is_member(v, lat):
                return radius
        radius += 1


# -- orbits ------------------------------------------------------------------


@dataclass(frozen=True)
class OrbitClass:
    """A B_d-orbit of sublattices with its lexicographically least member."""

    rep: SublatticeHNF
    index: int
    min_distance: int
    orbit_size: int
    stabilizer_size: int

    @property
    def d(self) -> int:
        return self.rep.d

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "index": self.index,
            "min_distance": self.min_distance,
            "orbit_size": self.orbit_size,
            "rep": self.rep.to_list(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> OrbitClass:
        rep = SublatticeHNF.from_rows(obj["rep"])
        d = rep.d
        if obj.get("d", d) != d or obj.get("index", rep.index) != rep.index:
            raise ValueError("inconsistent OrbitClass record")
        size = int(obj["orbit_size"])
        return cls(rep, rep.index, int(obj["min_distance"]), size, group_order(d) // size)


def orbit_images(lat: SublatticeHNF) -> set[SublatticeHNF]:
    return {apply_signed_perm(s, lat) for s in hyperoctahedral_group(lat.d)}


def orbit_of(lat: SublatticeHNF) -> OrbitClass:
    images = orbit_images(lat)
    rep = min(images, key=SublatticeHNF.sort_key)
    size = len(images)
    return OrbitClass(
        rep=rep,
        index=lat.index,
        min_distance=min_distance(lat),
        orbit_size=size,
        stabilizer_size=group_order(lat.d) // size,
    )


def orbits_at_index(d: int, n: int, min_dist: int = 1) -> list[OrbitClass]:
    """All orbits of index-n sublattices with minimum distance >= min_dist,
    sorted by representative.  Generic (any d) but slow; see _lattice2d for d=2."""
    group = hyperoctahedral_group(d)
    seen: set[SublatticeHNF] = set()
    out = []
    for lat in iter_hnf(d, n):
        if lat in seen:
            continue
        images = {apply_signed_perm(s, lat) for s in group}
        seen |= images
        if not has_min_distance_at_least(lat, min_dist):
            continue
        rep = min(images, key=SublatticeHNF.sort_key)
        out.append(OrbitClass(rep, n, min_distance(rep), len(images), len(group) // len(images)))
    out.sort(key=lambda o: o.rep.sort_key())
    return out


def lattice_from_generators(gens: Iterable[Sequence[int]]) -> SublatticeHNF:
    return hnf_canonicalize(list(gens))
