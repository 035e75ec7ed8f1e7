"""Constants, leading terms and the saddle-point upper bound for log B(n).

Floating point is confined to this module.  Exact inputs are big-integer
counts from :mod:`.counting`; they cross into floats through ``log_big``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np
from scipy import special

from .counting import BigCountTable, log_big
from .errors import ParameterError, SaddleBracketError

_TAIL_CAP = 1_000_000

__all__ = [
    "zeta",
    "c_constant",
    "k_constant",
    "k_constant_brigham",
    "leading_term",
    "SaddleModel",
    "SaddleEstimate",
    "saddle_estimate",
    "exact_log_cumulative",
]


def zeta(s: float, tol: float = 1e-13) -> float:
    """Riemann zeta for real s > 1, absolute error <= tol.

    Partial sum to N - 1, then Euler-Maclaurin with two correction terms;
    the next term bounds the error."""
    if s <= 1:
        raise ParameterError("zeta(s) requires s > 1")
    n = 8
    while s * (s + 1) * (s + 2) * n ** (-s - 3) / 720 > tol / 2:
        n *= 2
    head = math.fsum(k ** (-s) for k in range(1, n))
    tail = n ** (1 - s) / (s - 1) + n ** (-s) / 2 + s * n ** (-s - 1) / 12
    return head + tail


def _zeta_product(d: int) -> float:
    return math.prod(zeta(i) for i in range(2, d + 1))


def c_constant(d: int) -> float:
    """c_d with (number of B_d-orbits of index <= x) ~ c_d x^d."""
    if d < 1:
        raise ParameterError("d must be >= 1")
    return _zeta_product(d) / (2 ** (d - 1) * math.factorial(d) * d)


def k_constant(d: int) -> float:
    """K_d = (d+1)/d * (prod_{i=2}^{d} zeta(i) / 2^(d-1))^(1/(d+1))."""
    if d < 2:
        raise ParameterError("k_constant needs d >= 2; use leading_term(1, 1, n) for d = 1")
    return (d + 1) / d * (_zeta_product(d) / 2 ** (d - 1)) ** (1 / (d + 1))


def k_constant_brigham(d: int) -> float:
    """Coefficient of n^(d/(d+1)) from leading_term with F(x) ~ c_d x^d.

    Equals k_constant(d) * zeta(d+1)^(1/(d+1))."""
    return leading_term(c_constant(d), d, 1)


def leading_term(K: float, u: float, n: float) -> float:
    """(1/u) (K u Gamma(u+2) zeta(u+1))^(1/(u+1)) (u+1)^(u/(u+1)) n^(u/(u+1))."""
    if K <= 0 or u <= 0:
        raise ParameterError("K and u must be positive")
    if n == 0:
        return 0.0
    if n < 0:
        raise ParameterError("n must be >= 0")
    base = K * u * math.gamma(u + 2) * zeta(u + 1)
    return base ** (1 / (u + 1)) * (u + 1) ** (u / (u + 1)) * n ** (u / (u + 1)) / u


def exact_log_cumulative(table: BigCountTable) -> list[float]:
    """log B(n) for every n in the table."""
    return [log_big(v) for v in table.cumulative()]


@dataclass(frozen=True)
class SaddleModel:
    """gamma(1..J) exactly, plus an optional tail gamma(j) ~ K u j^(u-1) for j > J.

    The tail is multiplied by ``inflation``.  ``certified`` marks models whose
    h over-estimates the true h; exact-only models are certified for n <= J."""

    gamma: np.ndarray  # gamma[j], j = 0..J, gamma[0] == 0
    tail: tuple[float, float] | None = None
    inflation: float = 1.5
    truncation_tol: float = 1e-14
    certified: bool = True
    label: str = "model"
    _weights: np.ndarray = field(init=False, repr=False, compare=False)
    _values: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        g = np.asarray(self.gamma, dtype=float)
        if g.ndim != 1 or (g < 0).any():
            raise ParameterError("gamma must be a non-negative sequence")
        nz = np.nonzero(g[1:])[0] + 1
        object.__setattr__(self, "gamma", g)
        object.__setattr__(self, "_weights", nz.astype(float))
        object.__setattr__(self, "_values", g[nz])

    @property
    def horizon(self) -> int:
        return len(self.gamma) - 1

    @classmethod
    def from_gamma(cls, gamma: Sequence[int], *, tail=None, label="model", **kw) -> SaddleModel:
        g = np.array([float(x) for x in gamma], dtype=float)
        if len(g):
            g[0] = 0.0
        return cls(g, tail=tail, label=label, **kw)

    @classmethod
    def partitions(cls, horizon: int, *, with_tail: bool = True) -> SaddleModel:
        """gamma = 1 for every weight; the tail continues it exactly (K = u = 1)."""
        g = np.ones(horizon + 1)
        g[0] = 0.0
        return cls(g, tail=(1.0, 1.0) if with_tail else None, inflation=1.0, label="partitions")

    @classmethod
    def from_census(cls, census, *, with_tail: bool = True) -> SaddleModel:
        d = census.d
        tail = (c_constant(d), float(d)) if (with_tail and d >= 2) else None
        return cls.from_gamma(census.gamma, tail=tail, label=f"census d={d} r={census.r}")

    def truncated(self, n: int) -> SaddleModel:
        """Drop weights above n.  B(n) only sees weights <= n, so the bound
        for B(n) stays valid with no tail at all."""
        if n >= self.horizon and self.tail is None:
            return self
        return replace(self, gamma=self.gamma[: min(n, self.horizon) + 1], tail=None, certified=True)

    # h(s) = -sum_j gamma_j log(1 - e^{-s j})

    def _tail_terms(self, s: float, power: int) -> float:
        """Tail of sum_{j > J} w(j) j^power f(s j) with w(j) = inflation K u j^(u-1).

        power 0 with f = -log(1 - e^{-x}) gives h; power 1 with
        f = 1 / (e^x - 1) gives -h'.  Explicit up to M, then an integral bound."""
        if self.tail is None:
            return 0.0
        K, u = self.tail
        J = self.horizon
        # The bound below holds for any cut-off M > J; the cap keeps arrays small.
        M = J + min(int(math.ceil(-math.log(self.truncation_tol) / s)), _TAIL_CAP) + 1
        j = np.arange(J + 1, M + 1, dtype=float)
        w = self.inflation * K * u * j ** (u - 1 + power)
        with np.errstate(over="ignore"):
            f = -np.log1p(-np.exp(-s * j)) if power == 0 else 1.0 / np.expm1(s * j)
        explicit = float(np.sum(w * f))
        # For j > M: f(sj) <= e^{-sj} / (1 - e^{-sM}) and j^a <= (x + 1)^a on [j-1, j].
        a = u - 1 + power
        z = s * (M + 1)
        integral = math.exp(s) * s ** (-(a + 1)) * special.gammaincc(a + 1, z) * special.gamma(a + 1)
        rest = self.inflation * K * u * integral / (1 - math.exp(-s * M))
        return explicit + rest

    def h(self, s: float) -> float:
        if s <= 0:
            raise ParameterError("s must be positive")
        head = -float(np.sum(self._values * np.log1p(-np.exp(-s * self._weights))))
        return head + self._tail_terms(s, 0)

    def h_prime(self, s: float) -> float:
        if s <= 0:
            raise ParameterError("s must be positive")
        with np.errstate(over="ignore"):
            head = -float(np.sum(self._values * self._weights / np.expm1(s * self._weights)))
        return head - self._tail_terms(s, 1)

    def phi(self, t: float) -> float:
        """sum_j gamma_j e^{-t j} over the exact part."""
        return float(np.sum(self._values * np.exp(-t * self._weights)))

    def h_series(self, s: float) -> tuple[float, float]:
        """Exact-part h(s) as sum_m phi(m s) / m, plus a bound on the dropped terms.

        Stops once phi(m s) < truncation_tol; the remainder is at most
        phi(M s) q / ((M + 1)(1 - q)) with q = e^{-s j_min}."""
        if not len(self._weights):
            return 0.0, 0.0
        jmin = float(self._weights[0])
        q = math.exp(-s * jmin)
        total = 0.0
        m = 1
        while True:
            ph = self.phi(m * s)
            total += ph / m
            if ph < self.truncation_tol:
                break
            m += 1
        return total, ph * q / ((m + 1) * (1 - q))


@dataclass(frozen=True)
class SaddleEstimate:
    n: int
    s_star: float
    log_B_upper: float
    certified: bool
    path: tuple[float, ...]

    def __iter__(self):
        return iter((self.s_star, self.log_B_upper))


_FLOAT_MARGIN = 1e-9


def saddle_estimate(model: SaddleModel, n: int, *, max_iter: int = 200) -> SaddleEstimate:
    """Bisect for h'(s) = -n on (0, 1]; the bound is h(s*) + n s*.

    For n within the exact horizon the model is truncated at n, so the
    bound is a hard inequality.  Beyond it the tail model is used and the
    result is only as good as that model."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    if n <= model.horizon:
        work = model.truncated(n)
        certified = True
    else:
        work = model
        certified = model.certified and model.tail is not None

    def g(s: float) -> float:
        return work.h_prime(s) + n

    lo, hi = 1e-12, 1.0
    if g(hi) < 0 or g(lo) > 0:
        raise SaddleBracketError("saddle not bracketed")
    tol = max(1.0, 1e-6 * n)
    path = []
    s = hi
    for _ in range(max_iter):
        s = math.sqrt(lo * hi)
        path.append(s)
        v = g(s)
        if abs(v) <= tol:
            break
        if v < 0:
            lo = s
        else:
            hi = s
    value = work.h(s) + n * s
    value += _FLOAT_MARGIN * (abs(value) + 1)
    return SaddleEstimate(n, s, value, certified, tuple(path))


def upper_bound_at(model: SaddleModel, n: int, s: float) -> float:
    """h(s) + n s for the model as used for B(n); valid for every s > 0."""
    work = model.truncated(n) if n <= model.horizon else model
    value = work.h(s) + n * s
    return value + _FLOAT_MARGIN * (abs(value) + 1)
