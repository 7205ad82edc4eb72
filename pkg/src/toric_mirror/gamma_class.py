"""Gamma and Todd classes, Chern characters, and exponential-period asymptotics.

Numerical constants are produced here rather than imported from a table:

* zeta(s), s >= 2, from Hasse's globally convergent series for the alternating
  zeta function eta(s) = sum_n 2^-(n+1) sum_k (-1)^k C(n,k) (k+1)^-s, whose inner
  binomial differences are summed exactly in rationals (truncation error below
  2^-60), and zeta(s) = eta(s) / (1 - 2^(1-s));
* Euler's constant from the Euler-Maclaurin corrected limit
  gamma = H_N - log N - 1/(2N) + sum_k B_2k / (2k N^2k), with N = 8 and
  log 8 = 6 atanh(1/3) summed in rationals.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Sequence

from .cohomology import CohomClass, RingPresentation, integrate
from .errors import DomainError, TruncationWarning

_HASSE_TERMS = 64


@lru_cache(maxsize=None)
def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m with B_1 = -1/2."""
    if m == 0:
        return Fraction(1)
    return -sum(comb(m + 1, j) * bernoulli(j) for j in range(m)) / (m + 1)


@lru_cache(maxsize=None)
def zeta(s: int) -> float:
    if s < 2:
        raise ValueError("zeta is only tabulated for integers s >= 2")
    eta = Fraction(0)
    for n in range(_HASSE_TERMS):
        inner = sum(Fraction((-1) ** k * comb(n, k), (k + 1) ** s) for k in range(n + 1))
        eta += inner / 2 ** (n + 1)
    return float(eta / (1 - Fraction(2) ** (1 - s)))


def _log2(terms: int = 40) -> Fraction:
    """log 2 = 2 atanh(1/3) as a rational, error below 9^-terms."""
    return 2 * sum(Fraction(1, (2 * k + 1) * 3 ** (2 * k + 1)) for k in range(terms))


@lru_cache(maxsize=None)
def euler_gamma() -> float:
    N, K = 8, 12
    harmonic = sum(Fraction(1, j) for j in range(1, N + 1))
    corr = -Fraction(1, 2 * N) + sum(
        bernoulli(2 * k) / (2 * k * Fraction(N) ** (2 * k)) for k in range(1, K + 1)
    )
    # everything stays rational until the final rounding
    return float(harmonic + corr - 3 * _log2())


@dataclass(frozen=True)
class ZetaTable:
    euler_gamma: float
    zeta: tuple  # zeta[s] for s >= 2; entries 0 and 1 are None

    @classmethod
    def build(cls, order: int) -> "ZetaTable":
        vals = (None, None) + tuple(zeta(s) for s in range(2, max(order, 1) + 1))
        return cls(euler_gamma(), vals)

    def log_gamma1_coeffs(self, order: int) -> list:
        """Taylor coefficients of log Gamma(1+x) through x^order."""
        out = [0.0] * (order + 1)
        if order >= 1:
            out[1] = -self.euler_gamma
        for s in range(2, order + 1):
            out[s] = (-1) ** s * self.zeta[s] / s
        return out


def zeta_table(order: int) -> ZetaTable:
    return ZetaTable.build(order)


# -- power series helpers (coefficient lists) ----------------------------------

def _series_mul(a, b, order):
    out = [0.0] * (order + 1)
    for i, x in enumerate(a[: order + 1]):
        if x:
            for j, y in enumerate(b[: order + 1 - i]):
                out[i + j] += x * y
    return out


def _series_exp(a, order):
    """exp of a series with a[0] == 0, via b' = a' b."""
    b = [0.0] * (order + 1)
    b[0] = 1.0
    for s in range(1, order + 1):
        b[s] = sum(j * a[j] * b[s - j] for j in range(1, s + 1)) / s
    return b


def reflection_check(order: int) -> float:
    """Max coefficient of Gamma(1+x)Gamma(1-x) sin(pi x)/(pi x) - 1 through x^order.

    The Gamma product is built from its log-series in gamma and zeta values; the
    sine factor from its Taylor series.
    """
    if order <= 0:
        return 0.0
    table = zeta_table(order)
    c = table.log_gamma1_coeffs(order)
    log_prod = [c[s] + (-1) ** s * c[s] for s in range(order + 1)]
    log_prod[0] = 0.0
    gamma_prod = _series_exp(log_prod, order)
    sinc = [0.0] * (order + 1)
    for t in range(0, order // 2 + 1):
        sinc[2 * t] = (-1) ** t * math.pi ** (2 * t) / math.factorial(2 * t + 1)
    prod = _series_mul(gamma_prod, sinc, order)
    prod[0] -= 1.0
    return max(abs(x) for x in prod)


# -- characteristic classes ----------------------------------------------------

def todd_class(ring: RingPresentation) -> CohomClass:
    """prod_j D_j / (1 - exp(-D_j)), exact."""
    coeffs = [(-1) ** s * bernoulli(s) / math.factorial(s) for s in range(ring.n + 1)]
    out = ring.one()
    for j in range(ring.m):
        out = out * ring.divisor(j).series(coeffs)
    return out


def gamma_class(ring: RingPresentation) -> CohomClass:
    """prod_j Gamma(1 + D_j) as a real class."""
    table = zeta_table(ring.n)
    c = table.log_gamma1_coeffs(ring.n)
    log = ring.zero("R")
    for j in range(ring.m):
        log = log + ring.divisor(j).to_field("R").series(c)
    return log.exp()


@dataclass(frozen=True)
class KClass:
    """Integer combination of line bundles; ``summands`` holds ``(mult, c1 p-vector)``."""

    summands: tuple

    @classmethod
    def structure_sheaf(cls, k: int) -> "KClass":
        return cls(((1, (0,) * k),))

    @property
    def rank(self) -> int:
        return sum(m for m, _ in self.summands)


def chern_character(E: KClass, ring: RingPresentation) -> CohomClass:
    out = ring.zero()
    for mult, L in E.summands:
        out = out + mult * ring.from_h2(list(L)).exp()
    return out


def _log_q_class(ring: RingPresentation, q: Sequence[float]) -> CohomClass:
    if len(q) != ring.k:
        raise DomainError(f"expected {ring.k} q-values")
    if any(x <= 0 for x in q):
        raise DomainError("q must be positive")
    return ring.from_h2([math.log(x) for x in q])


def gamma_asymptotic_value(ring: RingPresentation, q: Sequence[float], z: float) -> float:
    """integral of q^{-p} z^{c_1} Gamma-hat."""
    if z <= 0:
        raise DomainError("z must be positive")
    q_minus_p = (-_log_q_class(ring, q)).exp()
    z_c1 = (ring.c1.to_field("R") * math.log(z)).exp()
    return integrate(q_minus_p * z_c1 * gamma_class(ring))


def central_charge_terms(
    E: KClass, I, q: Sequence[float], z: float
) -> list:
    """Per-omega-degree contributions to the I-function central charge.

    Returns ``[(omega_degree, contribution), ...]`` in increasing degree.
    """
    ring = I.ring
    if z <= 0:
        raise DomainError("z must be positive")
    prefix = (-_log_q_class(ring, q)).exp()
    prefix = prefix * (ring.c1.to_field("R") * math.log(z)).exp()
    prefix = prefix * gamma_class(ring)
    twist = 2j * math.pi
    ch = chern_character(E, ring).to_field("C").scale_by_degree(lambda s: twist ** s)
    prefix = prefix.to_field("C") * ch
    grouped: dict = {}
    for d, series in I.terms.items():
        qd = math.prod(x ** e for x, e in zip(q, d))
        vec = [0.0] * ring.dim
        for e, coeffs in series.items():
            for t, (x, s) in enumerate(zip(coeffs, ring.degrees)):
                if x:
                    vec[t] += float(x) * (-1) ** e * z ** (e + s)
        term = CohomClass(ring, vec, "R").to_field("C") * qd
        val = integrate(prefix * term)
        w = I.degree(d)
        grouped[w] = grouped.get(w, 0) + val
    return sorted(grouped.items())


def central_charge(E: KClass, I, q: Sequence[float], z: float) -> complex:
    """integral of z^{c_1} z^{deg/2} I(q,-z) Gamma-hat (2 pi i)^{deg/2} ch(E).

    Warns with :class:`TruncationWarning` when the last included q-degree
    contributes at least 1e-3 of the total.
    """
    terms = central_charge_terms(E, I, q, z)
    value = complex(sum(v for _, v in terms))
    tail = abs(terms[-1][1]) if len(terms) > 1 else 0.0
    if tail >= 1e-3 * abs(value):
        warnings.warn(
            TruncationWarning(f"last q-degree contributes {tail:.3e}", tail), stacklevel=2
        )
    return value


def central_charge_tail(E: KClass, I, q, z) -> float:
    terms = central_charge_terms(E, I, q, z)
    return abs(terms[-1][1]) if len(terms) > 1 else 0.0


__all__ = [
    "ZetaTable", "zeta_table", "zeta", "euler_gamma", "bernoulli", "reflection_check",
    "todd_class", "gamma_class", "KClass", "chern_character", "gamma_asymptotic_value",
    "central_charge", "central_charge_terms", "central_charge_tail",
]
