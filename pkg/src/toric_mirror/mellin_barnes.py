"""The Mellin-dual solution prod (-z)^{D_i} Gamma(D_i) and its residue sums.

Branch: (-z)^D = exp(D (log z - i pi)) for z > 0.  Residue sums evaluate the
dual at -z, i.e. with real factors z^{D_i}, which pairs with the positive-cycle
integral of exp(-W_q/z).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import gamma as gamma_fn

from .errors import DivergenceSuspected, DomainError, NotRankOne, PoleHit
from .gamma_class import zeta_table
from .toric_geom import GitPresentation

_POLE_TOL = 1e-12


@dataclass(frozen=True)
class LocalLaurent:
    """Truncated Laurent series sum_s coeffs[s] eps^(low + s) around p = center."""

    center: int
    low: int
    coeffs: tuple
    order: int  # number of coefficients kept

    @classmethod
    def from_series(cls, center: int, low: int, coeffs, order: int) -> "LocalLaurent":
        c = tuple(complex(x) for x in list(coeffs)[:order])
        c = c + (0j,) * (order - len(c))
        return cls(center, low, c, order)

    def __mul__(self, other):
        if not isinstance(other, LocalLaurent):
            return LocalLaurent(self.center, self.low, tuple(other * x for x in self.coeffs), self.order)
        if other.center != self.center:
            raise ValueError("expansion points differ")
        order = min(self.order, other.order)
        out = [0j] * order
        for i, x in enumerate(self.coeffs[:order]):
            if x:
                for j, y in enumerate(other.coeffs[: order - i]):
                    out[i + j] += x * y
        return LocalLaurent(self.center, self.low + other.low, tuple(out), order)

    __rmul__ = __mul__

    def shift(self, s: int) -> "LocalLaurent":
        """Multiply by eps^s."""
        return LocalLaurent(self.center, self.low + s, self.coeffs, self.order)

    def coefficient(self, e: int) -> complex:
        idx = e - self.low
        if idx < 0:
            return 0j
        if idx >= self.order:
            raise ValueError(f"eps^{e} lies beyond the truncation")
        return self.coeffs[idx]

    def residue(self) -> complex:
        return self.coefficient(-1)


def _exp_series(a: Sequence[float], order: int) -> list:
    b = [0.0] * order
    b[0] = math.exp(a[0]) if a else 1.0
    for s in range(1, order):
        b[s] = sum(j * a[j] * b[s - j] for j in range(1, min(s, len(a) - 1) + 1)) / s
    return b


def _gamma_near_pole(d: int, order: int) -> LocalLaurent:
    """Gamma(p) at p = -d + eps: Gamma(1+eps) / (eps (eps-1) ... (eps-d))."""
    log_g = zeta_table(order).log_gamma1_coeffs(order - 1)
    out = LocalLaurent.from_series(-d, 0, _exp_series(log_g, order), order).shift(-1)
    for j in range(1, d + 1):
        inv = [-1.0 / j ** (s + 1) for s in range(order)]
        out = out * LocalLaurent.from_series(-d, 0, inv, order)
    return out


def _is_pole(x: complex) -> bool:
    r = round(x.real)
    return r <= 0 and abs(x - r) < _POLE_TOL


def _divisor_values(p, g: GitPresentation) -> list:
    p = [complex(x) for x in np.atleast_1d(p)]
    if len(p) != g.k:
        raise DomainError(f"expected {g.k} p-values")
    return [sum(float(m) * x for m, x in zip(row, p)) for row in g.charges]


def mellin_dual(p, z: float, g: GitPresentation) -> complex:
    """prod_i (-z)^{D_i} Gamma(D_i) with log(-z) = log z - i pi."""
    if z <= 0:
        raise DomainError("z must be positive")
    log_mz = complex(math.log(z), -math.pi)
    out = 1 + 0j
    for i, D in enumerate(_divisor_values(p, g)):
        if _is_pole(D):
            raise PoleHit(f"D_{i}(p) = {D} is a pole of Gamma")
        out *= cmath.exp(D * log_mz) * complex(gamma_fn(D))
    return out


def difference_check(p, z: float, d: Sequence[int], g: GitPresentation) -> float:
    """|L(p) I(p) - L'(p+d) I(p+d)| for the difference relation attached to d."""
    d = tuple(int(x) for x in d)
    if not any(d):
        return 0.0
    p = [complex(x) for x in np.atleast_1d(p)]
    shifted = [x + y for x, y in zip(p, d)]
    c = g.pairing(d)
    Dp = _divisor_values(p, g)
    Ds = _divisor_values(shifted, g)
    lhs = 1 + 0j
    rhs = 1 + 0j
    for i, ci in enumerate(c):
        for j in range(abs(ci)):
            if ci > 0:
                lhs *= (-Dp[i] - j) * z
            else:
                rhs *= (-Ds[i] - j) * z
    return abs(lhs * mellin_dual(p, z, g) - rhs * mellin_dual(shifted, z, g))


class ResidueSum(NamedTuple):
    value: float
    tail_estimate: float
    residues: tuple


def residue(g: GitPresentation, q: float, z: float, d: int) -> float:
    """Res_{p=-d} q^{-p} prod_i z^{D_i} Gamma(D_i) for P^n data (all charges 1)."""
    N = g.m
    order = N + 1
    lam = -math.log(q) + N * math.log(z)
    pre = [lam ** s / math.factorial(s) for s in range(order)]
    scale = (q / z ** N) ** d
    series = LocalLaurent.from_series(-d, 0, pre, order) * scale
    gam = _gamma_near_pole(d, order)
    for _ in range(N):
        series = series * gam
    return series.residue().real


def residue_sum(g: GitPresentation, q: float, z: float, terms: int = 30) -> ResidueSum:
    """Sum of the residues at p = 0, -1, ..., -(terms-1) of q^{-p} I(p, -z)."""
    if g.k != 1:
        raise NotRankOne(f"residue sums need Picard rank 1, got k = {g.k}")
    if any(row[0] != 1 for row in g.charges):
        raise DomainError("residue sums are implemented for unit charges only")
    if q <= 0 or z <= 0:
        raise DomainError("q and z must be positive")
    if terms < 1:
        raise DomainError("terms must be at least 1")
    res = []
    total = 0.0
    for d in range(terms):
        r = residue(g, q, z, d)
        res.append(r)
        total += r
    mags = [abs(r) for r in res[-3:]]
    if len(mags) == 3 and mags[0] < mags[1] < mags[2]:
        raise DivergenceSuspected(f"residue magnitudes grow: {mags}")
    return ResidueSum(total, abs(res[-1]), tuple(res))
