"""Mirror potential and its exponential period over the positive real cycle.

For q > 0 and z > 0 we evaluate

    int_{(R_>0)^n} exp(-W_q(x)/z) dx_1/x_1 ... dx_n/x_n

after substituting x = exp(t).  The integrand in t then decays double
exponentially in every direction, so the trapezoidal rule on a uniform
lattice (step h, anchored at t = 0) converges like exp(-c/h).  The lattice is
cut to the polytope where no single monomial of W exceeds z*log(1/eps), with
eps = tol/100, and h is halved until two successive sums agree to ``tol``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import linprog

from . import _linalg as la
from .cohomology import RingPresentation
from .errors import DomainError, NoDecay, SplittingFailure, TolNotMet
from .gamma_class import gamma_asymptotic_value
from .toric_geom import Fan, GitPresentation, nef_rays, in_mori_cone

MAX_DIM = 3
_MIN_STEP = 1.0 / 64


def working_dtype():
    """float64, or long double when TORIC_MIRROR_PRECISION=extended."""
    mode = os.environ.get("TORIC_MIRROR_PRECISION", "double").strip().lower()
    if mode in ("extended", "long", "longdouble"):
        return np.longdouble
    return np.float64


@dataclass(frozen=True)
class MirrorPotential:
    """W_q(x) = sum_i q^{l_i} x^{b_i} in coordinates adapted to one cone."""

    exponents: tuple  # b_i in adapted coordinates
    q_weights: tuple  # l_i as curve classes
    adapted_cone: tuple

    @property
    def n(self) -> int:
        return len(self.exponents[0])

    @property
    def k(self) -> int:
        return len(self.q_weights[0])

    def log_coefficients(self, q: Sequence[float]) -> np.ndarray:
        logq = np.log(np.asarray(q, dtype=float))
        return np.array([float(np.dot(l, logq)) for l in self.q_weights])

    def __call__(self, x: Sequence[float], q: Sequence[float]) -> float:
        x = np.asarray(x, dtype=float)
        c = np.exp(self.log_coefficients(q))
        return float(sum(ci * np.prod(x ** np.asarray(b)) for ci, b in zip(c, self.exponents)))

    def describe(self) -> str:
        terms = []
        for b, l in zip(self.exponents, self.q_weights):
            num, den = [], []
            for a, e in enumerate(l):
                s = f"q{a + 1}" if self.k > 1 else "q"
                (num if e > 0 else den).extend([s + (f"^{abs(e)}" if abs(e) > 1 else "")] * (e != 0))
            for a, e in enumerate(b):
                s = f"x{a + 1}" if self.n > 1 else "x"
                (num if e > 0 else den).extend([s + (f"^{abs(e)}" if abs(e) > 1 else "")] * (e != 0))
            top = "*".join(num) or "1"
            if den:
                bottom = "*".join(den)
                terms.append(f"{top}/({bottom})" if len(den) > 1 else f"{top}/{bottom}")
            else:
                terms.append(top)
        return " + ".join(terms)


def build_potential(f: Fan, g: GitPresentation) -> MirrorPotential:
    """Split the mirror family along the first maximal cone of ``f``."""
    cone = f.max_cones[0]
    inv = la.inverse(f.cone_matrix(cone))
    exps = []
    for b in f.rays:
        v = la.matvec(inv, b)
        if any(x.denominator != 1 for x in v):
            raise SplittingFailure(f"cone {cone} is not unimodular")
        exps.append(tuple(int(x) for x in v))
    comp = [j for j in range(f.m) if j not in cone]
    mj = [g.charges[j] for j in comp]
    try:
        mj_inv = la.inverse(mj)
    except ZeroDivisionError:
        raise SplittingFailure("complementary divisors are not a basis") from None
    weights = [(0,) * g.k for _ in range(f.m)]
    nef = nef_rays(f, g)
    for col, j in enumerate(comp):
        l = [mj_inv[a][col] for a in range(g.k)]
        if any(Fraction(x).denominator != 1 for x in l):
            raise SplittingFailure(f"weight of divisor {j} is not integral")
        l = tuple(int(x) for x in l)
        if not in_mori_cone(l, nef):
            raise SplittingFailure(f"weight {l} of divisor {j} is outside the Mori cone")
        weights[j] = l
    return MirrorPotential(tuple(exps), tuple(weights), tuple(cone))


class QuadratureResult(NamedTuple):
    value: float
    error: float
    step: float


def _box(exps: np.ndarray, logc: np.ndarray, cap: float) -> list:
    """Bounding box of {t : b_i.t + logc_i <= log(cap) for all i}."""
    n = exps.shape[1]
    rhs = math.log(cap) - logc
    box = []
    for a in range(n):
        lo_hi = []
        for sign in (1.0, -1.0):
            c = np.zeros(n)
            c[a] = sign
            res = linprog(c, A_ub=exps, b_ub=rhs, bounds=[(None, None)] * n, method="highs")
            if res.status != 0:
                raise NoDecay("potential does not grow in every direction of the real slice")
            lo_hi.append(sign * res.fun)
        box.append((lo_hi[0], lo_hi[1]))
    return box


def _trapezoid(exps, logc, z, box, h, dtype) -> float:
    n = exps.shape[1]
    axes = [h * np.arange(math.floor(lo / h) - 1, math.ceil(hi / h) + 2) for lo, hi in box]
    axes = [np.asarray(ax, dtype=dtype) for ax in axes]
    exps = exps.astype(dtype)
    logc = np.asarray(logc, dtype=dtype)
    zz = dtype(z)
    if n == 1:
        w = np.exp(axes[0][:, None] @ exps.T + logc).sum(axis=1)
        return float(np.exp(-w / zz).sum() * dtype(h))
    total = dtype(0)
    # chunk over the first axis to bound memory
    rest = [r.ravel() for r in np.meshgrid(*axes[1:], indexing="ij")]
    for t0 in axes[0]:
        pts = np.stack([np.full(rest[0].shape, t0, dtype=dtype)] + rest, axis=1)
        w = np.exp(pts @ exps.T + logc).sum(axis=1)
        total += np.exp(-w / zz).sum()
    return float(total * dtype(h) ** n)


def positive_cycle_integral(
    w: MirrorPotential, q: Sequence[float], z: float, tol: float = 1e-10
) -> QuadratureResult:
    """int over (R_>0)^n of exp(-W_q/z) Omega_0, with an absolute error estimate."""
    q = [float(x) for x in np.atleast_1d(q)]
    if len(q) != w.k:
        raise DomainError(f"expected {w.k} q-values")
    if any(x <= 0 for x in q) or z <= 0:
        raise DomainError("q and z must be positive")
    if w.n > MAX_DIM:
        raise DomainError(f"quadrature is limited to n <= {MAX_DIM}")
    exps = np.array(w.exponents, dtype=float)
    logc = w.log_coefficients(q)
    eps = tol * 1e-2
    cap = z * (math.log(1.0 / eps) + 3.0)
    box = _box(exps, logc, cap)
    dtype = working_dtype()
    h = 1.0
    prev = _trapezoid(exps, logc, z, box, h, dtype)
    err = math.inf
    while h > _MIN_STEP:
        h /= 2
        cur = _trapezoid(exps, logc, z, box, h, dtype)
        err = abs(cur - prev)
        if err <= tol:
            return QuadratureResult(cur, err, h)
        prev = cur
    raise TolNotMet(f"step {h} reached without meeting tol {tol} (last change {err:.3e})")


class AsymptoticRow(NamedTuple):
    q: tuple
    numeric: float
    gamma_value: float
    abs_err: float


def asymptotic_compare(
    w: MirrorPotential,
    ring: RingPresentation,
    q_sequence: Sequence,
    z: float,
    tol: float = 1e-10,
) -> list:
    """Pair the positive-cycle period with its Gamma-class asymptotic value."""
    rows = []
    for q in q_sequence:
        qv = tuple(float(x) for x in np.atleast_1d(q))
        num = positive_cycle_integral(w, qv, z, tol).value
        asym = gamma_asymptotic_value(ring, qv, z)
        rows.append(AsymptoticRow(qv, num, asym, abs(num - asym)))
    return rows


def errors_decreasing(rows: Sequence[AsymptoticRow]) -> bool:
    return all(b.abs_err < a.abs_err for a, b in zip(rows, rows[1:]))
