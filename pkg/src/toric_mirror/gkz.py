"""GKZ operators, Givental's I-function and the mirror map.

The I-function is stored with its ``q^{p/z}`` prefactor stripped: for every
Mori-cone lattice point ``d`` with ``omega . d <= bound`` we keep the
cohomology-valued Laurent polynomial in ``z``

    I_d(z) = prod_i prod_{j<=0}(D_i + j z) / prod_{j<=D_i.d}(D_i + j z),

as a dict ``{z-exponent: CohomClass}``.  Differential operators act through
the conjugated rule ``z theta_a -> p_a + z (p_a . d)`` on the ``q^d`` term,
so no logarithms ever enter the exact layer.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from . import _linalg as la
from .cohomology import CohomClass, RingPresentation
from .errors import BoundExceeded, NonUnipotent
from .toric_geom import fan_polytope_volume, mori_generators, mori_points

# -- Laurent polynomials in z with cohomology coefficients -------------------
# represented as {exponent: coefficient vector (tuple of Fractions)}


def _lmul(ring: RingPresentation, a: dict, b: dict) -> dict:
    table = ring.mult_table
    out: dict = {}
    for e1, v1 in a.items():
        for e2, v2 in b.items():
            acc = out.get(e1 + e2)
            if acc is None:
                acc = [Fraction(0)] * ring.dim
                out[e1 + e2] = acc
            for i, x in enumerate(v1):
                if not x:
                    continue
                row = table[i]
                for j, y in enumerate(v2):
                    if not y:
                        continue
                    xy = x * y
                    for t, c in enumerate(row[j]):
                        if c:
                            acc[t] += xy * c
    return {e: tuple(v) for e, v in out.items() if any(v)}


def _ladd(a: dict, b: dict, sign: int = 1) -> dict:
    out = dict(a)
    for e, v in b.items():
        w = tuple(x + sign * y for x, y in zip(out.get(e, (0,) * len(v)), v))
        if any(w):
            out[e] = w
        else:
            out.pop(e, None)
    return out


def _lsub(a: dict, b: dict) -> dict:
    return _ladd(a, b, -1)


def _linear_factor(ring: RingPresentation, i: int, shift) -> dict:
    """The factor D_i + shift * z."""
    out = {0: ring.divisor(i).coeffs}
    if shift:
        out[1] = tuple(shift * x for x in ring.one().coeffs)
    return out


def _inverse_factor(ring: RingPresentation, i: int, j: int) -> dict:
    """(D_i + j z)^{-1} = sum_s (-1)^s D_i^s / (j z)^{s+1}, finite since D_i is nilpotent."""
    D = ring.divisor(i)
    out = {}
    power = ring.one()
    for s in range(ring.n + 1):
        if power.is_zero():
            break
        c = Fraction((-1) ** s, j ** (s + 1))
        out[-s - 1] = tuple(c * x for x in power.coeffs)
        power = power * D
    return out


def _one(ring: RingPresentation) -> dict:
    return {0: ring.one().coeffs}


# -- operators ----------------------------------------------------------------

@dataclass(frozen=True)
class GkzOperator:
    """Box_d as factor lists.

    ``positive`` holds ``(i, j)`` for each factor ``sum_a m_ia z theta_a - j z``
    of the first product; ``negative`` likewise for the product multiplied by
    ``q^d``.
    """

    d: tuple
    pairing: tuple
    positive: tuple
    negative: tuple

    @property
    def is_zero(self) -> bool:
        return not any(self.d)

    def describe(self, charges: Sequence[Sequence[int]]) -> str:
        def form(i, j):
            parts = []
            for a, mia in enumerate(charges[i]):
                if mia == 1:
                    parts.append(f"+ztheta{a + 1}")
                elif mia == -1:
                    parts.append(f"-ztheta{a + 1}")
                elif mia:
                    parts.append(f"{mia:+d}ztheta{a + 1}")
            s = "".join(parts).lstrip("+")
            if j:
                s += f"-{j}z" if j != 1 else "-z"
            return f"({s})"

        if self.is_zero:
            return "0"
        lhs = "".join(form(i, j) for i, j in self.positive) or "1"
        qd = "*".join(
            f"q{a + 1}" + (f"^{x}" if x != 1 else "") for a, x in enumerate(self.d) if x
        )
        rhs = "".join(form(i, j) for i, j in self.negative)
        return f"{lhs} - {qd}{rhs}" if rhs else f"{lhs} - {qd}"


def gkz_operator(d: Sequence[int], g) -> GkzOperator:
    """The GKZ operator for curve class ``d`` and charge matrix ``g``."""
    d = tuple(int(x) for x in d)
    c = g.pairing(d)
    pos, neg = [], []
    for i, ci in enumerate(c):
        if ci > 0:
            pos.extend((i, j) for j in range(ci))
        elif ci < 0:
            neg.extend((i, j) for j in range(-ci))
    if not any(d):
        pos, neg = [], []
    return GkzOperator(d, c, tuple(pos), tuple(neg))


# -- I-function ---------------------------------------------------------------

@dataclass
class IFunction:
    """Prefactor-stripped I-function truncated at ``omega . d <= bound``."""

    ring: RingPresentation
    bound: int
    omega: tuple
    terms: dict = field(default_factory=dict)  # d -> {z-exponent: coefficient vector}

    def term(self, d) -> dict:
        """{z-exponent: CohomClass} for the coefficient of q^d (empty if absent)."""
        raw = self.terms.get(tuple(d), {})
        return {e: CohomClass(self.ring, v) for e, v in sorted(raw.items())}

    def degree(self, d) -> Fraction:
        return la.dot(self.omega, d)


def i_term(ring: RingPresentation, d: Sequence[int]) -> dict:
    """Coefficient of q^{d} in the I-function as a Laurent dict."""
    c = ring.git.pairing(d)
    out = _one(ring)
    for i, ci in enumerate(c):
        if ci < 0:
            for j in range(ci + 1, 1):
                out = _lmul(ring, out, _linear_factor(ring, i, j))
        elif ci > 0:
            for j in range(1, ci + 1):
                out = _lmul(ring, out, _inverse_factor(ring, i, j))
        if not out:
            break
    return out


def i_function(ring: RingPresentation, bound: int, omega: Sequence | None = None) -> IFunction:
    omega = tuple(Fraction(x) for x in (omega if omega is not None else ring.git.omega))
    I = IFunction(ring, bound, omega)
    for d in mori_points(ring.fan, omega, bound, ring.git):
        I.terms[d] = i_term(ring, d)
    return I


def _apply_factors(ring, factors, e, series: dict) -> dict:
    out = series
    for i, j in factors:
        if not out:
            break
        shift = la.dot(ring.git.charges[i], e) - j
        out = _lmul(ring, out, _linear_factor(ring, i, shift))
    return out


def apply_gkz(op: GkzOperator, I: IFunction) -> IFunction:
    """Box_d applied to q^{p/z} I, returned prefactor-stripped.

    The result is exact for every ``e`` with ``omega . e <= I.bound``.
    """
    ring = I.ring
    out = IFunction(ring, I.bound, I.omega)
    if op.is_zero:
        return out
    wd = I.degree(op.d)
    if wd > I.bound:
        raise BoundExceeded(f"operator degree {wd} exceeds the truncation bound {I.bound}")
    res: dict = {}
    for e, series in I.terms.items():
        lhs = _apply_factors(ring, op.positive, e, series)
        if lhs:
            res[e] = _ladd(res.get(e, {}), lhs)
        target = tuple(x + y for x, y in zip(e, op.d))
        if I.degree(target) > I.bound:
            continue
        rhs = _apply_factors(ring, op.negative, e, series)
        if rhs:
            res[target] = _lsub(res.get(target, {}), rhs)
    out.terms = {e: v for e, v in res.items() if v}
    return out


def certificate_classes(ring: RingPresentation) -> list:
    """Mori generators and their pairwise sums (including doubles)."""
    gens = mori_generators(ring.fan, ring.git)
    out = list(gens)
    for a, b in combinations_with_replacement(gens, 2):
        s = tuple(x + y for x, y in zip(a, b))
        if s not in out:
            out.append(s)
    return out


def verify_gkz(ring: RingPresentation, bound: int, I: IFunction | None = None) -> dict:
    """Residual of every certificate operator, ``"zero"`` when exactly annihilated."""
    if I is None:
        I = i_function(ring, bound)
    out = {}
    for d in certificate_classes(ring):
        op = gkz_operator(d, ring.git)
        if I.degree(d) > bound:
            out[d] = "skipped"
            continue
        r = apply_gkz(op, I)
        out[d] = "zero" if not r.terms else f"nonzero at {sorted(r.terms)}"
    return out


def homogeneity_defects(I: IFunction) -> list:
    """Terms violating deg(class) + (z-exponent) == -c_1 . d."""
    ring = I.ring
    bad = []
    for d, series in I.terms.items():
        c1d = sum(ring.git.pairing(d))
        for e, vec in series.items():
            for x, s in zip(vec, ring.degrees):
                if x and s + e != -c1d:
                    bad.append((d, e, s))
    return bad


# -- mirror map ---------------------------------------------------------------

def _series_mul(a: dict, b: dict, omega, bound) -> dict:
    out: dict = {}
    for d1, x in a.items():
        for d2, y in b.items():
            d = tuple(u + v for u, v in zip(d1, d2))
            if la.dot(omega, d) > bound:
                continue
            out[d] = out.get(d, 0) + x * y
    return {d: c for d, c in out.items() if c}


def series_exp(g: dict, k: int, omega, bound) -> dict:
    """exp of a truncated power series without constant term."""
    zero = (0,) * k
    if g.get(zero):
        raise NonUnipotent("series has a constant term")
    out = {zero: Fraction(1)}
    term = {zero: Fraction(1)}
    s = 0
    while term:
        s += 1
        term = {d: c / s for d, c in _series_mul(term, g, omega, bound).items()}
        for d, c in term.items():
            out[d] = out.get(d, 0) + c
    return {d: c for d, c in out.items() if c}


@dataclass
class MirrorMap:
    """``psi_a(q) = q_a exp(g_a(q))``; ``log_terms[a]`` is g_a."""

    bound: int
    log_terms: list
    psi: list

    @property
    def trivial(self) -> bool:
        return not any(self.log_terms)


def mirror_map(I: IFunction) -> MirrorMap:
    """Read the mirror map off the z^{-1} coefficient of the I-function."""
    ring = I.ring
    k = ring.k
    if I.bound < 1:
        raise BoundExceeded("mirror map needs bound >= 1")
    g = [dict() for _ in range(k)]
    h2 = range(ring.offsets[1], ring.offsets[1] + ring.betti[1])
    for d, series in I.terms.items():
        vec = series.get(-1)
        if vec is None:
            continue
        if vec[0]:
            raise NonUnipotent(f"z^-1 coefficient of q^{d} has an H^0 component")
        if not any(d) and any(vec):
            raise NonUnipotent("z^-1 coefficient has a constant H^2 term")
        cls = CohomClass(ring, [x if s == 1 else 0 for x, s in zip(vec, ring.degrees)])
        # H^2 basis is {p_a} up to ordering; convert to p-coordinates
        for idx in h2:
            if cls.coeffs[idx]:
                mono = ring.basis[idx]
                a = mono.index(1)
                g[a][d] = g[a].get(d, 0) + cls.coeffs[idx]
    psi = []
    for a in range(k):
        ex = series_exp(g[a], k, I.omega, I.bound)
        unit = tuple(int(b == a) for b in range(k))
        psi.append({tuple(x + y for x, y in zip(d, unit)): c for d, c in sorted(ex.items())})
    return MirrorMap(I.bound, [dict(sorted(x.items())) for x in g], psi)


def rank_check(ring: RingPresentation) -> dict:
    vol = fan_polytope_volume(ring.fan)
    betti_sum = sum(ring.betti)
    return {"volume": vol, "betti_sum": betti_sum, "equal": vol == betti_sum}
