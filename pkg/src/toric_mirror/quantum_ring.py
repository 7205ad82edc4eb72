"""Quantum Stanley-Reisner ring, Batyrev relations and the small quantum product.

The quantum product is computed in Batyrev's presentation: a polynomial in
p_1..p_k is reduced against the fixed cohomology basis, and whatever lies in
the Stanley-Reisner ideal is rewritten through the primitive relations

    prod_{i in S} D_i = q^{d_S} prod_j D_j^{c_j},   sum_{i in S} b_i = sum_j c_j b_j,

which raises the q-degree, so the iteration stops at the truncation bound.
Basis monomials p^I stand for the quantum monomials p^{*I}.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import _linalg as la
from . import _poly as P
from .cohomology import CohomClass, RingPresentation
from .errors import NotInMori
from .toric_geom import (
    CurveClass, Fan, GitPresentation, git_from_fan, in_mori_cone, is_weak_fano,
    mori_generators, nef_rays,
)


def cone_coords(v: Sequence[int], f: Fan) -> tuple:
    """A maximal cone containing ``v`` and the coordinates of ``v`` in its rays."""
    v = [int(x) for x in v]
    for cone in f.max_cones:
        inv = la.inverse(f.cone_matrix(cone))
        c = la.matvec(inv, v)
        if all(x >= 0 for x in c):
            coords = [0] * f.m
            for i, x in zip(cone, c):
                coords[i] = int(x)
            return tuple(cone), tuple(coords)
    raise AssertionError(f"{v} lies in no cone of a complete fan")


def _relation_class(r: Sequence[int], g: GitPresentation) -> CurveClass:
    d = la.solve(g.charges, list(r))
    if d is None:
        raise ValueError(f"{tuple(r)} is not a linear relation among the rays")
    return tuple(int(x) for x in d)


def ell(v: Sequence[int], w: Sequence[int], f: Fan, g: GitPresentation | None = None) -> CurveClass:
    """The curve class with D . ell = v_i + w_i - (v + w)_i."""
    if g is None:
        g = git_from_fan(f)
    s = [x + y for x, y in zip(v, w)]
    a, b, c = cone_coords(v, f)[1], cone_coords(w, f)[1], cone_coords(s, f)[1]
    d = _relation_class([x + y - z for x, y, z in zip(a, b, c)], g)
    if la.dot(g.omega, d) < 0 or not in_mori_cone(d, nef_rays(f, g)):
        raise NotInMori(f"ell({tuple(v)}, {tuple(w)}) = {d} is not effective")
    return d


# -- quantum Stanley-Reisner ring ---------------------------------------------

@dataclass(frozen=True)
class QsrElement:
    """sum_v c_v(q) w_v with c_v a truncated series {curve class: coefficient}."""

    terms: dict
    bound: int
    omega: tuple

    @classmethod
    def w(cls, v: Sequence[int], bound: int, omega: Sequence, coeff=1, d=None) -> "QsrElement":
        d = tuple(d) if d is not None else (0,) * len(omega)
        return cls({tuple(v): {d: Fraction(coeff)}}, bound, tuple(Fraction(x) for x in omega))

    def __add__(self, other: "QsrElement") -> "QsrElement":
        out = {v: dict(c) for v, c in self.terms.items()}
        for v, c in other.terms.items():
            acc = out.setdefault(v, {})
            for d, x in c.items():
                acc[d] = acc.get(d, 0) + x
        return QsrElement(_clean(out), min(self.bound, other.bound), self.omega)

    def __eq__(self, other):
        return isinstance(other, QsrElement) and _clean(self.terms) == _clean(other.terms)

    def __hash__(self):
        return hash(tuple(sorted((v, tuple(sorted(c.items()))) for v, c in self.terms.items())))


def _clean(terms: dict) -> dict:
    out = {}
    for v, c in terms.items():
        c = {d: x for d, x in c.items() if x}
        if c:
            out[v] = c
    return out


def qsr_multiply(x: QsrElement, y: QsrElement, f: Fan, g: GitPresentation | None = None) -> QsrElement:
    """Bilinear extension of w_v w_v' = q^ell(v,v') w_{v+v'}, truncated."""
    if g is None:
        g = git_from_fan(f)
    bound = min(x.bound, y.bound)
    omega = x.omega
    out: dict = {}
    for v, cv in x.terms.items():
        for w, cw in y.terms.items():
            l = ell(v, w, f, g)
            s = tuple(a + b for a, b in zip(v, w))
            acc = out.setdefault(s, {})
            for d1, a in cv.items():
                for d2, b in cw.items():
                    d = tuple(p + q + r for p, q, r in zip(d1, d2, l))
                    if la.dot(omega, d) <= bound:
                        acc[d] = acc.get(d, 0) + a * b
    return QsrElement(_clean(out), bound, omega)


def classical_limit(x: QsrElement) -> QsrElement:
    zero = (0,) * len(x.omega)
    terms = {v: {zero: c[zero]} for v, c in x.terms.items() if c.get(zero)}
    return QsrElement(terms, x.bound, x.omega)


# -- Batyrev presentation -----------------------------------------------------

@dataclass(frozen=True)
class BatyrevRelations:
    """``multiplicative``: (lhs exponents, rhs exponents, d) meaning u^lhs = q^d u^rhs.

    ``linear``: coefficient vectors c with sum_i c_i u_i = 0.
    """

    multiplicative: tuple
    linear: tuple

    def describe(self) -> list:
        def mono(e):
            parts = [f"u{i + 1}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x]
            return "*".join(parts)

        out = []
        for lhs, rhs, d in self.multiplicative:
            qd = "*".join(f"q{a + 1}" + (f"^{x}" if x > 1 else "") for a, x in enumerate(d) if x)
            right = "*".join(s for s in (qd, mono(rhs)) if s) or "1"
            out.append(f"{mono(lhs) or '1'} = {right}")
        for c in self.linear:
            terms = [f"{x:+d}*u{i + 1}" for i, x in enumerate(c) if x]
            out.append(" ".join(terms).lstrip("+") + " = 0")
        return out


def batyrev_relations(f: Fan, g: GitPresentation | None = None) -> BatyrevRelations:
    if g is None:
        g = git_from_fan(f)
    mult = []
    for d in sorted(mori_generators(f, g), reverse=True):
        c = g.pairing(d)
        lhs = tuple(max(x, 0) for x in c)
        rhs = tuple(max(-x, 0) for x in c)
        mult.append((lhs, rhs, tuple(d)))
    linear = tuple(tuple(b[t] for b in f.rays) for t in range(f.n))
    return BatyrevRelations(tuple(mult), linear)


# -- small quantum product ----------------------------------------------------

@dataclass
class QuantumClassSeries:
    """``series[d]`` is the coefficient class of q^d."""

    ring: RingPresentation
    bound: int
    series: dict = field(default_factory=dict)
    b_model_coordinates: bool = False  # True when the mirror map is nontrivial

    def coefficient(self, d) -> CohomClass:
        return self.series.get(tuple(d), self.ring.zero())

    def __eq__(self, other):
        if not isinstance(other, QuantumClassSeries):
            return NotImplemented
        keys = set(self.series) | set(other.series)
        return all(self.coefficient(d) == other.coefficient(d) for d in keys)

    def __sub__(self, other: "QuantumClassSeries") -> "QuantumClassSeries":
        keys = set(self.series) | set(other.series)
        out = {d: self.coefficient(d) - other.coefficient(d) for d in keys}
        return QuantumClassSeries(
            self.ring, min(self.bound, other.bound),
            {d: c for d, c in out.items() if not c.is_zero()}, self.b_model_coordinates,
        )

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.series.values())

    def classical_part(self) -> CohomClass:
        return self.coefficient((0,) * self.ring.k)


class QuantumRing:
    """Quantum normal forms for one model up to ``omega . d <= bound``."""

    def __init__(self, ring: RingPresentation, bound: int, omega: Sequence | None = None):
        self.ring = ring
        self.bound = bound
        self.omega = tuple(Fraction(x) for x in (omega if omega is not None else ring.git.omega))
        self.fano = is_weak_fano(ring.fan).fano

    @cached_property
    def primitive_relations(self) -> list:
        """(S, d_S, B_S polynomial) for every primitive collection S."""
        ring, f, g = self.ring, self.ring.fan, self.ring.git
        out = []
        for S in ring.primitive_collections:
            total = [sum(f.rays[i][t] for i in S) for t in range(f.n)]
            _, c = cone_coords(total, f)
            r = [int(i in S) - c[i] for i in range(f.m)]
            d = _relation_class(r, g)
            rhs = P.monomial((0,) * ring.k)
            for j, e in enumerate(c):
                if e:
                    rhs = P.mul(rhs, P.power(ring.divisor_polys[j], e, ring.k))
            out.append((S, d, rhs))
        return out

    def _degree(self, d) -> Fraction:
        return la.dot(self.omega, d)

    def reduce(self, qpoly: dict) -> QuantumClassSeries:
        """Normal form of ``{d: polynomial in p}`` in the quantum ring."""
        ring = self.ring
        rels = {S: (dS, rhs) for S, dS, rhs in self.primitive_relations}
        sr_sets = [S for S, _ in ring.sr_generators]
        work: dict = {}
        heap: list = []

        def push(d, poly):
            if self._degree(d) > self.bound or not poly:
                return
            if d not in work:
                work[d] = {}
                heapq.heappush(heap, (self._degree(d), d))
            work[d] = P.add(work[d], poly)

        for d, poly in qpoly.items():
            push(tuple(d), poly)
        out: dict = {}
        while heap:
            _, d = heapq.heappop(heap)
            poly = work.pop(d)
            by_deg: dict = {}
            for mono, c in poly.items():
                by_deg.setdefault(sum(mono), {})[mono] = c
            for j, part in sorted(by_deg.items()):
                nf = ring.normal_form(part) if j <= ring.n else ring.zero()
                if not nf.is_zero():
                    out[d] = out.get(d, ring.zero()) + nf
                rest = P.add(part, ring.lift(nf), -1) if j <= ring.n else part
                if not rest:
                    continue
                data = ring.degree_data(j)
                x = data.cofactors(rest)
                if x is None:
                    raise ArithmeticError("remainder is not in the Stanley-Reisner ideal")
                for coeff, (cof, gi) in zip(x, data.gens):
                    if not coeff:
                        continue
                    dS, rhs = rels[sr_sets[gi]]
                    target = tuple(a + b for a, b in zip(d, dS))
                    push(target, P.mul({cof: coeff}, rhs))
        series = {d: c for d, c in sorted(out.items()) if not c.is_zero()}
        return QuantumClassSeries(ring, self.bound, series, not self.fano)

    def product(self, a: CohomClass, b) -> QuantumClassSeries:
        """a * b where b is a class or a QuantumClassSeries."""
        la_poly = self.ring.lift(a)
        if isinstance(b, QuantumClassSeries):
            qpoly = {d: P.mul(la_poly, self.ring.lift(c)) for d, c in b.series.items()}
        else:
            qpoly = {(0,) * self.ring.k: P.mul(la_poly, self.ring.lift(b))}
        return self.reduce(qpoly)

    def power(self, a: CohomClass, e: int) -> QuantumClassSeries:
        out = QuantumClassSeries(self.ring, self.bound, {(0,) * self.ring.k: self.ring.one()}, not self.fano)
        for _ in range(e):
            out = self.product(a, out)
        return out


def small_quantum_product(a: CohomClass, b: CohomClass, bound: int) -> QuantumClassSeries:
    """a * b expanded in q to ``omega . d <= bound``.

    For non-Fano models the flag ``b_model_coordinates`` is set: the series is
    in the q of the I-function, not in the A-model coordinates.
    """
    return QuantumRing(a.ring, bound).product(a, b)


@dataclass
class DubrovinReport:
    bound: int
    commutativity: dict  # (a, b) -> residual series (empty when zero)
    associativity: dict  # (a, b, c) -> residual series

    @property
    def ok(self) -> bool:
        return not any(self.commutativity.values()) and not any(self.associativity.values())


def dubrovin_consistency(f: Fan, bound: int, g: GitPresentation | None = None) -> DubrovinReport:
    """Commutativity and associativity of divisor products through ``bound``."""
    ring = RingPresentation(f, g)
    qr = QuantumRing(ring, bound)
    k = ring.k
    ps = [ring.p(a) for a in range(k)]
    prods = {(a, b): qr.product(ps[a], ps[b]) for a in range(k) for b in range(k)}
    comm = {}
    for a in range(k):
        for b in range(a + 1, k):
            r = prods[(a, b)] - prods[(b, a)]
            comm[(a, b)] = {d: c.coeffs for d, c in r.series.items()}
    assoc = {}
    for a in range(k):
        for b in range(k):
            for c in range(k):
                left = qr.product(ps[c], prods[(a, b)])
                right = qr.product(ps[a], prods[(b, c)])
                r = left - right
                assoc[(a, b, c)] = {d: x.coeffs for d, x in r.series.items()}
    return DubrovinReport(bound, comm, assoc)
