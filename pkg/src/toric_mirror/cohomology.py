"""Cohomology ring of a smooth projective toric variety.

H*(X) is presented as Q[p_1..p_k] modulo the Stanley-Reisner monomials
prod_{i in S} D_i (S a primitive collection) after substituting
D_i = sum_a m_ia p_a.  Each graded piece is computed by exact linear algebra:
the ideal's degree-j part is spanned by monomial multiples of the generators,
and the basis of H^{2j} is the set of lexicographically smallest monomials
left over after row reduction.

Classes carry their coefficient field: ``"Q"`` (Fractions), ``"R"``
(floats) or ``"C"`` (complex).  The presentation itself is always rational.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import _linalg as la
from . import _poly as P
from .errors import FieldMismatch, NormalizationConflict, PresentationInconsistent
from .toric_geom import Fan, GitPresentation, git_from_fan

FIELDS = {"Q": Fraction, "R": float, "C": complex}


class _Degree:
    """Linear algebra of one graded piece of the polynomial ring."""

    def __init__(self, ring: "RingPresentation", j: int):
        k = ring.k
        self.j = j
        self.monos = P.monomials(k, j)
        # pivot preference: lex-largest monomials first
        order = sorted(self.monos, reverse=True)
        self.col = {mono: c for c, mono in enumerate(order)}
        self.gens = []  # (cofactor monomial, generator index)
        rows = []
        for g, (S, poly) in enumerate(ring.sr_generators):
            e = len(S)
            if e > j:
                continue
            for cof in P.monomials(k, j - e):
                prod = P.mul(P.monomial(cof), poly)
                row = [Fraction(0)] * len(order)
                for mono, c in prod.items():
                    row[self.col[mono]] += c
                self.gens.append((cof, g))
                rows.append(row)
        self.gen_rows = rows
        if rows:
            r, piv = la.rref(rows)
        else:
            r, piv = [], []
        self.basis = sorted(order[c] for c in range(len(order)) if c not in set(piv))
        pos = {mono: i for i, mono in enumerate(self.basis)}
        self.reduce = {}
        for mono in self.monos:
            vec = [Fraction(0)] * len(self.basis)
            if mono in pos:
                vec[pos[mono]] = Fraction(1)
            self.reduce[mono] = vec
        for row, c in zip(r, piv):
            vec = [Fraction(0)] * len(self.basis)
            for mono, i in pos.items():
                vec[i] = -row[self.col[mono]]
            self.reduce[order[c]] = vec

    def cofactors(self, poly: dict) -> list | None:
        """Coefficients ``x`` with ``poly == sum x_g * cof_g * A_g``, or None."""
        if not self.gen_rows:
            return None if poly else []
        target = [Fraction(0)] * len(self.col)
        for mono, c in poly.items():
            target[self.col[mono]] += c
        return la.solve(la.transpose(self.gen_rows), target)


class RingPresentation:
    """Graded basis, normal forms and Poincare duality for H*(X; Q)."""

    def __init__(self, fan: Fan, git: GitPresentation | None = None):
        self.fan = fan
        self.git = git if git is not None else git_from_fan(fan)
        self.n = fan.n
        self.k = self.git.k
        self.m = fan.m
        self.divisor_polys = [P.linear(row) for row in self.git.charges]
        self.primitive_collections = fan.primitive_collections()
        self.sr_generators = []
        for S in self.primitive_collections:
            poly = P.monomial((0,) * self.k)
            for i in S:
                poly = P.mul(poly, self.divisor_polys[i])
            self.sr_generators.append((S, poly))
        self._degrees: dict[int, _Degree] = {}
        self.basis = []
        self.degrees = []
        self.offsets = []
        for j in range(self.n + 1):
            d = self.degree_data(j)
            self.offsets.append(len(self.basis))
            self.basis.extend(d.basis)
            self.degrees.extend([j] * len(d.basis))
        self.betti = tuple(len(self.degree_data(j).basis) for j in range(self.n + 1))
        if self.degree_data(self.n + 1).basis:
            raise PresentationInconsistent("cohomology does not vanish above the top degree")
        if sum(self.betti) != len(fan.max_cones):
            raise PresentationInconsistent(
                f"sum of Betti numbers {sum(self.betti)} != {len(fan.max_cones)} maximal cones"
            )
        if self.betti[0] != 1 or self.betti[-1] != 1:
            raise PresentationInconsistent("H^0 or H^top is not one-dimensional")
        self.dim = len(self.basis)
        self._mono_cache: dict = {}
        self.top_value = self._normalize_top()

    # -- normal forms ----------------------------------------------------------

    def degree_data(self, j: int) -> _Degree:
        if j not in self._degrees:
            self._degrees[j] = _Degree(self, j)
        return self._degrees[j]

    def reduce_monomial(self, mono) -> tuple:
        """Global basis coordinates of a monomial."""
        mono = tuple(mono)
        if mono in self._mono_cache:
            return self._mono_cache[mono]
        vec = [Fraction(0)] * self.dim
        j = sum(mono)
        if j <= self.n:
            off = self.offsets[j]
            for i, c in enumerate(self.degree_data(j).reduce[mono]):
                vec[off + i] = c
        out = tuple(vec)
        self._mono_cache[mono] = out
        return out

    def normal_form(self, poly: dict) -> "CohomClass":
        vec = [Fraction(0)] * self.dim
        for mono, c in poly.items():
            for i, x in enumerate(self.reduce_monomial(mono)):
                if x:
                    vec[i] += c * x
        return CohomClass(self, vec)

    def lift(self, a: "CohomClass") -> dict:
        """Polynomial representative supported on basis monomials."""
        return {self.basis[i]: c for i, c in enumerate(a.coeffs) if c}

    def is_zero_poly(self, poly: dict) -> bool:
        return self.normal_form(poly).is_zero()

    # -- distinguished classes -------------------------------------------------

    def one(self, field: str = "Q") -> "CohomClass":
        return CohomClass(self, [1] + [0] * (self.dim - 1)).to_field(field)

    def zero(self, field: str = "Q") -> "CohomClass":
        return CohomClass(self, [0] * self.dim).to_field(field)

    def p(self, a: int) -> "CohomClass":
        mono = tuple(int(a == b) for b in range(self.k))
        return self.normal_form(P.monomial(mono))

    def divisor(self, i: int) -> "CohomClass":
        return self.normal_form(self.divisor_polys[i])

    def from_h2(self, coeffs: Sequence) -> "CohomClass":
        """The class sum_a coeffs[a] p_a, in the narrowest field holding the coefficients."""
        if any(isinstance(c, complex) for c in coeffs):
            field = "C"
        elif any(isinstance(c, float) for c in coeffs):
            field = "R"
        else:
            field = "Q"
        out = self.zero(field)
        for a, c in enumerate(coeffs):
            out = out + self.p(a).to_field(field) * c
        return out

    @cached_property
    def c1(self) -> "CohomClass":
        out = self.zero()
        for i in range(self.m):
            out = out + self.divisor(i)
        return out

    @cached_property
    def mult_table(self) -> list:
        table = []
        for i in range(self.dim):
            row = []
            for j in range(self.dim):
                mono = tuple(x + y for x, y in zip(self.basis[i], self.basis[j]))
                row.append(self.reduce_monomial(mono))
            table.append(row)
        return table

    # -- integration -------------------------------------------------------------

    def _normalize_top(self) -> Fraction:
        top = self.offsets[self.n]
        value = None
        for cone in self.fan.max_cones:
            poly = P.monomial((0,) * self.k)
            for i in cone:
                poly = P.mul(poly, self.divisor_polys[i])
            c = self.normal_form(poly).coeffs[top]
            if c == 0:
                raise NormalizationConflict(f"cone {cone} gives a zero top class")
            v = 1 / c
            if value is not None and v != value:
                raise NormalizationConflict("maximal cones force different volume forms")
            value = v
        return value

    def poincare_matrix(self) -> list:
        return [[integrate(multiply(CohomClass.basis_vector(self, i), CohomClass.basis_vector(self, j)))
                 for j in range(self.dim)] for i in range(self.dim)]

    def __repr__(self):
        return f"RingPresentation(n={self.n}, k={self.k}, betti={self.betti})"


class CohomClass:
    """Element of H*(X; F) in normal form."""

    __slots__ = ("ring", "coeffs", "field")

    def __init__(self, ring: RingPresentation, coeffs, field: str = "Q"):
        self.ring = ring
        self.field = field
        conv = FIELDS[field]
        self.coeffs = tuple(conv(c) for c in coeffs)
        if len(self.coeffs) != ring.dim:
            raise ValueError("coefficient vector has wrong length")

    @staticmethod
    def basis_vector(ring: RingPresentation, i: int) -> "CohomClass":
        return CohomClass(ring, [int(i == j) for j in range(ring.dim)])

    def to_field(self, field: str) -> "CohomClass":
        if field == self.field:
            return self
        if self.field == "C" and field != "C":
            raise FieldMismatch("cannot drop imaginary parts implicitly")
        if self.field == "R" and field == "Q":
            raise FieldMismatch("cannot convert real coefficients to rationals")
        return CohomClass(self.ring, self.coeffs, field)

    def _coerce(self, other: "CohomClass") -> "CohomClass":
        if other.ring is not self.ring:
            raise FieldMismatch("classes live in different presentations")
        if other.field != self.field:
            raise FieldMismatch(f"field {self.field} vs {other.field}")
        return other

    def __add__(self, other):
        other = self._coerce(other)
        return CohomClass(self.ring, [a + b for a, b in zip(self.coeffs, other.coeffs)], self.field)

    def __sub__(self, other):
        other = self._coerce(other)
        return CohomClass(self.ring, [a - b for a, b in zip(self.coeffs, other.coeffs)], self.field)

    def __neg__(self):
        return CohomClass(self.ring, [-a for a in self.coeffs], self.field)

    def __mul__(self, other):
        if isinstance(other, CohomClass):
            return multiply(self, other)
        field = self.field
        if isinstance(other, complex):
            field = "C"
        elif isinstance(other, float) and field == "Q":
            field = "R"
        return CohomClass(self.ring, [a * other for a in self.coeffs], field)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = self.ring.one(self.field)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, CohomClass):
            return NotImplemented
        return other.ring is self.ring and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def component(self, j: int) -> "CohomClass":
        """Degree-j (H^{2j}) part."""
        return CohomClass(
            self.ring,
            [c if d == j else 0 for c, d in zip(self.coeffs, self.ring.degrees)],
            self.field,
        )

    def degree_coeffs(self, j: int) -> tuple:
        off = self.ring.offsets[j]
        return self.coeffs[off: off + self.ring.betti[j]]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def scale_by_degree(self, factor) -> "CohomClass":
        """Multiply the H^{2j} component by ``factor(j)``."""
        vals = [c * factor(d) for c, d in zip(self.coeffs, self.ring.degrees)]
        field = self.field
        if any(isinstance(v, complex) for v in vals):
            field = "C"
        elif field == "Q" and any(isinstance(v, float) for v in vals):
            field = "R"
        return CohomClass(self.ring, vals, field)

    def series(self, coeffs: Sequence) -> "CohomClass":
        """sum_s coeffs[s] * self^s for a class with zero degree-0 part."""
        out = self.ring.zero(self.field)
        powr = self.ring.one(self.field)
        for s in range(min(len(coeffs), self.ring.n + 1)):
            out = out + powr * coeffs[s]
            powr = powr * self
        return out

    def exp(self) -> "CohomClass":
        """exp of a nilpotent class (degree-0 part must vanish)."""
        if self.coeffs[0]:
            raise ValueError("exp is only defined for nilpotent classes")
        out = self.ring.one(self.field)
        term = self.ring.one(self.field)
        for s in range(1, self.ring.n + 1):
            term = term * self
            out = out + term * (Fraction(1, _fact(s)) if self.field == "Q" else 1 / _fact(s))
        return out

    def to_poly(self) -> dict:
        return self.ring.lift(self)

    def __repr__(self):
        if self.field == "Q":
            return f"CohomClass({P.to_string(self.to_poly())})"
        return f"CohomClass[{self.field}]({self.coeffs})"


def _fact(s: int) -> int:
    out = 1
    for i in range(2, s + 1):
        out *= i
    return out


def build_presentation(f: Fan, git: GitPresentation | None = None) -> RingPresentation:
    return RingPresentation(f, git)


def multiply(a: CohomClass, b: CohomClass) -> CohomClass:
    """Cup product in normal form."""
    b = a._coerce(b)
    ring = a.ring
    out = [0] * ring.dim
    table = ring.mult_table
    for i, x in enumerate(a.coeffs):
        if not x:
            continue
        for j, y in enumerate(b.coeffs):
            if not y:
                continue
            xy = x * y
            for t, c in enumerate(table[i][j]):
                if c:
                    out[t] = out[t] + xy * c
    return CohomClass(ring, out, a.field)


def integrate(a: CohomClass):
    """Integral over X, normalized so that each maximal cone's D-product is 1."""
    ring = a.ring
    top = a.coeffs[ring.offsets[ring.n]]
    if a.field == "Q":
        return top * ring.top_value
    return top * float(ring.top_value)


def chern_total(ring: RingPresentation) -> CohomClass:
    """prod_i (1 + D_i)."""
    out = ring.one()
    for i in range(ring.m):
        out = out * (ring.one() + ring.divisor(i))
    return out


def grading_mu(a: CohomClass) -> CohomClass:
    """Scale the H^{2j} component by (j - n/2)."""
    half = Fraction(a.ring.n, 2)
    if a.field == "Q":
        return a.scale_by_degree(lambda j: j - half)
    return a.scale_by_degree(lambda j: float(j - half))
