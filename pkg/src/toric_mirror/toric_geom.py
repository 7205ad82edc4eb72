"""Toric varieties from GIT charge data and from fans.

A smooth projective toric variety is described either by its charge matrix
(the divisor classes ``D_1..D_m`` in a basis ``p_1..p_k`` of H^2) together with
a stability vector ``omega``, or by its fan: primitive rays ``b_1..b_m`` in
``Z^n`` and maximal cones given as index sets.  The two descriptions are
related by the exact sequence ``0 -> Z^k -> Z^m -> Z^n -> 0`` whose first map
is ``d -> (D_i . d)_i`` and whose second map sends ``e_i`` to ``b_i``.

All decisions here use exact rational/integer arithmetic.  Ray and divisor
indices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import floor, ceil
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _linalg as la
from .errors import (
    EmptyDivisor,
    InvalidFan,
    NoAmpleClass,
    NotSmooth,
    RankDeficient,
    UnboundedEnumeration,
    UnstableCharges,
    GeometryError,
)

MAX_RAYS = 16

CurveClass = tuple  # integer k-vector in the basis dual to p_1..p_k


@dataclass(frozen=True)
class GitPresentation:
    """Charge matrix (row ``i`` is ``D_i``) and stability vector ``omega``."""

    charges: tuple
    omega: tuple

    def __post_init__(self):
        charges = tuple(tuple(int(x) for x in row) for row in self.charges)
        omega = tuple(Fraction(x) for x in self.omega)
        object.__setattr__(self, "charges", charges)
        object.__setattr__(self, "omega", omega)
        if not charges or not charges[0]:
            raise RankDeficient("empty charge matrix")
        k = len(charges[0])
        if any(len(row) != k for row in charges):
            raise GeometryError("charge matrix rows have unequal length")
        if len(omega) != k:
            raise GeometryError(f"omega has length {len(omega)}, expected {k}")
        if len(charges) > MAX_RAYS:
            raise GeometryError(f"at most {MAX_RAYS} divisors are supported")
        if la.rank(charges) < k:
            raise RankDeficient("charge matrix does not have full column rank")

    @property
    def m(self) -> int:
        return len(self.charges)

    @property
    def k(self) -> int:
        return len(self.charges[0])

    @property
    def n(self) -> int:
        return self.m - self.k

    def pairing(self, d: Sequence[int]) -> tuple:
        """The vector ``(D_i . d)_i`` in Z^m."""
        return tuple(la.dot(row, d) for row in self.charges)

    def curve_class(self, relation: Sequence[int]) -> CurveClass:
        """The unique ``d`` with ``(D_i . d)_i == relation``."""
        sol = la.solve(self.charges, list(relation))
        if sol is None or any(x.denominator != 1 for x in sol):
            raise GeometryError(f"{tuple(relation)} is not in the charge lattice")
        return tuple(int(x) for x in sol)


@dataclass(frozen=True)
class Fan:
    """Smooth complete simplicial fan.

    Construction validates unimodularity of every maximal cone, the
    two-cones-per-wall condition, connectivity, and that every ray is used.
    """

    rays: tuple
    max_cones: tuple

    def __post_init__(self):
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        cones = tuple(sorted(tuple(sorted(int(i) for i in c)) for c in self.max_cones))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", cones)
        self._validate()

    @property
    def m(self) -> int:
        return len(self.rays)

    @property
    def n(self) -> int:
        return len(self.rays[0])

    def _validate(self):
        if not self.rays:
            raise InvalidFan("fan has no rays")
        n, m = self.n, self.m
        if n < 1:
            raise InvalidFan("fan must have dimension at least 1")
        if any(len(r) != n for r in self.rays):
            raise InvalidFan("rays have unequal dimension")
        if m > MAX_RAYS:
            raise InvalidFan(f"at most {MAX_RAYS} rays are supported")
        for r in self.rays:
            if la.primitive(r) != list(r) or not any(r):
                raise InvalidFan(f"ray {r} is not primitive")
        if len(set(self.rays)) != m:
            raise InvalidFan("repeated rays")
        if not self.max_cones:
            raise InvalidFan("fan has no maximal cones")
        for c in self.max_cones:
            if len(c) != n or len(set(c)) != n:
                raise InvalidFan(f"cone {c} does not have {n} distinct rays")
            if any(i < 0 or i >= m for i in c):
                raise InvalidFan(f"cone {c} references a missing ray")
        if len(set(self.max_cones)) != len(self.max_cones):
            raise InvalidFan("repeated maximal cones")
        for c in self.max_cones:
            if abs(la.det(self.cone_matrix(c))) != 1:
                raise NotSmooth(f"cone {c} is not unimodular")
        used = set().union(*self.max_cones)
        if used != set(range(m)):
            raise EmptyDivisor(f"rays {sorted(set(range(m)) - used)} lie in no maximal cone")
        faces = self._faces()
        for tau, cs in faces.items():
            if len(cs) != 2:
                raise InvalidFan(f"face {tau} lies in {len(cs)} maximal cones, expected 2")
        # connectivity of the cone adjacency graph
        seen = {self.max_cones[0]}
        stack = [self.max_cones[0]]
        while stack:
            c = stack.pop()
            for tau in combinations(c, n - 1):
                for c2 in faces[tau]:
                    if c2 not in seen:
                        seen.add(c2)
                        stack.append(c2)
        if len(seen) != len(self.max_cones):
            raise InvalidFan("fan is not connected")

    def _faces(self) -> dict:
        faces: dict = {}
        for c in self.max_cones:
            for tau in combinations(c, self.n - 1):
                faces.setdefault(tau, []).append(c)
        return faces

    def cone_matrix(self, cone: Sequence[int]) -> list:
        """n x n matrix whose columns are the rays of ``cone``."""
        return la.transpose([self.rays[i] for i in cone])

    def ray_matrix(self) -> list:
        """n x m matrix of all rays."""
        return la.transpose(self.rays)

    def walls(self) -> list:
        """Walls as ``(tau, i, j)``: tau + {i} and tau + {j} are maximal cones."""
        out = []
        for tau, (c1, c2) in sorted(self._faces().items()):
            (i,) = set(c1) - set(tau)
            (j,) = set(c2) - set(tau)
            out.append((tau, i, j))
        return out

    def is_face(self, subset: Iterable[int]) -> bool:
        s = set(subset)
        return any(s <= set(c) for c in self.max_cones)

    def primitive_collections(self) -> list:
        """Minimal index sets not contained in any cone."""
        out = []
        for size in range(2, self.n + 2):
            for s in combinations(range(self.m), size):
                if self.is_face(s):
                    continue
                if all(self.is_face(t) for t in combinations(s, size - 1)):
                    out.append(s)
        return out


class StabilityReport(NamedTuple):
    a: bool
    b: bool
    c: bool

    @property
    def ok(self) -> bool:
        return self.a and self.b and self.c


# -- cone membership ----------------------------------------------------------

def _independent_subsets(vectors, max_size):
    for size in range(0, max_size + 1):
        for s in combinations(range(len(vectors)), size):
            if size == 0 or la.rank([vectors[i] for i in s]) == size:
                yield s


def _nonneg_coords(vectors, subset, target):
    """Coordinates of ``target`` on the independent ``subset``, or None."""
    if not subset:
        return [] if not any(target) else None
    a = la.transpose([vectors[i] for i in subset])
    x = la.solve(a, list(target))
    if x is None or any(v < 0 for v in x):
        return None
    return x


def in_cone(vectors: Sequence[Sequence], target: Sequence) -> bool:
    """Whether ``target`` is a nonnegative combination of ``vectors``."""
    dim = len(target)
    for s in _independent_subsets(vectors, dim):
        if _nonneg_coords(vectors, s, target) is not None:
            return True
    return False


def in_open_simplicial_cone(vectors: Sequence[Sequence], target: Sequence) -> bool:
    """``target`` in the positive span of linearly independent ``vectors``."""
    if la.rank(vectors) < len(vectors):
        return False
    x = la.solve(la.transpose(vectors), list(target))
    return x is not None and all(v > 0 for v in x)


def check_stability(g: GitPresentation) -> StabilityReport:
    """Decide the three chamber conditions on ``(charges, omega)``.

    (a) omega lies in the cone spanned by the D_i;
    (b) omega is not a nonnegative combination of a non-spanning set of D_i
        (equivalently every positive-span representation uses a spanning set);
    (c) the cone spanned by the D_i contains no line.  A zero divisor class
        counts as a violation.
    """
    D = [list(row) for row in g.charges]
    k = g.k
    w = list(g.omega)
    a = in_cone(D, w)
    b = True
    for s in _independent_subsets(D, k - 1):
        if _nonneg_coords(D, s, w) is not None:
            b = False
            break
    c = True
    for size in range(1, k + 2):
        for s in combinations(range(g.m), size):
            vecs = [D[i] for i in s]
            if la.rank(vecs) != size - 1:
                continue
            ker = la.nullspace(la.transpose(vecs), size)
            if len(ker) != 1:
                continue
            v = ker[0]
            if all(x > 0 for x in v) or all(x < 0 for x in v):
                c = False
                break
        if not c:
            break
    return StabilityReport(a, b, c)


# -- GIT -> fan ---------------------------------------------------------------

def _section_rays(charges) -> list:
    """Rays ``b_i`` from a Hermite reduction of the charge matrix."""
    m, k = len(charges), len(charges[0])
    h, u = la.row_hermite(charges)
    top = [row[:k] for row in h[:k]]
    if abs(la.det(top)) != 1:
        raise NotSmooth("charge lattice is not saturated (finite quotient group)")
    q = u[k:]  # n x m, kernel == image of charges
    return [tuple(q[r][i] for r in range(m - k)) for i in range(m)]


def _normalize_rays(rays, cones):
    """Change lattice basis so that the first cone's rays are e_1..e_n."""
    first = cones[0]
    basis = la.transpose([rays[i] for i in first])
    inv = la.inverse(basis)
    out = []
    for r in rays:
        v = la.matvec(inv, r)
        if any(x.denominator != 1 for x in v):
            raise NotSmooth(f"cone {first} is not unimodular")
        out.append(tuple(int(x) for x in v))
    return out


def chamber_cones(g: GitPresentation) -> list:
    """Index sets ``I`` of size n with omega in the positive span of D_j, j not in I."""
    D = g.charges
    cones = []
    for cone in combinations(range(g.m), g.n):
        comp = [D[j] for j in range(g.m) if j not in cone]
        if in_open_simplicial_cone(comp, g.omega):
            cones.append(cone)
    return cones


def fan_from_git(g: GitPresentation) -> Fan:
    """Build the fan of the GIT quotient determined by ``(charges, omega)``.

    The rays come from a Hermite-normal-form section of ``Z^m -> N``,
    followed by the change of lattice basis that makes the rays of the first
    maximal cone (lexicographic order) the standard basis.
    """
    rep = check_stability(g)
    if not rep.ok:
        failed = [f"({name})" for name, v in rep._asdict().items() if not v]
        raise UnstableCharges(
            f"stability condition(s) {', '.join(failed)} fail", rep._asdict()
        )
    if g.n < 1:
        raise GeometryError("quotient is a point (m == k)")
    cones = chamber_cones(g)
    if not cones:
        raise GeometryError("no maximal cones for this omega")
    rays = _section_rays(g.charges)
    for c in cones:
        if abs(la.det(la.transpose([rays[i] for i in c]))) != 1:
            raise NotSmooth(f"cone {c} is not unimodular")
    used = set().union(*map(set, cones))
    if used != set(range(g.m)):
        raise EmptyDivisor(f"divisors {sorted(set(range(g.m)) - used)} do not meet the stable locus")
    return Fan(_normalize_rays(rays, cones), cones)


# -- fan -> GIT ---------------------------------------------------------------

def wall_relations(f: Fan) -> list:
    """Integer relation in Z^m among the n+1 rays around each wall."""
    out = []
    for tau, i, j in f.walls():
        cone = tuple(tau) + (i,)
        coords = la.solve(f.cone_matrix(cone), list(f.rays[j]))
        if coords[-1] != -1 or any(x.denominator != 1 for x in coords):
            raise NotSmooth(f"wall {tau} is not smooth")
        r = [0] * f.m
        r[i] += 1
        r[j] += 1
        for idx, x in zip(tau, coords[:-1]):
            r[idx] -= int(x)
        out.append(tuple(r))
    return out


def _extreme_generators(vectors: list) -> list:
    """Primitive extreme rays of the cone generated by integer ``vectors``."""
    prims = sorted({tuple(la.primitive(v)) for v in vectors if any(v)})
    out = []
    for v in prims:
        others = [w for w in prims if w != v]
        if not in_cone(others, v):
            out.append(v)
    return out


def _dual_extreme_rays(gens: list, dim: int) -> list:
    """Primitive extreme rays of ``{x : g.x >= 0 for g in gens}``."""
    if dim == 1:
        signs = {1 if g[0] > 0 else -1 for g in gens if g[0]}
        return [(s,) for s in sorted(signs)] if len(signs) == 1 else []
    rays = set()
    for s in combinations(gens, dim - 1):
        if la.rank(s) != dim - 1:
            continue
        (v,) = la.nullspace(list(s), dim)
        for sign in (1, -1):
            w = [sign * x for x in v]
            if all(la.dot(g, w) >= 0 for g in gens):
                rays.add(tuple(la.primitive(w)))
    return sorted(rays)


def git_from_fan(f: Fan, omega_hint: Sequence | None = None) -> GitPresentation:
    """Charge matrix and an ample stability vector for a projective fan.

    The charge columns are the Mori cone generators when these form a basis of
    the relation lattice; otherwise a Hermite-reduced basis of the relation
    lattice is used.  Without ``omega_hint`` the stability vector is the sum of
    the extreme rays of the nef cone.
    """
    m, n = f.m, f.n
    k = m - n
    lattice = la.integer_kernel(f.ray_matrix(), m)  # k relation vectors
    gens = _extreme_generators(wall_relations(f))
    basis = lattice
    if len(gens) == k:
        # coordinates of gens in the lattice basis; unimodular => use gens
        coords = [la.solve(la.transpose(lattice), list(g)) for g in gens]
        if all(c is not None for c in coords) and abs(la.det(coords)) == 1:
            basis = sorted(gens, reverse=True)
    if basis is lattice:
        basis, _ = la.row_hermite(lattice)
    charges = la.transpose(basis)  # m x k
    classes = [
        tuple(int(x) for x in la.solve(charges, list(r))) for r in wall_relations(f)
    ]
    if omega_hint is None:
        nef = _dual_extreme_rays(classes, k)
        if not nef:
            raise NoAmpleClass("nef cone is empty")
        omega = [sum(r[a] for r in nef) for a in range(k)]
        omega = la.primitive(omega)
    else:
        omega = [Fraction(x) for x in omega_hint]
    if any(la.dot(omega, d) <= 0 for d in classes):
        raise NoAmpleClass("no stability vector is positive on every wall curve")
    g = GitPresentation(charges, omega)
    if set(chamber_cones(g)) != set(f.max_cones):
        raise NoAmpleClass("fan is not the normal fan of an ample class")
    return g


def fans_equivalent(f1: Fan, f2: Fan) -> bool:
    """Same cones and rays related by a unimodular change of basis."""
    if f1.max_cones != f2.max_cones or f1.m != f2.m or f1.n != f2.n:
        return False
    c = f1.max_cones[0]
    a1 = la.inverse(f1.cone_matrix(c))
    t = la.matmul(f2.cone_matrix(c), a1)
    return all(la.matvec(t, r1) == list(r2) for r1, r2 in zip(f1.rays, f2.rays))


# -- curves -------------------------------------------------------------------

def wall_curve_classes(f: Fan, g: GitPresentation | None = None) -> list:
    """Distinct curve classes of the walls, in the basis of ``g``."""
    if g is None:
        g = git_from_fan(f)
    return sorted({g.curve_class(r) for r in wall_relations(f)})


def mori_generators(f: Fan, g: GitPresentation | None = None) -> list:
    """Extreme rays of the Mori cone (primitive wall classes)."""
    if g is None:
        g = git_from_fan(f)
    return _extreme_generators(wall_curve_classes(f, g))


def nef_rays(f: Fan, g: GitPresentation | None = None) -> list:
    if g is None:
        g = git_from_fan(f)
    return _dual_extreme_rays(wall_curve_classes(f, g), g.k)


class FanoReport(NamedTuple):
    weak_fano: bool
    fano: bool


def is_weak_fano(f: Fan) -> FanoReport:
    """Nefness / ampleness of c_1 = sum D_i, tested on every wall curve."""
    sums = [sum(r) for r in wall_relations(f)]
    return FanoReport(all(s >= 0 for s in sums), all(s > 0 for s in sums))


def in_mori_cone(d: Sequence[int], nef: list) -> bool:
    return all(la.dot(r, d) >= 0 for r in nef)


def mori_points(
    f: Fan, omega: Sequence, bound: int, g: GitPresentation | None = None
) -> list:
    """Lattice points ``d`` of the Mori cone with ``omega . d <= bound``.

    Sorted by ``(omega . d, d)``.
    """
    if g is None:
        g = git_from_fan(f)
    omega = [Fraction(x) for x in omega]
    gens = mori_generators(f, g)
    if any(la.dot(omega, v) <= 0 for v in gens):
        raise UnboundedEnumeration("omega is not positive on the Mori cone")
    if bound < 0:
        return []
    nef = nef_rays(f, g)
    k = g.k
    vertices = [[0] * k] + [[Fraction(bound) * x / la.dot(omega, v) for x in v] for v in gens]
    lo = [floor(min(v[a] for v in vertices)) for a in range(k)]
    hi = [ceil(max(v[a] for v in vertices)) for a in range(k)]
    pts = []
    for d in product(*(range(l, h + 1) for l, h in zip(lo, hi))):
        if la.dot(omega, d) <= bound and in_mori_cone(d, nef):
            pts.append(tuple(d))
    pts.sort(key=lambda d: (la.dot(omega, d), d))
    return pts


def fan_polytope_volume(f: Fan) -> int:
    """Normalized volume n! vol(conv(b_1..b_m)); the origin must be interior."""
    n = f.n
    if n == 1:
        xs = [r[0] for r in f.rays]
        if not (min(xs) < 0 < max(xs)):
            raise GeometryError("origin is not interior to the fan polytope")
        return max(xs) - min(xs)
    from scipy.spatial import ConvexHull

    pts = np.array(f.rays, dtype=float)
    hull = ConvexHull(pts)
    if np.any(hull.equations[:, -1] >= 0):
        raise GeometryError("origin is not interior to the fan polytope")
    # pyramids from the origin over the triangulated boundary, exact dets
    return int(sum(abs(la.det([f.rays[i] for i in s])) for s in hull.simplices))


@dataclass(frozen=True)
class ToricModel:
    """A named toric variety carrying both descriptions."""

    name: str
    git: GitPresentation
    fan: Fan

    @classmethod
    def from_git(cls, name: str, charges, omega) -> "ToricModel":
        g = GitPresentation(charges, omega)
        return cls(name, g, fan_from_git(g))

    @classmethod
    def from_fan(cls, name: str, rays, max_cones, omega_hint=None) -> "ToricModel":
        f = Fan(rays, max_cones)
        return cls(name, git_from_fan(f, omega_hint), f)
