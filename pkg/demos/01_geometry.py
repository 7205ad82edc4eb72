"""From a charge matrix to a fan, a cohomology ring and Chern numbers."""

from toric_mirror.cohomology import RingPresentation, chern_total, integrate
from toric_mirror.gamma_class import todd_class
from toric_mirror.models import load_fixture
from toric_mirror.toric_geom import (
    GitPresentation, check_stability, fan_from_git, fan_polytope_volume, is_weak_fano,
    mori_generators,
)

# Hirzebruch surface F_1 as a GIT quotient of C^4 by a rank 2 torus
g = GitPresentation([[1, 0], [-1, 1], [1, 0], [0, 1]], [1, 1])
print(check_stability(g))

f = fan_from_git(g)
print("rays      ", f.rays)
print("max cones ", f.max_cones)
print("volume    ", fan_polytope_volume(f))
print(is_weak_fano(f))

# Mori cone generators, shown through their intersection numbers D_i . d
for d in mori_generators(f, g):
    print(d, g.pairing(d))

R = RingPresentation(f, g)
print("betti", R.betti)
p1, p2 = R.p(0), R.p(1)
for name, c in [("p1^2", p1 * p1), ("p1 p2", p1 * p2), ("p2^2", p2 * p2)]:
    print(name, integrate(c))

# Euler characteristic and holomorphic Euler characteristic of O
print("int c_2 =", integrate(chern_total(R)), " int Todd =", integrate(todd_class(R)))

# F_2 is only weak Fano: the (-2)-curve has c_1 . d = 0
f2 = load_fixture("f2")
print(f2.name, is_weak_fano(f2.fan))
