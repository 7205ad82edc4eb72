"""The I-function, its GKZ equations and the mirror map."""

from toric_mirror.cohomology import RingPresentation
from toric_mirror.gkz import gkz_operator, i_function, mirror_map, verify_gkz
from toric_mirror.models import load_fixture

p2 = load_fixture("p2")
R = RingPresentation(p2.fan, p2.git)
I = i_function(R, 3)

# coefficient of q^d, as {power of z: class}
for d in [(0,), (1,), (2,)]:
    print(d, {e: str(c) for e, c in I.term(d).items()})

print(gkz_operator((1,), R.git).describe(R.git.charges))
print(verify_gkz(R, 6))

# Fano: the z^-1 part vanishes and q is already the A-model coordinate
print("P^2 trivial:", mirror_map(i_function(R, 6)).trivial)

f2 = load_fixture("f2")
R2 = RingPresentation(f2.fan, f2.git)
mm = mirror_map(i_function(R2, 5))
print("F_2 trivial:", mm.trivial)
for a, g in enumerate(mm.log_terms):
    print(f"g_{a + 1}:", {d: str(c) for d, c in sorted(g.items())})
