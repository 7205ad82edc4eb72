"""Small quantum products and the quantum Stanley-Reisner ring."""

import numpy as np

from toric_mirror.cohomology import CohomClass, RingPresentation
from toric_mirror.models import load_fixture
from toric_mirror.quantum_ring import (
    QsrElement, QuantumRing, batyrev_relations, dubrovin_consistency, qsr_multiply,
)

p2 = load_fixture("p2")
R = RingPresentation(p2.fan, p2.git)
qr = QuantumRing(R, 6)
for e in range(1, 7):
    s = qr.power(R.p(0), e)
    print(f"p^{e} =", {d: str(c) for d, c in s.series.items() if not c.is_zero()})

# w_v w_v' = q^ell(v, v') w_{v+v'}
om = p2.git.omega
w = [QsrElement.w(r, 4, om) for r in p2.fan.rays]
print(qsr_multiply(qsr_multiply(w[0], w[1], p2.fan), w[2], p2.fan).terms)

for name in ["p1xp1", "f1", "f2"]:
    mf = load_fixture(name)
    print(name, batyrev_relations(mf.fan, mf.git).describe())
    print("  Dubrovin ok:", dubrovin_consistency(mf.fan, 4, mf.git).ok)

# eigenvalues of c_1 * on F_1 at q = (0.4, 0.6)
f1 = load_fixture("f1")
R1 = RingPresentation(f1.fan, f1.git)
qr1 = QuantumRing(R1, 8)
q = [0.4, 0.6]
M = np.zeros((R1.dim, R1.dim))
for j in range(R1.dim):
    for d, c in qr1.product(R1.c1, CohomClass.basis_vector(R1, j)).series.items():
        M[:, j] += np.prod(np.power(q, d)) * np.array([float(x) for x in c.coeffs])
print(np.round(np.linalg.eigvals(M), 8))
