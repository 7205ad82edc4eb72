"""Three ways to the same period: quadrature, Gamma-class series, Mellin-Barnes residues."""

import math

import numpy as np
from scipy.special import k0

from toric_mirror.cohomology import RingPresentation
from toric_mirror.gamma_class import (
    KClass, central_charge, euler_gamma, gamma_asymptotic_value,
)
from toric_mirror.gkz import i_function
from toric_mirror.mellin_barnes import residue_sum
from toric_mirror.models import load_fixture
from toric_mirror.oscillatory import build_potential, positive_cycle_integral

p1 = load_fixture("p1")
W = build_potential(p1.fan, p1.git)
print(W.describe())

# P^1: the positive real cycle gives 2 K_0(2 sqrt(q) / z)
for q in [0.01, 0.25, 1.0]:
    r = positive_cycle_integral(W, [q], 1.0)
    print(f"q={q:<5} quad={r.value:.15f} bessel={2 * k0(2 * math.sqrt(q)):.15f}")

# small q: leading behaviour is -log q - 2 gamma, the Gamma-class term
R1 = RingPresentation(p1.fan, p1.git)
for q in 10.0 ** -np.arange(2, 7):
    num = positive_cycle_integral(W, [q], 1.0).value
    lead = gamma_asymptotic_value(R1, [q], 1.0)
    print(f"q={q:.0e} err={abs(num - lead):.3e}")
print("-log q - 2 gamma at q=1e-4:", -math.log(1e-4) - 2 * euler_gamma())

# P^2: residue sum and I-function central charge against quadrature
p2 = load_fixture("p2")
W2 = build_potential(p2.fan, p2.git)
R2 = RingPresentation(p2.fan, p2.git)
quad = positive_cycle_integral(W2, [0.1], 1.0).value
mb = residue_sum(p2.git, 0.1, 1.0, 30)
cc = central_charge(KClass.structure_sheaf(1), i_function(R2, 25), [0.1], 1.0)
print(f"quad {quad:.15f}\nmb   {mb.value:.15f} (tail {mb.tail_estimate:.1e})\ncc   {cc.real:.15f}")
print("first residues:", np.round(mb.residues[:5], 8))
