import math
from fractions import Fraction

import pytest
import sympy as sp

from toric_mirror.cohomology import CohomClass
from toric_mirror.errors import BoundExceeded, NonUnipotent
from toric_mirror.gkz import (
    IFunction, apply_gkz, certificate_classes, gkz_operator, homogeneity_defects, i_function,
    mirror_map, rank_check, verify_gkz,
)

from conftest import ring


class TestOperator:
    def test_projective_space(self):
        g = ring("p2").git
        assert gkz_operator((1,), g).describe(g.charges) == "(ztheta1)(ztheta1)(ztheta1) - q1"

    def test_f2(self):
        g = ring("f2").git
        op = gkz_operator((1, 0), g)
        assert op.describe(g.charges) == "(ztheta1)(ztheta1) - q1(-2ztheta1+ztheta2)(-2ztheta1+ztheta2-z)"

    def test_zero(self, fixture_name):
        g = ring(fixture_name).git
        op = gkz_operator((0,) * g.k, g)
        assert op.is_zero and op.describe(g.charges) == "0"
        assert not apply_gkz(op, i_function(ring(fixture_name), 2)).terms

    def test_factor_counts(self, fixture_name):
        R = ring(fixture_name)
        for d in certificate_classes(R):
            op = gkz_operator(d, R.git)
            c = R.git.pairing(d)
            assert len(op.positive) == sum(x for x in c if x > 0)
            assert len(op.negative) == sum(-x for x in c if x < 0)


def _pn_oracle(n: int, d: int) -> dict:
    """Coefficients of 1/prod_j (p + j z)^(n+1) as {(z-power, p-power): value}."""
    p, z = sp.symbols("p z")
    expr = 1 / sp.prod([(p + j * z) ** (n + 1) for j in range(1, d + 1)])
    ser = sp.series(expr, p, 0, n + 1).removeO()
    out = {}
    for s in range(n + 1):
        coeff = sp.expand(ser.coeff(p, s) * z ** ((n + 1) * d + s))
        # coeff is now a constant: the term is coeff * p^s * z^{-(n+1)d - s}
        out[(-(n + 1) * d - s, s)] = Fraction(str(sp.nsimplify(coeff)))
    return out


class TestIFunction:
    @pytest.mark.parametrize("name, n", [("p1", 1), ("p2", 2)])
    def test_projective_space_terms(self, name, n):
        R = ring(name)
        I = i_function(R, 4)
        for d in range(5):
            series = I.term((d,))
            got = {}
            for e, cls in series.items():
                for s, x in enumerate(cls.coeffs):
                    if x:
                        got[(e, s)] = x
            want = {key: v for key, v in _pn_oracle(n, d).items() if v}
            assert got == want

    def test_p2_first_term(self):
        R = ring("p2")
        p = R.p(0)
        t = i_function(R, 1).term((1,))
        assert t == {-5: 6 * p * p, -4: -3 * p, -3: R.one()}

    def test_constant_term(self, fixture_name):
        R = ring(fixture_name)
        assert i_function(R, 3).term((0,) * R.k) == {0: R.one()}

    def test_f2_hand_expansion(self):
        # I_(1,0) = D2 (D2 - z) / ((D1 + z)(D3 + z)), D1 = D3 = p1, D2 = p2 - 2 p1:
        # (D2^2 - z D2) z^-2 (1 - 2 p1/z + ...) = -D2 / z + (D2^2 + 2 p1 D2) / z^2
        R = ring("f2")
        p1, p2 = R.p(0), R.p(1)
        D2 = p2 - 2 * p1
        z2 = D2 * D2 + 2 * p1 * D2  # = D2 * p2 = D_2 D_4, zero since rays 2, 4 share no cone
        assert z2.is_zero()
        assert i_function(R, 1).term((1, 0)) == {-1: -D2}
        assert -D2 == 2 * p1 - p2

    def test_homogeneity(self, fixture_name):
        assert homogeneity_defects(i_function(ring(fixture_name), 5)) == []


class TestAnnihilation:
    def test_all_zero(self, fixture_name):
        res = verify_gkz(ring(fixture_name), 6)
        assert set(res.values()) == {"zero"}

    def test_p2_box1_explicit(self):
        R = ring("p2")
        I = i_function(R, 6)
        assert apply_gkz(gkz_operator((1,), R.git), I).terms == {}

    def test_perturbed_series_is_detected(self):
        R = ring("p2")
        I = i_function(R, 4)
        bad = IFunction(R, I.bound, I.omega, dict(I.terms))
        vec = list(bad.terms[(2,)][-6])
        vec[0] += 1
        bad.terms[(2,)] = {**bad.terms[(2,)], -6: tuple(vec)}
        assert apply_gkz(gkz_operator((1,), R.git), bad).terms

    def test_bound_exceeded(self):
        R = ring("p2")
        with pytest.raises(BoundExceeded):
            apply_gkz(gkz_operator((3,), R.git), i_function(R, 2))


class TestMirrorMap:
    @pytest.mark.parametrize("name", ["p1", "p2", "p1xp1", "f1"])
    def test_fano_trivial(self, name):
        R = ring(name)
        mm = mirror_map(i_function(R, 6))
        assert mm.trivial
        for a in range(R.k):
            unit = tuple(int(b == a) for b in range(R.k))
            assert mm.psi[a] == {unit: 1}

    def test_f2_first_order(self):
        mm = mirror_map(i_function(ring("f2"), 6))
        assert not mm.trivial
        g1, g2 = mm.log_terms
        assert g1[(1, 0)] == 2 and g2[(1, 0)] == -1
        assert (0, 0) not in g1 and (0, 0) not in g2
        # psi_a / q_a starts with 1
        assert mm.psi[0][(1, 0)] == 1 and mm.psi[1][(0, 1)] == 1

    def test_f2_closed_form(self):
        # only d = (k, 0) has a z^-1 part: the j = 0 factor D_2 of the numerator times
        # (-z)^(2k-1) (2k-1)! over z^(2k) (k!)^2 gives -D_2 (2k-1)!/(k!)^2
        mm = mirror_map(i_function(ring("f2"), 6))
        g1, g2 = mm.log_terms
        for k in range(1, 7):
            c = Fraction(math.factorial(2 * k - 1), math.factorial(k) ** 2)
            assert g1[(k, 0)] == 2 * c
            assert g2[(k, 0)] == -c
        assert len(g1) == len(g2) == 6

    def test_f2_only_fibre_direction(self):
        # the z^-1 part needs a negative D_i . d, which only D_2 . d = -2 d_1 + d_2 can give
        mm = mirror_map(i_function(ring("f2"), 6))
        for g in mm.log_terms:
            assert all(d[1] == 0 for d in g)

    def test_non_unipotent(self):
        R = ring("p2")
        I = i_function(R, 2)
        I.terms[(0,)] = {0: R.one().coeffs, -1: R.p(0).coeffs}
        with pytest.raises(NonUnipotent):
            mirror_map(I)


@pytest.mark.parametrize("name, vol", [("p1", 2), ("p2", 3), ("p1xp1", 4), ("f1", 4), ("f2", 4)])
def test_rank_check(name, vol):
    assert rank_check(ring(name)) == {"volume": vol, "betti_sum": vol, "equal": True}


def test_certificate_contains_generators_and_sums():
    R = ring("p1xp1")
    assert set(certificate_classes(R)) == {(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)}


def test_term_classes_are_rational():
    I = i_function(ring("f1"), 3)
    for series in I.terms.values():
        for vec in series.values():
            assert all(isinstance(x, Fraction) for x in vec)
    assert all(isinstance(c, CohomClass) for c in I.term((1, 0)).values())
