from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from mpmath import mp, mpc, mpf

from intreg.errors import DomainError, ParameterError
from intreg.numeric import ComplexValue
from intreg.special import (RootOfUnity, bernoulli_number, bernoulli_poly, dirichlet_L_chi4_at_2,
                            polylog, polylog_oracle, zeta_int)

rationals = st.fractions(min_value=-3, max_value=3, max_denominator=50)


def footnote_B2(x):
    return x * x - x + Fraction(1, 6)


def footnote_B4(x):
    return x ** 4 - 2 * x ** 3 + x ** 2 - Fraction(1, 30)


class TestBernoulli:
    def test_examples(self):
        assert bernoulli_poly(2, Fraction(0)) == Fraction(1, 6)
        assert bernoulli_poly(3, Fraction(1, 2)) == 0
        assert bernoulli_poly(4, Fraction(0)) == Fraction(-1, 30)
        assert bernoulli_poly(2, Fraction(1, 8)) == Fraction(11, 192)

    def test_numbers(self):
        assert abs(bernoulli_number(2)) == Fraction(1, 6)
        assert abs(bernoulli_number(4)) == Fraction(1, 30)
        assert abs(bernoulli_number(6)) == Fraction(1, 42)
        assert abs(bernoulli_number(8)) == Fraction(1, 30)
        # mpmath's table is an independent source for the signed values
        for n in range(2, 65, 2):
            b = bernoulli_number(n)
            with mp.workdps(60):
                assert abs(mpf(b.numerator) / b.denominator - mp.bernoulli(n)) < mpf(10) ** -40 * abs(mp.bernoulli(n))

    @pytest.mark.parametrize("n", [0, 3, 66, -2])
    def test_number_range(self, n):
        with pytest.raises(ParameterError):
            bernoulli_number(n)

    @pytest.mark.parametrize("r", [0, 65])
    def test_poly_range(self, r):
        with pytest.raises(ParameterError):
            bernoulli_poly(r, Fraction(1, 3))

    @given(rationals)
    def test_matches_footnote_formulas(self, x):
        assert bernoulli_poly(2, x) == footnote_B2(x)
        assert bernoulli_poly(4, x) == footnote_B4(x)

    @given(st.integers(1, 12), rationals)
    def test_reflection(self, r, x):
        assert bernoulli_poly(r, 1 - x) == (-1) ** r * bernoulli_poly(r, x)

    @given(st.integers(1, 6), st.integers(1, 10), rationals)
    def test_distribution(self, r, l, x):
        lhs = sum(bernoulli_poly(r, (x + a) / l) for a in range(l))
        assert lhs == Fraction(l) ** (1 - r) * bernoulli_poly(r, x)


class TestPolylog:
    def test_zeta2(self):
        v = polylog(2, 1)
        with mp.workdps(40):
            assert abs(v.value - mp.pi ** 2 / 6) < mpf(10) ** -29
        assert v.err < mpf(10) ** -29

    def test_zero(self):
        assert polylog(3, 0).value == 0

    def test_zeta5_pair(self):
        z5 = RootOfUnity(5, 1)
        s = polylog(2, z5) + polylog(2, z5.conjugate())
        with mp.workdps(40):
            assert abs(s.value - mp.pi ** 2 / 75) < mpf(10) ** -28

    def test_domain(self):
        with pytest.raises(DomainError):
            polylog(1, 1)
        with pytest.raises(DomainError):
            polylog(2, mpc(1.5, 0))

    @pytest.mark.parametrize("r", [1, 2, 3, 4, 5])
    @pytest.mark.parametrize("z", [mpc("0.3", "0.2"), mpc("-0.7", "0.1"), mpc("0.9", "-0.3"),
                                   mpc("0.999", "0"), mpc("-1", "0")])
    def test_against_mpmath(self, r, z):
        with mp.workdps(50):
            ref = mp.polylog(r, z)
        v = polylog(r, z)
        assert abs(v.value - ref) < mpf(10) ** -28 * max(1, abs(ref))

    @given(st.integers(2, 5), st.integers(1, 40), st.integers(0, 39))
    def test_unit_circle_against_mpmath(self, r, l, a):
        zeta = RootOfUnity(l, a)
        with mp.workdps(50):
            ref = mp.polylog(r, zeta.value(50))
        assert abs(polylog(r, zeta).value - ref) < mpf(10) ** -28

    @given(st.integers(1, 4), st.floats(-0.95, 0.95), st.floats(-0.95, 0.95))
    def test_conjugation(self, r, x, y):
        z = mpc(x, y)
        if abs(z) > 0.99:
            z = z * 0.5
        a = polylog(r, z)
        b = polylog(r, mp.conj(z))
        with mp.workdps(50):  # conj rounds to the ambient precision
            assert abs(a.value - mp.conj(b.value)) <= a.err + b.err

    @pytest.mark.parametrize("r", [1, 2, 3, 4])
    @pytest.mark.parametrize("l", [2, 3, 4, 5, 6])
    def test_distribution_relation(self, r, l):
        z = mpc("0.4", "0.5")
        lhs = polylog(r, z ** l)
        rhs = sum((polylog(r, RootOfUnity(l, a).value(45) * z) for a in range(l)),
                  ComplexValue.exact(0)) * (l ** (r - 1))
        assert abs(lhs.value - rhs.value) < 1e-10

    def test_error_bound_is_tracked(self):
        v = polylog(3, RootOfUnity(7, 2), prec=20)
        assert 0 < v.err < mpf(10) ** -19


class TestOracle:
    def test_log2(self):
        v = polylog_oracle(1, Fraction(1, 2), prec=20)
        with mp.workdps(30):
            assert abs(v.value - mp.log(2)) < mpf(10) ** -18

    @pytest.mark.parametrize("r,l", [(2, 3), (4, 5)])
    def test_examples(self, r, l):
        z = RootOfUnity(l, 1)
        assert abs(polylog_oracle(r, z, prec=15).value - polylog(r, z).value) < 1e-8

    def test_cut(self):
        with pytest.raises(DomainError):
            polylog_oracle(2, 2)


class TestCatalan:
    def test_value(self):
        g = dirichlet_L_chi4_at_2(15)
        assert abs(g.value - mpf("0.915965594177219015054603514932")) < 1e-15

    def test_against_li2_i(self):
        g = dirichlet_L_chi4_at_2(30)
        li = polylog(2, RootOfUnity(4, 1))
        assert abs(li.im - g.re) <= g.err + li.err + mpf(10) ** -29

    def test_64g(self):
        assert abs(64 * dirichlet_L_chi4_at_2(15).re - mpf("58.62179802")) < 1e-8


def test_zeta_values():
    v, err = zeta_int(3, 40)
    with mp.workdps(40):
        assert abs(v - mp.zeta(3)) < mpf(10) ** -35
        assert err < mpf(10) ** -35
