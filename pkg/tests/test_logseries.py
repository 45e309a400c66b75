from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from mpmath import mp

from intreg.errors import ParameterError
from intreg.logseries import LogSeries, PiCoefficient

fracs = st.fractions(min_value=-5, max_value=5, max_denominator=7)
pi_coeffs = st.dictionaries(st.integers(0, 3), fracs, max_size=3).map(PiCoefficient)
series = st.builds(
    lambda d, order: LogSeries(d, order),
    st.dictionaries(st.tuples(st.integers(0, 2), st.integers(0, 4)), pi_coeffs, max_size=4),
    st.integers(4, 8),
)


class TestPiCoefficient:
    def test_pi_squared_canonical(self):
        c = PiCoefficient.pi_squared(Fraction(1, 2))
        assert c.terms == {2: Fraction(-1, 2)}
        assert PiCoefficient.ipi(1) * PiCoefficient.ipi(1) == PiCoefficient.pi_squared(-1)

    def test_no_zero_monomials(self):
        c = PiCoefficient({0: 1, 1: 0, 2: 3}) - PiCoefficient({2: 3})
        assert c.terms == {0: 1}
        assert (c - 1).is_zero()

    def test_rejects_float(self):
        with pytest.raises(ParameterError):
            PiCoefficient({0: 0.5})

    def test_divide(self):
        assert PiCoefficient({1: 2, 3: 1}).divide_ipi(1) == PiCoefficient({0: 2, 2: 1})
        with pytest.raises(ParameterError):
            PiCoefficient({0: 1, 1: 1}).divide_ipi(1)

    def test_evaluate(self):
        with mp.workdps(40):
            v = (PiCoefficient.pi_squared(3) - 9).evaluate(40)
            assert abs(v - (3 * mp.pi ** 2 - 9)) < mp.mpf(10) ** -35
            assert abs(PiCoefficient.ipi(2).evaluate(40) - 2j * mp.pi) < mp.mpf(10) ** -35

    def test_json(self):
        c = PiCoefficient({0: Fraction(-9), 2: Fraction(-3), 1: Fraction(1, 2)})
        assert c.to_json() == {"1": "-9", "ipi": "1/2", "ipi^2": "-3"}
        assert PiCoefficient.from_json(c.to_json()) == c

    @given(pi_coeffs, pi_coeffs, pi_coeffs)
    def test_ring_axioms(self, a, b, c):
        assert (a + b) * c == a * c + b * c
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a - a == PiCoefficient()

    @given(pi_coeffs, pi_coeffs)
    def test_evaluation_is_a_homomorphism(self, a, b):
        with mp.workdps(40):
            lhs = (a * b).evaluate(40)
            rhs = a.evaluate(40) * b.evaluate(40)
            assert abs(lhs - rhs) <= mp.mpf(10) ** -30 * (1 + abs(rhs))


class TestLogSeries:
    def test_delta_examples(self):
        assert LogSeries.log(5).delta() == LogSeries.constant(1, 5)
        s = LogSeries({(2, 3): 1}, 5)
        assert s.delta() == LogSeries({(2, 3): 3, (1, 3): 2}, 5)

    def test_order_bookkeeping(self):
        a, b = LogSeries({(0, 1): 1}, 6), LogSeries({(0, 2): 1}, 4)
        assert (a * b).order == 4 and (a + b).order == 4
        assert a.shift(3).order == 9
        with pytest.raises(ParameterError):
            b.coeff(0, 5)
        with pytest.raises(ParameterError):
            b.truncate(6)
        with pytest.raises(ParameterError):
            b.vanishes_through(5)

    def test_truncation_drops_high_terms(self):
        a = LogSeries({(0, 3): 1}, 4)
        assert (a * a).vanishes_through()

    def test_invalid(self):
        with pytest.raises(ParameterError):
            LogSeries({(0, -1): 1}, 3)
        with pytest.raises(ParameterError):
            LogSeries({}, -1)
        with pytest.raises(ParameterError):
            LogSeries.log(3).shift(-1)

    @given(series, series)
    def test_leibniz(self, f, g):
        assert (f * g).delta() == f.delta() * g + f * g.delta()

    @given(series)
    def test_json_roundtrip(self, f):
        assert LogSeries.from_json(f.to_json()) == f

    @given(series, series)
    def test_sum_evaluates(self, f, g):
        with mp.workdps(40):
            t = mp.mpf("0.3")
            lhs = (f + g).evaluate(t, 40)
            rhs = f.evaluate(t, 40) + g.evaluate(t, 40)
            assert abs(lhs - rhs) <= mp.mpf(10) ** -30 * (1 + abs(rhs))

    def test_product_evaluates_without_truncation(self):
        f = LogSeries({(1, 0): 2, (0, 1): PiCoefficient.ipi(1)}, 10)
        g = LogSeries({(0, 0): 1, (2, 2): Fraction(1, 3)}, 10)
        with mp.workdps(40):
            t = mp.mpf("0.2")
            assert abs((f * g).evaluate(t, 40) - f.evaluate(t, 40) * g.evaluate(t, 40)) < mp.mpf(10) ** -30

    def test_odd_powers(self):
        assert LogSeries({(0, 0): PiCoefficient.ipi(1)}, 2).has_odd_ipi_powers()
        assert not LogSeries({(0, 0): PiCoefficient.pi_squared(1)}, 2).has_odd_ipi_powers()
