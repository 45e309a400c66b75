from __future__ import annotations

import json
import random

import pytest
from hypothesis import given, strategies as st
from mpmath import mpc

from intreg.errors import ParameterError
from intreg.precycle import (FACE_INF, FACE_ZERO, INF, GridSpec, ParametrizedPrecycle, PrecycleCombination,
                             RationalFunction1, boundary, cyclotomic_precycle, face_intersections,
                             gaussian_field_components, gaussian_field_cycle, is_infinite, is_normalized,
                             normalization_violations, precycle_from_json, properness_probe)


def rf(num, den=(1,)):
    return RationalFunction1(tuple(num), tuple(den))


def random_mobius(rng: random.Random):
    while True:
        a, b, c, d = (complex(rng.uniform(-2, 2), rng.uniform(-2, 2)) for _ in range(4))
        if abs(a * d - b * c) > 0.3:
            return a, b, c, d


gaussian_ints = st.builds(complex, st.integers(-3, 3), st.integers(-3, 3))
mobius_coeffs = st.tuples(gaussian_ints, gaussian_ints, gaussian_ints, gaussian_ints).filter(
    lambda m: m[0] * m[3] - m[1] * m[2] != 0)


def close(a, b, tol=1e-12):
    if is_infinite(a) or is_infinite(b):
        return is_infinite(a) and is_infinite(b)
    return abs(a - b) < tol


class TestRationalFunction:
    def test_cancellation(self):
        z = rf([-1, 0, 1], [-1, 1])  # (t^2 - 1)/(t - 1) = t + 1
        assert len(z.zeros) == 1 and not z.poles
        assert close(z.zeros[0][0], -1)

    @pytest.mark.parametrize("m", [2, 3, 6, 9])
    def test_multiple_root_from_coefficients(self, m):
        from math import comb
        num = [comb(m, k) * (-1) ** (m - k) for k in range(m + 1)]  # (t - 1)^m
        z = rf(num, [-2, 1])
        assert len(z.zeros) == 1 and z.zeros[0][1] == m
        assert close(z.zeros[0][0], 1, 1e-14)

    def test_multiple_cancellation(self):
        z = rf([-8, 12, -6, 1], [4, -4, 1])  # (t - 2)^3 / (t - 2)^2
        assert not z.poles and z.zeros[0][1] == 1

    def test_evaluation(self):
        z = rf([0, 1], [-2, 1])
        assert close(z(3), 3)
        assert is_infinite(z(2))
        assert close(z(INF), 1)

    def test_rejects_zero(self):
        with pytest.raises(ParameterError):
            rf([1], [0])
        with pytest.raises(ParameterError):
            rf([0, 0])

    def test_coefficient_formats(self):
        z = RationalFunction1(("1/2", [0, 1], {"zeta": [4, 1], "c": 2}), (1,))
        assert close(z.numerator[0], 0.5)
        assert close(z.numerator[1], 1j)
        assert close(z.numerator[2], 2j, 1e-25)


class TestFaceIntersections:
    def test_example_1(self):
        for l in (1, 2, 3, 7):
            fis = face_intersections(cyclotomic_precycle(l))
            assert all(f.degenerate for f in fis)
            locations = {(f.i, f.face) for f in fis}
            assert locations == {(1, FACE_ZERO), (1, FACE_INF), (2, FACE_ZERO), (2, FACE_INF),
                                 (3, FACE_ZERO), (3, FACE_INF)}
            params = [f.t0 for f in fis]
            zeta = mpc(cyclotomic_precycle(l).coords[0].zeros[0][0])
            for target in (0, 1, zeta, INF):
                assert any(close(p, target, 1e-12) for p in params)

    def test_identity_coordinate(self):
        z = ParametrizedPrecycle((rf([0, 1]),))
        fis = face_intersections(z)
        assert {(f.face, is_infinite(f.t0)) for f in fis} == {(FACE_ZERO, False), (FACE_INF, True)}
        assert close([f for f in fis if f.face == FACE_ZERO][0].t0, 0)

    def test_nondegenerate_pole(self):
        z = ParametrizedPrecycle((rf([0, 1], [-2, 1]), rf([1, -1])))
        pole = [f for f in face_intersections(z) if f.i == 1 and f.face == FACE_INF][0]
        assert close(pole.t0, 2) and not pole.degenerate
        assert close(pole.point[0], -1)

    def test_multiplicity(self):
        z = ParametrizedPrecycle((rf([0, 0, 1]), rf([1, -1])))
        zero = [f for f in face_intersections(z) if f.i == 1 and f.face == FACE_ZERO][0]
        assert zero.multiplicity == 2

    def test_witness(self):
        z = ParametrizedPrecycle((rf([0, 1]), rf([1, 0, 1]), rf([1, -1])))
        f0 = [f for f in face_intersections(z) if f.i == 1 and f.face == FACE_ZERO][0]
        # z_2(0) = 1 and z_3(0) = 1; either witness makes it degenerate
        assert f0.degenerate and f0.witness_j in (2, 3)


class TestBoundary:
    @pytest.mark.parametrize("l", range(1, 13))
    def test_example_1_vanishes(self, l):
        assert boundary(cyclotomic_precycle(l)).is_zero()

    def test_gaussian_components(self):
        zp, zm = gaussian_field_components()
        assert boundary(zp).is_zero()
        assert boundary(zm).is_zero()

    def test_nonzero(self):
        z = ParametrizedPrecycle((rf([0, 1], [-2, 1]), rf([1, -1])))
        b = boundary(z)
        assert not b.is_zero()
        assert any(close(p[0], -1) for _, p in b.terms)


class TestNormalized:
    def test_example_1(self):
        assert is_normalized(cyclotomic_precycle(5))

    def test_improper(self):
        z = ParametrizedPrecycle((rf([0, 1]), rf([1, -1]), rf([0, 1])))
        assert not is_normalized(z)
        faces = {(i, f) for i, f, _ in normalization_violations(z)}
        assert (1, FACE_INF) in faces

    def test_single_coordinate(self):
        assert is_normalized(ParametrizedPrecycle((rf([0, 1]),)))

    def test_gaussian_cycle(self):
        zp, _ = gaussian_field_components()
        # each component meets the z_1 faces at the points (+-i), only the difference is normalized
        assert not is_normalized(zp)
        assert is_normalized(gaussian_field_cycle())

    def test_strict_mode_differs(self):
        z = ParametrizedPrecycle((rf([2]), rf([0, 1])))
        assert is_normalized(z)
        assert not is_normalized(z, strict=True)


class TestReparametrization:
    @pytest.mark.parametrize("seed", range(6))
    def test_mobius_invariance(self, seed):
        rng = random.Random(seed)
        cases = [cyclotomic_precycle(3), ParametrizedPrecycle((rf([0, 1], [-2, 1]), rf([1, -1]))),
                 ParametrizedPrecycle((rf([0, 1]), rf([1, -1]), rf([0, 1])))]
        for z in cases:
            m = z.mobius(*random_mobius(rng))
            assert boundary(m).equivalent(boundary(z))
            assert is_normalized(m) == is_normalized(z)

    @given(st.integers(1, 8), mobius_coeffs)
    def test_example_1_any_parametrization(self, l, m):
        z = cyclotomic_precycle(l).mobius(*m)
        assert boundary(z).is_zero() and is_normalized(z)


class TestProbe:
    def test_gaussian_plus(self):
        zp, _ = gaussian_field_components()
        rep = properness_probe(zp)
        assert rep.found
        for target in (1j, -1j):
            assert any(abs(p.t - target) < 1e-4 for p in rep.points)

    def test_example_1_none(self):
        rep = properness_probe(cyclotomic_precycle(1))
        assert not rep.found
        assert "none found" in rep.summary()

    def test_constant_positive_phase(self):
        z = ParametrizedPrecycle((rf([2]), rf([1, -1]), rf([0, 1])))
        assert not properness_probe(z, GridSpec(nx=40, ny=40)).found

    def test_requires_three_coordinates(self):
        with pytest.raises(ParameterError):
            properness_probe(cyclotomic_precycle(1).__class__((rf([0, 1]), rf([1, -1]))))


class TestJson:
    def test_precycle(self):
        data = [{"num": [{"zeta": [5, 1], "c": -1}, 1], "den": [0, 1]}, {"num": [1, -1]},
                {"num": [1], "den": [0, 0, 0, 0, 0, 1]}]
        z = precycle_from_json(json.dumps(data))
        assert boundary(z).is_zero() and is_normalized(z)

    def test_combination(self):
        zp, zm = gaussian_field_components()
        data = {"terms": [{"c": 1, "coords": zm.to_json()}, {"c": -1, "coords": zp.to_json()}]}
        z = precycle_from_json(data)
        assert isinstance(z, PrecycleCombination)
        assert is_normalized(z)

    def test_malformed(self):
        with pytest.raises(ParameterError):
            precycle_from_json({"nope": 1})
