import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from trapfresnel import bounds as B
from trapfresnel import fresnel_CS, fresnel_F, make_rule
from trapfresnel.errors import DomainError, InvalidInputError, InvalidParameterError, SingularityError
from trapfresnel.oracles import cs_power_series, erfc_imag_axis, quad_F

ULP_SLACK = 10 * 2.0 ** -52
SQRT2 = math.sqrt(2)


def brute_tail(x, N, extra=200):
    """|discarded node terms| summed directly in 40-digit arithmetic."""
    r = make_rule(N)
    with mp.workdps(40):
        h = mp.sqrt(mp.pi / (N + mp.mpf(1) / 2))
        x = mp.mpf(x)
        tot = mp.mpc(0)
        for m in range(N + 1, N + extra + 1):
            t = (m - mp.mpf(1) / 2) * h
            tot += mp.exp(-t * t) / (x * x + 1j * t * t)
        return float(x * h / mp.pi * abs(tot)), r


def _FN_exact(z, N):
    """F_N from its defining sum in the current mpmath precision."""
    A = mp.sqrt((N + mp.mpf(1) / 2) * mp.pi)
    h = mp.pi / A
    tot = mp.mpc(0)
    for k in range(N, 0, -1):
        t = (k - mp.mpf(1) / 2) * h
        tot += mp.exp(-t * t) / (z * z + 1j * t * t)
    ez = mp.exp(2 * A * z * mp.exp(-1j * mp.pi / 4))
    return 1 / (ez + 1) + z / A * mp.exp(1j * (z * z + mp.pi / 4)) * tot


def _F_exact_minus_FN(z, N):
    return mp.erfc(mp.exp(-1j * mp.pi / 4) * z) / 2 - _FN_exact(z, N)


def _cs12_exact(x):
    w = (1 + 1j) * (mp.mpf(1) / 2 - _FN_exact(mp.sqrt(mp.pi / 2) * x, 12))
    return mp.re(w), mp.im(w)


class TestDelta:
    def test_zero(self):
        d = B.delta_bound(0.0, 12)
        assert d.delta == 0.0 and d.region == B.INNER and d.tail == 0.0

    def test_region_boundaries_exact(self):
        for N in (1, 9, 12):
            A = B.cutoff(N)
            # x chosen so that x / sqrt(2) lands exactly on the threshold
            for frac, region in ((0.75, B.INNER), (1.25, B.OUTER)):
                target = frac * A
                x = target * SQRT2
                while x / SQRT2 > target:
                    x = np.nextafter(x, 0)
                while x / SQRT2 < target:
                    x = np.nextafter(x, np.inf)
                assert x / SQRT2 == target
                assert B.region_of(x, N) == region

    def test_transition_left_of_outer(self):
        A = B.cutoff(9)
        x = np.nextafter(1.25 * SQRT2 * A, 0)
        d = B.delta_bound(x, 9)
        assert d.region == B.TRANSITION
        assert np.isfinite(d.delta) and d.delta > 0

    def test_shape_n12(self):
        A = B.cutoff(12)
        peak = 1.25 * SQRT2 * A
        up = np.linspace(0, peak, 1000, endpoint=False)
        down = np.linspace(peak, 60, 1000)
        assert np.all(np.diff(B.delta_values(up, 12)) > 0)
        assert np.all(np.diff(B.delta_values(down, 12)) < 0)

    def test_negative_rejected(self):
        with pytest.raises(DomainError):
            B.delta_bound(-1.0, 12)

    def test_beta(self):
        assert B.BETA == pytest.approx(0.0536, abs=5e-5)


class TestTail:
    def test_zero(self):
        assert B.tail_bound(0.0, 12) == 0.0

    @given(st.floats(-1e6, 1e6), st.integers(1, 40))
    def test_uniform_cap(self, x, N):
        A = B.cutoff(N)
        cap = (2 * math.pi + 1) * math.exp(-A * A) / (2 * SQRT2 * math.pi * A * A)
        assert B.tail_bound(x, N) <= cap * (1 + 1e-14)

    @pytest.mark.parametrize("N,x", [(12, 5.0), (3, 0.5), (6, 20.0), (1, 2.0)])
    def test_dominates_brute_force(self, N, x):
        actual, _ = brute_tail(x, N)
        assert 0 < actual <= B.tail_bound(x, N)

    def test_even(self):
        assert B.tail_bound(-3.0, 5) == B.tail_bound(3.0, 5)


class TestEta:
    def test_zero(self):
        assert B.eta(0.0, 7).eta == 0.0

    def test_sum_of_parts(self):
        e = B.eta(4.0, 6)
        assert e.eta == e.delta + e.tail

    def test_even_extension(self):
        assert B.eta(-2.5, 6) == B.eta(2.5, 6)

    def test_measured_error_peak_n9(self):
        # the measured error has a broad maximum around sqrt(2) A_9 ~ 7.7
        x = np.linspace(0.1, 20, 4000)
        err = np.abs(fresnel_F(x, make_rule(9)) - quad_F(x))
        near = np.abs(x - SQRT2 * B.cutoff(9)) < 0.25
        assert err[near].max() >= 0.95 * err.max()
        assert 6 < x[np.argmax(err)] < 9

    def test_bound_peak_n9(self):
        # the bound itself keeps rising through the transition band and
        # peaks where it switches to the outer form
        x = np.linspace(0, 20, 20001)
        xm = x[np.argmax(B.eta_values(x, 9))]
        assert abs(xm - 1.25 * SQRT2 * B.cutoff(9)) < 2e-3

    def test_dominates_n6_x3(self):
        assert abs(fresnel_F(3.0, make_rule(6)) - quad_F(3.0)) <= B.eta(3.0, 6).eta


class TestConstants:
    def test_n1(self):
        k = B.constants(1)
        assert k.c == pytest.approx(0.825, abs=5e-4)
        assert k.c_star == pytest.approx(10.4, abs=0.05)
        assert k.c_tilde == pytest.approx(0.17, abs=5e-3)
        assert k.c_hat == pytest.approx(1.14, abs=5e-3)

    def test_large_n(self):
        k = B.constants(200)
        assert k.c == pytest.approx(0.208, rel=0.03)
        assert k.c_star == pytest.approx(2.3, rel=0.05)
        # the limit 0.0996 is approached like 1/sqrt(N): 0.1057 at N = 200
        assert k.c_tilde == pytest.approx(0.10, rel=0.06)

    def test_limits(self):
        # the approach is like 1/sqrt(N); N = 1e6 sits well inside 1%
        k = B.constants(10 ** 6)
        e = math.exp(-math.pi / 2)
        assert k.c == pytest.approx(20 * SQRT2 * e / (9 * math.pi), rel=1e-3)
        assert k.c_star == pytest.approx(100 * e / 9, rel=1e-2)
        assert k.c_tilde == pytest.approx(8 * e / (3 * math.pi ** 1.5), rel=1e-3)
        assert k.c_hat == pytest.approx(k.c, rel=1e-2)

    def test_monotone(self):
        prev = B.constants(1)
        for N in range(2, 51):
            k = B.constants(N)
            assert k.c < prev.c and k.c_star < prev.c_star
            assert k.c_tilde < prev.c_tilde and k.c_hat < prev.c_hat
            prev = k

    def test_c12_by_mpmath(self):
        # independent 40-digit evaluation of the closed form for c_N
        with mp.workdps(40):
            A = mp.sqrt((12 + mp.mpf(1) / 2) * mp.pi)
            beta = 1 - mp.sqrt(2) / 2 - (2 * mp.sqrt(2) + 1) / 16
            c = (20 * mp.sqrt(2) * mp.exp(-mp.pi / 2) * (1 + 2 * mp.sqrt(mp.pi) * mp.exp(-beta * A ** 2))
                 / (9 * mp.pi * (1 - mp.exp(-2 * A ** 2)))
                 + (2 * mp.pi + 1) * mp.exp(-mp.pi / 2) / (2 * mp.sqrt(2) * mp.pi ** 1.5 * A))
        assert B.constants(12).c == pytest.approx(float(c), rel=1e-14)
        assert B.constants(12).c == pytest.approx(0.31, abs=0.01)

    def test_bad_n(self):
        with pytest.raises(InvalidParameterError):
            B.constants(0)


class TestUniform:
    def test_cs_n11(self):
        assert B.uniform_bounds(11).cs_abs <= 1.4e-16

    def test_abs_n12(self):
        assert B.uniform_bounds(12).abs == pytest.approx(3.8e-18, rel=0.02)

    @pytest.mark.parametrize("N", range(1, 13))
    def test_abs_dominates_eta(self, N):
        x = np.linspace(0, 100, 20001)
        assert B.eta_values(x, N).max() <= B.uniform_bounds(N).abs

    def test_relations(self):
        u = B.uniform_bounds(5)
        assert u.rel_neg == 2 * u.abs
        assert u.cs_abs == pytest.approx(SQRT2 * u.abs, rel=1e-15)


class TestPointwiseRel:
    def test_zero(self):
        assert B.pointwise_rel_bound(0.0, 9) == 0.0

    def test_dominates_n9_x2(self):
        F = quad_F(2.0)
        rel = abs(fresnel_F(2.0, make_rule(9)) - F) / abs(F)
        assert rel <= B.pointwise_rel_bound(2.0, 9)

    def test_negative_branch(self):
        assert B.pointwise_rel_bound(-3.0, 4) == 2 * B.eta(3.0, 4).eta


class TestSmallX:
    def test_zero(self):
        b = B.small_x_bounds(0.0, 12)
        assert b.F == 0 and b.CS == 0 and b.S_strong == 0

    def test_F_dominates(self):
        x = 1e-3
        err = abs(fresnel_F(x) - quad_F(x))
        assert err <= B.small_x_bounds(x, 12).F + ULP_SLACK

    def test_F_dominates_coarse(self):
        # N = 2 keeps the bound well above rounding
        for x in (1e-3, 0.05, 0.5, 1.0):
            err = abs(fresnel_F(x, make_rule(2)) - quad_F(x))
            assert err <= B.small_x_bounds(x, 2).F

    def test_S_strong_exact_arithmetic(self):
        # the bound is far below double rounding at N = 12, so S_12(0.1) is
        # evaluated from its defining sum in 50 digits
        x = mp.mpf("0.1")
        with mp.workdps(50):
            gap = abs(_cs12_exact(x)[1] - mp.fresnels(x))
        assert float(gap) <= B.small_x_bounds(0.1, 12).S_strong

    def test_S_double_precision_rounding_floor(self):
        x = 0.1
        s_ser = cs_power_series(x, 30).s
        err = abs(fresnel_CS(x, make_rule(12)).s - s_ser)
        # cancellation in the closed form: rounding-limited, not bound-limited
        assert err / s_ser <= 2.7e-13

    def test_S_strong_meaningful(self):
        x = 0.5
        with mp.workdps(30):
            exact = float(mp.fresnels(x))
        err = abs(fresnel_CS(x, make_rule(4)).s - exact)
        assert err <= B.small_x_bounds(x, 4).S_strong

    def test_optional_fields(self):
        b = B.small_x_bounds(1.5, 3)
        assert b.S_strong is None
        assert b.CS is not None
        A = B.cutoff(1)
        b = B.small_x_bounds(0.99 * A / SQRT2, 1)
        assert b.CS is None

    def test_domain(self):
        with pytest.raises(InvalidInputError):
            B.small_x_bounds(B.cutoff(12), 12)


class TestHunterRegan:
    def test_singular(self):
        h = 0.5
        with pytest.raises(SingularityError):
            B.hr_bound(SQRT2 * math.pi / h, h)

    def test_blows_up(self):
        h = 0.5
        edge = SQRT2 * math.pi / h
        vals = [B.hr_bound(edge * (1 - d), h) for d in (1e-2, 1e-4, 1e-6)]
        assert vals[0] < vals[1] < vals[2]

    def test_finite(self):
        v = B.hr_bound(1.0, 0.5)
        assert 0 < v < 1e-18

    def test_vanishes_with_h(self):
        assert B.hr_bound(1.0, 0.2) < B.hr_bound(1.0, 0.5) < B.hr_bound(1.0, 1.0)

    def test_domain(self):
        with pytest.raises(DomainError):
            B.hr_bound(0.0, 0.5)
        with pytest.raises(InvalidParameterError):
            B.hr_bound(1.0, 0.0)


class TestLowerBound:
    def test_origin(self):
        assert B.F_lower_bound(0.0) == 0.5

    def test_x1(self):
        lb = B.F_lower_bound(1.0)
        assert lb == 1 / (2 + 2 * math.sqrt(math.pi))
        assert lb == pytest.approx(0.18035, abs=2e-5)
        assert abs(quad_F(1.0)) > lb

    def test_negative(self):
        assert B.F_lower_bound(-5.0) == 0.5
        assert abs(quad_F(-5.0)) >= 0.5


class TestErfcBounds:
    def test_origin(self):
        b = B.erfc_bounds(0)
        assert b.lower == b.lower_loose == b.upper == 1.0

    def test_i(self):
        b = B.erfc_bounds(1j)
        assert b.lower == pytest.approx(math.e / math.sqrt(1 + math.pi), rel=1e-15)
        assert b.lower == pytest.approx(1.335, abs=1e-3)
        v = abs(erfc_imag_axis(1.0))
        assert b.lower <= v <= b.upper

    @settings(max_examples=200)
    @given(st.floats(0, 5), st.floats(-5, 5))
    def test_chain(self, x, y):
        b = B.erfc_bounds(complex(x, y))
        assert b.lower_loose <= b.lower * (1 + 1e-15) <= b.upper * (1 + 2e-15)

    @pytest.mark.parametrize("z", [0.5, 1.0, 2 + 1j, 0.3 - 2j, 3 + 3j])
    def test_against_mpmath(self, z):
        with mp.workdps(30):
            v = float(abs(mp.erfc(mp.mpc(z))))
        b = B.erfc_bounds(z)
        assert b.lower <= v <= b.upper

    def test_domain(self):
        with pytest.raises(DomainError):
            B.erfc_bounds(-0.1 + 1j)


class TestStrip:
    def test_real_axis(self):
        assert B.strip_bound(3.0, 12) == B.uniform_bounds(12).abs

    def test_first_quadrant_value(self):
        assert B.strip_bound(1 + 1j, 8) == pytest.approx(
            B.constants(8).c * math.exp(-8 * math.pi) / math.sqrt(8.5), rel=1e-15)

    def test_fourth_quadrant_growth(self):
        v = B.strip_bound(1 - 0.5j, 12)
        base = B.constants(12).c_hat * math.exp(-12 * math.pi) / math.sqrt(12.5)
        assert v == pytest.approx(base * math.exp(0.5), rel=1e-15)

    def test_fourth_quadrant_dominates(self):
        z = 1.5 - 0.6j
        with mp.workdps(30):
            exact = complex(mp.erfc(mp.exp(-1j * mp.pi / 4) * mp.mpc(z)) / 2)
        from trapfresnel import fresnel_F_complex
        err = abs(fresnel_F_complex(z, make_rule(4)) - exact)
        assert err <= B.strip_bound(z, 4)

    def test_domain(self):
        A = B.cutoff(4)
        with pytest.raises(DomainError):
            B.strip_bound(1 - 1j * A, 4)


class TestMaclaurin:
    def test_n4(self):
        # closed form evaluated in 40 digits
        with mp.workdps(40):
            N = 4
            A = mp.sqrt((N + mp.mpf(1) / 2) * mp.pi)
            beta = 1 - mp.sqrt(2) / 2 - (2 * mp.sqrt(2) + 1) / 16
            e = mp.exp(-mp.pi / 2)
            c = (20 * mp.sqrt(2) * e * (1 + 2 * mp.sqrt(mp.pi) * mp.exp(-beta * A ** 2))
                 / (9 * mp.pi * (1 - mp.exp(-2 * A ** 2)))
                 + (2 * mp.pi + 1) * e / (2 * mp.sqrt(2) * mp.pi ** 1.5 * A))
            chat = c + mp.sqrt(2) * (2 * mp.pi + 1) * e / (mp.pi ** 1.5 * mp.sqrt(N + mp.mpf(1) / 2))
            expect = float(chat * mp.exp(-mp.pi * (N - mp.mpf(1) / 4)) / mp.sqrt(N + mp.mpf(1) / 2))
        assert chat < 0.77
        assert B.maclaurin_coeff_bound(0, 4) == pytest.approx(expect, rel=1e-13)

    def test_decreasing_in_n(self):
        vals = [B.maclaurin_coeff_bound(n, 8) for n in range(10)]
        assert all(a > b for a, b in zip(vals, vals[1:]))

    def test_cs_variant(self):
        assert B.maclaurin_coeff_bound(3, 6, cs=True) == pytest.approx(
            SQRT2 * B.maclaurin_coeff_bound(0, 6), rel=1e-15)

    def test_leading_coefficient_c12(self):
        # (C_12(x) - C(x))/x at x = 1e-4 isolates the leading coefficient of
        # the error; the x^4 term of C itself cancels exactly
        x = mp.mpf("1e-4")
        with mp.workdps(50):
            c12 = _cs12_exact(x)[0]
            gap = abs((c12 - mp.fresnelc(x)) / x)
        assert float(gap) <= B.maclaurin_coeff_bound(0, 12, cs=True)

    def test_leading_coefficient_f(self):
        # first Maclaurin coefficient of F - F_8 by a central difference
        with mp.workdps(50):
            h = mp.mpf("1e-12")
            d = (_F_exact_minus_FN(h, 8) - _F_exact_minus_FN(-h, 8)) / (2 * h)
        assert float(abs(d)) <= B.maclaurin_coeff_bound(1, 8)

    def test_domain(self):
        with pytest.raises(DomainError):
            B.maclaurin_coeff_bound(0, 3)
        with pytest.raises(InvalidParameterError):
            B.maclaurin_coeff_bound(-1, 5)
