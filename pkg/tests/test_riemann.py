import math

import numpy as np
import pytest

from conftest import random_subsonic_iso
from coupled_fv.models import IsothermalEuler
from coupled_fv.riemann import godunov_flux, solve_riemann, solve_riemann_ideal_gas


def wave_curve_velocity(c, rho_ref, u_ref, rho, family):
    """Independent oracle: velocity along the 1- or 2-wave curve."""
    if family == 1:
        if rho <= rho_ref:
            return u_ref - c * math.log(rho / rho_ref)
        return u_ref - c * (rho - rho_ref) / math.sqrt(rho * rho_ref)
    if rho <= rho_ref:
        return u_ref + c * math.log(rho / rho_ref)
    return u_ref + c * (rho - rho_ref) / math.sqrt(rho * rho_ref)


def bisection_star(c, UL, UR, tol=1e-14):
    """Brute-force bisection on the monotone wave-curve mismatch."""
    rho_l, q_l = UL
    rho_r, q_r = UR
    u_l, u_r = q_l / rho_l, q_r / rho_r

    def phi(rho):
        return wave_curve_velocity(c, rho_l, u_l, rho, 1) - wave_curve_velocity(
            c, rho_r, u_r, rho, 2
        )

    lo, hi = 1e-12, 1.0
    while phi(hi) > 0.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if phi(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tol * hi:
            break
    rho = 0.5 * (lo + hi)
    return rho, wave_curve_velocity(c, rho_l, u_l, rho, 1)


class TestIsothermalRiemann:
    def test_identity_data(self, iso):
        fan = solve_riemann(1.0, [1.0, 0.0], [1.0, 0.0])
        np.testing.assert_array_equal(fan.star, [1.0, 0.0])
        np.testing.assert_array_equal(fan.sample(0.0), [1.0, 0.0])

    def test_stationary_shock(self):
        # rho_l rho_r = (q/c)^2 with equal momenta: a standing 1-shock
        fan = solve_riemann(1.0, [1.0, 2.0], [4.0, 2.0])
        np.testing.assert_allclose(fan.star, [4.0, 2.0], atol=1e-12)
        assert fan.wave1.is_shock and fan.wave1.head == pytest.approx(0.0, abs=1e-13)
        np.testing.assert_allclose(fan.sample(-1e-9), [1.0, 2.0])
        np.testing.assert_allclose(fan.sample(1e-9), [4.0, 2.0], atol=1e-12)
        # Rankine-Hugoniot residual of the standing shock
        m = IsothermalEuler(1.0)
        rh = m.flux(np.array([4.0, 2.0])) - m.flux(np.array([1.0, 2.0]))
        np.testing.assert_allclose(rh, 0.0, atol=1e-12)

    def test_double_shock_against_bisection_oracle(self):
        c = 1.0
        UL, UR = np.array([1.0, 0.0]), np.array([20.0, 0.0])
        rho_b, u_b = bisection_star(c, UL, UR)
        fan = solve_riemann(c, UL, UR)
        # golden values frozen from the bisection oracle
        assert rho_b == pytest.approx(4.198533296502781, rel=1e-10)
        assert fan.star[0] == pytest.approx(rho_b, rel=1e-12)
        assert fan.star[1] / fan.star[0] == pytest.approx(u_b, abs=1e-12)

    def test_sampling_outside_fan(self, rng):
        for _ in range(20):
            UL, UR = random_subsonic_iso(rng, 2, rho_range=(0.5, 3.0))
            fan = solve_riemann(1.0, UL, UR)
            np.testing.assert_array_equal(fan.sample(-100.0), UL)
            np.testing.assert_array_equal(fan.sample(100.0), UR)

    def test_rarefaction_interior_matches_characteristics(self):
        # pure double rarefaction: states move apart
        c = 1.0
        UL = np.array([2.0, -0.5 * 2.0])
        UR = np.array([2.0, 0.5 * 2.0])
        fan = solve_riemann(c, UL, UR)
        assert not fan.wave1.is_shock and not fan.wave2.is_shock
        for xi in np.linspace(fan.wave1.head, fan.wave1.tail, 7):
            rho, q = fan.sample(xi)
            u = q / rho
            # characteristic relation u - c = xi and 1-invariant constant
            assert u - c == pytest.approx(xi, abs=1e-8)
            assert u + c * math.log(rho) == pytest.approx(
                -0.5 + c * math.log(2.0), abs=1e-8
            )

    def test_godunov_consistency_and_upwind_property(self, rng):
        c = 1.0
        m = IsothermalEuler(c)
        states = random_subsonic_iso(rng, 100, rho_range=(0.5, 3.0))
        for U in states[:20]:
            np.testing.assert_allclose(godunov_flux(c, U, U), m.flux(U), atol=1e-12)
        for i in range(100):
            UL = states[i]
            UR = states[(i + 1) % 100]
            fan = solve_riemann(c, UL, UR)
            speeds = [fan.wave1.head, fan.wave1.tail, fan.wave2.head, fan.wave2.tail]
            g = godunov_flux(c, UL, UR)
            if min(speeds) >= 0.0:
                np.testing.assert_allclose(g, m.flux(UL), atol=1e-10)
            if max(speeds) <= 0.0:
                np.testing.assert_allclose(g, m.flux(UR), atol=1e-10)

    def test_fan_speeds_ordered_and_shocks_satisfy_rankine_hugoniot(self, rng):
        m = IsothermalEuler(1.0)
        states = random_subsonic_iso(rng, 60, rho_range=(0.3, 5.0))
        for i in range(0, 60, 2):
            UL, UR = states[i], states[i + 1]
            fan = solve_riemann(1.0, UL, UR)
            assert fan.wave1.head <= fan.wave1.tail + 1e-14
            assert fan.wave1.tail <= fan.wave2.head + 1e-14
            assert fan.wave2.head <= fan.wave2.tail + 1e-14
            assert fan.star[0] > 0.0
            for wave, (a, b) in ((fan.wave1, (UL, fan.star)),
                                 (fan.wave2, (fan.star, UR))):
                if wave.is_shock:
                    rh = m.flux(b) - m.flux(a) - wave.head * (b - a)
                    assert np.max(np.abs(rh)) < 1e-10

    def test_entropy_flux_drop_across_standing_shock(self):
        m = IsothermalEuler(1.0)
        fan = solve_riemann(1.0, [1.0, 2.0], [4.0, 2.0])
        F_left = m.entropy_flux(fan.sample(-1e-9))
        F_right = m.entropy_flux(fan.sample(1e-9))
        assert F_right - F_left <= 0.0

    def test_published_one_sided_flux_conditions(self):
        """The two Godunov-flux identities of the spurious-equilibrium example."""
        c = 1.0
        m = IsothermalEuler(c)
        U0 = np.array([0.109272, 0.618826])
        Um = np.array([3.31851, 0.771179])
        Up = np.array([2.824455, 0.771179])
        U1 = np.array([3.024454, 0.618826])
        np.testing.assert_allclose(godunov_flux(c, U0, Um), m.flux(U0), atol=1e-5)
        np.testing.assert_allclose(godunov_flux(c, Up, U1), m.flux(U1), atol=1e-5)


class TestIdealGasRiemann:
    def test_sod_star_values(self):
        # classic shock-tube benchmark values
        fan = solve_riemann_ideal_gas(1.4, (1.0, 0.0, 1.0), (0.125, 0.0, 0.1))
        assert fan.p_star == pytest.approx(0.30313, abs=2e-5)
        assert fan.u_star == pytest.approx(0.92745, abs=2e-5)

    def test_consistency(self):
        fan = solve_riemann_ideal_gas(1.4, (1.0, 0.3, 2.0), (1.0, 0.3, 2.0))
        rho, u, p = fan.sample_primitives(0.3)
        assert (rho, u, p) == pytest.approx((1.0, 0.3, 2.0), rel=1e-10)

    def test_rankine_hugoniot_across_right_shock(self):
        gamma = 1.4
        fan = solve_riemann_ideal_gas(gamma, (1.0, 0.75, 1.0), (0.125, 0.0, 0.1))
        gp1 = gamma + 1.0
        gm1 = gamma - 1.0
        a_r = math.sqrt(gamma * 0.1 / 0.125)
        s_r = 0.0 + a_r * math.sqrt(gp1 / (2 * gamma) * fan.p_star / 0.1 + gm1 / (2 * gamma))
        left = fan.sample(s_r - 1e-9)
        right = fan.sample(s_r + 1e-9)

        def flux(U):
            rho, q, E = U
            p = gm1 * (E - 0.5 * q * q / rho)
            return np.array([q, q * q / rho + p, q / rho * (E + p)])

        np.testing.assert_allclose(
            flux(right) - flux(left), s_r * (right - left), atol=1e-7
        )
