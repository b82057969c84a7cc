import numpy as np
import pytest

from conftest import random_subsonic_iso
from coupled_fv.fluxes import (
    FluxScheme,
    force,
    middle_state,
    numerical_entropy_flux,
    rusanov,
    select_A,
    subcharacteristic_ok,
)

class TestSelectA:
    def test_uniform_states(self, iso):
        assert select_A(iso, [3.0, 1.0], [3.0, 1.0]) == pytest.approx(4.0 / 3.0)
        assert select_A(iso, [1.0, 0.0], [1.0, 0.0]) == pytest.approx(1.0)
        assert select_A(iso, [1.0, 3.0], [1.0, 3.0]) == pytest.approx(4.0)

    def test_middle_state_condition_holds(self, iso, rng):
        states = random_subsonic_iso(rng, 60, rho_range=(0.3, 5.0))
        for i in range(0, 60, 2):
            UL, UR = states[i], states[i + 1]
            A = select_A(iso, UL, UR)
            assert subcharacteristic_ok(iso, UL, UR, A)

    def test_batched_equals_scalar(self, iso, rng):
        UL = random_subsonic_iso(rng, 16)
        UR = random_subsonic_iso(rng, 16)
        A = select_A(iso, UL, UR)
        for j in range(16):
            assert A[j] == select_A(iso, UL[j], UR[j])


class TestRusanov:
    def test_consistency(self, iso, rng):
        for U in random_subsonic_iso(rng, 100):
            A = select_A(iso, U, U)
            np.testing.assert_array_equal(rusanov(iso, U, U, A), iso.flux(U))

    def test_density_jump_diffusion(self, iso):
        UL, UR = np.array([1.0, 0.0]), np.array([20.0, 0.0])
        A = select_A(iso, UL, UR)
        g = rusanov(iso, UL, UR, A)
        assert g[0] == pytest.approx(-(A / 2.0) * 19.0)

    def test_stationary_shock_value(self, iso):
        g = rusanov(iso, np.array([1.0, 2.0]), np.array([4.0, 2.0]), 5.0)
        assert g[0] == pytest.approx(2.0 - 1.5 * 5.0)

    def test_first_component_monotone_in_right_density(self, iso, rng):
        UL = np.array([2.0, 0.4])
        A = 3.0
        rhos = np.sort(rng.uniform(0.5, 4.0, 40))
        vals = [rusanov(iso, UL, np.array([r, 0.3]), A)[0] for r in rhos]
        assert all(a >= b for a, b in zip(vals, vals[1:]))


class TestMiddleState:
    def test_equal_states(self, iso):
        U = np.array([5.0, 2.5])
        np.testing.assert_array_equal(middle_state(iso, U, U, 2.0), U)

    def test_stationary_shock_pair(self, iso):
        Ustar = middle_state(iso, np.array([1.0, 2.0]), np.array([4.0, 2.0]), 5.0)
        np.testing.assert_allclose(Ustar, [2.5, 2.0])


class TestForce:
    def test_consistency(self, iso, rng):
        for U in random_subsonic_iso(rng, 30):
            A = select_A(iso, U, U)
            np.testing.assert_array_equal(force(iso, U, U, A), iso.flux(U))

    def test_average_structure(self, iso):
        UL, UR = np.array([1.0, 2.0]), np.array([4.0, 2.0])
        A = 5.0
        expected = 0.5 * (rusanov(iso, UL, UR, A) + iso.flux(np.array([2.5, 2.0])))
        np.testing.assert_allclose(force(iso, UL, UR, A), expected)

    def test_equals_rusanov_when_middle_flux_matches(self, iso):
        U = np.array([2.0, 0.5])
        A = select_A(iso, U, U)
        np.testing.assert_array_equal(force(iso, U, U, A), rusanov(iso, U, U, A))


class TestNumericalEntropyFlux:
    def test_consistency(self, iso):
        U = np.array([2.5, 1.0])
        assert numerical_entropy_flux(iso, U, U, 3.0) == pytest.approx(
            float(iso.entropy_flux(U))
        )

    def test_zero_velocity_pair(self, iso):
        e = np.e
        A = 2.0
        val = numerical_entropy_flux(iso, np.array([1.0, 0.0]), np.array([e, 0.0]), A)
        assert val == pytest.approx(-A * e / 2.0)

    def test_rusanov_entropy_inequality(self, iso, rng):
        """F(UR)-F(UL) <= A (E(UR)+E(UL)-2E(U*)), equality only for UL=UR."""
        states = random_subsonic_iso(rng, 100, rho_range=(0.4, 4.0))
        for i in range(100):
            UL = states[i]
            UR = states[(i + 37) % 100]
            A = select_A(iso, UL, UR)
            Ustar = middle_state(iso, UL, UR, A)
            lhs = float(iso.entropy_flux(UR) - iso.entropy_flux(UL))
            rhs = A * float(iso.entropy(UR) + iso.entropy(UL) - 2.0 * iso.entropy(Ustar))
            assert lhs <= rhs + 1e-12
            if abs(lhs - rhs) < 1e-10:
                assert np.max(np.abs(UR - UL)) < 1e-10


class TestFluxScheme:
    def test_godunov_requires_isothermal(self, gas):
        with pytest.raises(ValueError):
            FluxScheme("godunov", gas)

    def test_known_kinds_only(self, iso):
        with pytest.raises(ValueError):
            FluxScheme("roe", iso)

    def test_callable_matches_functions(self, iso):
        UL, UR = np.array([1.0, 0.2]), np.array([2.0, -0.1])
        A = select_A(iso, UL, UR)
        np.testing.assert_array_equal(
            FluxScheme("rusanov", iso)(UL, UR, A), rusanov(iso, UL, UR, A)
        )
        np.testing.assert_array_equal(
            FluxScheme("force", iso)(UL, UR, A), force(iso, UL, UR, A)
        )
