import numpy as np
import pytest

from coupled_fv.coupling import ParticleCoupling
from coupled_fv.exceptions import ConfigError
from coupled_fv.fluxes import FluxScheme
from coupled_fv.scenarios import builtin_scenario, initial_grid, run_scenario
from coupled_fv.simulator import GridState, cfl_dt, entropy_inequality_report, run, step
from coupled_fv.verification import member_pair


def make_grid(U_left, U_right, cells=16, dx=0.01):
    nl = cells // 2
    U = np.empty((cells, len(U_left)))
    U[:nl] = U_left
    U[nl:] = U_right
    return GridState(U, dx, -nl * dx, nl)


class TestGrid:
    def test_centers_and_interface_alignment(self):
        g = make_grid([1.0, 0.0], [2.0, 0.0], cells=10, dx=0.1)
        xs = g.centers()
        assert xs[0] == pytest.approx(-0.45)
        assert xs[-1] == pytest.approx(0.45)
        # boundary between cells 4 and 5 is x = 0
        assert (xs[4] + xs[5]) / 2.0 == pytest.approx(0.0, abs=1e-15)

    def test_misaligned_interface_rejected(self):
        with pytest.raises(ConfigError):
            GridState(np.ones((8, 2)), 0.1, -0.35, 4)


class TestCflDt:
    def test_rest_state(self, iso):
        g = make_grid([1.0, 0.0], [1.0, 0.0], dx=0.01)
        assert cfl_dt(g, iso, iso, 0.95, 1.0) == pytest.approx(0.0095)

    def test_fast_state(self, iso):
        g = make_grid([1.0, 3.0], [1.0, 3.0], dx=0.01)
        assert cfl_dt(g, iso, iso, 0.95, 4.0) == pytest.approx(0.002375)

    def test_invalid_courant_rejected(self, iso):
        g = make_grid([1.0, 0.0], [1.0, 0.0])
        with pytest.raises(ConfigError):
            cfl_dt(g, iso, iso, 0.0, 1.0)
        with pytest.raises(ConfigError):
            cfl_dt(g, iso, iso, 1.5, 1.0)


class TestWellBalanced:
    @pytest.mark.parametrize("kind", ["classical", "particle", "heat_exchange",
                                      "flux_coupling", "state_coupling", "nozzle"])
    @pytest.mark.parametrize("flux", ["rusanov", "force"])
    def test_members_are_step_fixed_points(self, kind, flux):
        model_L, model_R, coup, U0, U1 = member_pair(kind)
        sL, sR = FluxScheme(flux, model_L), FluxScheme(flux, model_R)
        grid = make_grid(U0, U1)
        dt = cfl_dt(grid, model_L, model_R, 0.9,
                    max(float(model_L.max_wave_speed(U0)), float(model_R.max_wave_speed(U1))))
        res = step(grid, model_L, model_R, sL, sR, coup, dt)
        np.testing.assert_array_equal(res.grid.U, grid.U)

    def test_standing_shock_never_moves(self, iso):
        model, _, coup, U0, U1 = member_pair("classical")
        scheme = FluxScheme("rusanov", model)
        grid = make_grid(U0, U1)
        traj = run(grid, model, model, scheme, scheme, coup, t_final=0.1)
        np.testing.assert_array_equal(traj.grid.U, grid.U)


class TestConservationLedger:
    def test_mass_conserved_through_obstacle(self, iso):
        coup = ParticleCoupling(lam=1.0, c=1.0)
        scheme = FluxScheme("rusanov", iso)
        grid = make_grid([3.0, 1.0], [3.0, 1.0], cells=64, dx=0.01)
        traj = run(grid, iso, iso, scheme, scheme, coup, t_final=0.05)
        assert traj.ledger.max_rel_residual[0] < 1e-12

    def test_momentum_drops_with_positive_flow(self, iso):
        coup = ParticleCoupling(lam=1.0, c=1.0)
        scheme = FluxScheme("rusanov", iso)
        grid = make_grid([3.0, 1.0], [3.0, 1.0], cells=64, dx=0.01)
        traj = run(grid, iso, iso, scheme, scheme, coup, t_final=0.05)
        assert all(t.Uminus[1] > 0 for t in traj.trace_history)
        assert traj.ledger.residual()[1] < 0.0

    def test_zero_duration_run_returns_initial_grid(self, iso):
        coup = ParticleCoupling(lam=1.0, c=1.0)
        scheme = FluxScheme("rusanov", iso)
        grid = make_grid([3.0, 1.0], [3.0, 1.0])
        traj = run(grid, iso, iso, scheme, scheme, coup, t_final=0.0)
        assert traj.steps == 0
        np.testing.assert_array_equal(traj.grid.U, grid.U)


class TestEntropyReport:
    def test_uniform_state_zero_residuals(self, iso):
        coup = ParticleCoupling(lam=0.0, c=1.0)
        scheme = FluxScheme("rusanov", iso)
        grid = make_grid([2.0, 0.6], [2.0, 0.6])
        dt = 0.004
        res = step(grid, iso, iso, scheme, scheme, coup, dt)
        rep = entropy_inequality_report(grid, res.grid, iso, iso, res.traces, dt,
                                        res.A_left, res.A_right)
        np.testing.assert_allclose(rep.residuals, 0.0, atol=1e-14)
        assert rep.interface_flag

    def test_standing_shock_residuals_exactly_zero(self, iso):
        model, _, coup, U0, U1 = member_pair("classical")
        scheme = FluxScheme("rusanov", model)
        grid = make_grid(U0, U1)
        dt = 0.002
        res = step(grid, model, model, scheme, scheme, coup, dt)
        rep = entropy_inequality_report(grid, res.grid, model, model, res.traces, dt,
                                        res.A_left, res.A_right)
        np.testing.assert_array_equal(rep.residuals, 0.0)
        assert rep.interface_flag

    def test_riemann_step_dissipates(self, iso):
        coup = ParticleCoupling(lam=1.0, c=1.0)
        scheme = FluxScheme("rusanov", iso)
        grid = make_grid([1.0, 0.3], [2.5, -0.4], cells=32)
        dt = cfl_dt(grid, iso, iso, 0.9, 2.0)
        res = step(grid, iso, iso, scheme, scheme, coup, dt)
        rep = entropy_inequality_report(grid, res.grid, iso, iso, res.traces, dt,
                                        res.A_left, res.A_right)
        assert rep.max_residual <= 1e-12
        assert rep.interface_flag
        # recomputing the interior speeds reproduces the same report
        rep2 = entropy_inequality_report(grid, res.grid, iso, iso, res.traces, dt)
        np.testing.assert_array_equal(rep2.residuals, rep.residuals)


class TestMirrorTrajectory:
    def test_obstacle_run_mirrors_bitwise(self):
        cfg = builtin_scenario("test1")
        from dataclasses import replace

        cfg = replace(cfg, cells=64, t_final=0.02)
        traj = run_scenario(cfg)

        mirrored = replace(
            cfg,
            left={"rho": cfg.right["rho"], "u": -cfg.right["u"]},
            right={"rho": cfg.left["rho"], "u": -cfg.left["u"]},
        )
        traj_m = run_scenario(mirrored)
        flip = np.array([1.0, -1.0])
        np.testing.assert_array_equal(traj_m.grid.U, traj.grid.U[::-1] * flip)

    def test_cfl_never_breaks_positivity(self):
        # all builtin isothermal scenarios at reduced size stay valid
        from dataclasses import replace

        for name in ("test1", "test2", "test3", "test5"):
            cfg = replace(builtin_scenario(name), cells=64)
            traj = run_scenario(cfg)  # raises on invalid states
            assert traj.steps > 0


class TestFallbackStreakGuard:
    def test_limit_enforced(self):
        from dataclasses import replace

        from coupled_fv.exceptions import SimulationError
        from coupled_fv.scenarios import builtin_scenario

        cfg = replace(builtin_scenario("test6"), cells=60, t_final=0.02)
        model_L, model_R = cfg.models()
        sL, sR = cfg.schemes()
        coup = cfg.coupling_condition()
        grid = initial_grid(cfg)
        with pytest.raises(SimulationError):
            run(grid, model_L, model_R, sL, sR, coup, t_final=cfg.t_final,
                fallback_limit=2)
