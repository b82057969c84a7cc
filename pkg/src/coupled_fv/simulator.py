"""Time marching on a uniform grid with the interface at x = 0.

Cells are stored left to right; the interface sits on the boundary between
array indices n_left-1 and n_left (the cells labelled 0 and 1 in the update
stencil).  Interior cells use a conservative two-point flux; the two cells
hugging the interface use the one-sided fluxes built from the solved traces.
Boundaries are transmissive, so the boundary flux is the physical flux of
the edge cell.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .exceptions import ConfigError, SimulationError
from .fluxes import numerical_entropy_flux
from .trace_solver import DEFAULT_OPTIONS, TraceSolution, solve_interface

__all__ = [
    "GridState",
    "ConservationLedger",
    "StepResult",
    "EntropyReport",
    "Trajectory",
    "cfl_dt",
    "step",
    "run",
    "entropy_inequality_report",
]


@dataclass
class GridState:
    """Piecewise-constant cell states on a uniform grid split at x = 0."""

    U: np.ndarray  # (N, dim)
    dx: float
    x_left: float
    n_left: int  # number of cells with x < 0
    time: float = 0.0

    def __post_init__(self):
        self.U = np.asarray(self.U, dtype=float)
        n = self.U.shape[0]
        if not (0 < self.n_left < n):
            raise ConfigError("interface must be interior to the grid")
        if abs(self.x_left + self.n_left * self.dx) > 1e-12 * max(1.0, abs(self.x_left)):
            raise ConfigError("interface does not sit on a cell boundary")

    @property
    def n_cells(self):
        return self.U.shape[0]

    def centers(self):
        return self.x_left + (np.arange(self.n_cells) + 0.5) * self.dx

    def left(self):
        return self.U[: self.n_left]

    def right(self):
        return self.U[self.n_left :]

    def copy(self):
        return GridState(self.U.copy(), self.dx, self.x_left, self.n_left, self.time)


@dataclass
class ConservationLedger:
    """Running totals of the conserved integrals and boundary flux integrals.

    The residual of component i is
        total_i(t) - total_i(0) + int_0^t (outflux - influx) dt,
    which vanishes identically for every component the coupling conserves.
    """

    initial: np.ndarray
    boundary_net: np.ndarray  # time integral of (right boundary - left boundary) flux
    current: np.ndarray
    max_abs_residual: np.ndarray
    max_rel_residual: np.ndarray

    @classmethod
    def start(cls, grid: GridState):
        total = grid.U.sum(axis=0) * grid.dx
        z = np.zeros_like(total)
        return cls(total, z.copy(), total.copy(), z.copy(), z.copy())

    def update(self, grid: GridState, flux_left, flux_right, dt):
        self.boundary_net += dt * (np.asarray(flux_right) - np.asarray(flux_left))
        self.current = grid.U.sum(axis=0) * grid.dx
        res = self.current - self.initial + self.boundary_net
        self.max_abs_residual = np.maximum(self.max_abs_residual, np.abs(res))
        rel = np.abs(res) / np.maximum(np.abs(self.initial), 1.0)
        self.max_rel_residual = np.maximum(self.max_rel_residual, rel)

    def residual(self):
        return self.current - self.initial + self.boundary_net

    def to_dict(self):
        return {
            "initial": self.initial.tolist(),
            "current": self.current.tolist(),
            "boundary_net": self.boundary_net.tolist(),
            "residual": self.residual().tolist(),
            "max_abs_residual": self.max_abs_residual.tolist(),
            "max_rel_residual": self.max_rel_residual.tolist(),
        }


@dataclass
class StepResult:
    grid: GridState
    traces: TraceSolution
    flux_left_boundary: np.ndarray
    flux_right_boundary: np.ndarray
    interface_flux_left: np.ndarray
    interface_flux_right: np.ndarray
    A_left: np.ndarray  # interior dissipation speeds, left side
    A_right: np.ndarray


@dataclass
class EntropyReport:
    """Per-cell discrete entropy residuals for one Rusanov step.

    residuals[j] = E(U_j^{n+1}) - E(U_j^n) + (dt/dx)(F_{j+1/2} - F_{j-1/2});
    nonpositive residuals certify the discrete entropy inequality.  The
    interface flag records F_{1/2,-} >= F_{1/2,+}.
    """

    residuals: np.ndarray
    interface_dissipation: float  # F_{1/2,-} - F_{1/2,+}
    interface_flag: bool

    @property
    def max_residual(self):
        return float(np.max(self.residuals))


@dataclass
class Trajectory:
    grid: GridState
    trace_history: list[TraceSolution]
    times: list[float]
    ledger: ConservationLedger
    entropy_max_residual: float = -np.inf
    entropy_all_dissipative: bool = True
    entropy_interface_ok: bool = True
    fallback_steps: int = 0
    steps: int = 0

    @property
    def final_traces(self) -> TraceSolution:
        return self.trace_history[-1]


def cfl_dt(grid: GridState, model_L, model_R, courant: float, A_interface: float,
           dt_max: float = 1.0) -> float:
    """dt = courant * dx / S with S the largest cell or interface speed."""
    if not (0.0 < courant < 1.0):
        raise ConfigError(f"Courant number must lie in (0, 1), got {courant}")
    s = float(A_interface)
    if grid.n_left > 0:
        s = max(s, float(np.max(model_L.max_wave_speed(grid.left()))))
    if grid.n_left < grid.n_cells:
        s = max(s, float(np.max(model_R.max_wave_speed(grid.right()))))
    if s <= 0.0:
        return dt_max
    return courant * grid.dx / s


def _side_fluxes(model, scheme_kind, U, trace_flux, side):
    """All fluxes of one side: transmissive boundary, interior, interface."""
    interior, A = kernels.interior_fluxes(model, scheme_kind, U)
    if side == "left":
        fluxes = np.vstack([model.flux(U[0])[None, :], interior, trace_flux[None, :]])
    else:
        fluxes = np.vstack([trace_flux[None, :], interior, model.flux(U[-1])[None, :]])
    return fluxes, A


def step(grid: GridState, model_L, model_R, scheme_L, scheme_R, coupling, dt,
         prev_traces=None, options=DEFAULT_OPTIONS, traces=None) -> StepResult:
    """One conservative update of every cell; traces may be precomputed."""
    nl = grid.n_left
    U0 = grid.U[nl - 1]
    U1 = grid.U[nl]
    if traces is None:
        traces = solve_interface(model_L, model_R, scheme_L, scheme_R, coupling,
                                 U0, U1, prev_traces, options)
    g_left_interface = scheme_L(U0, traces.Uminus,
                                traces.A_used if scheme_L.needs_speed else None)
    g_right_interface = scheme_R(traces.Uplus, U1,
                                 traces.A_used if scheme_R.needs_speed else None)

    UL = grid.left()
    UR = grid.right()
    fluxes_L, A_L = _side_fluxes(model_L, scheme_L.kind, UL, g_left_interface, "left")
    fluxes_R, A_R = _side_fluxes(model_R, scheme_R.kind, UR, g_right_interface, "right")

    lam = dt / grid.dx
    new = grid.U.copy()
    new[:nl] -= lam * (fluxes_L[1:] - fluxes_L[:-1])
    new[nl:] -= lam * (fluxes_R[1:] - fluxes_R[:-1])

    out = GridState(new, grid.dx, grid.x_left, grid.n_left, grid.time + dt)
    try:
        model_L.validate(out.left())
        model_R.validate(out.right())
    except Exception as exc:
        raise SimulationError(
            f"invalid state after step at t={grid.time:.6g}: {exc}"
        ) from exc
    return StepResult(
        grid=out,
        traces=traces,
        flux_left_boundary=fluxes_L[0],
        flux_right_boundary=fluxes_R[-1],
        interface_flux_left=g_left_interface,
        interface_flux_right=g_right_interface,
        A_left=A_L,
        A_right=A_R,
    )


def entropy_inequality_report(grid_before: GridState, grid_after: GridState,
                              model_L, model_R, traces: TraceSolution, dt,
                              A_left=None, A_right=None) -> EntropyReport:
    """Discrete entropy residuals of one Rusanov step.

    Interior entropy fluxes reuse the same per-interface dissipation speeds
    as the update (recomputed deterministically unless passed in); the two
    interface entropy fluxes use the pair (U0, U-) and (U+, U1) with the
    traces' shared speed.
    """
    nl = grid_before.n_left
    UL = grid_before.left()
    UR = grid_before.right()
    if A_left is None:
        _, A_left = kernels.interior_fluxes(model_L, "rusanov", UL)
    if A_right is None:
        _, A_right = kernels.interior_fluxes(model_R, "rusanov", UR)

    FL = kernels.interior_entropy_fluxes(model_L, UL, A_left)
    FR = kernels.interior_entropy_fluxes(model_R, UR, A_right)
    F_half_minus = float(numerical_entropy_flux(model_L, UL[-1], traces.Uminus,
                                                traces.A_used))
    F_half_plus = float(numerical_entropy_flux(model_R, traces.Uplus, UR[0],
                                               traces.A_used))
    F_left = np.concatenate([[float(model_L.entropy_flux(UL[0]))], FL, [F_half_minus]])
    F_right = np.concatenate([[F_half_plus], FR, [float(model_R.entropy_flux(UR[-1]))]])

    lam = dt / grid_before.dx
    res_left = (
        model_L.entropy(grid_after.left()) - model_L.entropy(UL)
        + lam * (F_left[1:] - F_left[:-1])
    )
    res_right = (
        model_R.entropy(grid_after.right()) - model_R.entropy(UR)
        + lam * (F_right[1:] - F_right[:-1])
    )
    dissipation = F_half_minus - F_half_plus
    return EntropyReport(
        residuals=np.concatenate([res_left, res_right]),
        interface_dissipation=dissipation,
        interface_flag=bool(dissipation >= -1e-12),
    )


def run(grid: GridState, model_L, model_R, scheme_L, scheme_R, coupling,
        t_final: float, courant: float = 0.95, options=DEFAULT_OPTIONS,
        collect_entropy: bool = False, fallback_limit: int = 50,
        dt_max: float = 1.0, seed_prev_with_initial: bool = True) -> Trajectory:
    """Advance to t_final exactly, recording traces and conservation totals.

    The first interface solve is seeded with the initial pair (U0, U1) so
    that branch selection starts from the data itself; later solves reuse the
    previous step's traces.  A streak of least-squares fallbacks longer than
    fallback_limit aborts the run.
    """
    grid = grid.copy()
    ledger = ConservationLedger.start(grid)
    traj = Trajectory(grid=grid, trace_history=[], times=[], ledger=ledger)
    prev: TraceSolution | None = None
    if seed_prev_with_initial:
        nl = grid.n_left
        prev = TraceSolution(
            Uminus=grid.U[nl - 1].copy(), Uplus=grid.U[nl].copy(),
            branch="seed", A_used=0.0,
        )
    streak = 0
    A_prev = None
    while grid.time < t_final - 1e-14 * max(1.0, t_final):
        nl = grid.n_left
        traces = solve_interface(model_L, model_R, scheme_L, scheme_R, coupling,
                                 grid.U[nl - 1], grid.U[nl], prev, options)
        # dt pairs the pre-step speeds with the previous step's interface A;
        # the very first step uses the traces just solved
        if A_prev is None:
            A_prev = traces.A_used
        dt = cfl_dt(grid, model_L, model_R, courant, A_prev, dt_max)
        dt = min(dt, t_final - grid.time)
        A_prev = traces.A_used
        result = step(grid, model_L, model_R, scheme_L, scheme_R, coupling, dt,
                      options=options, traces=traces)
        if collect_entropy:
            report = entropy_inequality_report(
                grid, result.grid, model_L, model_R, traces, dt,
                result.A_left, result.A_right,
            )
            traj.entropy_max_residual = max(traj.entropy_max_residual,
                                            report.max_residual)
            traj.entropy_all_dissipative &= bool(report.max_residual <= 1e-12)
            traj.entropy_interface_ok &= report.interface_flag
        grid = result.grid
        ledger.update(grid, result.flux_left_boundary, result.flux_right_boundary, dt)
        traj.trace_history.append(traces)
        traj.times.append(grid.time)
        traj.steps += 1
        if traces.branch == "least_squares_fallback":
            traj.fallback_steps += 1
            streak += 1
            if streak > fallback_limit:
                raise SimulationError(
                    f"interface solver fell back for {streak} consecutive steps "
                    f"(last residual {traces.residual_norm:.3e} at t={grid.time:.6g})"
                )
        else:
            streak = 0
        prev = traces
    traj.grid = grid
    return traj
