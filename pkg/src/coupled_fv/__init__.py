"""1D finite-volume solver for conservation laws coupled through a fixed
interface, with a wave-cancellation trace solver for the coupling conditions."""

from .coupling import (
    ClassicalCoupling,
    FluxCoupling,
    HeatExchangeCoupling,
    NozzleCoupling,
    ParticleCoupling,
    StateCoupling,
    regularized_profile_oracle,
)
from .exceptions import (
    ConfigError,
    CoupledFVError,
    DegenerateInputError,
    DomainError,
    SimulationError,
    TraceSolverError,
)
from .fluxes import (
    FluxScheme,
    force,
    middle_state,
    numerical_entropy_flux,
    rusanov,
    select_A,
)
from .models import BarotropicNozzle, IdealGasEuler, IsothermalEuler
from .riemann import WaveFan, godunov_flux, solve_riemann, solve_riemann_ideal_gas
from .scenarios import ScenarioConfig, builtin_names, builtin_scenario, initial_grid, run_scenario
from .simulator import GridState, cfl_dt, entropy_inequality_report, run, step
from .trace_solver import (
    CubicProblem,
    SolverOptions,
    TraceSolution,
    interface_momentum,
    newton_traces,
    solve_cubic,
    solve_interface,
)

__version__ = "0.1.0"
