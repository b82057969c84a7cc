"""Interface trace solver.

Each time step, the scheme needs ghost states (U-, U+) satisfying the
coupling equalities together with the wave-cancellation condition

    g_L(U0, U-) - f_L(U-) + f_R(U+) - g_R(U+, U1) = 0,

so that whatever numerical waves enter the interface cancel there.  For the
Rusanov flux and the classical/particle couplings this reduces to closed
forms (a middle-state momentum plus the roots of a cubic); entropy and
admissibility tests select the branch, and a sonic fix handles the resonant
case where no root survives.  Every other coupling goes through a damped
Newton iteration with a finite-difference Jacobian.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .coupling import ClassicalCoupling, ParticleCoupling
from .exceptions import DegenerateInputError, TraceSolverError
from .fluxes import middle_state, rusanov, select_A, subcharacteristic_ok
from .riemann import godunov_flux, solve_riemann

__all__ = [
    "SolverOptions",
    "TraceSolution",
    "CubicProblem",
    "interface_momentum",
    "solve_cubic",
    "closed_form_traces_classical",
    "solve_traces_particle",
    "entropy_select",
    "sonic_fix",
    "newton_traces",
    "solve_interface",
    "godunov_coupling_residual",
]


@dataclass(frozen=True)
class SolverOptions:
    """Tolerances and switches of the interface solver."""

    newton_tol: float = 1e-10
    newton_max_iter: int = 200
    fd_step: float = 1e-7
    cubic_tol: float = 1e-11
    entropy_tol: float = 1e-12
    equilibrium_tol: float = 1e-12
    cancellation_tol: float = 1e-10
    enlarge_rounds: int = 5
    sonic_fix_enabled: bool = True


DEFAULT_OPTIONS = SolverOptions()


@dataclass
class TraceSolution:
    """Ghost states at the interface plus solver diagnostics."""

    Uminus: np.ndarray
    Uplus: np.ndarray
    branch: str  # equilibrium | trivial | nontrivial_shock | cubic_root |
    #              newton | least_squares_fallback | sonic_fix
    A_used: float
    residual_norm: float = 0.0  # full system (coupling + cancellation), inf-norm
    cancellation_norm: float = 0.0
    coupling_residual_norm: float = 0.0
    entropy_check: float = 0.0  # LHS - RHS of the interface entropy test
    root_index: int | None = None
    n_iter: int = 0
    message: str = ""


@dataclass(frozen=True)
class CubicProblem:
    """Coefficients data of the trace cubic for the particle coupling.

    Clearing denominators in the momentum-jump relation written with
    rho-+rho+ = 2 rho_star and rho-+ = rho_star -+ r gives

        2 c^2 r^3 + lam q r^2 + (2 q^2 - 2 c^2 rho_star^2) r
            - lam q rho_star^2 = 0.
    """

    rho_star: float
    q: float
    c: float
    lam: float

    def coefficients(self):
        c2 = self.c * self.c
        return np.array(
            [
                2.0 * c2,
                self.lam * self.q,
                2.0 * self.q * self.q - 2.0 * c2 * self.rho_star * self.rho_star,
                -self.lam * self.q * self.rho_star * self.rho_star,
            ]
        )

    def rational_residual(self, r):
        """Momentum-jump relation in its original (un-cleared) form."""
        rm = self.rho_star - r
        rp = self.rho_star + r
        c2 = self.c * self.c
        q2 = self.q * self.q
        return (q2 / rm + c2 * rm) - (q2 / rp + c2 * rp) - self.lam * self.q

    def rational_derivative(self, r):
        rm = self.rho_star - r
        rp = self.rho_star + r
        c2 = self.c * self.c
        q2 = self.q * self.q
        return q2 / rm**2 + q2 / rp**2 - 2.0 * c2


def interface_momentum(q0, q1, eta0, eta1, A, lam):
    """Momentum shared by both traces: (A(q0+q1) + eta0-eta1) / (lam+2A)."""
    return (A * (q0 + q1) + (eta0 - eta1)) / (lam + 2.0 * A)


def solve_cubic(problem: CubicProblem, tol: float | None = None):
    """All real roots of the trace cubic strictly inside (-rho_star, rho_star).

    Companion-matrix roots polished by Newton on the rational form; sorted
    ascending.  The existence proof guarantees at least one root, so an empty
    list is a bug signal and raises.
    """
    if problem.rho_star <= 0.0:
        raise DegenerateInputError(f"nonpositive middle density {problem.rho_star}")
    tol = DEFAULT_OPTIONS.cubic_tol if tol is None else tol
    raw = np.roots(problem.coefficients())
    scale = problem.rho_star
    roots = []
    for z in raw:
        if abs(z.imag) > 1e-8 * (abs(z.real) + scale):
            continue
        r = float(z.real)
        if abs(r) >= scale:
            continue
        for _ in range(4):
            d = problem.rational_derivative(r)
            if d == 0.0:
                break
            step = problem.rational_residual(r) / d
            if not math.isfinite(step):
                break
            r_new = r - step
            if abs(r_new) >= scale:
                break
            r = r_new
        if abs(r) < scale and abs(problem.rational_residual(r)) < tol:
            roots.append(r)
    roots.sort()
    dedup = []
    for r in roots:
        if not dedup or abs(r - dedup[-1]) > 1e-9 * scale:
            dedup.append(r)
    if not dedup:
        raise TraceSolverError(
            f"trace cubic has no admissible real root (contradicts existence): {problem}"
        )
    return dedup


@dataclass
class _Candidate:
    Um: np.ndarray
    Up: np.ndarray
    r: float
    index: int
    branch: str


def _entropy_check_value(E_L, F_L, E_R, F_R, U0, U1, Um, Up, A):
    lhs = float(F_R(U1) - F_L(U0))
    rhs = A * float(E_L(U0) + E_R(U1) - E_L(Um) - E_R(Up))
    return lhs - rhs


def entropy_select(candidates, model, coupling, U0, U1, A, prev=None, entropy_tol=1e-12):
    """Filter candidates by admissibility and the interface entropy test,
    then break ties by closeness to the previous traces (or smallest |r|).

    Returns (candidate, entropy_check) or (None, None) when nothing survives,
    which signals the caller to apply the sonic fix.
    """
    E = model.entropy
    F = model.entropy_flux
    survivors = []
    for cand in candidates:
        ok, _reason = coupling.admissible(cand.Um, cand.Up)
        if not ok:
            continue
        check = _entropy_check_value(E, F, E, F, U0, U1, cand.Um, cand.Up, A)
        if check > entropy_tol:
            continue
        survivors.append((cand, check))
    if not survivors:
        return None, None
    if len(survivors) == 1:
        return survivors[0]
    if prev is not None:
        pm, pp = float(prev.Uminus[0]), float(prev.Uplus[0])

        def key(item):
            dm = item[0].Um[0] - pm
            dp = item[0].Up[0] - pp
            return dm * dm + dp * dp

    else:

        def key(item):
            return abs(item[0].r)

    return min(survivors, key=key)


def closed_form_traces_classical(model, U0, U1, A, prev=None, options=DEFAULT_OPTIONS):
    """Rusanov traces for the classical coupling (isothermal flow).

    The middle state is always a solution; when rho*^2 > q*^2/c^2 and q* != 0
    there is a second one, the standing shock with rho-+ = rho* -+ sign(q*) r.
    """
    U0 = np.asarray(U0, dtype=float)
    U1 = np.asarray(U1, dtype=float)
    c = model.c
    Ustar = middle_state(model, U0, U1, A)
    rho_s, q_s = float(Ustar[0]), float(Ustar[1])
    if rho_s <= 0.0:
        raise DegenerateInputError(f"middle density {rho_s} <= 0 at the interface")
    candidates = [_Candidate(Ustar.copy(), Ustar.copy(), 0.0, 0, "trivial")]
    disc = rho_s * rho_s - q_s * q_s / (c * c)
    if disc > 0.0 and q_s != 0.0:
        r = math.sqrt(disc)
        s = 1.0 if q_s > 0.0 else -1.0
        Um = np.array([rho_s - s * r, q_s])
        Up = np.array([rho_s + s * r, q_s])
        candidates.append(_Candidate(Um, Up, s * r, 1, "nontrivial_shock"))
    coupling = ClassicalCoupling(model)
    chosen, check = entropy_select(
        candidates, model, coupling, U0, U1, A, prev, options.entropy_tol
    )
    if chosen is None:  # cannot happen: the middle state always survives
        raise TraceSolverError("classical coupling lost the trivial candidate")
    return _finish(model, model, coupling, None, None, U0, U1, chosen.Um, chosen.Up,
                   A, chosen.branch, root_index=chosen.index, entropy_check=check)


def solve_traces_particle(model, coupling, U0, U1, A, prev=None, options=DEFAULT_OPTIONS):
    """Rusanov traces for the particle coupling via the trace cubic.

    Worked in |q| and mirrored back for negative flow so that mirrored inputs
    give bitwise-mirrored outputs.
    """
    U0 = np.asarray(U0, dtype=float)
    U1 = np.asarray(U1, dtype=float)
    c = model.c
    lam = coupling.lam
    eta0 = float(model.momentum_flux(U0))
    eta1 = float(model.momentum_flux(U1))
    q = interface_momentum(U0[1], U1[1], eta0, eta1, A, lam)
    rho_s = 0.5 * (U0[0] + U1[0]) + (U0[1] - U1[1]) / (2.0 * A)
    if rho_s <= 0.0:
        raise DegenerateInputError(f"middle density {rho_s} <= 0 at the interface")

    sign = 1.0 if q >= 0.0 else -1.0
    roots_abs = solve_cubic(CubicProblem(rho_s, abs(q), c, lam), options.cubic_tol)
    candidates = []
    for k, r in enumerate(roots_abs):
        rm, rp = rho_s - r, rho_s + r
        if rm <= 0.0 or rp <= 0.0:
            continue
        if sign > 0.0:
            Um, Up = np.array([rm, q]), np.array([rp, q])
        else:
            Um, Up = np.array([rp, q]), np.array([rm, q])
        candidates.append(_Candidate(Um, Up, sign * r, k, "cubic_root"))

    chosen, check = entropy_select(
        candidates, model, coupling, U0, U1, A, prev, options.entropy_tol
    )
    if chosen is not None:
        return _finish(model, model, coupling, None, None, U0, U1, chosen.Um, chosen.Up,
                       A, chosen.branch, root_index=chosen.index, entropy_check=check)
    if not options.sonic_fix_enabled:
        # keep the root closest to the previous traces even though it violates
        # a condition; used to demonstrate that the fix is mandatory
        fallback, _ = entropy_select(
            candidates, model, _Permissive(), U0, U1, A, prev, math.inf
        )
        if fallback is None:
            raise TraceSolverError("no valid cubic root with the sonic fix disabled")
        return _finish(model, model, coupling, None, None, U0, U1, fallback.Um,
                       fallback.Up, A, "cubic_root", root_index=fallback.index,
                       entropy_check=_entropy_check_value(
                           model.entropy, model.entropy_flux, model.entropy,
                           model.entropy_flux, U0, U1, fallback.Um, fallback.Up, A),
                       message="sonic fix disabled")
    return sonic_fix(rho_s, c, lam, sign, model, coupling, U0, U1, A)


class _Permissive:
    """Admissibility stub accepting everything (fix-disabled diagnostics)."""

    @staticmethod
    def admissible(Um, Up):
        return True, ""


def sonic_fix(rho_star, c, lam, sign_q, model, coupling, U0, U1, A):
    """Resonant fix: replace the momentum relation by a sonic exit.

    For q > 0 the exit is the right side and q = c rho+; for q < 0 the exit
    is the left side and q = -c rho-.  Mass still balances because
    rho- + rho+ = 2 rho* is kept; the momentum-jump relation is dropped.
    Solved in the canonical q > 0 frame on the subsonic-entrance branch.
    """
    from scipy.optimize import brentq

    if sign_q == 0.0:
        raise TraceSolverError("sonic fix called with zero interface momentum")

    def resid(rho_p):
        rho_m = 2.0 * rho_star - rho_p
        q = c * rho_p
        eta_m = q * q / rho_m + c * c * rho_m
        eta_p = 2.0 * c * c * rho_p
        return eta_m - eta_p - lam * q

    lo = 1e-12 * rho_star
    hi = rho_star
    f_lo, f_hi = resid(lo), resid(hi)
    if f_lo * f_hi > 0.0:
        # defensive scan over the full admissible interval
        grid = np.linspace(lo, 2.0 * rho_star - lo, 2049)
        vals = [resid(g) for g in grid]
        for a, b, fa, fb in zip(grid[:-1], grid[1:], vals[:-1], vals[1:]):
            if fa == 0.0 or fa * fb < 0.0:
                lo, hi = a, b
                break
        else:
            raise TraceSolverError(
                f"sonic fix found no sign change on (0, {2 * rho_star})"
            )
    rho_p = brentq(resid, lo, hi, xtol=1e-15, rtol=8.9e-16, maxiter=200)
    rho_m = 2.0 * rho_star - rho_p
    q_abs = c * rho_p
    if sign_q > 0.0:
        Um, Up = np.array([rho_m, q_abs]), np.array([rho_p, q_abs])
    else:
        Um, Up = np.array([rho_p, -q_abs]), np.array([rho_m, -q_abs])
    check = _entropy_check_value(
        model.entropy, model.entropy_flux, model.entropy, model.entropy_flux,
        U0, U1, Um, Up, A,
    )
    return _finish(model, model, coupling, None, None, U0, U1, Um, Up, A,
                   "sonic_fix", entropy_check=check)


def _fd_jacobian(residual, x, r0, rel_step):
    """Central-difference Jacobian with one-sided fallback near domain edges."""
    m, n = r0.size, x.size
    J = np.empty((m, n))
    for i in range(n):
        h = rel_step * max(abs(x[i]), 1.0)
        xp = x.copy()
        xm = x.copy()
        xp[i] += h
        xm[i] -= h
        rp = residual(xp)
        rm = residual(xm)
        if rp is not None and rm is not None:
            J[:, i] = (rp - rm) / (2.0 * h)
        elif rp is not None:
            J[:, i] = (rp - r0) / h
        elif rm is not None:
            J[:, i] = (r0 - rm) / h
        else:
            J[:, i] = 0.0
    return J


def newton_traces(model_L, model_R, coupling, scheme_L, scheme_R, U0, U1, A,
                  guess=None, options=DEFAULT_OPTIONS):
    """Damped Gauss-Newton on the coupling + wave-cancellation system.

    Finite-difference Jacobian, rows scaled by the initial residual
    magnitudes, Armijo backtracking with step halving when an iterate leaves
    the physical domain.  On failure the best iterate in the least-squares
    sense is returned with the fallback branch.
    """
    U0 = np.asarray(U0, dtype=float)
    U1 = np.asarray(U1, dtype=float)
    nL = model_L.dim
    if guess is None:
        x = np.concatenate([U0, U1])
    else:
        x = np.concatenate([np.asarray(guess[0], dtype=float), np.asarray(guess[1], dtype=float)])

    def split(z):
        return z[:nL], z[nL:]

    def raw_residual(z):
        Um, Up = split(z)
        if not (model_L.is_valid(Um) and model_R.is_valid(Up)):
            return None
        rc = coupling.residual(Um, Up)
        try:
            cancellation = (
                scheme_L(U0, Um, A) - model_L._flux_raw(Um)
                + model_R._flux_raw(Up) - scheme_R(Up, U1, A)
            )
        except DegenerateInputError:
            return None
        return np.concatenate([np.atleast_1d(rc), cancellation])

    r = raw_residual(x)
    if r is None:
        raise TraceSolverError("newton trace guess outside the physical domain")
    weights = 1.0 / np.maximum(np.abs(r), 1.0)

    best_x = x.copy()
    best_norm = float(np.max(np.abs(r)))
    stall = 0
    n_iter = 0
    for n_iter in range(1, options.newton_max_iter + 1):
        norm = float(np.max(np.abs(r)))
        if norm < 0.99 * best_norm:
            stall = 0
        else:
            stall += 1
            if stall > 15:  # least-squares valley with no nearby zero
                break
        if norm < best_norm:
            best_norm = norm
            best_x = x.copy()
        if norm < 1e-14:
            break
        J = _fd_jacobian(raw_residual, x, r, options.fd_step)
        Jw = J * weights[:, None]
        rw = r * weights
        try:
            d, *_ = np.linalg.lstsq(Jw, -rw, rcond=None)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(d)) or float(np.max(np.abs(d))) == 0.0:
            break
        phi0 = 0.5 * float(rw @ rw)
        t = 1.0
        accepted = False
        while t > 1e-12:
            r_try = raw_residual(x + t * d)
            if r_try is not None:
                rw_try = r_try * weights
                if 0.5 * float(rw_try @ rw_try) <= phi0 * (1.0 - 1e-4 * t):
                    x = x + t * d
                    r = r_try
                    accepted = True
                    break
            t *= 0.5
        if not accepted:
            break

    norm = float(np.max(np.abs(r)))
    if norm < best_norm:
        best_norm = norm
        best_x = x.copy()
    Um, Up = split(best_x)
    success = best_norm < options.newton_tol
    branch = "newton" if success else "least_squares_fallback"
    return _finish(model_L, model_R, coupling, scheme_L, scheme_R, U0, U1,
                   Um.copy(), Up.copy(), A, branch, n_iter=n_iter,
                   message="" if success else f"best residual {best_norm:.3e}")


def _finish(model_L, model_R, coupling, scheme_L, scheme_R, U0, U1, Um, Up, A,
            branch, root_index=None, entropy_check=None, n_iter=0, message=""):
    """Assemble a TraceSolution with its diagnostics."""
    if scheme_L is None:
        cancellation = (
            rusanov(model_L, U0, Um, A) - model_L._flux_raw(Um)
            + model_R._flux_raw(Up) - rusanov(model_R, Up, U1, A)
        )
    else:
        cancellation = (
            scheme_L(U0, Um, A) - model_L._flux_raw(Um)
            + model_R._flux_raw(Up) - scheme_R(Up, U1, A)
        )
    coup = np.atleast_1d(coupling.residual(Um, Up))
    if entropy_check is None:
        entropy_check = _entropy_check_value(
            model_L.entropy, model_L.entropy_flux, model_R.entropy,
            model_R.entropy_flux, U0, U1, Um, Up, A,
        )
    full = np.concatenate([coup, cancellation])
    return TraceSolution(
        Uminus=np.asarray(Um, dtype=float),
        Uplus=np.asarray(Up, dtype=float),
        branch=branch,
        A_used=float(A),
        residual_norm=float(np.max(np.abs(full))),
        cancellation_norm=float(np.max(np.abs(cancellation))),
        coupling_residual_norm=float(np.max(np.abs(coup))),
        entropy_check=float(entropy_check),
        root_index=root_index,
        n_iter=n_iter,
        message=message,
    )


def _godunov_traces(model, U0, U1):
    """Traces of the exact Riemann fan (classical coupling, Godunov flux)."""
    fan = solve_riemann(model.c, U0, U1)
    Um = fan.sample(-1e-300)  # left limit: a stationary shock stays upstream
    Up = fan.sample(0.0)
    return Um, Up


def solve_interface(model_L, model_R, scheme_L, scheme_R, coupling, U0, U1,
                    prev=None, options=DEFAULT_OPTIONS):
    """Solve for the interface traces, choosing the fastest applicable path.

    The dissipation speed A is shared by both interface half-fluxes: start
    from the pair (U0, U1) and enlarge until the subcharacteristic bound also
    holds for (U0, U-) and (U+, U1) after solving, re-solving as needed.
    """
    U0 = np.asarray(U0, dtype=float)
    U1 = np.asarray(U1, dtype=float)
    model_L.validate(U0)
    model_R.validate(U1)

    # well-balancedness: members of the coupling set are returned untouched
    res0 = np.atleast_1d(coupling.residual(U0, U1))
    if float(np.max(np.abs(res0))) < options.equilibrium_tol:
        ok, _ = coupling.admissible(U0, U1)
        if ok:
            A0 = max(float(model_L.max_wave_speed(U0)), float(model_R.max_wave_speed(U1)))
            return _finish(model_L, model_R, coupling, scheme_L, scheme_R,
                           U0, U1, U0.copy(), U1.copy(), A0, "equilibrium")

    if scheme_L.kind == "godunov":
        if not isinstance(coupling, ClassicalCoupling):
            raise TraceSolverError(
                "the Godunov interface mode only supports the classical coupling"
            )
        Um, Up = _godunov_traces(model_L, U0, U1)
        A0 = max(float(model_L.max_wave_speed(U0)), float(model_R.max_wave_speed(U1)))
        branch = "trivial" if np.array_equal(Um, Up) else "nontrivial_shock"
        return _finish(model_L, model_R, coupling, scheme_L, scheme_R,
                       U0, U1, Um, Up, A0, branch)

    same_model = model_L == model_R
    if same_model:
        A = select_A(model_L, U0, U1)
    else:
        A = max(float(model_L.max_wave_speed(U0)), float(model_R.max_wave_speed(U1)))

    closed_classical = (
        isinstance(coupling, ClassicalCoupling)
        and same_model
        and model_L.kind == "isothermal"
        and scheme_L.kind == "rusanov"
        and scheme_R.kind == "rusanov"
    )
    closed_particle = (
        isinstance(coupling, ParticleCoupling)
        and same_model
        and model_L.kind == "isothermal"
        and scheme_L.kind == "rusanov"
        and scheme_R.kind == "rusanov"
    )

    sol = None
    for _ in range(options.enlarge_rounds + 1):
        if closed_classical:
            sol = closed_form_traces_classical(model_L, U0, U1, A, prev, options)
        elif closed_particle:
            sol = solve_traces_particle(model_L, coupling, U0, U1, A, prev, options)
        else:
            guess = (prev.Uminus, prev.Uplus) if prev is not None else None
            sol = newton_traces(model_L, model_R, coupling, scheme_L, scheme_R,
                                U0, U1, A, guess, options)
        ok_left = subcharacteristic_ok(model_L, U0, sol.Uminus, A)
        ok_right = subcharacteristic_ok(model_R, sol.Uplus, U1, A)
        if ok_left and ok_right:
            return sol
        need = A
        if not ok_left and model_L.is_valid(sol.Uminus):
            need = max(need, select_A(model_L, U0, sol.Uminus))
        if not ok_right and model_R.is_valid(sol.Uplus):
            need = max(need, select_A(model_R, sol.Uplus, U1))
        A = need if need > A else A * 1.1
    return sol


def godunov_coupling_residual(c, lam, U0, U1, Um, Up, fixed=False):
    """Residual of the Godunov-coupled particle system for given traces.

    The plain form balances the momentum-flux jump against lam times the
    trace momentum; the uniqueness fix replaces that by lam times the
    numerical mass flux, which rules out spurious equilibria.
    """
    g_left = godunov_flux(c, np.asarray(U0, float), np.asarray(Um, float))
    g_right = godunov_flux(c, np.asarray(Up, float), np.asarray(U1, float))
    r_mass = g_left[0] - g_right[0]
    if fixed:
        r_mom = g_left[1] - g_right[1] - lam * g_left[0]
    else:
        q_interface = 0.5 * (float(Um[1]) + float(Up[1]))
        r_mom = g_left[1] - g_right[1] - lam * q_interface
    return np.array([r_mass, r_mom])
