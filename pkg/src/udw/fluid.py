"""Perfect-fluid sector: pressure, energy density and energy conditions.

All arrays are nondimensional: radii in units of ell, pressure and density
as ``ell**4 * P`` and ``ell**4 * rho``. With ``s = |Psi_c|^2 = sech^2(x)``
the hydrostatic condition reads

    d/dx [(1 - mu s) P] = -G_tot(x),     P -> 0 at infinity,

whose source for the ground state is G = 4 sech^2 tanh^2 / x.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from udw import quadcore
from udw.profiles import (
    DetectorState,
    Ground,
    ModelParams,
    ParameterError,
    F_c_profile,
    f_profile,
    fluid_onshell_lagrangian,
    g_for_state,
    g_printed,
    sech,
)

__all__ = [
    "FluidSolution",
    "EnergyMargins",
    "MuStar",
    "PressureDivergenceError",
    "default_grid",
    "source_G",
    "pressure_quadrature",
    "pressure_ode",
    "density",
    "solve_fluid",
    "energy_condition_margins",
    "eos_w",
    "mu_star",
    "mu_star_closed_form",
    "ec_margin_at_origin",
    "hydrostatic_residual",
    "printed_ode_residual",
    "printed_excited_pressure",
    "pressure_with_g",
    "printed_g_hat",
    "enclosed_fluid_energy",
]

DEFAULT_POINTS = 600
DEFAULT_X_MIN = 1e-3
DEFAULT_X_MAX = 12.0
ODE_START = 30.0
ODE_STEP = 1e-3


class PressureDivergenceError(ParameterError):
    pass


@dataclass(frozen=True)
class FluidSolution:
    params: ModelParams
    state: DetectorState
    grid: np.ndarray = field(repr=False)
    pressure: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)

    @property
    def w(self) -> np.ndarray:
        return eos_w(self.density, self.pressure)


@dataclass(frozen=True)
class EnergyMargins:
    rho_plus_p: float
    rho_plus_3p: float
    rho_minus_abs_p: float
    argmin_rho_minus_abs_p: float = math.nan

    def all_positive(self) -> bool:
        return min(self.rho_plus_p, self.rho_plus_3p, self.rho_minus_abs_p) > 0


@dataclass(frozen=True)
class MuStar:
    value: float
    unconstrained: bool = False


def default_grid(points: int = DEFAULT_POINTS, x_min: float = DEFAULT_X_MIN, x_max: float = DEFAULT_X_MAX):
    return np.linspace(x_min, x_max, points)


def _check_pure(state: DetectorState):
    if state.kind == "mixture":
        raise ValueError("the fluid is solved for pure detector states; mix the stress tensors instead")


def _check_mu(params: ModelParams):
    mu_hat = params.mu_hat
    if mu_hat <= 0:
        raise ParameterError(
            f"mu = {params.mu:g} <= 0 gives a negative energy-density asymptote"
        )
    if mu_hat >= 1:
        where = params.ell * math.acosh(mu_hat)
        raise PressureDivergenceError(
            f"mu = {params.mu:g} >= ell^2: pressure divergent at r = ell*arcsech(ell^2/mu) = {where:.6g}"
        )


def source_G(x, params: ModelParams, state: DetectorState = Ground):
    """Hydrostatic source G_tot(x), nondimensional.

    Ground state: 4 sech^2 tanh^2 / x. The excited state adds
    alpha * ell^2 g(x) * sech^2 tanh, the term the detector's <:phi_d^2:>
    pushes into the fluid.
    """
    _check_pure(state)
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < 1e-3
    safe = np.where(small, 1.0, x)
    s, t = sech(x) ** 2, np.tanh(x)
    out = np.where(small, 4 * x - 20 * x**3 / 3, 4 * s * t**2 / safe)
    if state.kind == "excited":
        nd = params.nondimensional()
        out = out + nd.alpha * g_for_state(x, nd, state) * s * t
    return out if out.ndim else float(out)


def _mu_lagrangian(x, params: ModelParams, state: DetectorState):
    """mu * L_fluid = f - (alpha/2) g - F_c, nondimensional."""
    nd = params.nondimensional()
    return f_profile(x, nd) - 0.5 * nd.alpha * g_for_state(x, nd, state) - F_c_profile(x, nd)


def pressure_quadrature(params: ModelParams, state: DetectorState = Ground, grid=None) -> np.ndarray:
    """ell^4 P on ``grid`` from P = int_x^inf G_tot / (1 - mu_hat sech^2 x)."""
    _check_pure(state)
    _check_mu(params)
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    tail = quadcore.cumulative_tail_integral(lambda t: source_G(t, params, state), grid)
    return tail / (1.0 - params.mu_hat * sech(grid) ** 2)


def pressure_ode(
    params: ModelParams,
    state: DetectorState = Ground,
    grid=None,
    x_start: float = ODE_START,
    step: float = ODE_STEP,
) -> np.ndarray:
    """ell^4 P on ``grid`` by backward RK4 on the hydrostatic equation.

    Integrates (1 - mu s) P' - mu s' P + (f - (alpha/2) g - F_c) s' = 0 from
    ``x_start`` with P = 0, stepping no wider than ``step`` and landing on
    every grid point.
    """
    _check_pure(state)
    _check_mu(params)
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if grid[-1] > x_start:
        raise ValueError("grid extends beyond the ODE starting radius")
    mu = params.mu_hat

    # descending node list through every grid point
    stops = np.concatenate([[x_start], grid[::-1]])
    if stops[1] == stops[0]:
        stops = stops[1:]
    nodes = [stops[:1]]
    ends = []
    count = 1
    for a, b in zip(stops[:-1], stops[1:]):
        n = max(1, int(math.ceil((a - b) / step - 1e-9)))
        seg = a + (b - a) * np.arange(1, n + 1) / n
        seg[-1] = b
        nodes.append(seg)
        count += n
        ends.append(count - 1)
    nodes = np.concatenate(nodes)
    h = np.diff(nodes)
    mids = nodes[:-1] + 0.5 * h

    def coeffs(xs):
        s = sech(xs) ** 2
        ds = -2.0 * s * np.tanh(xs)
        denom = 1.0 - mu * s
        return mu * ds / denom, -_mu_lagrangian(xs, params, state) * ds / denom

    a0, b0 = coeffs(nodes[:-1])
    a1, b1 = coeffs(mids)
    a2, b2 = coeffs(nodes[1:])

    def rk4(y):
        k1 = a0 * y + b0
        k2 = a1 * (y + 0.5 * h * k1) + b1
        k3 = a1 * (y + 0.5 * h * k2) + b1
        k4 = a2 * (y + h * k3) + b2
        return y + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)

    # the RK4 step of a linear ODE is affine in y
    c = rk4(0.0)
    m = rk4(1.0) - c
    p = np.empty(nodes.size)
    p[0] = 0.0
    y = 0.0
    for i, (mi, ci) in enumerate(zip(m.tolist(), c.tolist())):
        y = mi * y + ci
        p[i + 1] = y
    # the last len(grid) segment ends are the grid points, descending
    idx = np.asarray(ends[-grid.size:]) if stops.size > grid.size else np.concatenate([[0], ends])
    return p[idx][::-1]


def density(params: ModelParams, state: DetectorState, pressure, grid=None) -> np.ndarray:
    """ell^4 rho from the equation of state -rho + 3 eta P = L_fluid."""
    _check_pure(state)
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    nd = params.nondimensional()
    lag = fluid_onshell_lagrangian(grid, nd, state)
    return 3.0 * params.eta * np.asarray(pressure) - lag


def solve_fluid(
    params: ModelParams, state: DetectorState = Ground, grid=None, method: str = "quadrature"
) -> FluidSolution:
    grid = default_grid() if grid is None else np.asarray(grid, dtype=float)
    if method == "quadrature":
        p = pressure_quadrature(params, state, grid)
    elif method == "ode":
        p = pressure_ode(params, state, grid)
    else:
        raise ValueError(f"unknown method {method!r}")
    rho = density(params, state, p, grid)
    return FluidSolution(params=params, state=state, grid=grid, pressure=p, density=rho)


def energy_condition_margins(density, pressure, grid=None) -> EnergyMargins:
    """Minima of rho + P, rho + 3P and rho - |P| over the grid."""
    rho = np.asarray(density, dtype=float)
    p = np.asarray(pressure, dtype=float)
    dec = rho - np.abs(p)
    where = math.nan if grid is None else float(np.asarray(grid)[np.argmin(dec)])
    return EnergyMargins(
        rho_plus_p=float(np.min(rho + p)),
        rho_plus_3p=float(np.min(rho + 3 * p)),
        rho_minus_abs_p=float(np.min(dec)),
        argmin_rho_minus_abs_p=where,
    )


def eos_w(density, pressure) -> np.ndarray:
    rho = np.asarray(density, dtype=float)
    if np.any(rho <= 0):
        raise ValueError("w = P/rho needs a positive density")
    return np.asarray(pressure, dtype=float) / rho


def mu_star_closed_form(eta: float, ell: float = 1.0) -> float:
    """ell^2 / (1 + (1 - 3 eta) g0 / 2)."""
    return ell**2 / (1.0 + (1.0 - 3.0 * eta) * quadcore.g0_constant() / 2.0)


def ec_margin_at_origin(mu: float, eta: float, ell: float = 1.0, p0_integral: float | None = None) -> float:
    """ell^4 (rho - P) at r = 0, i.e. 2/mu_hat - (1 - 3 eta) P(0), for the ground state."""
    if p0_integral is None:
        p0_integral = quadcore.integrate_tail(lambda t: source_G(t, ModelParams()), 0.0, 0.5).value
    mu_hat = mu / ell**2
    return 2.0 / mu_hat - (1.0 - 3.0 * eta) * p0_integral / (1.0 - mu_hat)


def mu_star(eta: float, ell: float = 1.0, tol: float = 1e-13) -> MuStar:
    """Largest mu for which the ground-state fluid keeps rho - |P| > 0 at the origin.

    Found by bisection on 2/mu - (1 - 3 eta) P(0; mu) with P(0) from
    quadrature, independent of the closed-form g0.
    """
    if eta > 1.0 / 3.0:
        return MuStar(ell**2, unconstrained=True)
    if eta == 1.0 / 3.0:
        return MuStar(ell**2)
    p0_integral = quadcore.integrate_tail(lambda t: source_G(t, ModelParams()), 0.0, 0.5).value
    root = quadcore.bisect_root(
        lambda m: ec_margin_at_origin(m, eta, 1.0, p0_integral), 1e-6, 1.0 - 1e-12, tol=tol
    )
    return MuStar(root * ell**2)


def hydrostatic_residual(params: ModelParams, state: DetectorState, grid, pressure) -> np.ndarray:
    """(1 - mu s) P' - mu s' P + (f - (alpha/2) g - F_c) s' on a uniform grid.

    P' is taken by fourth-order finite differences of the sampled pressure.
    """
    grid = np.asarray(grid, dtype=float)
    h = grid[1] - grid[0]
    if not np.allclose(np.diff(grid), h, rtol=1e-9, atol=0):
        raise ValueError("residual needs a uniform grid")
    p = np.asarray(pressure, dtype=float)
    dp = quadcore.derivative_grid(p, h)
    mu = params.mu_hat
    s = sech(grid) ** 2
    ds = -2.0 * s * np.tanh(grid)
    return (1 - mu * s) * dp - mu * ds * p + _mu_lagrangian(grid, params, state) * ds


def printed_ode_residual(params: ModelParams, grid, pressure) -> np.ndarray:
    """Residual of the scalar ODE for P exactly as printed (positive source term).

    P' + 2 mu tanh P / (ell (cosh^2 ell^2 - mu)) - 4 tanh^2 / (r ell^2 (ell^2 cosh^2 - mu)),
    in nondimensional form.
    """
    grid = np.asarray(grid, dtype=float)
    h = grid[1] - grid[0]
    p = np.asarray(pressure, dtype=float)
    dp = quadcore.derivative_grid(p, h)
    mu = params.mu_hat
    c2, t = np.cosh(grid) ** 2, np.tanh(grid)
    return dp + 2 * mu * t * p / (c2 - mu) - 4 * t**2 / (grid * (c2 - mu))


def printed_excited_pressure(params: ModelParams, grid) -> np.ndarray:
    """ell^4 P_1 from the printed excited-state formula, taken literally.

    P_1 = [ell^2 - mu sech^2]^-1 int_r^inf (G + Delta G) dr' with
    Delta G = -9 tanh^3 sech^4 / (4 pi r^2 ell^2 omega_d).
    """
    _check_mu(params)
    grid = np.asarray(grid, dtype=float)
    ell = params.ell
    omega_hat = params.omega_d * ell

    def integrand(x):
        # (G + Delta G) dr expressed per unit x
        s, t = sech(x) ** 2, np.tanh(x)
        return source_G(x, params) - 9.0 * t**3 * s**2 / (4 * math.pi * ell**2 * omega_hat * x**2)

    tail = quadcore.cumulative_tail_integral(integrand, grid)
    return ell**4 * tail / (ell**2 - params.mu * sech(grid) ** 2)


def pressure_with_g(params: ModelParams, grid, g_hat) -> np.ndarray:
    """ell^4 P for an arbitrary nondimensional <:phi_d^2:> profile ``g_hat(x)``.

    Used by the audit to compare printed formulas against the consistent
    solution built with the same g.
    """
    _check_mu(params)
    alpha = params.alpha

    def src(x):
        return source_G(x, params) + alpha * g_hat(x) * sech(x) ** 2 * np.tanh(x)

    tail = quadcore.cumulative_tail_integral(src, np.asarray(grid, dtype=float))
    return tail / (1.0 - params.mu_hat * sech(grid) ** 2)


def printed_g_hat(params: ModelParams):
    """The printed g(x) closed form, scaled by ell^2."""
    return lambda x: params.ell**2 * g_printed(x, params)


def enclosed_fluid_energy(solution: FluidSolution) -> np.ndarray:
    """4 pi int_0^x rho x'^2 dx' (trapezoid), nondimensional.

    rho falls off like 1/x, so this grows like x^2 instead of converging.
    """
    x, rho = solution.grid, solution.density
    integrand = 4 * math.pi * rho * x**2
    steps = 0.5 * (integrand[1:] + integrand[:-1]) * np.diff(x)
    return np.concatenate([[0.0], np.cumsum(steps)])
