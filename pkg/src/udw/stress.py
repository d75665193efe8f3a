"""Total stress-energy tensor of the trap, its Landau split and conservation audit.

Components live in the static orthonormal frame and are nondimensional
(``ell**4 * T``). The tensor is diagonal, so three radial profiles carry it:
energy density ``rhoE``, radial pressure ``R`` and tangential pressure
``Pperp``. Radial conservation for such a tensor reads

    dR/dx + (2/x) (R - Pperp) = 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from udw import quadcore
from udw.fluid import FluidSolution, solve_fluid
from udw.modes import BoundMode, shoot_bound_states
from udw.profiles import (
    DetectorState,
    Excited,
    Ground,
    ModelParams,
    sech,
    tanh_sech_over_x,
    tanh_sech_over_x_prime,
)

__all__ = [
    "StressComponents",
    "LandauDecomposition",
    "ConservationResult",
    "GridTooCoarseError",
    "PerturbativeError",
    "conservation_grid",
    "psi_field_pieces",
    "quantum_pieces",
    "assemble_total",
    "printed_components",
    "landau_decompose",
    "conservation_residual",
    "naive_nonconservation",
    "mixture_tensor",
    "anisotropic_energy_conditions",
]

CONSERVATION_WINDOW = (0.05, 10.0)
FD_ERROR_LIMIT = 1e-7


class GridTooCoarseError(ValueError):
    pass


class PerturbativeError(ValueError):
    pass


@dataclass(frozen=True)
class StressComponents:
    grid: np.ndarray = field(repr=False)
    rhoE: np.ndarray = field(repr=False)
    R: np.ndarray = field(repr=False)
    Pperp: np.ndarray = field(repr=False)
    state: DetectorState = Ground
    pieces: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        n = np.asarray(self.grid).shape
        for name in ("rhoE", "R", "Pperp"):
            if np.asarray(getattr(self, name)).shape != n:
                raise ValueError(f"{name} does not match the grid")

    def scaled(self, factor: float) -> "StressComponents":
        return StressComponents(
            self.grid,
            factor * self.rhoE,
            factor * self.R,
            factor * self.Pperp,
            self.state,
            {k: tuple(factor * c for c in v) for k, v in self.pieces.items()},
        )


@dataclass(frozen=True)
class LandauDecomposition:
    p: np.ndarray
    Pi: np.ndarray

    def reconstruct(self):
        """Return (R, Pperp)."""
        return self.p + self.Pi, self.p - 0.5 * self.Pi


@dataclass(frozen=True)
class ConservationResult:
    sup: float
    grid: np.ndarray = field(repr=False)
    profile: np.ndarray = field(repr=False)
    fd_error: float = 0.0


def conservation_grid(step: float = 1e-4, window=CONSERVATION_WINDOW) -> np.ndarray:
    """Uniform grid covering ``window`` with two spare points at each end."""
    lo, hi = window
    n = int(round((hi - lo) / step))
    return lo + step * np.arange(-2, n + 3)


def psi_field_pieces(grid, params: ModelParams):
    """(rhoE, R, Pperp) of the confining field alone, with V_c = -|psi_c|^4.

    omega_c^2 - m_c^2 = -1 in units of ell, so R vanishes identically.
    """
    nd = params.nondimensional()
    x = np.asarray(grid, dtype=float)
    s, t = sech(x) ** 2, np.tanh(x)
    m2 = nd.m_c**2
    w2 = nd.omega_c**2
    dpsi2 = s * t**2  # Psi'^2
    vc = -(s**2)
    rho = w2 * s + dpsi2 + m2 * s + vc
    radial = dpsi2 + (w2 - m2) * s - vc
    tangential = -dpsi2 + (w2 - m2) * s - vc
    return rho, radial, tangential


def _mode_profile(grid, params: ModelParams, mode: BoundMode | None):
    """Nondimensional Phi, Phi' and omega for the occupied mode."""
    x = np.asarray(grid, dtype=float)
    nd = params.nondimensional()
    if mode is None:
        amp = math.sqrt(3.0 / (8.0 * math.pi * nd.omega_d))
        return amp * tanh_sech_over_x(x), amp * tanh_sech_over_x_prime(x), nd.omega_d
    dphi = quadcore.derivative(mode.phi, x, order=1, step=1e-4)
    return mode.phi(x), dphi, mode.omega * mode.ell


def quantum_pieces(grid, params: ModelParams, mode: BoundMode | None = None):
    """Normal-ordered detector pieces in the singly excited state.

    Returns ``{"phi_d": (rho, R, Pperp), "phi_d_psi_c": (rho, R, Pperp)}``.
    """
    x = np.asarray(grid, dtype=float)
    nd = params.nondimensional()
    phi, dphi, omega = _mode_profile(x, params, mode)
    m2 = nd.m_d**2
    phi2, dphi2 = phi**2, dphi**2
    kin = (omega**2 - m2) * phi2
    quantum = (omega**2 * phi2 + dphi2 + m2 * phi2, dphi2 + kin, -dphi2 + kin)
    g = 2.0 * phi2
    half = 0.5 * nd.alpha * sech(x) ** 2 * g
    coupling = (half, -half, -half)
    return {"phi_d": quantum, "phi_d_psi_c": coupling}


def _fluid_for(params, state, grid, fluid_solution):
    if fluid_solution is None:
        return solve_fluid(params, state, grid)
    if fluid_solution.state != state or fluid_solution.params != params:
        raise ValueError("fluid solution was computed for different parameters or state")
    if not np.array_equal(fluid_solution.grid, grid):
        raise ValueError("fluid solution grid differs from the requested grid")
    return fluid_solution


def assemble_total(
    params: ModelParams,
    state: DetectorState = Ground,
    fluid_solution=None,
    grid=None,
    mode: BoundMode | None = None,
) -> StressComponents:
    """Sum every contribution to the total tensor for ``state``.

    ``fluid_solution`` may be omitted, in which case it is solved on
    ``grid``. Mixtures need both pure-state fluids; pass them as a
    ``(ground, excited)`` pair or let them be computed. For a mixture
    ``state.p`` is the excitation weight lambda^2 L.
    """
    if grid is None:
        grid = fluid_solution[0].grid if isinstance(fluid_solution, tuple) else (
            fluid_solution.grid if fluid_solution is not None else conservation_grid()
        )
    grid = np.asarray(grid, dtype=float)
    if state.kind == "mixture":
        pair = fluid_solution if fluid_solution is not None else (None, None)
        t0 = assemble_total(params, Ground, pair[0], grid)
        t1 = assemble_total(params, Excited, pair[1], grid, mode=mode)
        return mixture_tensor(t0, t1, 1.0, state.p, state=state)

    fluid = _fluid_for(params, state, grid, fluid_solution)
    s = sech(grid) ** 2
    mu = params.mu_hat
    pieces = {
        "psi_c": psi_field_pieces(grid, params),
        "fluid": (fluid.density, fluid.pressure, fluid.pressure),
        "psi_c_fluid": (-mu * s * fluid.density, -mu * s * fluid.pressure, -mu * s * fluid.pressure),
    }
    if state.kind == "excited":
        pieces.update(quantum_pieces(grid, params, mode))
    rho = sum(p[0] for p in pieces.values())
    radial = sum(p[1] for p in pieces.values())
    tangential = sum(p[2] for p in pieces.values())
    return StressComponents(grid, rho, radial, tangential, state, pieces)


def printed_components(params: ModelParams, fluid_solution: FluidSolution) -> StressComponents:
    """Ground-state components from the printed closed forms, taken literally.

    rho0 = 2 m_c^2 sech^2 + (1 - mu sech^2) rho,
    R0 = -2 sech^4 + (1 - mu sech^2) P,
    P0 = -2 sech^2 + (1 - mu sech^2) P.
    """
    if fluid_solution.state != Ground:
        raise ValueError("printed components exist for the ground state only")
    nd = params.nondimensional()
    x = fluid_solution.grid
    s = sech(x) ** 2
    w = 1.0 - nd.mu * s
    return StressComponents(
        x,
        2 * nd.m_c**2 * s + w * fluid_solution.density,
        -2 * s**2 + w * fluid_solution.pressure,
        -2 * s + w * fluid_solution.pressure,
        Ground,
    )


def landau_decompose(components: StressComponents) -> LandauDecomposition:
    R, P = components.R, components.Pperp
    return LandauDecomposition(p=(R + 2 * P) / 3.0, Pi=2.0 * (R - P) / 3.0)


def _radial_divergence(x, radial, tangential):
    h = x[1] - x[0]
    if not np.allclose(np.diff(x), h, rtol=1e-8, atol=0):
        raise ValueError("conservation check needs a uniform grid")
    d = quadcore.derivative_grid(radial, h)
    return d + 2.0 / x * (radial - tangential), d


def conservation_residual(
    components: StressComponents,
    window=CONSERVATION_WINDOW,
    fd_error_limit: float = FD_ERROR_LIMIT,
) -> ConservationResult:
    """sup over ``window`` of |dR/dx + (2/x)(R - Pperp)|.

    dR/dx comes from fourth-order differences; the same stencil on every
    second point gives a Richardson estimate of its error. When that
    estimate exceeds ``fd_error_limit`` the grid is rejected.
    """
    x = np.asarray(components.grid, dtype=float)
    res, d = _radial_divergence(x, components.R, components.Pperp)
    coarse = quadcore.derivative_grid(components.R[::2], 2 * (x[1] - x[0]))
    inside = (x >= window[0] - 1e-12) & (x <= window[1] + 1e-12)
    if inside.sum() < 5:
        raise GridTooCoarseError("fewer than five grid points inside the check window")
    even = inside[::2].copy()
    even[:2] = even[-2:] = False
    fd_error = float(np.max(np.abs(d[::2][even] - coarse[even]))) / 15.0 if even.any() else math.inf
    if fd_error > fd_error_limit:
        raise GridTooCoarseError(
            f"estimated finite-difference error {fd_error:.2e} exceeds {fd_error_limit:.1e}; refine the grid"
        )
    return ConservationResult(
        sup=float(np.max(np.abs(res[inside]))),
        grid=x[inside],
        profile=res[inside],
        fd_error=fd_error,
    )


def naive_nonconservation(params: ModelParams, mode: BoundMode | None = None, grid=None):
    """Divergence of the detector tensor in a prescribed potential V = alpha sech^2.

    Returns ``(divergence, source, difference)`` on the check window where
    ``source = -g V' / 2``. Without the fluid there is nothing to absorb it.
    The occupied mode defaults to the analytic one for alpha = -6 and to the
    lowest shooting solution otherwise; a trap with no bound level leaves
    nothing to excite and gives zero.
    """
    x = conservation_grid() if grid is None else np.asarray(grid, dtype=float)
    inside = (x >= CONSERVATION_WINDOW[0] - 1e-12) & (x <= CONSERVATION_WINDOW[1] + 1e-12)
    if mode is None and params.alpha != -6.0:
        nd = params.nondimensional()
        levels = shoot_bound_states(lambda t: nd.alpha * sech(t) ** 2, nd.m_d, ell=params.ell)
        if not levels:
            zero = np.zeros(int(inside.sum()))
            return zero, zero.copy(), zero.copy()
        mode = levels[0]
    pieces = quantum_pieces(x, params, mode)
    radial = pieces["phi_d"][1] + pieces["phi_d_psi_c"][1]
    tangential = pieces["phi_d"][2] + pieces["phi_d_psi_c"][2]
    div, _ = _radial_divergence(x, radial, tangential)
    phi, _, _ = _mode_profile(x, params, mode)
    g = 2.0 * phi**2
    s = sech(x) ** 2
    dV = -2.0 * params.alpha * s * np.tanh(x)
    source = -0.5 * g * dV
    return div[inside], source[inside], div[inside] - source[inside]


def mixture_tensor(
    T0: StressComponents,
    T1: StressComponents,
    lambda_coupling: float,
    L: float,
    state: DetectorState | None = None,
) -> StressComponents:
    """(1 - lambda^2 L) T0 + lambda^2 L T1."""
    weight = lambda_coupling**2 * L
    if not 0.0 <= weight <= 1.0:
        raise PerturbativeError(f"lambda^2 L = {weight:g} lies outside [0, 1]; perturbation theory fails")
    if not np.array_equal(T0.grid, T1.grid):
        raise ValueError("tensors live on different grids")
    if state is None:
        state = DetectorState("mixture", weight)

    def mix(a, b):
        return (1.0 - weight) * a + weight * b

    return StressComponents(
        T0.grid, mix(T0.rhoE, T1.rhoE), mix(T0.R, T1.R), mix(T0.Pperp, T1.Pperp), state
    )


def anisotropic_energy_conditions(components: StressComponents) -> dict:
    """Minimum over the grid of each anisotropic energy-condition margin."""
    rho, R, P = components.rhoE, components.R, components.Pperp
    margins = {
        "rho": rho,
        "rho_plus_R": rho + R,
        "rho_plus_Pperp": rho + P,
        "rho_plus_R_plus_2Pperp": rho + R + 2 * P,
        "rho_minus_absR": rho - np.abs(R),
        "rho_minus_absPperp": rho - np.abs(P),
    }
    return {k: float(np.min(v)) for k, v in margins.items()}
