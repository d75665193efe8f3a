"""Model parameters and the analytic background profiles.

Radii are passed as ``x = r / ell``. Functions return values in physical
units built from ``ell`` (``1/ell**2`` for potentials, ``1/ell**4`` for the
fluid Lagrangian). Downstream solvers call them with
:meth:`ModelParams.nondimensional`, where ``ell = 1``, so that every number
they produce is already the scaled ``ell**k * quantity``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

__all__ = [
    "ModelParams",
    "ConfiningField",
    "DetectorState",
    "Ground",
    "Excited",
    "Mixture",
    "parse_state",
    "sech",
    "tanhc",
    "trap_potential",
    "f_profile",
    "F_c_profile",
    "V_c",
    "confining_field",
    "fluid_onshell_lagrangian",
    "g_excited",
    "g_printed",
]

SERIES_CUTOFF = 1e-3


class ParameterError(ValueError):
    pass


@dataclass(frozen=True)
class ModelParams:
    """Parameters of one detector instance.

    ``mu`` carries units of length squared, the masses units of 1/length.
    ``eta`` selects the on-shell fluid Lagrangian ``-rho + 3 eta P``.
    """

    ell: float = 1.0
    mu: float = 0.2
    eta: float = 0.0
    alpha: float = -6.0
    m_c: float = 2.0
    m_d: float = 5.0

    def __post_init__(self):
        for name in ("ell", "mu", "eta", "alpha", "m_c", "m_d"):
            if not math.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")
        if self.ell <= 0:
            raise ParameterError("ell must be positive")

    @property
    def mu_hat(self) -> float:
        return self.mu / self.ell**2

    @property
    def omega_c(self) -> float:
        if self.m_c * self.ell <= 1:
            raise ParameterError("m_c * ell must exceed 1 for a real omega_c")
        return math.sqrt(self.m_c**2 - 1.0 / self.ell**2)

    @property
    def omega_d(self) -> float:
        if self.m_d * self.ell <= 1:
            raise ParameterError("m_d * ell must exceed 1: the bound mode would be unstable")
        return math.sqrt(self.m_d**2 - 1.0 / self.ell**2)

    def nondimensional(self) -> "ModelParams":
        """The same model expressed with ``ell = 1``."""
        return ModelParams(
            ell=1.0,
            mu=self.mu_hat,
            eta=self.eta,
            alpha=self.alpha,
            m_c=self.m_c * self.ell,
            m_d=self.m_d * self.ell,
        )

    def validate(self) -> "ModelParams":
        """Check every invariant the solvers rely on; returns ``self``."""
        if not 0 < self.mu < self.ell**2:
            raise ParameterError(
                f"mu must lie in (0, ell^2) = (0, {self.ell**2:g}); got {self.mu:g}"
            )
        if not 0 <= self.eta <= 1:
            raise ParameterError(f"eta must lie in [0, 1]; got {self.eta:g}")
        self.omega_c
        self.omega_d
        return self

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class DetectorState:
    kind: str
    p: float = 0.0

    def __post_init__(self):
        if self.kind not in ("ground", "excited", "mixture"):
            raise ValueError(f"unknown detector state {self.kind!r}")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("mixture probability must lie in [0, 1]")

    def __str__(self):
        return f"mixture:{self.p!r}" if self.kind == "mixture" else self.kind


Ground = DetectorState("ground")
Excited = DetectorState("excited")


def Mixture(p: float) -> DetectorState:
    return DetectorState("mixture", float(p))


def parse_state(text: str) -> DetectorState:
    """Parse ``ground``, ``excited`` or ``mixture:<p>``."""
    text = text.strip().lower()
    if text == "ground":
        return Ground
    if text == "excited":
        return Excited
    if text.startswith("mixture:"):
        return Mixture(float(text.split(":", 1)[1]))
    raise ValueError(f"cannot parse detector state {text!r}")


# --- elementary functions with the x -> 0 limits handled -------------------


def sech(x):
    """1/cosh written to stay finite for large |x|."""
    e = np.exp(-np.abs(np.asarray(x, dtype=float)))
    out = 2.0 * e / (1.0 + e * e)
    return out if out.ndim else float(out)


def _series_switch(x, exact: Callable, series: Callable):
    x = np.asarray(x, dtype=float)
    small = np.abs(x) < SERIES_CUTOFF
    safe = np.where(small, 1.0, x)
    out = np.where(small, series(x), exact(safe))
    return out if out.ndim else float(out)


def tanhc(x):
    """tanh(x)/x, equal to 1 at the origin."""
    return _series_switch(x, lambda t: np.tanh(t) / t, lambda t: 1 - t**2 / 3 + 2 * t**4 / 15)


def tanhc_prime(x):
    return _series_switch(
        x,
        lambda t: (sech(t) ** 2 * t - np.tanh(t)) / t**2,
        lambda t: -2 * t / 3 + 8 * t**3 / 15,
    )


def tanh_sech_over_x(x):
    """tanh(x) sech(x) / x, the radial shape of the bound mode."""
    return _series_switch(
        x,
        lambda t: np.tanh(t) * sech(t) / t,
        lambda t: 1 - 5 * t**2 / 6 + 61 * t**4 / 120,
    )


def tanh_sech_over_x_prime(x):
    def exact(t):
        th, sh = np.tanh(t), sech(t)
        # d/dt (tanh sech) = sech^3 - tanh^2 sech
        return ((sh**3 - th**2 * sh) * t - th * sh) / t**2

    return _series_switch(x, exact, lambda t: -5 * t / 3 + 61 * t**3 / 30)


# --- background profiles ----------------------------------------------------


def trap_potential(x, params: ModelParams):
    """Effective potential alpha |psi_c|^2 felt by the detector field."""
    return params.alpha * sech(x) ** 2 / params.ell**2


def f_profile(x, params: ModelParams):
    """f = mu L_fluid + (alpha/2) g + F_c for the sech profile of psi_c."""
    return (-2.0 * sech(x) ** 2 - 2.0 * tanhc(x)) / params.ell**2


def F_c_profile(x, params: ModelParams):
    """dV_c/d|psi_c|^2 = -2 |psi_c|^2 with V_c = -|psi_c|^4."""
    return -2.0 * sech(x) ** 2 / params.ell**2


def V_c(psi_sq):
    return -(np.asarray(psi_sq, dtype=float) ** 2)


@dataclass(frozen=True)
class ConfiningField:
    envelope: Callable
    omega_c: float
    lambda_c: float


def confining_field(params: ModelParams) -> ConfiningField:
    """psi_c = exp(-i omega_c t) sech(r/ell) / ell and its frequency."""
    ell = params.ell
    return ConfiningField(
        envelope=lambda x: sech(x) / ell,
        omega_c=params.omega_c,
        lambda_c=1.0 / ell,
    )


def g_excited(x, params: ModelParams):
    """<1|:phi_d^2:|1> = 2 Phi_1^2 for the singly occupied bound mode."""
    ell = params.ell
    pref = 3.0 / (4.0 * math.pi * ell**3 * params.omega_d)
    return pref * tanh_sech_over_x(x) ** 2


def g_printed(x, params: ModelParams):
    """Literal closed form 6 csch^4(2x) sinh^6(x) / (pi r^2 omega_d ell).

    Kept only for the audit; it evaluates to Phi_1^2.
    """
    x = np.asarray(x, dtype=float)
    ell = params.ell
    r = x * ell
    out = 6.0 * np.sinh(x) ** 6 / np.sinh(2 * x) ** 4 / (math.pi * r**2 * params.omega_d * ell)
    return out if out.ndim else float(out)


def g_for_state(x, params: ModelParams, state: DetectorState):
    if state.kind == "ground":
        return np.zeros_like(np.asarray(x, dtype=float)) + 0.0
    if state.kind == "excited":
        return g_excited(x, params)
    raise ValueError("g is defined for pure states only; assemble mixtures from both")


def fluid_onshell_lagrangian(x, params: ModelParams, state: DetectorState = Ground):
    """On-shell L_fluid fixed by requiring the sech profile to solve its EOM."""
    if params.mu <= 0:
        raise ParameterError("mu must be positive")
    ground = -2.0 / (params.mu * params.ell**2) * tanhc(x)
    if state.kind == "ground":
        return ground
    return ground - params.alpha / (2.0 * params.mu) * g_for_state(x, params, state)
