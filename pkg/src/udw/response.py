"""Leading-order excitation probability of the trapped detector.

Inserting the massless vacuum Wightman function in momentum space and doing
the Gaussian time integrals exactly turns the spacetime double integral
into one radial k quadrature,

    L = T^2 / (2 pi) int_0^inf k exp(-T^2 (Omega + k)^2) |F(k)|^2 dk,

with F the three-dimensional Fourier transform of the spatial smearing.
Lengths and times share one unit; ``T`` and ``ell`` are in it.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.special import erfc

from udw.modes import BoundMode, analytic_mode
from udw.profiles import ModelParams
from udw.quadcore import IntegrationError

__all__ = [
    "SwitchingParams",
    "ResponseResult",
    "ResponseTable",
    "PerturbativeRegimeError",
    "form_factor",
    "form_factor_analytic",
    "excitation_probability",
    "pointlike_probability",
    "pointlike_asymptote",
    "response_curve",
    "final_state",
]

FORM_KINDS = ("mode", "normalized", "pointlike")
_GL_X, _GL_W = np.polynomial.legendre.leggauss(10)
_R_EXTENT = 36.0  # radial cutoff in units of ell; r Phi ~ exp(-r/ell)
_K_EXTENT = 25.0  # |F|^2 falls like exp(-pi k ell)


class PerturbativeRegimeError(ValueError):
    pass


@dataclass(frozen=True)
class SwitchingParams:
    T: float
    lambda_coupling: float = 1.0
    gap: float = 0.0

    def __post_init__(self):
        if not self.T > 0:
            raise ValueError("switching width T must be positive")


@dataclass(frozen=True)
class ResponseResult:
    L: float
    gap: float
    T: float
    ell: float | None
    form: str

    def __post_init__(self):
        if self.L < 0:
            raise ValueError("negative excitation probability")


@dataclass(frozen=True)
class ResponseTable:
    gapT: np.ndarray
    columns: dict

    def names(self):
        return ["gapT", *self.columns]


def _panel_nodes(a: float, b: float, width: float):
    n = max(1, int(math.ceil((b - a) / width)))
    edges = np.linspace(a, b, n + 1)
    half = 0.5 * np.diff(edges)[:, None]
    nodes = (0.5 * (edges[:-1] + edges[1:]))[:, None] + half * _GL_X
    weights = half * _GL_W
    return nodes.ravel(), weights.ravel()


def _radial_rule(ell: float, k_max: float):
    width = min(0.5 * ell, 2.0 / max(k_max, 1e-300))
    return _panel_nodes(0.0, _R_EXTENT * ell, width)


def _form_factor_values(k, mode: BoundMode):
    k = np.atleast_1d(np.asarray(k, dtype=float))
    if np.any(k < 0):
        raise ValueError("wavenumber must be nonnegative")
    r, w = _radial_rule(mode.ell, float(k.max()))
    weighted = w * r * mode.profile(r)
    small = k * mode.ell < 1e-6
    kr = np.outer(k, r)
    # sin(kr)/k, with its series where k is tiny
    kernel = np.where(
        small[:, None],
        r * (1.0 - kr**2 / 6.0),
        np.sin(kr) / np.where(small, 1.0, k)[:, None],
    )
    return 4.0 * math.pi * (kernel @ weighted)


def form_factor(k, mode: BoundMode):
    """F(k) = (4 pi / k) int_0^inf r sin(k r) Phi(r) dr, for scalar or array k."""
    out = _form_factor_values(k, mode)
    return float(out[0]) if np.ndim(k) == 0 else out


def form_factor_analytic(k, params: ModelParams):
    """Closed form for the alpha = -6 mode: F(0) sech(pi k ell / 2)."""
    ell = params.ell
    f0 = 2.0 * math.pi**2 * ell**2 * math.sqrt(3.0 / (8.0 * math.pi * ell * params.omega_d))
    return f0 / np.cosh(0.5 * math.pi * np.asarray(k, dtype=float) * ell)


def pointlike_probability(gap: float, T: float) -> float:
    """Closed form of the reduction with F = 1.

    exp(-a^2) / (4 pi) - a erfc(a) / (4 sqrt(pi)) with a = Omega T; for
    a < 0 this is the familiar |a| (1 + erf|a|) / (4 sqrt(pi)) + exp(-a^2) / (4 pi).
    """
    if not T > 0:
        raise ValueError("T must be positive")
    a = gap * T
    return math.exp(-a * a) / (4.0 * math.pi) - a * erfc(a) / (4.0 * math.sqrt(math.pi))


def pointlike_asymptote(gap: float, T: float) -> float:
    """|Omega| T / (2 sqrt(pi)) for Omega < 0, zero otherwise."""
    return abs(gap) * T / (2.0 * math.sqrt(math.pi)) if gap < 0 else 0.0


def _k_window(gap: float, T: float, ell: float | None, k_scale: float):
    hi = max(0.0, -gap) + 12.0 / T
    if ell is not None:
        hi = min(hi, _K_EXTENT / ell)
    return hi * k_scale


def _k_integral(gap, T, ell, factor, k_hi, panels_per_unit, cache=None):
    width = 0.5 * (1.0 / T if ell is None else min(1.0 / T, 1.0 / ell)) / panels_per_unit
    k, w = _panel_nodes(0.0, k_hi, width)
    key = (k_hi, width)
    if cache is not None and key in cache:
        f = cache[key]
    else:
        f = factor(k)
        if cache is not None:
            cache[key] = f
    integrand = k * np.exp(-((T * (gap + k)) ** 2)) * f
    return T * T / (2.0 * math.pi) * float(integrand @ w)


def excitation_probability(
    gap: float,
    T: float,
    mode: BoundMode | None = None,
    form: str = "mode",
    rel_tol: float = 1e-9,
    abs_tol: float = 1e-30,
    k_scale: float = 1.0,
    cache: dict | None = None,
) -> ResponseResult:
    """Leading-order excitation probability L for gap ``Omega`` and width ``T``.

    ``form`` chooses the smearing: ``"mode"`` uses the bound mode's own form
    factor, ``"normalized"`` divides it by F(0) so only its shape enters, and
    ``"pointlike"`` sets F = 1. ``k_scale`` stretches the k cutoff, which is
    how truncation invariance is checked. Differences below ``abs_tol`` are
accepted whatever the relative size, since such L are zero in practice.
``cache`` may be a dict private
    to one mode and form; form-factor samples are reused through it.
    """
    if form not in FORM_KINDS:
        raise ValueError(f"form must be one of {FORM_KINDS}")
    if not T > 0:
        raise ValueError("T must be positive")
    if form != "pointlike" and mode is None:
        raise ValueError("a bound mode is needed unless form='pointlike'")
    ell = None if form == "pointlike" else mode.ell
    if form == "pointlike":

        def factor(k):
            return np.ones_like(k)

    else:
        scale = 1.0
        if form == "normalized":
            scale = 1.0 / float(_form_factor_values(0.0, mode)[0]) ** 2

        def factor(k):
            return scale * _form_factor_values(k, mode) ** 2

    k_hi = _k_window(gap, T, ell, k_scale)
    coarse = _k_integral(gap, T, ell, factor, k_hi, 1, cache)
    fine = _k_integral(gap, T, ell, factor, k_hi, 2, cache)
    err = abs(fine - coarse)
    if err > rel_tol * abs(fine) and err > abs_tol:
        raise IntegrationError("k quadrature did not converge", fine, err)
    return ResponseResult(L=max(fine, 0.0), gap=gap, T=T, ell=ell, form=form)


def response_curve(ell_values, gapT_grid, m_d: float, form: str = "mode") -> ResponseTable:
    """L against Omega T, one column per ell, plus the pointlike closed form.

    For each grid value s the gap is fixed at sign(s) omega_d(ell) and the
    switching width at |s| / omega_d, so the detector sees its own level
    spacing. At s = 0 the switching shrinks to nothing and L = 0.
    """
    s = np.asarray(gapT_grid, dtype=float)
    tasks = []
    for ell in ell_values:
        params = ModelParams(ell=float(ell), m_d=m_d)
        mode = analytic_mode(params)
        cache: dict = {}
        tasks.extend((params.omega_d, si, mode, cache) for si in s)

    def run(task):
        omega, si, mode, cache = task
        if si == 0.0:
            return 0.0
        return excitation_probability(math.copysign(omega, si), abs(si) / omega, mode, form, cache=cache).L

    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        values = np.array(list(pool.map(run, tasks)))
    columns = {
        f"ell={float(ell):g}": values[i * s.size : (i + 1) * s.size] for i, ell in enumerate(ell_values)
    }
    columns["pointlike"] = np.array([pointlike_probability(si, 1.0) for si in s])
    return ResponseTable(gapT=s, columns=columns)


def worker_count() -> int:
    """Thread cap from ``UDW_THREADS``, else the CPU count."""
    env = os.environ.get("UDW_THREADS")
    if env:
        n = int(env)
        if n < 1:
            raise ValueError("UDW_THREADS must be a positive integer")
        return n
    return os.cpu_count() or 1


def final_state(lambda_coupling: float, L: float):
    """Detector weights (ground, excited) after the interaction."""
    weight = lambda_coupling**2 * L
    if weight < 0:
        raise ValueError("lambda^2 L must be nonnegative")
    if weight >= 1:
        raise PerturbativeRegimeError(f"perturbative regime violated: lambda^2 L = {weight:g}")
    return 1.0 - weight, weight
