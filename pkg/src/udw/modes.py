"""Bound modes of the trapped detector field.

Radial problem for u = r Phi(r) in units of ell:

    u'' = (V(x) + l(l+1)/x^2 - lam) u,     u(0) = 0,  u -> 0 at infinity,

with ``lam`` the eigenvalue of L = -laplacian + V and mode frequency
omega^2 = m^2 + lam.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import simpson
from scipy.interpolate import CubicSpline
from scipy.optimize import brentq

from udw.profiles import ModelParams, tanh_sech_over_x, tanh_sech_over_x_prime

__all__ = [
    "BoundMode",
    "ShootingError",
    "UnstableModeError",
    "analytic_phi1",
    "analytic_phi1_prime",
    "analytic_mode",
    "kg_norm",
    "shoot_bound_states",
    "smearing_function",
    "switching",
]


class ShootingError(RuntimeError):
    pass


class UnstableModeError(ShootingError):
    pass


@dataclass(frozen=True)
class BoundMode:
    """A normalized discrete mode.

    ``phi`` evaluates the nondimensional profile ``ell * Phi(x * ell)``, which
    is the same mode in a trap with ``ell = 1`` and frequency ``omega * ell``;
    :meth:`profile` returns it in physical units. Sampled modes also carry
    the radial grid and ``u = x * phi`` values they were built from.
    """

    l: int
    eigenvalue: float
    omega: float
    nodes: int
    phi: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    ell: float = 1.0
    x: np.ndarray | None = field(default=None, repr=False)
    u: np.ndarray | None = field(default=None, repr=False)

    def profile(self, r):
        """Phi(r) for radii ``r`` in physical length."""
        return self.phi(np.asarray(r, dtype=float) / self.ell) / self.ell


# --- the analytic mode of the alpha = -6 trap -----------------------------


def analytic_phi1(x, params: ModelParams):
    """Klein-Gordon normalized Phi_1 at x = r/ell, in physical units.

    Eigenvalue -1/ell^2; omega_d = sqrt(m_d^2 - 1/ell^2).
    """
    amp = math.sqrt(3.0 / (8.0 * math.pi * params.ell**3 * params.omega_d))
    return amp * tanh_sech_over_x(x)


def analytic_phi1_prime(x, params: ModelParams):
    """dPhi_1/dr."""
    amp = math.sqrt(3.0 / (8.0 * math.pi * params.ell**3 * params.omega_d))
    return amp * tanh_sech_over_x_prime(x) / params.ell


def analytic_mode(params: ModelParams) -> BoundMode:
    nd = params.nondimensional()
    return BoundMode(
        l=0,
        eigenvalue=-1.0 / params.ell**2,
        omega=params.omega_d,
        nodes=0,
        phi=lambda x: analytic_phi1(x, nd),
        ell=params.ell,
    )


def kg_norm(mode: BoundMode, x_max: float = 40.0, n: int = 40001) -> float:
    """2 omega int |Phi|^2 d^3x, evaluated by Simpson's rule."""
    x = np.linspace(0.0, x_max, n)
    u = x * mode.phi(x)
    omega_hat = mode.omega * mode.ell
    return float(2.0 * omega_hat * 4.0 * math.pi * simpson(u**2, x=x))


# --- switching and smearing ---------------------------------------------------


def switching(t, T_switch: float):
    """Gaussian switching exp(-t^2 / 2T^2)."""
    if T_switch <= 0:
        raise ValueError("T_switch must be positive")
    return np.exp(-np.asarray(t, dtype=float) ** 2 / (2.0 * T_switch**2))


def smearing_function(t, x, params: ModelParams, T_switch: float):
    """Spacetime smearing Lambda = switching(t) * Phi_1(r)."""
    return switching(t, T_switch) * analytic_phi1(x, params)


# --- shooting -----------------------------------------------------------------


def _rk4_transfer(coef: np.ndarray, lam: np.ndarray, h: float):
    """Per-step RK4 propagators for (u, u')' = [[0, 1], [c(x) - lam, 0]] (u, u').

    ``coef`` samples c at every node and midpoint (coef[2i] at node i,
    coef[2i+1] halfway to node i+1). ``h`` may be negative. The RK4 update of
    a linear system is itself linear; for this coefficient matrix the step
    matrix has the closed form below. Returns its four entries, each of shape
    (n_steps, n_lam).
    """
    n_steps = (coef.size - 1) // 2
    a = coef[0:-1:2][:n_steps, None] - lam[None, :]
    b = coef[1::2][:n_steps, None] - lam[None, :]
    c = coef[2::2][:n_steps, None] - lam[None, :]
    h2 = h * h
    m00 = 1 + h2 * (a + 2 * b) / 6 + h2 * h2 * a * b / 24
    m01 = h + h2 * h * b / 6 + 0 * a
    m10 = h * (a + 4 * b + c) / 6 + h2 * h * b * (a + c) / 12
    m11 = 1 + h2 * (2 * b + c) / 6 + h2 * h2 * b * c / 24
    return m00, m01, m10, m11


def _chain(steps):
    """Ordered product steps[n-1] @ ... @ steps[0], by pairwise reduction."""
    m00, m01, m10, m11 = steps
    while m00.shape[0] > 1:
        if m00.shape[0] % 2:
            pad = np.ones((1,) + m00.shape[1:]), np.zeros((1,) + m00.shape[1:])
            m00 = np.concatenate([m00, pad[0]])
            m01 = np.concatenate([m01, pad[1]])
            m10 = np.concatenate([m10, pad[1]])
            m11 = np.concatenate([m11, pad[0]])
        a00, a01, a10, a11 = m00[1::2], m01[1::2], m10[1::2], m11[1::2]
        b00, b01, b10, b11 = m00[0::2], m01[0::2], m10[0::2], m11[0::2]
        m00 = a00 * b00 + a01 * b10
        m01 = a00 * b01 + a01 * b11
        m10 = a10 * b00 + a11 * b10
        m11 = a10 * b01 + a11 * b11
    return m00[0], m01[0], m10[0], m11[0]


def _propagate(steps: np.ndarray, y0: np.ndarray) -> np.ndarray:
    """All intermediate states for a single eigenvalue; y0 has shape (2,)."""
    m00, m01, m10, m11 = (m[:, 0].tolist() for m in steps)
    out = np.empty((len(m00) + 1, 2))
    out[0] = y0
    u, du = float(y0[0]), float(y0[1])
    for i in range(len(m00)):
        u, du = m00[i] * u + m01[i] * du, m10[i] * u + m11[i] * du
        out[i + 1] = (u, du)
    return out


class _Shooter:
    def __init__(self, potential, l, x_max, step, x_match):
        self.l = l
        self.step = step
        # l = 0 starts at the origin (u = 0, u' = 1); otherwise one step out
        # with the regular series u ~ x^(l+1)
        x0 = 0.0 if l == 0 else step
        n_out = int(round((x_match - x0) / step))
        n_in = int(round((x_max - x_match) / step))
        self.x_out = x0 + step * np.arange(n_out + 1)
        self.x_in = x_max - step * np.arange(n_in + 1)
        self.x_match = self.x_out[-1]

        def coef(xs):
            xs = np.asarray(xs, dtype=float)
            c = np.asarray(potential(xs), dtype=float) + np.zeros_like(xs)
            if l:
                c = c + l * (l + 1) / xs**2
            return c

        self.c_out = coef(x0 + 0.5 * step * np.arange(2 * n_out + 1))
        self.c_in = coef(x_max - 0.5 * step * np.arange(2 * n_in + 1))
        self.v_far = float(coef(np.array([x_max]))[0])

    def start_out(self):
        l, x0 = self.l, self.x_out[0]
        if l == 0:
            return np.array([0.0, 1.0])
        return np.array([x0 ** (l + 1), (l + 1) * x0**l])

    def start_in(self, lam: float):
        return np.array([1.0, -math.sqrt(max(self.v_far - lam, 0.0))])

    def mismatch(self, lam, chunk: int = 32):
        """Normalized Wronskian of the inner and outer solutions at the match point.

        Continuous in ``lam`` and zero exactly at eigenvalues.
        """
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        if lam.size > chunk:
            return np.concatenate(
                [self.mismatch(lam[i : i + chunk]) for i in range(0, lam.size, chunk)]
            )
        o00, o01, o10, o11 = _chain(_rk4_transfer(self.c_out, lam, self.step))
        i00, i01, i10, i11 = _chain(_rk4_transfer(self.c_in, lam, -self.step))
        u0, du0 = self.start_out()
        a, da = o00 * u0 + o01 * du0, o10 * u0 + o11 * du0
        kappa = np.sqrt(np.maximum(self.v_far - lam, 0.0))
        b, db = i00 - i01 * kappa, i10 - i11 * kappa
        w = a * db - da * b
        return w / (np.hypot(a, da) * np.hypot(b, db))

    def solve(self, lam: float):
        lam_arr = np.array([lam])
        out = _propagate(_rk4_transfer(self.c_out, lam_arr, self.step), self.start_out())
        inn = _propagate(_rk4_transfer(self.c_in, lam_arr, -self.step), self.start_in(lam))
        return out[:, 0], inn[:, 0]


def _count_nodes(u: np.ndarray) -> int:
    significant = u[np.abs(u) > 1e-8 * np.max(np.abs(u))]
    return int(np.count_nonzero(np.diff(np.sign(significant)) != 0))


def shoot_bound_states(
    potential: Callable[[np.ndarray], np.ndarray],
    mass: float,
    l: int = 0,
    x_max: float = 25.0,
    tol: float = 1e-10,
    step: float = 1e-3,
    x_match: float = 1.0,
    scan_step: float = 0.05,
    ell: float = 1.0,
) -> list[BoundMode]:
    """All bound states of ``-laplacian + potential`` in angular channel ``l``.

    ``potential`` is given in units of 1/ell^2 as a function of x = r/ell and
    ``mass`` in units of 1/ell. Eigenvalues are bracketed by a scan of the
    matching Wronskian with spacing ``scan_step`` and refined by batched
    multisection to ``tol``. Returned modes are Klein-Gordon normalized and
    sorted by eigenvalue.
    """
    if l < 0:
        raise ValueError("l must be nonnegative")
    shooter = _Shooter(potential, l, x_max, step, x_match)
    probe = np.linspace(step, x_max, 20001)
    v_min = float(np.min(np.asarray(potential(probe), dtype=float)))
    if v_min >= 0:
        return []

    lo, hi = v_min + 1e-9, -1e-7
    n_scan = max(2, int(math.ceil((hi - lo) / scan_step)) + 1)
    lam_scan = np.linspace(lo, hi, n_scan)
    w = shooter.mismatch(lam_scan)
    brackets = [
        (lam_scan[i], lam_scan[i + 1])
        for i in range(n_scan - 1)
        if np.sign(w[i]) != np.sign(w[i + 1])
    ]

    modes = []
    for a, b in brackets:
        lam = _refine(shooter, a, b, tol)
        if lam <= -(mass**2):
            raise UnstableModeError(
                f"eigenvalue {lam:.6g} <= -m^2 = {-mass**2:.6g}: unstable mode out of scope"
            )
        modes.append(_build_mode(shooter, lam, mass, l, x_max, ell))

    modes.sort(key=lambda m: m.eigenvalue)
    for k, mode in enumerate(modes):
        if mode.nodes != k:
            raise ShootingError(
                f"mode {k} at eigenvalue {mode.eigenvalue:.6g} has {mode.nodes} nodes; "
                f"a level was probably missed, reduce scan_step (now {scan_step})"
            )
    return modes


def _refine(shooter: _Shooter, a: float, b: float, tol: float) -> float:
    return brentq(lambda lam: float(shooter.mismatch(lam)[0]), a, b, xtol=tol, rtol=4 * np.finfo(float).eps)


def _build_mode(shooter: _Shooter, lam: float, mass: float, l: int, x_max: float, ell: float):
    uo, ui = shooter.solve(lam)
    ui = ui * (uo[-1] / ui[-1])
    x = np.concatenate([shooter.x_out, shooter.x_in[::-1][1:]])
    u = np.concatenate([uo, ui[::-1][1:]])
    if x[0] > 0:
        x, u = np.concatenate([[0.0], x]), np.concatenate([[0.0], u])
    omega_hat = math.sqrt(mass**2 + lam)
    norm = 2.0 * omega_hat * 4.0 * math.pi * simpson(u**2, x=x)
    u = u / math.sqrt(norm)
    if u[np.argmax(np.abs(u))] < 0:
        u = -u
    spline = CubicSpline(x, u)
    dspline = spline.derivative()

    def phi(xs):
        xs = np.asarray(xs, dtype=float)
        small = xs < shooter.step
        safe = np.where(small, 1.0, xs)
        out = np.where(small, dspline(np.minimum(xs, shooter.step)), spline(safe) / safe)
        out = np.where(xs > x_max, 0.0, out)
        return out if out.ndim else float(out)

    return BoundMode(
        l=l,
        eigenvalue=lam / ell**2,
        omega=omega_hat / ell,
        nodes=_count_nodes(u[1:-1]),
        phi=phi,
        ell=ell,
        x=x,
        u=u,
    )
