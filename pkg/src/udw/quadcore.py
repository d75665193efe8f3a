"""Numerics kernel: quadrature, finite differences, root bracketing and g0.

Every routine here is a pure function of its arguments.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy import integrate as _integ

__all__ = [
    "QuadResult",
    "SpecialConstants",
    "IntegrationError",
    "RootBracketError",
    "integrate",
    "integrate_tail",
    "cumulative_tail_integral",
    "derivative",
    "derivative_grid",
    "bisect_root",
    "special_constants",
    "g0_constant",
]

DEFAULT_REL_TOL = 1e-10
DEFAULT_ABS_TOL = 1e-12


class IntegrationError(RuntimeError):
    """Quadrature failed to meet its tolerance.

    The best available estimate and its error are kept on the exception so
    callers can decide whether the result is still usable.
    """

    def __init__(self, message: str, value: float, abs_error: float):
        super().__init__(f"{message} (best estimate {value!r}, error {abs_error:.3e})")
        self.value = value
        self.abs_error = abs_error


class RootBracketError(ValueError):
    pass


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_error_estimate: float

    def __post_init__(self):
        if not self.abs_error_estimate >= 0:
            raise ValueError("abs_error_estimate must be nonnegative")

    def __float__(self):
        return float(self.value)


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
    limit: int = 200,
) -> QuadResult:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    Raises :class:`IntegrationError` when QUADPACK reports that the
    subdivision limit was hit or the tolerance could not be reached.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _integ.IntegrationWarning)
        value, err, info = _integ.quad(
            f, a, b, epsabs=abs_tol, epsrel=rel_tol, limit=limit, full_output=1
        )[:3]
    if not np.isfinite(value):
        raise IntegrationError("integrand produced a non-finite result", value, err)
    if err > max(abs_tol, rel_tol * abs(value)) and info["last"] >= limit:
        raise IntegrationError("maximum subdivision depth reached", value, err)
    return QuadResult(float(value), float(abs(err)))


def integrate_tail(
    f: Callable[[float], float],
    a: float,
    decay_scale: float,
    rel_tol: float = DEFAULT_REL_TOL,
    abs_tol: float = DEFAULT_ABS_TOL,
) -> QuadResult:
    """Integrate an exponentially decaying ``f`` over ``[a, inf)``.

    The range is truncated at ``R = max(a + 40 * decay_scale, 40)`` and the
    remainder is bounded by the exponential extrapolation
    ``|f(R)| * decay_scale``. When that bound is not below ``abs_tol`` the
    cutoff is pushed out; if the bound stops shrinking the decay assumption
    is declared violated.
    """
    if decay_scale <= 0:
        raise ValueError("decay_scale must be positive")
    R = max(a + 40.0 * decay_scale, 40.0)
    tail = abs(f(R)) * decay_scale
    for _ in range(8):
        if tail < abs_tol:
            break
        R_next = R + 40.0 * decay_scale
        tail_next = abs(f(R_next)) * decay_scale
        if not tail_next < 0.5 * tail:
            raise IntegrationError(
                f"integrand does not decay on scale {decay_scale} beyond x={R}", np.nan, tail
            )
        R, tail = R_next, tail_next
    else:
        raise IntegrationError("tail bound did not reach tolerance", np.nan, tail)

    body = integrate(f, a, R, rel_tol=rel_tol, abs_tol=abs_tol, limit=400)
    return QuadResult(body.value, body.abs_error_estimate + tail)


# 10-point Gauss-Legendre on [-1, 1]
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(10)


def cumulative_tail_integral(
    f: Callable[[np.ndarray], np.ndarray],
    grid: np.ndarray,
    decay_scale: float = 0.5,
    max_panel: float = 0.05,
) -> np.ndarray:
    """Return ``I[i] = int_{grid[i]}^inf f`` for an ascending grid.

    ``f`` must accept arrays. Between grid points a composite 10-point
    Gauss-Legendre rule is used with panels no wider than ``max_panel``,
    which is exact to rounding for integrands analytic in a strip around
    the real axis. The piece beyond the last grid point goes through
    :func:`integrate_tail`.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be one-dimensional and strictly ascending")
    tail = integrate_tail(lambda t: float(f(np.array([t]))[0]), grid[-1], decay_scale).value

    lo, hi = grid[:-1], grid[1:]
    n_sub = np.maximum(1, np.ceil((hi - lo) / max_panel).astype(int))
    pieces = np.empty(lo.size)
    # group intervals by subdivision count so each group is one vectorized call
    for m in np.unique(n_sub):
        idx = np.nonzero(n_sub == m)[0]
        a = lo[idx][:, None]
        h = ((hi[idx] - lo[idx]) / m)[:, None]
        starts = a + h * np.arange(m)[None, :]
        mids = starts + 0.5 * h
        x = mids[..., None] + 0.5 * h[..., None] * _GL_NODES
        vals = f(x.ravel()).reshape(x.shape)
        pieces[idx] = (0.5 * h[:, 0] * (vals @ _GL_WEIGHTS).sum(axis=1))

    out = np.empty(grid.size)
    out[-1] = tail
    out[:-1] = tail + np.cumsum(pieces[::-1])[::-1]
    return out


def derivative(f: Callable[[float], float], x: float, order: int = 1, step: float = 1e-3) -> float:
    """Fourth-order central finite difference of ``f`` at ``x``."""
    h = step
    fp1, fm1 = f(x + h), f(x - h)
    fp2, fm2 = f(x + 2 * h), f(x - 2 * h)
    if order == 1:
        return (-fp2 + 8 * fp1 - 8 * fm1 + fm2) / (12 * h)
    if order == 2:
        return (-fp2 + 16 * fp1 - 30 * f(x) + 16 * fm1 - fm2) / (12 * h * h)
    raise ValueError("order must be 1 or 2")


def derivative_grid(values: np.ndarray, h: float) -> np.ndarray:
    """Fourth-order first derivative of uniformly sampled data.

    Interior points use the 5-point central stencil; the two points at each
    end use one-sided 5-point stencils of the same order.
    """
    y = np.asarray(values, dtype=float)
    if y.size < 5:
        raise ValueError("need at least 5 samples")
    d = np.empty_like(y)
    d[2:-2] = (-y[4:] + 8 * y[3:-1] - 8 * y[1:-3] + y[:-4]) / (12 * h)
    c_fwd = np.array([-25, 48, -36, 16, -3]) / (12 * h)
    c_fwd1 = np.array([-3, -10, 18, -6, 1]) / (12 * h)
    d[0] = c_fwd @ y[:5]
    d[1] = c_fwd1 @ y[:5]
    d[-1] = -(c_fwd @ y[::-1][:5])
    d[-2] = -(c_fwd1 @ y[::-1][:5])
    return d


def bisect_root(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = 1e-12,
    max_iter: int = 200,
    callback: Callable[[float, float], None] | None = None,
) -> float:
    """Bisection on a sign-changing bracket.

    ``callback(lo, hi)`` is invoked with the bracket after every halving.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise RootBracketError(f"no sign change on [{lo}, {hi}]: f={flo:.3e}, {fhi:.3e}")
    for _ in range(max_iter):
        if hi - lo < tol:
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
        if callback is not None:
            callback(lo, hi)
    return 0.5 * (lo + hi)


# --- zeta derivatives and g0 -------------------------------------------------

# B_2k / (2k)! for k = 1..8
_BERNOULLI_OVER_FACT = [
    1 / 12,
    -1 / 720,
    1 / 30240,
    -1 / 1209600,
    1 / 47900160,
    -691 / 1307674368000,
    1 / 74724249600,
    -3617 / 10670622842880000,
]


def _zeta_em(s: complex, N: int = 12) -> complex:
    """Riemann zeta for Re s > 1 by Euler-Maclaurin summation (analytic in s)."""
    total = sum(n ** (-s) for n in range(1, N))
    total += N ** (1 - s) / (s - 1) + 0.5 * N ** (-s)
    rising = s  # s (s+1) ... (s+2k-2)
    for k, coeff in enumerate(_BERNOULLI_OVER_FACT, start=1):
        total += coeff * rising * N ** (-s - 2 * k + 1)
        rising *= (s + 2 * k - 1) * (s + 2 * k)
    return total


def _zeta_and_derivative(s: float) -> tuple[float, float]:
    # complex-step derivative is exact to rounding for an analytic formula
    h = 1e-30
    z = _zeta_em(complex(s, h))
    return z.real, z.imag / h


def _zeta_prime_negative_odd(n: int) -> float:
    """zeta'(1 - 2n) from the differentiated functional equation.

    At s = 1 - 2n the cotangent term vanishes, leaving
    zeta'(s) = zeta(s) [log(2 pi) - digamma(1 - s) - zeta'(1-s)/zeta(1-s)].
    """
    s_ref = 2 * n
    z, dz = _zeta_and_derivative(float(s_ref))
    zeta_neg = -_BERNOULLI[2 * n] / (2 * n)
    harmonic = sum(1.0 / j for j in range(1, s_ref))
    digamma = harmonic - np.euler_gamma
    return zeta_neg * (math.log(2 * math.pi) - digamma - dz / z)


_BERNOULLI = {2: 1 / 6, 4: -1 / 30}


@dataclass(frozen=True)
class SpecialConstants:
    g0: float
    log_glaisher: float
    zeta_prime_m1: float
    zeta_prime_m3: float


@lru_cache(maxsize=1)
def special_constants() -> SpecialConstants:
    zp1 = _zeta_prime_negative_odd(1)
    zp3 = _zeta_prime_negative_odd(2)
    log_a = 1.0 / 12.0 - zp1
    g0 = 4.0 * (4.0 * log_a - 40.0 * zp3 - 1.0 / 3.0 - 4.0 / 45.0 * math.log(2.0))
    return SpecialConstants(g0=g0, log_glaisher=log_a, zeta_prime_m1=zp1, zeta_prime_m3=zp3)


def g0_constant() -> float:
    """Closed-form value of int_0^inf 4 sech^2(x) tanh^2(x) / x dx."""
    return special_constants().g0

