import math

import numpy as np
import pytest
from scipy.integrate import quad

from udw import quadcore
from udw.modes import (
    ShootingError,
    UnstableModeError,
    analytic_mode,
    analytic_phi1,
    kg_norm,
    shoot_bound_states,
    smearing_function,
    switching,
)
from udw.profiles import ModelParams, ParameterError, sech

P = ModelParams()


def well(depth):
    return lambda x: -depth * sech(x) ** 2


def l2_relative(mode, params=P):
    x = np.linspace(1e-3, 20, 20001)
    exact = analytic_phi1(x, params)
    return math.sqrt(np.sum((mode.phi(x) - exact) ** 2 * x**2) / np.sum(exact**2 * x**2))


def test_phi1_origin_value():
    assert abs(analytic_phi1(0.0, P) - math.sqrt(3 / (8 * math.pi * P.omega_d))) < 1e-15
    p = ModelParams(ell=2.0, m_d=2.5)
    assert abs(analytic_phi1(0.0, p) - math.sqrt(3 / (8 * math.pi * 8 * p.omega_d))) < 1e-15


def test_phi1_needs_stable_mass():
    with pytest.raises(ParameterError):
        analytic_phi1(0.5, ModelParams(m_d=1.0))


def test_radial_integral_is_one_third():
    value = quad(lambda x: np.tanh(x) ** 2 * sech(x) ** 2, 0, 40)[0]
    assert abs(value - 1 / 3) < 1e-12


@pytest.mark.parametrize("ell", [0.5, 1.0, 3.0])
def test_analytic_kg_norm(ell):
    assert abs(kg_norm(analytic_mode(ModelParams(ell=ell))) - 1) < 1e-8


def test_analytic_eigen_residual():
    x = np.arange(0.01, 12, 1e-3)
    lap = quadcore.derivative(lambda t: t * analytic_phi1(t, P), x, order=2, step=1e-3) / x
    phi = analytic_phi1(x, P)
    assert np.max(np.abs(-lap - 6 * sech(x) ** 2 * phi + phi)) < 1e-6


def test_u_solves_one_dimensional_equation():
    x = np.linspace(0.1, 5, 50)
    u = lambda t: np.tanh(t) * sech(t)
    res = -quadcore.derivative(u, x, order=2, step=1e-3) - 6 * sech(x) ** 2 * u(x) + u(x)
    assert np.max(np.abs(res)) < 1e-9


def test_shooting_alpha_minus_six():
    modes = shoot_bound_states(well(6), 5.0)
    assert len(modes) == 1
    m = modes[0]
    assert abs(m.eigenvalue + 1) < 1e-6
    assert abs(m.omega**2 - (25 + m.eigenvalue)) < 1e-12
    assert l2_relative(m) < 1e-4
    assert abs(kg_norm(m) - 1) < 1e-8
    assert m.nodes == 0
    assert abs(m.u[0]) < 1e-12


def test_shooting_shallow_well_is_empty():
    assert shoot_bound_states(well(2), 5.0) == []


def test_shooting_alpha_minus_twelve():
    modes = shoot_bound_states(well(12), 5.0)
    assert len(modes) == 1
    assert abs(modes[0].eigenvalue + 4) < 1e-6


@pytest.mark.parametrize("lam", [2, 3, 4, 5])
def test_poschl_teller_spectrum(lam):
    expected = sorted(-((lam - n) ** 2) for n in range(1, lam, 2))
    modes = shoot_bound_states(well(lam * (lam + 1)), 10.0)
    assert [round(m.eigenvalue, 6) for m in modes] == [float(e) for e in expected]
    assert [m.nodes for m in modes] == list(range(len(modes)))
    for m in modes:
        assert abs(kg_norm(m) - 1) < 1e-8


def test_eigenvalue_invariant_under_domain_and_step():
    base = shoot_bound_states(well(20), 10.0)
    wide = shoot_bound_states(well(20), 10.0, x_max=50.0, step=5e-4)
    for a, b in zip(base, wide):
        assert abs(a.eigenvalue - b.eigenvalue) < 1e-9


def test_kg_norm_regridding():
    m = shoot_bound_states(well(6), 5.0)[0]
    assert abs(kg_norm(m, n=40001) - kg_norm(m, x_max=30.0, n=60001)) < 1e-7


def test_physical_units_scale():
    m = shoot_bound_states(well(6), 5.0 * 2.0, ell=2.0)[0]
    assert abs(m.eigenvalue + 0.25) < 1e-6
    assert abs(m.profile(1.4) / analytic_phi1(0.7, ModelParams(ell=2.0)) - 1) < 1e-5


def test_unstable_mode_rejected():
    with pytest.raises(UnstableModeError):
        shoot_bound_states(well(6), 0.5)


def test_shooting_error_is_runtime_error():
    assert issubclass(ShootingError, RuntimeError)


def test_switching_and_smearing():
    T = 0.7
    assert switching(0.0, T) == 1.0
    assert abs(smearing_function(T, 0.5, P, T) - math.exp(-0.5) * analytic_phi1(0.5, P)) < 1e-15
    assert abs(smearing_function(-T, 2.0, P, T) - math.exp(-0.5) * analytic_phi1(2.0, P)) < 1e-15
    assert abs(smearing_function(0.0, 1e-9, P, T) - analytic_phi1(0.0, P)) < 1e-12
    area = quadcore.integrate(lambda t: switching(t, T), -20 * T, 20 * T).value
    assert abs(area - math.sqrt(2 * math.pi) * T) < 1e-12
    with pytest.raises(ValueError):
        switching(0.0, 0.0)
