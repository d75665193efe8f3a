import math

import numpy as np
import pytest

from udw import quadcore
from udw.profiles import (
    Excited,
    Ground,
    Mixture,
    ModelParams,
    ParameterError,
    V_c,
    F_c_profile,
    confining_field,
    f_profile,
    fluid_onshell_lagrangian,
    g_excited,
    g_printed,
    parse_state,
    sech,
    tanhc,
    trap_potential,
)

P = ModelParams()


def test_trap_potential_values():
    assert trap_potential(0.0, P) == -6.0
    assert abs(trap_potential(1.0, P) + 6 / math.cosh(1.0) ** 2) < 1e-14
    assert abs(trap_potential(1.0, P) + 2.519846) < 1e-6
    assert abs(trap_potential(40.0, P)) < 1e-30
    assert trap_potential(0.0, P.replace(ell=2.0)) == -1.5


def test_f_and_Fc_limits():
    assert f_profile(0.0, P) == -4.0
    assert abs(f_profile(1e6, P)) < 1e-5
    assert F_c_profile(0.0, P) == -2.0
    assert abs(F_c_profile(50.0, P)) < 1e-40


def test_tanhc_series_is_continuous():
    for x in (0.999e-3, 1.001e-3, 5e-4):
        assert abs(tanhc(x) - math.tanh(x) / x) < 1e-15
    assert tanhc(0.0) == 1.0


def test_Fc_is_derivative_of_Vc():
    s = np.linspace(0.05, 1, 20)
    fd = np.array([quadcore.derivative(V_c, si, step=1e-3) for si in s])
    assert np.max(np.abs(fd + 2 * s)) < 1e-8
    x = np.arccosh(1 / np.sqrt(s))
    assert np.allclose(F_c_profile(x, P), -2 * s, atol=1e-12)


@pytest.mark.parametrize("state", [Ground, Excited])
def test_consistency_identity(state):
    x = np.linspace(1e-4, 12, 500)
    g = g_excited(x, P) if state == Excited else 0.0
    lhs = P.mu * fluid_onshell_lagrangian(x, P, state) + P.alpha / 2 * g + F_c_profile(x, P) - f_profile(x, P)
    assert np.max(np.abs(lhs)) < 1e-10


def test_onshell_lagrangian_values():
    assert fluid_onshell_lagrangian(0.0, P) == -2 / P.mu
    assert abs(fluid_onshell_lagrangian(1e4, P)) < 1.1e-3
    x = np.linspace(0.1, 5, 7)
    diff = fluid_onshell_lagrangian(x, P, Excited) - fluid_onshell_lagrangian(x, P, Ground)
    assert np.allclose(diff, -P.alpha / (2 * P.mu) * g_excited(x, P), rtol=0, atol=1e-14)


def test_g_excited_values_and_printed_factor():
    assert abs(g_excited(0.0, P) - 3 / (4 * math.pi * P.omega_d)) < 1e-15
    assert g_excited(40.0, P) < 1e-30
    x = np.linspace(0.05, 8, 200)
    assert np.allclose(g_excited(x, P) / g_printed(x, P), 2.0, rtol=1e-12)


def test_omega_c_value():
    assert P.omega_c == math.sqrt(3.0)


def test_parameter_invariants():
    with pytest.raises(ParameterError):
        ModelParams(mu=1.0).validate()
    with pytest.raises(ParameterError):
        ModelParams(mu=0.0).validate()
    with pytest.raises(ParameterError):
        ModelParams(m_d=0.5).omega_d
    with pytest.raises(ParameterError):
        ModelParams(ell=-1.0)
    with pytest.raises(ParameterError):
        ModelParams(mu=float("nan"))
    assert P.validate() is P


def test_nondimensional_rescaling():
    p = ModelParams(ell=2.0, mu=0.8, m_c=1.5, m_d=3.0)
    nd = p.nondimensional()
    assert nd.ell == 1.0 and nd.mu == 0.2 and nd.m_c == 3.0
    assert abs(nd.omega_d - p.omega_d * p.ell) < 1e-14


def test_confining_field_frequency_and_eigen_residual():
    cf = confining_field(P)
    assert abs(cf.omega_c**2 - (P.m_c**2 - cf.lambda_c**2)) < 1e-14
    x = np.arange(0.01, 12.0, 1e-3)
    # radial Laplacian as (r Psi)'' / r
    lap = quadcore.derivative(lambda t: t * cf.envelope(t), x, order=2, step=1e-3) / x
    psi = cf.envelope(x)
    residual = -lap + f_profile(x, P) * psi + psi
    assert np.max(np.abs(residual)) < 1e-6


def test_psi_equation_of_motion():
    x = np.arange(0.01, 12.0, 1e-3)
    lap = quadcore.derivative(lambda t: t * sech(t), x, order=2, step=1e-3) / x
    rhs = (1 - 2 * sech(x) ** 2 - 2 * np.tanh(x) / x) * sech(x)
    assert np.max(np.abs(lap - rhs)) < 1e-6


def test_state_labels():
    assert parse_state("ground") == Ground
    assert parse_state(" Excited ") == Excited
    assert parse_state("mixture:0.25") == Mixture(0.25)
    assert str(Mixture(0.5)) == "mixture:0.5"
    with pytest.raises(ValueError):
        Mixture(1.5)
    with pytest.raises(ValueError):
        parse_state("thermal")
