import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from udw import response
from udw.modes import analytic_mode
from udw.profiles import ModelParams
from udw.quadcore import IntegrationError

P = ModelParams()
MODE = analytic_mode(P)
POINT_AT_ONE = 0.00708827223263641597  # mpmath closed form at Omega T = 1
F0_REFERENCE = 3.08118395852738034  # mpmath: 2 pi^2 sqrt(3 / (8 pi sqrt 24))


def test_form_factor_origin():
    f0 = math.sqrt(3 / (8 * math.pi * P.omega_d)) * 4 * math.pi * math.pi / 2
    assert abs(response.form_factor(0.0, MODE) / f0 - 1) < 1e-8
    assert abs(response.form_factor(0.0, MODE) - F0_REFERENCE) < 1e-12


def test_form_factor_continuity_and_decay():
    f0 = response.form_factor(0.0, MODE)
    assert abs(response.form_factor(1e-4, MODE) / f0 - 1) < 1e-6
    assert abs(response.form_factor(30.0, MODE)) < 1e-15 * f0


@pytest.mark.parametrize("ell", [0.5, 1.0, 2.0])
def test_form_factor_closed_form(ell):
    p = ModelParams(ell=ell)
    k = np.linspace(0, 20 / ell, 81)
    num = response.form_factor(k, analytic_mode(p))
    assert np.max(np.abs(num - response.form_factor_analytic(k, p))) < 1e-12 * num[0]


def test_form_factor_negative_k():
    with pytest.raises(ValueError):
        response.form_factor(-1.0, MODE)


def test_pointlike_values():
    assert abs(response.pointlike_probability(0.0, 3.0) - 1 / (4 * math.pi)) < 1e-15
    assert abs(response.pointlike_probability(1.0, 1.0) - POINT_AT_ONE) < 1e-15
    ratio5 = response.pointlike_probability(-5.0, 1.0) / response.pointlike_asymptote(-5.0, 1.0)
    ratio10 = response.pointlike_probability(-10.0, 1.0) / response.pointlike_asymptote(-10.0, 1.0)
    assert abs(ratio5 - 1) < 1e-2 and abs(ratio10 - 1) < 1e-3
    assert response.pointlike_asymptote(2.0, 1.0) == 0.0


def test_pointlike_negative_branch_form():
    from scipy.special import erf

    for a in (-0.3, -2.0, -5.5):
        alt = abs(a) / (4 * math.sqrt(math.pi)) * (1 + erf(abs(a))) + math.exp(-a * a) / (4 * math.pi)
        assert abs(response.pointlike_probability(a, 1.0) / alt - 1) < 1e-14


@pytest.mark.parametrize("gT", np.linspace(-6, 3, 19))
def test_pointlike_reduction_oracle(gT):
    num = response.excitation_probability(gT / 2.0, 2.0, form="pointlike").L
    assert abs(num / response.pointlike_probability(gT, 1.0) - 1) < 1e-6


@settings(max_examples=25, deadline=None)
@given(st.floats(-4, 6), st.floats(0.05, 5), st.sampled_from([0.5, 1.0, 2.0]))
def test_probability_nonnegative(gap, T, ell):
    mode = analytic_mode(ModelParams(ell=ell))
    assert response.excitation_probability(gap, T, mode).L >= 0


def test_monotone_in_positive_gap():
    for ell in (0.5, 1.0, 2.0):
        mode = analytic_mode(ModelParams(ell=ell))
        values = [response.excitation_probability(g, 1.0, mode).L for g in np.linspace(0, 4, 9)]
        assert np.all(np.diff(values) < 0)
    point = [response.pointlike_probability(g, 1.0) for g in np.linspace(-6, 4, 41)]
    assert np.all(np.diff(point) < 0)


def test_truncation_invariance():
    for gap, T in ((-2.0, 1.0), (0.5, 0.3), (3.0, 2.0)):
        a = response.excitation_probability(gap, T, MODE).L
        b = response.excitation_probability(gap, T, MODE, k_scale=2.0).L
        assert abs(b / a - 1) < 1e-8


def test_normalized_form_approaches_pointlike():
    gT = -3.0
    point = response.pointlike_probability(gT, 1.0)
    errs = []
    for T in (2.0, 20.0, 200.0):
        L = response.excitation_probability(gT / T, T, MODE, form="normalized").L
        errs.append(abs(L / point - 1))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-2


def test_size_dependence():
    a = response.excitation_probability(1.0, 1.0, analytic_mode(ModelParams(ell=0.5))).L
    b = response.excitation_probability(1.0, 1.0, analytic_mode(ModelParams(ell=2.0))).L
    assert abs(a - b) > 1e-4


def test_argument_checks():
    with pytest.raises(ValueError):
        response.excitation_probability(1.0, 0.0, MODE)
    with pytest.raises(ValueError):
        response.excitation_probability(1.0, 1.0)
    with pytest.raises(ValueError):
        response.excitation_probability(1.0, 1.0, MODE, form="bogus")
    with pytest.raises(ValueError):
        response.SwitchingParams(T=-1.0)


def test_unconverged_quadrature_raises():
    with pytest.raises(IntegrationError):
        response.excitation_probability(0.0, 1.0, MODE, rel_tol=1e-30)


def test_response_curve_table():
    s = np.linspace(0.1, 10, 12)
    table = response.response_curve([0.5, 1.0], s, 5.0)
    assert table.names() == ["gapT", "ell=0.5", "ell=1", "pointlike"]
    for col in table.columns.values():
        assert np.all(np.isfinite(col)) and np.all(col >= 0)
    assert np.allclose(table.columns["pointlike"], [response.pointlike_probability(v, 1.0) for v in s], rtol=0, atol=0)


def test_response_curve_zero_gap_limit():
    table = response.response_curve([1.0], [0.0, 1e-3], 5.0)
    assert table.columns["ell=1"][0] == 0.0
    assert table.columns["ell=1"][1] < 1e-5


def test_final_state():
    assert response.final_state(0.0, 0.2) == (1.0, 0.0)
    ground, excited = response.final_state(1.0, 0.3)
    assert abs(ground - 0.7) < 1e-15 and excited == 0.3
    with pytest.raises(response.PerturbativeRegimeError, match="perturbative regime violated"):
        response.final_state(2.0, 0.3)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 10), st.floats(0, 0.099))
def test_final_state_weights_sum_to_one(lam, L):
    if lam * lam * L < 1:
        a, b = response.final_state(lam, L)
        assert abs(a + b - 1) < 1e-15


def test_worker_count(monkeypatch):
    monkeypatch.setenv("UDW_THREADS", "3")
    assert response.worker_count() == 3
    monkeypatch.setenv("UDW_THREADS", "0")
    with pytest.raises(ValueError):
        response.worker_count()
