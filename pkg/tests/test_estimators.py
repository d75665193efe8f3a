import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from udw import fluid, stress
from udw.estimators import DetectorStressModel, ExcitationModel, FluidModel
from udw.profiles import Excited, Ground, ModelParams, ParameterError
from udw.response import pointlike_probability

X = np.array([[3.0], [0.5], [1.5]])


def test_fluid_model_matches_solver():
    model = FluidModel(mu=0.3).fit()
    out = model.predict(X)
    assert out.shape == (3, 2)
    sol = fluid.solve_fluid(ModelParams(mu=0.3), Ground, np.array([0.5, 1.5, 3.0]))
    assert np.allclose(out[[1, 2, 0], 0], sol.pressure, rtol=1e-14, atol=0)
    assert np.allclose(out[[1, 2, 0], 1], sol.density, rtol=1e-14, atol=0)
    assert model.mu_star_.value == pytest.approx(0.5650174394412113, rel=1e-12)


def test_params_roundtrip_and_clone():
    model = FluidModel(eta=1.0, state="excited")
    assert model.get_params()["eta"] == 1.0
    twin = clone(model).set_params(mu=0.1)
    assert twin.mu == 0.1 and model.mu == 0.2


def test_invalid_parameters_raise_at_fit():
    with pytest.raises(ParameterError):
        FluidModel(mu=1.5).fit()
    with pytest.raises(ValueError):
        FluidModel(state="sideways").fit()


def test_unfitted_and_bad_input():
    with pytest.raises(NotFittedError):
        FluidModel().predict(X)
    with pytest.raises(ValueError):
        FluidModel().fit().predict([[-1.0]])
    with pytest.raises(ValueError):
        FluidModel().fit().predict([[1.0], [1.0]])


def test_stress_transform():
    out = DetectorStressModel(state="excited").fit_transform(X)
    assert out.shape == (3, 3)
    total = stress.assemble_total(ModelParams(), Excited, grid=np.array([0.5]))
    assert np.allclose(out[1], [total.rhoE[0], total.R[0], total.Pperp[0]], rtol=1e-13, atol=0)


def test_excitation_model():
    model = ExcitationModel(form="pointlike", T=2.0).fit()
    out = model.predict([[-1.0], [0.5]])
    assert out == pytest.approx([pointlike_probability(-2.0, 1.0), pointlike_probability(1.0, 1.0)], rel=1e-6)
    with pytest.raises(ValueError):
        ExcitationModel(form="blob").fit()
