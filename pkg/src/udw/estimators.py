"""scikit-learn style wrappers around the solvers.

Each estimator takes model parameters as constructor arguments, validates
them in ``fit`` and evaluates radial profiles for a column of radii
``X[:, 0]`` (in units of ell) afterwards.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from udw import fluid, response, stress
from udw.modes import analytic_mode
from udw.profiles import ModelParams, parse_state

__all__ = ["FluidModel", "DetectorStressModel", "ExcitationModel"]


def _radii(X):
    X = check_array(X, ensure_2d=True, dtype=float)
    x = X[:, 0]
    if np.any(x <= 0):
        raise ValueError("radii must be positive")
    order = np.argsort(x)
    sorted_x = x[order]
    if np.any(np.diff(sorted_x) == 0):
        raise ValueError("radii must be distinct")
    return sorted_x, np.argsort(order)


class _ModelParamsMixin:
    def _model(self) -> ModelParams:
        return ModelParams(
            ell=self.ell, mu=self.mu, eta=self.eta, alpha=self.alpha, m_c=self.m_c, m_d=self.m_d
        ).validate()


class FluidModel(_ModelParamsMixin, BaseEstimator):
    """Fluid pressure and density; ``predict`` returns columns ``[P, rho]``."""

    def __init__(self, ell=1.0, mu=0.2, eta=0.0, alpha=-6.0, m_c=2.0, m_d=5.0, state="ground", method="quadrature"):
        self.ell = ell
        self.mu = mu
        self.eta = eta
        self.alpha = alpha
        self.m_c = m_c
        self.m_d = m_d
        self.state = state
        self.method = method

    def fit(self, X=None, y=None):
        self.params_ = self._model()
        self.state_ = parse_state(self.state)
        self.mu_star_ = fluid.mu_star(self.eta, self.ell)
        return self

    def predict(self, X):
        check_is_fitted(self, "params_")
        x, undo = _radii(X)
        sol = fluid.solve_fluid(self.params_, self.state_, x, method=self.method)
        return np.column_stack([sol.pressure, sol.density])[undo]


class DetectorStressModel(_ModelParamsMixin, TransformerMixin, BaseEstimator):
    """Total stress tensor; ``transform`` returns columns ``[rhoE, R, Pperp]``."""

    def __init__(self, ell=1.0, mu=0.2, eta=0.0, alpha=-6.0, m_c=2.0, m_d=5.0, state="ground"):
        self.ell = ell
        self.mu = mu
        self.eta = eta
        self.alpha = alpha
        self.m_c = m_c
        self.m_d = m_d
        self.state = state

    def fit(self, X=None, y=None):
        self.params_ = self._model()
        self.state_ = parse_state(self.state)
        return self

    def transform(self, X):
        check_is_fitted(self, "params_")
        x, undo = _radii(X)
        t = stress.assemble_total(self.params_, self.state_, grid=x)
        return np.column_stack([t.rhoE, t.R, t.Pperp])[undo]


class ExcitationModel(BaseEstimator):
    """Excitation probability against the gap; ``predict`` maps ``X[:, 0]`` to L."""

    def __init__(self, ell=1.0, m_d=5.0, T=1.0, form="mode"):
        self.ell = ell
        self.m_d = m_d
        self.T = T
        self.form = form

    def fit(self, X=None, y=None):
        response.SwitchingParams(T=self.T)
        if self.form not in response.FORM_KINDS:
            raise ValueError(f"form must be one of {response.FORM_KINDS}")
        self.mode_ = analytic_mode(ModelParams(ell=self.ell, m_d=self.m_d))
        self._cache = {}
        return self

    def predict(self, X):
        check_is_fitted(self, "mode_")
        X = check_array(X, dtype=float)
        return np.array(
            [
                response.excitation_probability(g, self.T, self.mode_, self.form, cache=self._cache).L
                for g in X[:, 0]
            ]
        )
