"""The ``verify`` audit: every invariant of the model in one report."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass

import numpy as np

from udw import fluid, modes, quadcore, response, stress
from udw.profiles import Excited, Ground, ModelParams, g_excited, g_printed, sech

__all__ = ["Check", "VerifyReport", "run_verify"]

PASS, FAIL, FLAGGED = "pass", "fail", "flagged"


@dataclass(frozen=True)
class Check:
    name: str
    status: str
    value: float
    tolerance: float
    note: str


@dataclass
class VerifyReport:
    checks: list

    def add(self, name, value, tolerance, note, ok=None, flagged=False):
        value = float(value)
        if flagged:
            status = FLAGGED
        else:
            good = ok if ok is not None else abs(value) <= tolerance
            status = PASS if good else FAIL
        self.checks.append(Check(name, status, value, float(tolerance), note))

    def counts(self):
        out = {PASS: 0, FAIL: 0, FLAGGED: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def promote_flagged(self):
        self.checks = [
            Check(c.name, FAIL, c.value, c.tolerance, c.note) if c.status == FLAGGED else c for c in self.checks
        ]

    def exit_code(self) -> int:
        return 1 if any(c.status == FAIL for c in self.checks) else 0

    def to_json(self) -> str:
        payload = {"summary": self.counts(), "checks": [asdict(c) for c in self.checks]}
        return json.dumps(payload, indent=2, allow_nan=True) + "\n"


def _g0_checks(report):
    quad = quadcore.integrate_tail(lambda t: fluid.source_G(t, ModelParams()), 0.0, 0.5).value
    closed = quadcore.g0_constant()
    report.add("g0_quadrature", quad - 1.53971, 1e-4, "quadrature against the quoted 1.53971")
    report.add("g0_closed_form_vs_quadrature", closed - quad, 1e-5, "zeta-derivative closed form")


def _mu_star_checks(report):
    for eta in (0.0, 0.2):
        bis = fluid.mu_star(eta).value
        closed = fluid.mu_star_closed_form(eta)
        report.add(f"mu_star_dual_path_eta={eta:g}", (bis - closed) / closed, 1e-9, "bisection vs closed form")
    report.add("mu_star_eta=0_quoted", fluid.mu_star(0.0).value / 0.565017 - 1, 1e-4, "quoted threshold 0.565017")


def _mode_checks(report):
    def well(depth):
        return lambda x: -depth * sech(x) ** 2

    found = modes.shoot_bound_states(well(6.0), 5.0)
    report.add("bound_state_count_alpha=-6", len(found) - 1, 0, "exactly one s-wave level")
    if found:
        mode = found[0]
        report.add("bound_state_eigenvalue_alpha=-6", mode.eigenvalue + 1.0, 1e-6, "eigenvalue -1")
        x = np.linspace(1e-3, 20, 20001)
        exact = modes.analytic_phi1(x, ModelParams())
        err = math.sqrt(np.sum((mode.phi(x) - exact) ** 2 * x**2) / np.sum(exact**2 * x**2))
        report.add("bound_state_profile_L2", err, 1e-4, "against the analytic mode")
        report.add("kg_norm_shooting", modes.kg_norm(mode) - 1, 1e-8, "2 omega int |Phi|^2 d^3x")
    report.add("bound_state_count_alpha=-2", len(modes.shoot_bound_states(well(2.0), 5.0)), 0, "no level")
    deep = modes.shoot_bound_states(well(12.0), 5.0)
    report.add("bound_state_eigenvalue_alpha=-12", deep[0].eigenvalue + 4.0 if deep else math.inf, 1e-6, "eigenvalue -4")
    report.add("kg_norm_analytic", modes.kg_norm(modes.analytic_mode(ModelParams())) - 1, 1e-8, "analytic mode")

    x = stress.conservation_grid(1e-3)
    phi = modes.analytic_phi1(x, ModelParams())
    h = x[1] - x[0]
    d1 = quadcore.derivative_grid(phi, h)
    d2 = quadcore.derivative_grid(d1, h)
    resid = -d2 - 2 * d1 / x - 6 * sech(x) ** 2 * phi + phi
    report.add("bound_mode_equation_residual", np.max(np.abs(resid[4:-4])), 1e-6, "-lap Phi + V Phi = -Phi")


def _fluid_checks(report, params):
    fine = stress.conservation_grid(1e-3)
    for eta in (0.0, 1.0):
        for state in (Ground, Excited):
            p = params.replace(eta=eta)
            grid = fluid.default_grid()
            q = fluid.pressure_quadrature(p, state, grid)
            o = fluid.pressure_ode(p, state, grid)
            report.add(f"pressure_dual_path_{state}_eta={eta:g}", np.max(np.abs(q - o) / np.abs(q)), 1e-6, "quadrature vs backward RK4")
            res = fluid.hydrostatic_residual(p, state, fine, fluid.pressure_quadrature(p, state, fine))
            report.add(f"hydrostatic_residual_{state}_eta={eta:g}", np.max(np.abs(res[2:-2])), 1e-8, "fluid equation of motion")
        sol = fluid.solve_fluid(params.replace(eta=eta), Ground)
        m = fluid.energy_condition_margins(sol.density, sol.pressure)
        low = min(m.rho_plus_p, m.rho_plus_3p, m.rho_minus_abs_p)
        report.add(f"fluid_energy_conditions_eta={eta:g}", low, 0.0, "min of rho+P, rho+3P, rho-|P|", ok=low > 0)
        w = sol.w
        report.add(f"w_bounds_eta={eta:g}", float(np.max(w)), 1 / 3, "0 < w < 1/3", ok=bool(np.all((w > 0) & (w < 1 / 3))))


def _stress_checks(report, params):
    grid = stress.conservation_grid()
    for eta in (0.0, 1.0):
        p = params.replace(eta=eta)
        for state, tol in ((Ground, 1e-6), (Excited, 1e-5)):
            total = stress.assemble_total(p, state, grid=grid)
            report.add(f"conservation_{state}_eta={eta:g}", stress.conservation_residual(total).sup, tol, "assembled total tensor")
            if state == Ground:
                ec = stress.anisotropic_energy_conditions(total)
                low = min(ec.values())
                report.add(f"total_energy_conditions_eta={eta:g}", low, 0.0, "anisotropic criteria", ok=low > 0)
    ground = stress.assemble_total(params, Ground, grid=grid)
    s, t = sech(grid) ** 2, np.tanh(grid)
    pi_exact = 4.0 / 3.0 * s * t**2
    report.add("deviator_assembled", np.max(np.abs(stress.landau_decompose(ground).Pi - pi_exact)), 1e-8, "(4/3) sech^2 tanh^2")
    sol = fluid.solve_fluid(params, Ground, grid)
    printed = stress.printed_components(params, sol)
    report.add("deviator_printed", np.max(np.abs(stress.landau_decompose(printed).Pi - pi_exact)), 1e-8, "printed components")
    res = stress.conservation_residual(printed)
    xs = res.grid
    report.add(
        "printed_components_match_8sech4tanh",
        np.max(np.abs(res.profile - 8 * sech(xs) ** 4 * np.tanh(xs))),
        1e-6,
        "residual of the printed set equals 8 sech^4 tanh",
    )
    report.add(
        "printed_components_nonconservation",
        res.sup,
        1e-6,
        "printed rho0/R0/P0 violate radial conservation; V_c enters with the opposite sign",
        flagged=True,
    )
    div, src, diff = stress.naive_nonconservation(params)
    report.add("naive_divergence_identity", np.max(np.abs(diff)), 1e-6, "divergence equals -g V'/2 without the fluid")


def _audit_checks(report, params):
    fine = np.arange(0.01, 12.0005, 1e-3)
    q = fluid.pressure_quadrature(params, Ground, fine)
    printed = fluid.printed_ode_residual(params, fine, q)
    report.add(
        "printed_pressure_ode_sign",
        np.max(np.abs(printed[2:-2])),
        1e-8,
        "source term of the printed scalar ODE has the wrong sign",
        flagged=True,
    )
    x = np.linspace(0.05, 10, 400)
    ratio = g_excited(x, params) / g_printed(x, params)
    report.add("g_factor_two", float(np.mean(ratio)), 1e-12, "printed g equals |Phi_1|^2, consistent g is 2|Phi_1|^2", flagged=True)
    wide = ModelParams(ell=2.0, mu=0.8, m_c=1.0, m_d=2.5)
    grid = fluid.default_grid()
    lit = fluid.printed_excited_pressure(wide, grid)
    consistent = fluid.pressure_with_g(wide, grid, fluid.printed_g_hat(wide))
    report.add(
        "printed_P1_prefactor",
        np.max(np.abs(lit - consistent) / np.abs(consistent)),
        1e-8,
        "printed P_1 at ell=2 misses a 1/ell^2; agrees at ell=1",
        flagged=True,
    )


def _response_checks(report):
    worst = 0.0
    for a in (-5.0, -2.0, 0.0, 1.0, 2.0):
        num = response.excitation_probability(a, 1.0, form="pointlike").L
        worst = max(worst, abs(num / response.pointlike_probability(a, 1.0) - 1))
    report.add("response_pointlike_oracle", worst, 1e-6, "F=1 reduction vs Gaussian-moment closed form")
    report.add("response_zero_gap", response.pointlike_probability(0.0, 1.0) - 1 / (4 * math.pi), 1e-8, "1/(4 pi)")
    report.add(
        "response_asymptote_5",
        response.pointlike_probability(-5.0, 1.0) / response.pointlike_asymptote(-5.0, 1.0) - 1,
        1e-2,
        "|Omega| T / (2 sqrt(pi))",
    )
    p = ModelParams()
    mode = modes.analytic_mode(p)
    f0 = 4 * math.pi * math.sqrt(3 / (8 * math.pi * p.omega_d)) * math.pi / 2
    report.add("form_factor_zero", response.form_factor(0.0, mode) / f0 - 1, 1e-8, "integration by parts value")


def run_verify(params: ModelParams | None = None, strict: bool = False) -> VerifyReport:
    params = ModelParams() if params is None else params
    report = VerifyReport([])
    _g0_checks(report)
    _mu_star_checks(report)
    _mode_checks(report)
    _fluid_checks(report, params)
    _stress_checks(report, params)
    _audit_checks(report, params)
    _response_checks(report)
    if strict:
        report.promote_flagged()
    return report
