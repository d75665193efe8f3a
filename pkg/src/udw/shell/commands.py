"""Table builders behind each subcommand."""
from __future__ import annotations

import numpy as np

from udw import fluid, response, stress
from udw.modes import analytic_mode
from udw.profiles import Ground
from udw.shell.config import ConfigError, RunConfig
from udw.shell.csvio import Table

__all__ = ["fluid_table", "stress_table", "response_table", "scan_mu_table"]

DEFAULT_POINTS = {"fluid": 600, "stress": 600, "response": 61, "scan-mu": 200}


def _grid(cfg: RunConfig, command: str) -> np.ndarray:
    x_max = cfg.x_max if cfg.x_max is not None else fluid.DEFAULT_X_MAX
    points = cfg.points or DEFAULT_POINTS[command]
    return fluid.default_grid(points, fluid.DEFAULT_X_MIN, x_max)


def fluid_table(cfg: RunConfig) -> Table:
    params = cfg.model()
    state = cfg.detector_state()
    if state.kind == "mixture":
        raise ConfigError("fluid profiles are defined for ground or excited states")
    sol = fluid.solve_fluid(params, state, _grid(cfg, "fluid"))
    rho, p = sol.density, sol.pressure
    return Table(
        cfg.echo(),
        {
            "x": sol.grid,
            "pressure": p,
            "density": rho,
            "w": sol.w,
            "rho_plus_P": rho + p,
            "rho_plus_3P": rho + 3 * p,
            "rho_minus_absP": rho - np.abs(p),
        },
    )


def stress_table(cfg: RunConfig) -> Table:
    params = cfg.model()
    state = cfg.detector_state()
    grid = _grid(cfg, "stress")
    total = stress.assemble_total(params, state, grid=grid)
    landau = stress.landau_decompose(total)
    columns = {
        "x": grid,
        "rhoE": total.rhoE,
        "R": total.R,
        "Pperp": total.Pperp,
        "p_iso": landau.p,
        "Pi": landau.Pi,
    }
    check = stress.conservation_residual(stress.assemble_total(params, state))
    meta = cfg.echo() + [("conservation_residual", repr(check.sup))]
    if cfg.audit_printed:
        if state != Ground:
            raise ConfigError("printed component formulas exist for the ground state only")
        printed = stress.printed_components(params, fluid.solve_fluid(params, Ground, grid))
        columns.update(
            printed_rhoE=printed.rhoE,
            printed_R=printed.R,
            printed_Pperp=printed.Pperp,
            printed_Pi=stress.landau_decompose(printed).Pi,
        )
        fine = stress.printed_components(
            params, fluid.solve_fluid(params, Ground, stress.conservation_grid())
        )
        meta.append(("printed_conservation_residual", repr(stress.conservation_residual(fine).sup)))
    return Table(meta, columns)


def response_table(cfg: RunConfig) -> Table:
    ells = cfg.ell_values()
    for ell in ells:
        cfg.model(ell=ell, validate=False).omega_d
    points = cfg.points or DEFAULT_POINTS["response"]
    s = np.linspace(-5.0, 10.0, points)
    if cfg.T is None:
        table = response.response_curve(ells, s, cfg.m_d)
        columns = {"gapT": s, **table.columns}
    else:
        columns = {"gapT": s}
        for ell in ells:
            mode = analytic_mode(cfg.model(ell=ell, validate=False))
            cache: dict = {}
            columns[f"ell={ell:g}"] = np.array(
                [response.excitation_probability(si / cfg.T, cfg.T, mode, cache=cache).L for si in s]
            )
        columns["pointlike"] = np.array([response.pointlike_probability(si, 1.0) for si in s])
    meta = cfg.echo() + [("gap_convention", "Omega>0 excites the bound mode")]
    return Table(meta, columns)


def scan_mu_table(cfg: RunConfig) -> Table:
    ells = cfg.ell_values()
    if len(ells) != 1:
        raise ConfigError("scan-mu takes a single ell")
    ell = ells[0]
    points = cfg.points or DEFAULT_POINTS["scan-mu"]
    ratios = np.linspace(0.0, 1.0, points + 2)[1:-1]
    grid = fluid.default_grid()
    margins = {"min_rho_plus_P": [], "min_rho_plus_3P": [], "min_rho_minus_absP": []}
    for r in ratios:
        params = cfg.model(ell=ell, validate=False).replace(mu=r * ell**2)
        sol = fluid.solve_fluid(params, Ground, grid)
        m = fluid.energy_condition_margins(sol.density, sol.pressure)
        margins["min_rho_plus_P"].append(m.rho_plus_p)
        margins["min_rho_plus_3P"].append(m.rho_plus_3p)
        margins["min_rho_minus_absP"].append(m.rho_minus_abs_p)
    dec = np.array(margins["min_rho_minus_absP"])
    flips = np.nonzero(np.sign(dec[:-1]) != np.sign(dec[1:]))[0]
    if flips.size:
        i = flips[0]
        crossing = ratios[i] - dec[i] * (ratios[i + 1] - ratios[i]) / (dec[i + 1] - dec[i])
        crossing_text = repr(float(crossing))
    else:
        crossing_text = "none"
    star = fluid.mu_star(cfg.eta, ell)
    meta = cfg.echo() + [
        ("sign_change_mu_over_ell2", crossing_text),
        ("mu_star_bisection_over_ell2", repr(star.value / ell**2)),
        ("mu_star_closed_form_over_ell2", repr(fluid.mu_star_closed_form(cfg.eta, 1.0)) if cfg.eta <= 1 / 3 else "unconstrained"),
        ("unconstrained", "true" if star.unconstrained else "false"),
    ]
    return Table(meta, {"mu_over_ell2": ratios, **{k: np.array(v) for k, v in margins.items()}})
