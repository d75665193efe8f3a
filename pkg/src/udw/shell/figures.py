"""Data presets for each figure, with their parameter values fixed."""
from __future__ import annotations

from dataclasses import replace

import numpy as np

from udw.shell import commands
from udw.shell.config import ConfigError, RunConfig
from udw.shell.csvio import Table

__all__ = ["PRESETS", "figure_table"]

_BASE = dict(ell="1", mu=0.2, m_c=2.0, m_d=5.0, alpha=-6.0)


def _fig_fluid(eta):
    def build(cfg: RunConfig) -> Table:
        return commands.fluid_table(replace(cfg, **_BASE, eta=eta, state="ground"))

    return build


def _figw(cfg: RunConfig) -> Table:
    t0 = commands.fluid_table(replace(cfg, **_BASE, eta=0.0, state="ground"))
    t1 = commands.fluid_table(replace(cfg, **_BASE, eta=1.0, state="ground"))
    meta = [(k, v) for k, v in t0.meta if k != "eta"] + [("eta", "0.0,1.0")]
    return Table(meta, {"x": t0.columns["x"], "w_eta0": t0.columns["w"], "w_eta1": t1.columns["w"]})


def _tmunu0(cfg: RunConfig) -> Table:
    return commands.stress_table(replace(cfg, **_BASE, eta=0.0, state="ground", audit_printed=True))


def _deviator(cfg: RunConfig) -> Table:
    t = commands.stress_table(replace(cfg, **_BASE, eta=0.0, state="ground"))
    c = t.columns
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = c["Pi"] / c["p_iso"]
    return Table(t.meta, {"x": c["x"], "p_iso": c["p_iso"], "Pi": c["Pi"], "Pi_over_p": ratio})


def _tmunu1(cfg: RunConfig) -> Table:
    return commands.stress_table(replace(cfg, **_BASE, eta=0.0, state="excited", audit_printed=False))


def _excitation(cfg: RunConfig) -> Table:
    return commands.response_table(replace(cfg, m_d=5.0, ell="0.5,1,2", T=None))


PRESETS = {
    "fig1": _fig_fluid(0.0),
    "fig2": _fig_fluid(1.0),
    "figw": _figw,
    "tmunu0": _tmunu0,
    "deviator": _deviator,
    "tmunu1": _tmunu1,
    "excitation": _excitation,
}


def figure_table(cfg: RunConfig) -> Table:
    if cfg.figure not in PRESETS:
        raise ConfigError(f"unknown figure {cfg.figure!r}; choose from {', '.join(PRESETS)}")
    table = PRESETS[cfg.figure](cfg)
    return Table([("figure", cfg.figure)] + [m for m in table.meta if m[0] != "figure"], table.columns)
