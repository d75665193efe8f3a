"""Run configuration: flat key=value files merged with command-line flags."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace

from udw.profiles import DetectorState, ModelParams, ParameterError, parse_state

__all__ = ["ConfigError", "RunConfig", "read_config_file", "merge"]


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    ell: str = "1"
    mu: float = 0.2
    eta: float = 0.0
    alpha: float = -6.0
    m_c: float = 2.0
    m_d: float = 5.0
    T: float | None = None
    lambda_coupling: float = 1.0
    state: str = "ground"
    x_max: float | None = None
    points: int | None = None
    out: str | None = None
    format: str = "csv"
    figure: str | None = None
    audit_printed: bool = False
    strict_paper: bool = False

    def ell_values(self) -> list[float]:
        try:
            values = [float(v) for v in str(self.ell).split(",") if v.strip()]
        except ValueError as exc:
            raise ConfigError(f"cannot parse ell={self.ell!r}") from exc
        if not values:
            raise ConfigError("ell is empty")
        return values

    def model(self, ell: float | None = None, validate: bool = True) -> ModelParams:
        if ell is None:
            values = self.ell_values()
            if len(values) != 1:
                raise ConfigError("this command takes a single ell")
            ell = values[0]
        try:
            params = ModelParams(ell=ell, mu=self.mu, eta=self.eta, alpha=self.alpha, m_c=self.m_c, m_d=self.m_d)
            return params.validate() if validate else params
        except ParameterError as exc:
            raise ConfigError(str(exc)) from exc

    def detector_state(self) -> DetectorState:
        try:
            return parse_state(self.state)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def echo(self) -> list[tuple[str, str]]:
        """Effective settings as ordered (key, value) pairs, unset ones skipped."""
        pairs = []
        for f in fields(self):
            value = getattr(self, f.name)
            if value is None or f.name == "out":
                continue
            key = "lambda" if f.name == "lambda_coupling" else f.name
            pairs.append((key, _render(value)))
        return pairs


def _render(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


_ALIASES = {"lambda": "lambda_coupling"}
_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str):
    kind = _TYPES[key]
    text = raw.strip()
    try:
        if kind == "bool":
            lowered = text.lower()
            if lowered not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(text)
            return lowered in ("true", "1", "yes")
        if kind.startswith("int"):
            return int(text)
        if kind.startswith("float"):
            return float(text)
    except ValueError as exc:
        raise ConfigError(f"bad value for {key}: {raw!r}") from exc
    return text


def normalize_key(key: str) -> str:
    key = key.strip().replace("-", "_")
    key = _ALIASES.get(key, key)
    if key not in _TYPES:
        raise ConfigError(f"unknown configuration key {key!r}")
    return key


def read_config_file(path: str) -> dict:
    """Parse ``key=value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for number, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{path}:{number}: expected key=value")
        key, raw = text.split("=", 1)
        key = normalize_key(key)
        values[key] = _coerce(key, raw)
    return values


def merge(file_values: dict, flag_values: dict) -> RunConfig:
    """Defaults, then file values, then flags that were actually given."""
    merged = {**file_values, **{k: v for k, v in flag_values.items() if v is not None}}
    cfg = replace(RunConfig(), **merged)
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    if cfg.points is not None and cfg.points < 5:
        raise ConfigError("points must be at least 5")
    if cfg.x_max is not None and not cfg.x_max > 0:
        raise ConfigError("x_max must be positive")
    if cfg.T is not None and not cfg.T > 0:
        raise ConfigError("T must be positive")
    return cfg
