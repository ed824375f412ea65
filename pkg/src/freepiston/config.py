"""Flat ``key = value`` run configuration."""

from __future__ import annotations

import re
from dataclasses import dataclass

from .dynamics import IntegratorConfig
from .errors import ValidationError
from .model import EngineParams
from .optimizer import SearchConfig

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config", "format_config",
           "ENGINE_KEYS", "INTEGRATOR_KEYS", "SEARCH_KEYS", "REQUIRED_KEYS"]

# config key -> dataclass field
ENGINE_KEYS = {
    "p1_left_pa": "p1_left",
    "p1_right_pa": "p1_right",
    "q_in_joule": "q_in",
    "x_s_m": "x_s",
    "x_m_m": "x_m",
    "bore_left_m": "bore_left",
    "polytropic_n": "n_poly",
    "mass_kg": "mass",
    "friction_n": "friction",
    "lambda": "lam",
}
SEARCH_KEYS = {
    "lambda_init": "lambda_init",
    "step_init": "step_init",
    "lambda_min": "lambda_min",
    "lambda_max": "lambda_max",
    "tol_j_m": "tol_j",
    "tol_s": "tol_s",
    "max_iter": "max_iter",
}
INTEGRATOR_KEYS = {
    "dt_init_s": "dt_init",
    "rel_tol": "rel_tol",
    "abs_tol": "abs_tol",
    "t_max_s": "t_max",
    "guard_eps_m": "guard_eps",
    "event_tol_m": "event_tol",
}
REQUIRED_KEYS = ("p1_left_pa", "p1_right_pa", "q_in_joule", "x_s_m", "x_m_m",
                 "bore_left_m", "polytropic_n", "mass_kg")
_ALL_KEYS = {**ENGINE_KEYS, **SEARCH_KEYS, **INTEGRATOR_KEYS}
_FIELD_TO_KEY = {v: k for k, v in _ALL_KEYS.items() if k != "lambda"} | {"lam": "lambda"}

_FLOAT = re.compile(r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?\Z")
_INT = re.compile(r"[+-]?\d+\Z")


class ConfigError(ValidationError):
    def __init__(self, message, line=None):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class RunConfig:
    engine: EngineParams
    integrator: IntegratorConfig
    search: SearchConfig
    lambda_given: bool = False

    def __post_init__(self):
        try:
            self.integrator.check_against(self.engine)
        except ValidationError as exc:
            raise ConfigError(_name_keys(str(exc))) from None


def _name_keys(message):
    """Prefix a validation message with the config keys it mentions."""
    found = [k for f, k in _FIELD_TO_KEY.items() if re.search(rf"\b{f}\b", message)]
    return f"{', '.join(found)}: {message}" if found else message


def parse_config(text: str) -> RunConfig:
    values: dict[str, float | int] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep or not key:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", lineno)
        if key == "max_iter":
            if not _INT.match(value):
                raise ConfigError(f"max_iter: malformed integer {value!r}", lineno)
            values[key] = int(value)
        else:
            if not _FLOAT.match(value):
                raise ConfigError(f"{key}: malformed number {value!r}", lineno)
            values[key] = float(value)
        lines[key] = lineno

    missing = [k for k in REQUIRED_KEYS if k not in values]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    def build(cls, keymap):
        kwargs = {f: values[k] for k, f in keymap.items() if k in values}
        try:
            return cls(**kwargs)
        except ValidationError as exc:
            raise ConfigError(_name_keys(str(exc))) from None

    return RunConfig(build(EngineParams, ENGINE_KEYS), build(IntegratorConfig, INTEGRATOR_KEYS),
                     build(SearchConfig, SEARCH_KEYS), lambda_given="lambda" in values)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


def format_config(cfg: RunConfig) -> str:
    """Serialise every key, so the text re-parses to an equal config."""
    out = []
    for obj, keymap in ((cfg.engine, ENGINE_KEYS), (cfg.search, SEARCH_KEYS),
                        (cfg.integrator, INTEGRATOR_KEYS)):
        for key, name in keymap.items():
            if key == "lambda" and not cfg.lambda_given:
                continue
            out.append(f"{key} = {getattr(obj, name)!r}")
    return "\n".join(out) + "\n"
