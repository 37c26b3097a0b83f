"""
Configuration Manager for specmoment runs.
Handles defaults, JSON config documents, and the model/function descriptor grammar.
"""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields

import numpy as np

from paley_wiener import (
    BumpTransform,
    ComplexExponential,
    GaussianEntire,
    Monomial,
    PaleyWienerFunction,
    Polynomial,
    Sinc,
    shift_scale,
)
from spectral_errors import ConfigError
from spectral_models import FIXTURES, SpectralModel

FORMATS = ("csv", "json", "plain")


def parse_descriptor(text: str) -> tuple[str, dict]:
    """Split `name:key=val,key=val` into the name and a parameter dict.

    Values are floats, except `coeffs` which is a `;`-separated float list.
    """
    if not isinstance(text, str) or not text.strip():
        raise ConfigError(f"empty descriptor: {text!r}")
    name, _, rest = text.strip().partition(":")
    params = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or not key:
            raise ConfigError(f"descriptor {text!r}: expected key=value, got {item!r}")
        try:
            if key == "coeffs":
                params[key] = tuple(float(c) for c in raw.split(";") if c.strip())
            else:
                params[key] = float(raw)
        except ValueError:
            raise ConfigError(f"descriptor {text!r}: value of {key!r} is not numeric") from None
    return name.strip().lower(), params


def build_model(descriptor: str) -> SpectralModel:
    """SpectralModel from a descriptor such as `free_particle:beta=2,hbar=1`."""
    name, params = parse_descriptor(descriptor)
    factory = FIXTURES.get(name)
    if factory is None:
        raise ConfigError(f"unknown model {name!r}; choose from {', '.join(FIXTURES)}")
    try:
        return factory(**params)
    except TypeError:
        raise ConfigError(f"model {name!r} does not take parameters {sorted(params)}") from None


def _take(params: dict, *keys):
    for key in keys:
        if key in params:
            return params.pop(key)
    return None


def build_function(descriptor: str, band: float | None = None, time: float | None = None,
                   order: int | None = None, coeffs=None) -> PaleyWienerFunction:
    """Test function from a descriptor plus the flag forms --band/--time/--order/--coeffs."""
    name, params = parse_descriptor(descriptor)
    center = _take(params, "center", "omega0")
    sigma = _take(params, "sigma")

    if name in ("exp", "exponential"):
        t = _take(params, "t")
        t = time if t is None else t
        if t is None:
            raise ConfigError("exp needs a time (exp:t=... or --time)")
        f = ComplexExponential(float(t))
    elif name in ("sinc", "bump"):
        b = _take(params, "B", "b", "band")
        b = band if b is None else b
        if b is None:
            raise ConfigError(f"{name} needs a band limit ({name}:B=... or --band)")
        f = Sinc(float(b)) if name == "sinc" else BumpTransform(float(b))
    elif name == "monomial":
        k = _take(params, "k")
        k = order if k is None else k
        if k is None or float(k) != int(k):
            raise ConfigError("monomial needs an integer order (monomial:k=... or --order)")
        f = Monomial(int(k))
    elif name in ("poly", "polynomial"):
        c = _take(params, "coeffs")
        c = coeffs if c is None else c
        if not c:
            raise ConfigError("poly needs coefficients (poly:coeffs=a0;a1;... or --coeffs)")
        f = Polynomial(tuple(float(x) for x in c))
    elif name == "gaussian":
        f = GaussianEntire()
    else:
        raise ConfigError(f"unknown function {name!r}; choose from exp, sinc, bump, monomial, poly, gaussian")

    if params:
        raise ConfigError(f"function {name!r} does not take parameters {sorted(params)}")
    if center is not None or sigma is not None:
        f = shift_scale(f, center or 0.0, 1.0 if sigma is None else sigma)
    return f


def parse_grid(text: str) -> np.ndarray:
    """`a:b:step` to the inclusive grid a, a+step, ..., <= b."""
    try:
        a, b, step = (float(x) for x in str(text).split(":"))
    except ValueError:
        raise ConfigError(f"grid must read a:b:step, got {text!r}") from None
    if not step > 0.0 or b < a:
        raise ConfigError(f"grid {text!r} needs step > 0 and b >= a")
    count = int(np.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(count, dtype=np.float64)


def parse_float_list(text, what: str) -> list[float]:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    try:
        return [float(x) for x in str(text).split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"{what} must be a comma separated list of numbers, got {text!r}") from None


@dataclass(frozen=True)
class RunConfig:
    command: str
    model: str = "exponential"
    function: str = "sinc"
    band: float | None = None
    time: float | None = None
    order: int | None = None
    coeffs: tuple | None = None
    tau: float | None = None
    n_nodes: int | None = None
    rho1: float | None = None
    rho2: float | None = None
    tol: float = 1e-10
    laguerre_order: int = 64
    format: str = "plain"
    grid: str | None = None
    sigma: float = 1.0
    times: str | None = None
    n_list: str | None = None
    oracle: bool = False
    progress: bool = False

    def __post_init__(self):
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}, got {self.format!r}")
        if not self.tol > 0.0:
            raise ConfigError(f"tol must be positive, got {self.tol}")

    def build_model(self) -> SpectralModel:
        return build_model(self.model)

    def build_function(self) -> PaleyWienerFunction:
        coeffs = self.coeffs
        if isinstance(coeffs, str):
            coeffs = parse_float_list(coeffs.replace(";", ","), "coeffs")
        return build_function(self.function, band=self.band, time=self.time, order=self.order, coeffs=coeffs)

    def contour_overrides(self) -> dict:
        return {"tau": self.tau, "n_nodes": self.n_nodes, "rho1": self.rho1, "rho2": self.rho2}

    def grid_values(self) -> np.ndarray:
        if self.grid is None:
            raise ConfigError("spectrum needs --grid a:b:step")
        return parse_grid(self.grid)

    def time_values(self) -> list[float]:
        if self.times is None:
            raise ConfigError("reconstruct needs --times t1,t2,...")
        return parse_float_list(self.times, "times")

    def n_list_values(self) -> list[int]:
        if self.n_list is None:
            raise ConfigError("converge needs --n-list n1,n2,...")
        values = parse_float_list(self.n_list, "n-list")
        if any(v != int(v) or v < 1 for v in values):
            raise ConfigError(f"n-list entries must be positive integers, got {self.n_list!r}")
        return [int(v) for v in values]


class ConfigManager:
    """Merges defaults, an optional JSON config document, and command line overrides."""

    def __init__(self, config_file: str | None = None):
        self.config_file = config_file
        self.config = self._load_config()

    def _load_config(self) -> dict:
        """Load configuration from file over the defaults."""
        config = self._default_config()
        if self.config_file is None:
            return config
        if not os.path.exists(self.config_file):
            raise ConfigError(f"config file not found: {self.config_file}")
        try:
            with open(self.config_file, "r") as f:
                document = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"error loading config {self.config_file}: {e}") from None
        if not isinstance(document, dict):
            raise ConfigError(f"config {self.config_file} must hold a JSON object")
        unknown = sorted(set(document) - set(config))
        if unknown:
            raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
        config.update(document)
        return config

    def _default_config(self) -> dict:
        """Return default configuration."""
        return {f.name: f.default for f in fields(RunConfig) if f.name != "command"} | {"command": None}

    def save_config(self, path: str | None = None):
        """Save current configuration to file."""
        target = path or self.config_file
        if target is None:
            raise ConfigError("no config file to save to")
        with open(target, "w") as f:
            json.dump(self.config, indent=4, fp=f)

    def get(self, key, default=None):
        """Get configuration value by key."""
        return self.config.get(key, default)

    def set(self, key, value):
        """Set configuration value."""
        if key not in self.config:
            raise ConfigError(f"unknown config key: {key}")
        self.config[key] = value

    def update(self, overrides: dict):
        """Apply command line overrides; None means 'not given'."""
        for key, value in overrides.items():
            if value is not None:
                self.set(key, value)

    def resolve(self, command: str | None = None) -> RunConfig:
        values = dict(self.config)
        if command is not None:
            values["command"] = command
        if values.get("command") is None:
            raise ConfigError("no command given")
        try:
            return RunConfig(**values)
        except TypeError as e:
            raise ConfigError(str(e)) from None
