"""Run configuration: defaults, an optional key=value file, then command-line overrides."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .errors import InvalidInput

CONFIG_ENV = "SKLY_CONFIG"

DEFAULT_TOLERANCES = {
    "algebraic": 1e-8,   # antisymmetry, identity point, Casimir defect
    "det": 1e-9,         # determinant identity
    "residue": 1e-8,     # contour residues
    "jconst": 1e-9,      # constancy of w_a^2 - w_b^2
    "fit": 1e-7,         # basis expansion and homogeneity
    "cross": 1e-6,       # proportionality to the exact bracket
}


@dataclass(frozen=True)
class RunConfig:
    tau: complex = 1.2j
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    seed: int = 0
    output: str = "table"
    samples: int | None = None
    workers: int = 1

    def tol(self, layer: str) -> float:
        return self.tolerances[layer]

    @property
    def json(self) -> bool:
        return self.output == "json"

    def with_overrides(self, **kw) -> "RunConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        tols = dict(self.tolerances)
        tols.update(kw.pop("tolerances", {}))
        return replace(self, tolerances=tols, **kw)


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", "").replace("i", "j"))
    except ValueError:
        raise InvalidInput(f"not a complex number: {text!r}") from None


def parse_tolerance(text: str) -> dict:
    """``layer=value`` sets one layer; a bare number sets every layer."""
    name, sep, value = text.partition("=")
    try:
        if not sep:
            v = float(name)
            return {k: v for k in DEFAULT_TOLERANCES}
        v = float(value)
    except ValueError:
        raise InvalidInput(f"bad tolerance {text!r}") from None
    name = name.strip()
    if name not in DEFAULT_TOLERANCES:
        raise InvalidInput(f"unknown tolerance layer {name!r}; choose from {', '.join(DEFAULT_TOLERANCES)}")
    if v <= 0:
        raise InvalidInput("tolerances must be positive")
    return {name: v}


def read_config_file(path: str | os.PathLike) -> RunConfig:
    cfg = RunConfig()
    tols: dict = {}
    kw: dict = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise InvalidInput(f"cannot read config file {path}: {exc}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep:
            raise InvalidInput(f"{path}:{lineno}: expected key=value")
        if key == "tau":
            kw["tau"] = parse_complex(value)
        elif key == "seed":
            kw["seed"] = int(value)
        elif key == "samples":
            kw["samples"] = int(value)
        elif key == "workers":
            kw["workers"] = int(value)
        elif key == "output":
            if value not in ("table", "json"):
                raise InvalidInput(f"{path}:{lineno}: output must be table or json")
            kw["output"] = value
        elif key.startswith("tol."):
            tols.update(parse_tolerance(f"{key[4:]}={value}"))
        else:
            raise InvalidInput(f"{path}:{lineno}: unknown key {key!r}")
    return cfg.with_overrides(tolerances=tols, **kw)


def base_config() -> RunConfig:
    path = os.environ.get(CONFIG_ENV)
    return read_config_file(path) if path else RunConfig()
