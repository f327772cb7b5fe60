"""Experiment configuration: a flat key=value document with dotted
section prefixes, strict key checking, and documented precedence
(defaults < config file < command-line flags).

Example::

    # heaviside fit
    task.name = heaviside
    model.kind = xnet
    model.width = 64
    train.steps = 20000
    seed = 0

Unknown keys, bad values and missing required fields are reported with
the offending key (and line, when it came from a file).
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from typing import Optional

__all__ = ["ConfigError", "ExperimentConfig", "parse_kv", "build_config",
           "parse_config", "resolve_for_command", "echo_config"]


class ConfigError(ValueError):
    pass


def _parse_int(s: str) -> int:
    return int(s)


def _parse_float(s: str) -> float:
    return float(s)


def _parse_str(s: str) -> str:
    return s


def _parse_int_list(s: str) -> list[int]:
    return [int(tok) for tok in s.split(",") if tok.strip()]


def _parse_domain(s: str) -> tuple[float, float]:
    parts = [float(tok) for tok in s.split(",")]
    if len(parts) != 2 or parts[0] >= parts[1]:
        raise ValueError("expected 'lo,hi' with lo < hi")
    return parts[0], parts[1]


# dotted key -> (attribute, parser)
KEY_TABLE = {
    "task.name": ("task_name", _parse_str),
    "task.n_train": ("n_train", _parse_int),
    "task.n_test": ("n_test", _parse_int),
    "task.domain": ("domain", _parse_domain),
    "task.noise_sd": ("noise_sd", _parse_float),
    "task.series_n": ("series_n", _parse_int),
    "model.kind": ("model_kind", _parse_str),
    "model.width": ("width", _parse_int),
    "model.shape": ("shape", _parse_int_list),
    "model.degree": ("degree", _parse_int),
    "model.grid": ("grid", _parse_int),
    "train.steps": ("steps", _parse_int),
    "train.lr": ("lr", _parse_float),
    "train.batch": ("batch", _parse_int),
    "train.trace_every": ("trace_every", _parse_int),
    "pinn.alpha": ("alpha", _parse_float),
    "pinn.n_interior": ("n_interior", _parse_int),
    "pinn.n_boundary": ("n_boundary", _parse_int),
    "pinn.resolution": ("resolution", _parse_int),
    "pde.kind": ("pde_kind", _parse_str),
    "pde.nu": ("nu", _parse_float),
    "diag.sizes": ("sizes", _parse_int_list),
    "diag.pole_offset": ("pole_offset", _parse_float),
    "sweep.widths": ("widths", _parse_int_list),
    "sweep.budget": ("budget", _parse_int),
    "seed": ("seed", _parse_int),
    "out": ("out", _parse_str),
    "jobs": ("jobs", _parse_int),
}

_ATTR_TO_KEY = {attr: key for key, (attr, _) in KEY_TABLE.items()}


@dataclass
class ExperimentConfig:
    """Fully merged settings; None means 'use the per-command default'
    filled by resolve_for_command."""

    task_name: Optional[str] = None
    n_train: Optional[int] = None
    n_test: int = 1000
    domain: tuple[float, float] = (-1.0, 1.0)
    noise_sd: float = 0.0
    series_n: int = 300
    model_kind: Optional[str] = None
    width: Optional[int] = None
    shape: Optional[list[int]] = None
    degree: int = 3
    grid: Optional[int] = None
    steps: Optional[int] = None
    lr: float = 1e-3
    batch: Optional[int] = None
    trace_every: int = 100
    alpha: Optional[float] = None
    n_interior: int = 2500
    n_boundary: Optional[int] = None
    resolution: int = 100
    pde_kind: Optional[str] = None
    nu: float = 0.01
    sizes: Optional[list[int]] = None
    pole_offset: float = 0.5
    widths: Optional[list[int]] = None
    budget: Optional[int] = None
    seed: int = 0
    out: str = "runs"
    jobs: int = 1


def parse_kv(text: str, source: str = "config"
             ) -> list[tuple[str, str, str]]:
    """Syntax pass: returns (key, raw value, location) triples; rejects
    unknown keys and malformed lines."""
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', "
                              f"got {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KEY_TABLE:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        pairs.append((key, value, f"{source}:{lineno}"))
    return pairs


def build_config(pairs: list[tuple[str, str, str]]) -> ExperimentConfig:
    """Typed pass: later pairs override earlier ones."""
    cfg = ExperimentConfig()
    for key, value, where in pairs:
        attr, parser = KEY_TABLE[key]
        try:
            setattr(cfg, attr, parser(value))
        except ValueError as exc:
            raise ConfigError(f"{where}: bad value for {key!r}: {exc}") from exc
    return cfg


def parse_config(text: str, source: str = "config") -> ExperimentConfig:
    return build_config(parse_kv(text, source))


_PDE_DEFAULTS = {"heat": (0.1, 150), "poisson": (0.01, 200)}


def resolve_for_command(cfg: ExperimentConfig, command: str) -> ExperimentConfig:
    """Fill per-command defaults and check required fields, naming the
    missing dotted key."""
    def require(attr):
        if getattr(cfg, attr) is None:
            raise ConfigError(f"missing required key {_ATTR_TO_KEY[attr]!r} "
                              f"for command {command!r}")

    if command == "fit":
        require("task_name")
        require("model_kind")
        if cfg.model_kind in ("xnet",) and cfg.width is None:
            cfg.width = 64
        if cfg.model_kind in ("mlp", "kanlite"):
            require("shape")
        if cfg.grid is None:
            cfg.grid = 200 if cfg.model_kind == "bspline" else 5
        if cfg.steps is None:
            cfg.steps = 20000
        if cfg.n_train is None:
            cfg.n_train = 1000
        if cfg.batch is None:
            cfg.batch = 0
    elif command == "series":
        require("model_kind")
        if cfg.model_kind == "xnet" and cfg.width is None:
            cfg.width = 20
        if cfg.model_kind == "kanlite" and cfg.shape is None:
            cfg.shape = [5, 64, 1]
        if cfg.grid is None:
            cfg.grid = 5
        if cfg.steps is None:
            cfg.steps = 20000
        if cfg.batch is None:
            cfg.batch = 0
    elif command == "pinn":
        require("pde_kind")
        require("model_kind")
        if cfg.pde_kind not in _PDE_DEFAULTS:
            raise ConfigError(f"pde.kind must be heat or poisson, "
                              f"got {cfg.pde_kind!r}")
        alpha_dft, nb_dft = _PDE_DEFAULTS[cfg.pde_kind]
        if cfg.alpha is None:
            cfg.alpha = alpha_dft
        if cfg.n_boundary is None:
            cfg.n_boundary = nb_dft
        if cfg.model_kind == "xnet" and cfg.width is None:
            cfg.width = 20
        if cfg.model_kind == "mlp" and cfg.shape is None:
            cfg.shape = [2, 20, 20, 1]
        if cfg.steps is None:
            cfg.steps = 30000
    elif command == "diagnose":
        if cfg.sizes is None:
            cfg.sizes = [10, 20, 40, 80]
    elif command == "sweep":
        if cfg.task_name is None:
            cfg.task_name = "exp_sin_pi"
        if cfg.widths is None:
            cfg.widths = [16, 32, 64, 128]
        if cfg.budget is None:
            cfg.budget = 20000
        if cfg.n_train is None:
            cfg.n_train = 1000
    else:
        raise ConfigError(f"unknown command {command!r}")
    return cfg


def echo_config(cfg: ExperimentConfig, command: str) -> str:
    """Resolved settings as a sorted key=value document, written next to
    every run so each CSV number is traceable."""
    lines = [f"# resolved settings for {command!r}"]
    for f in fields(cfg):
        val = getattr(cfg, f.name)
        if val is None:
            continue
        key = _ATTR_TO_KEY[f.name]
        if isinstance(val, (list, tuple)):
            val = ",".join(repr(v) if isinstance(v, float) else str(v)
                           for v in val)
        lines.append(f"{key} = {val}")
    return "\n".join(lines) + "\n"
