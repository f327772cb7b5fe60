"""Benchmark target functions and dataset generators.

Targets: the 1-D Heaviside step, a 4-D and a 100-D analytic exponential,
a smooth 1-D exp(sin(pi x)) used in convergence sweeps, and a constant
zero.  Regression datasets sample each coordinate uniformly over a box
(default [-1, 1] per dimension); the noisy-series task builds a
sliding-window dataset from an order-5 scalar recurrence.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .numeric import SeededRng

__all__ = [
    "TargetFunction",
    "target_by_name",
    "eval_target",
    "Dataset",
    "make_regression_dataset",
    "NoisySeriesConfig",
    "generate_noisy_series",
    "windowed_dataset",
    "dataset_to_csv",
    "dataset_from_csv",
]


@dataclass(frozen=True)
class TargetFunction:
    """A named target with fixed input dimension.  ``fn`` maps a batch
    (n, input_dim) to values (n,)."""

    name: str
    input_dim: int
    fn: Callable[[np.ndarray], np.ndarray]

    def eval(self, x: np.ndarray) -> float:
        x = np.asarray(x, dtype=float).ravel()
        if x.shape[0] != self.input_dim:
            raise ValueError(f"target {self.name!r} takes {self.input_dim} "
                             f"inputs, got {x.shape[0]}")
        return float(self.fn(x.reshape(1, -1))[0])

    def eval_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        if X.shape[1] != self.input_dim:
            raise ValueError(f"target {self.name!r} takes {self.input_dim} "
                             f"inputs, got {X.shape[1]}")
        return self.fn(X)


def _heaviside(X: np.ndarray) -> np.ndarray:
    return (X[:, 0] > 0).astype(float)


def _exp4d(X: np.ndarray) -> np.ndarray:
    return np.exp(0.5 * (np.sin(np.pi * (X[:, 0] ** 2 + X[:, 1] ** 2))
                         + X[:, 2] * X[:, 3]))


def _exp100d(X: np.ndarray) -> np.ndarray:
    return np.exp(np.mean(np.sin(np.pi * X / 2.0) ** 2, axis=1))


def _exp_sin_pi(X: np.ndarray) -> np.ndarray:
    return np.exp(np.sin(np.pi * X[:, 0]))


TARGETS = {
    "heaviside": TargetFunction("heaviside", 1, _heaviside),
    "exp4d": TargetFunction("exp4d", 4, _exp4d),
    "exp100d": TargetFunction("exp100d", 100, _exp100d),
    "exp_sin_pi": TargetFunction("exp_sin_pi", 1, _exp_sin_pi),
    "zero": TargetFunction("zero", 1, lambda X: np.zeros(X.shape[0])),
}


def target_by_name(name: str) -> TargetFunction:
    try:
        return TARGETS[name]
    except KeyError:
        raise ValueError(f"unknown target {name!r}; known: "
                         f"{sorted(TARGETS)}") from None


def eval_target(t: TargetFunction, x: np.ndarray) -> float:
    return t.eval(x)


@dataclass
class Dataset:
    """Inputs, targets, the train/test boundary, and provenance strings
    recording how the data was produced."""

    X: np.ndarray               # (n, input_dim)
    y: np.ndarray               # (n, output_dim)
    n_train: int
    provenance: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.X.shape[0] != self.y.shape[0]:
            raise ValueError(f"row counts differ: X {self.X.shape[0]}, "
                             f"y {self.y.shape[0]}")
        if not 0 <= self.n_train <= self.X.shape[0]:
            raise ValueError(f"split {self.n_train} out of bounds for "
                             f"{self.X.shape[0]} rows")

    @property
    def X_train(self) -> np.ndarray:
        return self.X[:self.n_train]

    @property
    def y_train(self) -> np.ndarray:
        return self.y[:self.n_train]

    @property
    def X_test(self) -> np.ndarray:
        return self.X[self.n_train:]

    @property
    def y_test(self) -> np.ndarray:
        return self.y[self.n_train:]


def make_regression_dataset(t: TargetFunction, n_train: int, n_test: int,
                            domain: tuple[float, float],
                            rng: SeededRng) -> Dataset:
    """Sample train then test inputs uniformly per dimension over
    ``domain`` (disjoint consecutive draws from one stream)."""
    if n_train < 1 or n_test < 0:
        raise ValueError(f"need n_train >= 1 and n_test >= 0, "
                         f"got {n_train}/{n_test}")
    lo, hi = domain
    d = t.input_dim
    n = n_train + n_test
    X = rng.uniform(n * d, lo, hi).reshape(n, d)
    y = t.eval_batch(X).reshape(n, 1)
    prov = {"target": t.name, "seed": str(rng.seed),
            "domain": f"{lo},{hi}", "n_train": str(n_train),
            "n_test": str(n_test)}
    return Dataset(X=X, y=y, n_train=n_train, provenance=prov)


@dataclass
class NoisySeriesConfig:
    n: int = 300
    noise_sd: float = 0.0
    init_lo: float = 0.0
    init_hi: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if self.noise_sd < 0:
            raise ValueError(f"noise_sd must be >= 0, got {self.noise_sd}")
        if self.n <= 5:
            raise ValueError(f"series length must exceed the window (5), "
                             f"got {self.n}")
        if self.init_lo > self.init_hi:
            raise ValueError(f"bad init range [{self.init_lo}, {self.init_hi}]")


def generate_noisy_series(cfg: NoisySeriesConfig) -> np.ndarray:
    """Order-5 recurrence

        f_i = 0.1*s0*s1 + 0.5*sin(s2*s3) + sin(s4) + mu_i

    where the state (s0..s4) starts uniform in [init_lo, init_hi] and
    shifts left each step with the new value appended.  (The published
    update list omits the s3 slot; we complete it as the left shift
    s3 <- old s4, which is the unique choice consistent with the other
    four updates.)  Noise mu ~ N(0, noise_sd^2) is applied only on the
    first 80% of the steps; the final 20% is noise-free.
    """
    rng = SeededRng(cfg.seed)
    if cfg.init_lo == cfg.init_hi:
        state = np.full(5, cfg.init_lo)
    else:
        state = rng.uniform(5, cfg.init_lo, cfg.init_hi)
    n_noisy = int(np.floor(0.8 * cfg.n))
    mu = np.zeros(cfg.n)
    mu[:n_noisy] = rng.normal(n_noisy, 0.0, cfg.noise_sd)
    series = np.empty(cfg.n)
    for i in range(cfg.n):
        nxt = (0.1 * state[0] * state[1] + 0.5 * np.sin(state[2] * state[3])
               + np.sin(state[4]) + mu[i])
        series[i] = nxt
        state = np.concatenate([state[1:], [nxt]])
    return series


def windowed_dataset(series: np.ndarray, window: int = 5,
                     train_frac: float = 0.8) -> Dataset:
    """Sliding-window supervision: each row maps ``window`` consecutive
    values to the next one; rows are split train/test at ``train_frac``."""
    series = np.asarray(series, dtype=float).ravel()
    n = series.shape[0]
    if n <= window:
        raise ValueError(f"series length {n} must exceed window {window}")
    rows = n - window
    idx = np.arange(rows)[:, None] + np.arange(window)
    X = series[idx]
    y = series[window:].reshape(-1, 1)
    n_train = int(np.floor(rows * train_frac))
    prov = {"target": "noisy-series", "window": str(window),
            "train_frac": str(train_frac)}
    return Dataset(X=X, y=y, n_train=n_train, provenance=prov)


def dataset_to_csv(ds: Dataset) -> str:
    """CSV text: one provenance comment line, a header, then rows."""
    buf = io.StringIO()
    prov = dict(ds.provenance)
    prov["n_train"] = str(ds.n_train)
    buf.write("# " + " ".join(f"{k}={v}" for k, v in sorted(prov.items()))
              + "\n")
    din, dout = ds.X.shape[1], ds.y.shape[1]
    buf.write(",".join([f"x{i}" for i in range(din)]
                       + [f"y{i}" for i in range(dout)]) + "\n")
    for xi, yi in zip(ds.X, ds.y):
        buf.write(",".join(repr(v) for v in xi) + ","
                  + ",".join(repr(v) for v in yi) + "\n")
    return buf.getvalue()


def dataset_from_csv(text: str) -> Dataset:
    lines = text.strip().split("\n")
    if not lines or not lines[0].startswith("#"):
        raise ValueError("missing provenance comment line")
    prov = dict(tok.split("=", 1) for tok in lines[0][1:].split())
    header = lines[1].split(",")
    din = sum(1 for h in header if h.startswith("x"))
    dout = len(header) - din
    data = np.array([[float(v) for v in line.split(",")]
                     for line in lines[2:]])
    return Dataset(X=data[:, :din], y=data[:, din:din + dout],
                   n_train=int(prov.pop("n_train")), provenance=prov)
