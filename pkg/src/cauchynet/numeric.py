"""Deterministic numerical substrate: seeded sampling, Adam, finite
differences, and the log-log slope estimator.

Matrices throughout the package are plain numpy ``float64`` arrays in
row-major (C) order.  All reductions rely on numpy's fixed pairwise
summation tree, so serial reruns on the same platform are bitwise
reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "SeededRng",
    "sample_uniform",
    "sample_normal",
    "AdamState",
    "adam_step",
    "central_difference",
    "loglog_slope",
]


class SeededRng:
    """Deterministic random stream backed by numpy's PCG64 generator.

    The generator algorithm is fixed to PCG64 (never varied), so an
    identical seed yields an identical stream on every platform.  A
    SeededRng is single-owner: do not share one instance across
    concurrent tasks.
    """

    def __init__(self, seed: int):
        if seed < 0:
            raise ValueError(f"seed must be a non-negative integer, got {seed}")
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))

    def uniform(self, n: int, lo: float, hi: float) -> np.ndarray:
        """Draw ``n`` values uniformly from ``[lo, hi)``."""
        if lo >= hi:
            raise ValueError(f"uniform bounds require lo < hi, got lo={lo}, hi={hi}")
        if n < 1:
            raise ValueError(f"sample count must be >= 1, got {n}")
        return self._gen.uniform(lo, hi, size=n)

    def normal(self, n: int, mean: float, sd: float) -> np.ndarray:
        """Draw ``n`` values from N(mean, sd^2); sd=0 returns the constant mean."""
        if sd < 0:
            raise ValueError(f"standard deviation must be >= 0, got {sd}")
        if sd == 0.0:
            return np.full(n, float(mean))
        return self._gen.normal(mean, sd, size=n)

    def __repr__(self) -> str:  # pragma: no cover
        return f"SeededRng(seed={self.seed})"


def sample_uniform(rng: SeededRng, n: int, lo: float, hi: float) -> np.ndarray:
    return rng.uniform(n, lo, hi)


def sample_normal(rng: SeededRng, n: int, mean: float, sd: float) -> np.ndarray:
    return rng.normal(n, mean, sd)


@dataclass
class AdamState:
    """Optimizer state for one flat parameter vector.

    ``m`` and ``v`` must have the same length as the parameter vector;
    ``step`` increases by exactly 1 per update.
    """

    m: np.ndarray
    v: np.ndarray
    step: int = 0
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @classmethod
    def init(cls, n_params: int, lr: float = 1e-3, beta1: float = 0.9,
             beta2: float = 0.999, eps: float = 1e-8) -> "AdamState":
        return cls(m=np.zeros(n_params), v=np.zeros(n_params),
                   step=0, lr=lr, beta1=beta1, beta2=beta2, eps=eps)


def adam_step(state: AdamState, params: np.ndarray,
              grad: np.ndarray) -> tuple[np.ndarray, AdamState]:
    """One Adam update with bias correction; returns fresh params and state.

    The zero-gradient vector is an exact fixed point: m and v stay zero
    and the update term is identically 0/(0+eps).
    """
    if params.shape != grad.shape or params.shape != state.m.shape:
        raise ValueError(
            f"length mismatch: params {params.shape}, grad {grad.shape}, "
            f"moments {state.m.shape}")
    if not np.isfinite(grad).all():
        bad = int(np.flatnonzero(~np.isfinite(grad))[0])
        raise ValueError(f"non-finite gradient at index {bad}: {grad[bad]!r}")

    t = state.step + 1
    m = state.beta1 * state.m + (1.0 - state.beta1) * grad
    v = state.beta2 * state.v + (1.0 - state.beta2) * (grad * grad)
    m_hat = m / (1.0 - state.beta1 ** t)
    v_hat = v / (1.0 - state.beta2 ** t)
    new_params = params - state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
    new_state = AdamState(m=m, v=v, step=t, lr=state.lr, beta1=state.beta1,
                          beta2=state.beta2, eps=state.eps)
    return new_params, new_state


def central_difference(f, x: float, order: int, h: float) -> float:
    """Central finite difference of a scalar function at ``x``.

    order 1: (f(x+h) - f(x-h)) / (2h), error O(h^2)
    order 2: (f(x+h) - 2 f(x) + f(x-h)) / h^2
    """
    if h <= 0:
        raise ValueError(f"step size must be positive, got {h}")
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    fp = f(x + h)
    fm = f(x - h)
    if order == 1:
        vals = (fp, fm)
        out = (fp - fm) / (2.0 * h)
    else:
        f0 = f(x)
        vals = (fp, f0, fm)
        out = (fp - 2.0 * f0 + fm) / (h * h)
    if not all(np.isfinite(v) for v in vals):
        raise ValueError(f"non-finite function value near x={x} with h={h}")
    return out


def loglog_slope(ns, errors) -> float:
    """Least-squares slope of log(error) against log(N).

    Requires at least two points with strictly positive N and error.
    """
    ns = np.asarray(ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if ns.size < 2 or errors.size != ns.size:
        raise ValueError(
            f"need >= 2 matching points, got {ns.size} sizes / {errors.size} errors")
    if np.any(ns <= 0) or np.any(errors <= 0):
        raise ValueError("sizes and errors must all be strictly positive")
    slope, _ = np.polyfit(np.log(ns), np.log(errors), 1)
    return float(slope)
