"""Shared Adam training loop for the regression models.

Works with any model exposing ``theta`` (flat parameter vector),
``loss_grad(X, Y)`` and ``clamp()``.  Full batch by default; a positive
``batch`` trains on per-step index draws (with replacement) from the
provided stream, so the whole run is a pure function of the seed.
"""

from __future__ import annotations

import numpy as np

from .numeric import AdamState, SeededRng, adam_step

__all__ = ["TrainingDiverged", "train_regression"]


class TrainingDiverged(RuntimeError):
    """Raised when a training loss turns non-finite; carries the step
    index and the model as of the failing step."""

    def __init__(self, step: int, model, loss: float):
        super().__init__(f"non-finite loss {loss!r} at step {step}")
        self.step = step
        self.model = model
        self.loss = loss


def train_regression(model, X: np.ndarray, Y: np.ndarray, steps: int,
                     lr: float = 1e-3, batch: int = 0,
                     rng: SeededRng | None = None,
                     trace_every: int = 100) -> list[tuple[int, float]]:
    """Train in place; returns the loss trace [(step, loss), ...]
    sampled every ``trace_every`` steps plus the final step."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if batch and rng is None:
        raise ValueError("minibatch training needs an rng for index draws")
    n = X.shape[0]
    state = AdamState.init(model.theta.size, lr=lr)
    trace: list[tuple[int, float]] = []
    for step in range(1, steps + 1):
        if batch and batch < n:
            idx = np.minimum((rng.uniform(batch, 0.0, 1.0) * n).astype(np.int64),
                             n - 1)
            loss, g = model.loss_grad(X[idx], Y[idx])
        else:
            loss, g = model.loss_grad(X, Y)
        if not np.isfinite(loss):
            raise TrainingDiverged(step, model, loss)
        new_theta, state = adam_step(state, model.theta, g)
        model.theta[:] = new_theta
        model.clamp()
        if trace_every and (step % trace_every == 0 or step == steps):
            trace.append((step, loss))
    return trace
