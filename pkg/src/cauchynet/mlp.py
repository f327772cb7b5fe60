"""Dense feed-forward comparator: tanh hidden layers, identity output.

Flat parameter layout: [W1 row-major, b1, W2, b2, ...] in layer order,
with W_l of shape (layer_sizes[l], layer_sizes[l-1]).
"""

from __future__ import annotations

import numpy as np

from .numeric import SeededRng

__all__ = ["Mlp"]


class Mlp:
    def __init__(self, layer_sizes: list[int], theta: np.ndarray | None = None):
        if len(layer_sizes) < 3:
            raise ValueError(
                f"need at least one hidden layer, got sizes {layer_sizes}")
        if min(layer_sizes) < 1:
            raise ValueError(f"all layer sizes must be >= 1, got {layer_sizes}")
        self.layer_sizes = list(layer_sizes)
        self.input_dim = layer_sizes[0]
        self.output_dim = layer_sizes[-1]
        n = self.param_count
        if theta is None:
            theta = np.zeros(n)
        elif theta.shape != (n,):
            raise ValueError(f"theta must have shape ({n},), got {theta.shape}")
        self.theta = theta
        self.weights: list[np.ndarray] = []
        self.biases: list[np.ndarray] = []
        ofs = 0
        for din, dout in zip(layer_sizes, layer_sizes[1:]):
            self.weights.append(self.theta[ofs:ofs + dout * din].reshape(dout, din))
            ofs += dout * din
            self.biases.append(self.theta[ofs:ofs + dout])
            ofs += dout
        assert ofs == n

    @property
    def param_count(self) -> int:
        return sum(dout * (din + 1)
                   for din, dout in zip(self.layer_sizes, self.layer_sizes[1:]))

    @property
    def shape_label(self) -> str:
        return "[" + ", ".join(str(s) for s in self.layer_sizes) + "]"

    @classmethod
    def init(cls, layer_sizes: list[int], rng: SeededRng) -> "Mlp":
        m = cls(layer_sizes)
        for W in m.weights:
            s = 1.0 / np.sqrt(W.shape[1])
            W[:] = rng.uniform(W.size, -s, s).reshape(W.shape)
        return m

    def copy(self) -> "Mlp":
        return Mlp(self.layer_sizes, self.theta.copy())

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self.forward_batch(np.asarray(x, dtype=float).reshape(1, -1))[0]

    def forward_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        if X.shape[1] != self.input_dim:
            raise ValueError(
                f"input dim mismatch: expected {self.input_dim}, got {X.shape[1]}")
        a = X
        last = len(self.weights) - 1
        for l, (W, b) in enumerate(zip(self.weights, self.biases)):
            z = a @ W.T + b
            a = z if l == last else np.tanh(z)
        return a

    def loss_grad(self, X: np.ndarray, Y: np.ndarray) -> tuple[float, np.ndarray]:
        """MSE (mean over samples, sum over outputs) and flat gradient
        via backpropagation."""
        X = np.atleast_2d(X)
        Y = np.atleast_2d(Y)
        n = X.shape[0]
        if n == 0:
            raise ValueError("batch must be nonempty")
        if Y.shape != (n, self.output_dim):
            raise ValueError(f"target shape {Y.shape} does not match "
                             f"({n}, {self.output_dim})")
        acts = [X]
        a = X
        last = len(self.weights) - 1
        for l, (W, b) in enumerate(zip(self.weights, self.biases)):
            z = a @ W.T + b
            a = z if l == last else np.tanh(z)
            acts.append(a)
        if not np.isfinite(a).all():
            bad = int(np.argwhere(~np.isfinite(a))[0][0])
            raise FloatingPointError(f"non-finite forward value at sample {bad}")
        R = a - Y
        loss = float((R * R).sum() / n)

        g = np.empty_like(self.theta)
        delta = (2.0 / n) * R
        grads_W: list[np.ndarray] = [None] * len(self.weights)
        grads_b: list[np.ndarray] = [None] * len(self.weights)
        for l in range(last, -1, -1):
            grads_W[l] = delta.T @ acts[l]
            grads_b[l] = delta.sum(axis=0)
            if l > 0:
                delta = (delta @ self.weights[l]) * (1.0 - acts[l] * acts[l])
        ofs = 0
        for gW, gb in zip(grads_W, grads_b):
            g[ofs:ofs + gW.size] = gW.ravel(); ofs += gW.size
            g[ofs:ofs + gb.size] = gb; ofs += gb.size
        return loss, g

    def clamp(self) -> "Mlp":
        """No pole-style constraints on an MLP; kept for a uniform
        training-loop interface."""
        return self
