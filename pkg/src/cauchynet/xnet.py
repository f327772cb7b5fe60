"""Single-hidden-layer network with per-unit Cauchy activations.

Architecture: affine in, width-H Cauchy hidden layer with trainable
(lam1, lam2, d) per unit, affine out:

    y = V @ phi(W x + b) + c

Parameter count = width*(input_dim + 4) + output_dim*(width + 1).

Flat parameter layout (the "gradient layout"; serialization, gradients
and Adam state all use it):

    [ W row-major | b | (lam1, lam2, d) per unit | V row-major | c ]

Shape labels like "[2, 20, 1]" map to input_dim=2, width=20,
output_dim=1.
"""

from __future__ import annotations

import numpy as np

from . import cauchy
from .cauchy import D_MIN
from .numeric import SeededRng

__all__ = ["XNet"]


class XNet:
    """Model parameters live in one flat float64 vector; W, b, the unit
    triples, V and c are reshaped views into it, so in-place updates of
    the flat vector propagate everywhere."""

    def __init__(self, input_dim: int, width: int, output_dim: int,
                 theta: np.ndarray | None = None):
        if min(input_dim, width, output_dim) < 1:
            raise ValueError(
                f"dims must be >= 1, got ({input_dim}, {width}, {output_dim})")
        self.input_dim = input_dim
        self.width = width
        self.output_dim = output_dim
        n = self.param_count
        if theta is None:
            theta = np.zeros(n)
        elif theta.shape != (n,):
            raise ValueError(f"theta must have shape ({n},), got {theta.shape}")
        self.theta = theta
        h, i, o = width, input_dim, output_dim
        ofs = 0
        self.W = self.theta[ofs:ofs + h * i].reshape(h, i); ofs += h * i
        self.b = self.theta[ofs:ofs + h]; ofs += h
        self._units = self.theta[ofs:ofs + 3 * h].reshape(h, 3); ofs += 3 * h
        self.V = self.theta[ofs:ofs + o * h].reshape(o, h); ofs += o * h
        self.c = self.theta[ofs:ofs + o]; ofs += o
        assert ofs == n

    @property
    def param_count(self) -> int:
        return (self.width * (self.input_dim + 4)
                + self.output_dim * (self.width + 1))

    # Per-unit activation parameters as (strided) views.
    @property
    def lam1(self) -> np.ndarray:
        return self._units[:, 0]

    @property
    def lam2(self) -> np.ndarray:
        return self._units[:, 1]

    @property
    def d(self) -> np.ndarray:
        return self._units[:, 2]

    @property
    def shape_label(self) -> str:
        return f"[{self.input_dim}, {self.width}, {self.output_dim}]"

    @classmethod
    def init(cls, input_dim: int, width: int, output_dim: int,
             rng: SeededRng, scheme: str = "uniform-fanin") -> "XNet":
        """Fresh model: W, V uniform in +-1/sqrt(fan_in), b = c = 0,
        lam1, lam2 uniform in [-1, 1], d uniform in [0.5, 2].

        Draw order is fixed (W, V, lam1, lam2, d) so a seed pins the
        model exactly.
        """
        if scheme != "uniform-fanin":
            raise ValueError(f"unknown init scheme {scheme!r}")
        m = cls(input_dim, width, output_dim)
        sw = 1.0 / np.sqrt(input_dim)
        sv = 1.0 / np.sqrt(width)
        m.W[:] = rng.uniform(width * input_dim, -sw, sw).reshape(width, input_dim)
        m.V[:] = rng.uniform(output_dim * width, -sv, sv).reshape(output_dim, width)
        m.lam1[:] = rng.uniform(width, -1.0, 1.0)
        m.lam2[:] = rng.uniform(width, -1.0, 1.0)
        m.d[:] = rng.uniform(width, 0.5, 2.0)
        return m

    def copy(self) -> "XNet":
        return XNet(self.input_dim, self.width, self.output_dim,
                    self.theta.copy())

    def hidden_pre(self, X: np.ndarray) -> np.ndarray:
        """Pre-activations W X^T + b for a batch X of shape (n, input_dim)."""
        X = np.atleast_2d(X)
        if X.shape[1] != self.input_dim:
            raise ValueError(
                f"input dim mismatch: expected {self.input_dim}, got {X.shape[1]}")
        return X @ self.W.T + self.b

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Evaluate the network at one input vector; returns (output_dim,)."""
        return self.forward_batch(np.asarray(x, dtype=float).reshape(1, -1))[0]

    def forward_batch(self, X: np.ndarray) -> np.ndarray:
        """Evaluate a batch (n, input_dim) -> (n, output_dim)."""
        Z = self.hidden_pre(X)
        Phi = cauchy.activation(Z, self.lam1, self.lam2, self.d)
        return Phi @ self.V.T + self.c

    def loss_grad(self, X: np.ndarray, Y: np.ndarray) -> tuple[float, np.ndarray]:
        """Mean-squared-error loss (mean over samples, sum over outputs)
        and its gradient in the flat layout."""
        X = np.atleast_2d(X)
        Y = np.atleast_2d(Y)
        n = X.shape[0]
        if n == 0:
            raise ValueError("batch must be nonempty")
        if Y.shape != (n, self.output_dim):
            raise ValueError(f"target shape {Y.shape} does not match "
                             f"({n}, {self.output_dim})")
        lam1, lam2, d = self.lam1, self.lam2, self.d
        Z = self.hidden_pre(X)
        D = Z * Z + d * d
        invD = 1.0 / D
        Num = lam1 * Z + lam2
        Phi = Num * invD
        Yhat = Phi @ self.V.T + self.c
        if not np.isfinite(Yhat).all():
            bad = int(np.argwhere(~np.isfinite(Yhat))[0][0])
            raise FloatingPointError(f"non-finite forward value at sample {bad}")
        R = Yhat - Y
        loss = float((R * R).sum() / n)

        dY = (2.0 / n) * R                                   # (n, O)
        gV = dY.T @ Phi                                      # (O, H)
        gc = dY.sum(axis=0)
        dPhi = dY @ self.V                                   # (n, H)
        invD2 = invD * invD
        g1 = (dPhi * Z * invD).sum(axis=0)
        g2 = (dPhi * invD).sum(axis=0)
        gd = (dPhi * Num * invD2).sum(axis=0) * (-2.0 * d)
        dZ = dPhi * ((lam1 * (d * d - Z * Z) - 2.0 * lam2 * Z) * invD2)
        gW = dZ.T @ X                                        # (H, in)
        gb = dZ.sum(axis=0)
        return loss, self._assemble_grad(gW, gb, g1, g2, gd, gV, gc)

    def _assemble_grad(self, gW, gb, g1, g2, gd, gV, gc) -> np.ndarray:
        g = np.empty_like(self.theta)
        h, i, o = self.width, self.input_dim, self.output_dim
        ofs = 0
        g[ofs:ofs + h * i] = gW.ravel(); ofs += h * i
        g[ofs:ofs + h] = gb; ofs += h
        gu = g[ofs:ofs + 3 * h].reshape(h, 3)
        gu[:, 0] = g1
        gu[:, 1] = g2
        gu[:, 2] = gd
        ofs += 3 * h
        g[ofs:ofs + o * h] = gV.ravel(); ofs += o * h
        g[ofs:ofs + o] = gc
        return g

    def input_derivs(self, x: np.ndarray, j: int, order: int = 1) -> np.ndarray:
        """Exact partial derivative of every output with respect to
        input coordinate j:

            order 1:  dy/dx_j   = V @ (phi'(z)  * W[:, j])
            order 2:  d2y/dx_j2 = V @ (phi''(z) * W[:, j]^2)
        """
        if not 0 <= j < self.input_dim:
            raise ValueError(f"input index {j} out of range for dim {self.input_dim}")
        if order not in (1, 2):
            raise ValueError(f"order must be 1 or 2, got {order}")
        z = self.hidden_pre(np.asarray(x, dtype=float).reshape(1, -1))[0]
        dphi = cauchy.activation_dx(z, self.lam1, self.lam2, self.d, order)
        wj = self.W[:, j]
        return self.V @ (dphi * (wj if order == 1 else wj * wj))

    def clamp(self) -> "XNet":
        """Enforce |d| >= D_MIN in place (sign preserved, d=0 goes to
        +D_MIN); returns self."""
        d = self.d
        small = np.abs(d) < D_MIN
        if small.any():
            s = np.sign(d[small])
            s[s == 0.0] = 1.0
            d[small] = s * D_MIN
        return self
