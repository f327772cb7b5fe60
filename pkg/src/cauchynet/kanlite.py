"""Minimal KAN-style layers: one learnable univariate function per edge,
built as base_weight * silu(x) + spline(x) over a shared B-spline basis,
with node outputs summing their incoming edges (no node bias).

The spline grid is fixed (no grid extension) and training uses the same
Adam loop as every other model here.

Flat parameter layout, layer by layer:
    [ base weights (out, in) row-major | spline coeffs (out, in, n_basis) row-major ]

Spline inputs are clamped into the basis domain; outside it an edge's
spline contribution saturates at the endpoint value (zero derivative),
while the silu part remains active.
"""

from __future__ import annotations

import numpy as np

from .bspline import BSplineBasis
from .numeric import SeededRng

__all__ = ["KanLite"]


def _sigmoid(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


class KanLite:
    def __init__(self, layer_sizes: list[int], degree: int = 3, grid: int = 5,
                 a: float = -1.0, b: float = 1.0,
                 theta: np.ndarray | None = None):
        if len(layer_sizes) < 2:
            raise ValueError(f"need at least one layer, got sizes {layer_sizes}")
        if min(layer_sizes) < 1:
            raise ValueError(f"all layer sizes must be >= 1, got {layer_sizes}")
        self.layer_sizes = list(layer_sizes)
        self.input_dim = layer_sizes[0]
        self.output_dim = layer_sizes[-1]
        self.basis = BSplineBasis(degree, grid, a, b)
        nb = self.basis.n_basis
        n = self.param_count
        if theta is None:
            theta = np.zeros(n)
        elif theta.shape != (n,):
            raise ValueError(f"theta must have shape ({n},), got {theta.shape}")
        self.theta = theta
        self.base_weights: list[np.ndarray] = []
        self.coeffs: list[np.ndarray] = []
        ofs = 0
        for din, dout in zip(layer_sizes, layer_sizes[1:]):
            self.base_weights.append(
                self.theta[ofs:ofs + dout * din].reshape(dout, din))
            ofs += dout * din
            self.coeffs.append(
                self.theta[ofs:ofs + dout * din * nb].reshape(dout, din, nb))
            ofs += dout * din * nb
        assert ofs == n

    @property
    def param_count(self) -> int:
        nb = self.basis.n_basis
        return sum(dout * din * (1 + nb)
                   for din, dout in zip(self.layer_sizes, self.layer_sizes[1:]))

    @property
    def shape_label(self) -> str:
        return "[" + ", ".join(str(s) for s in self.layer_sizes) + "]"

    @classmethod
    def init(cls, layer_sizes: list[int], rng: SeededRng, degree: int = 3,
             grid: int = 5, a: float = -1.0, b: float = 1.0) -> "KanLite":
        m = cls(layer_sizes, degree, grid, a, b)
        for bw, cf in zip(m.base_weights, m.coeffs):
            s = 1.0 / np.sqrt(bw.shape[1])
            bw[:] = rng.uniform(bw.size, -s, s).reshape(bw.shape)
            cf[:] = rng.uniform(cf.size, -0.1 * s, 0.1 * s).reshape(cf.shape)
        return m

    def copy(self) -> "KanLite":
        return KanLite(self.layer_sizes, self.basis.degree, self.basis.grid,
                       self.basis.a, self.basis.b, self.theta.copy())

    def _edge_bases(self, X: np.ndarray) -> np.ndarray:
        """(n, in, n_basis) spline design values with domain clamping."""
        n, din = X.shape
        flat = self.basis.design_matrix(X.ravel(), clamp=True)
        return flat.reshape(n, din, self.basis.n_basis)

    def forward(self, x: np.ndarray) -> np.ndarray:
        return self.forward_batch(np.asarray(x, dtype=float).reshape(1, -1))[0]

    def forward_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        if X.shape[1] != self.input_dim:
            raise ValueError(
                f"input dim mismatch: expected {self.input_dim}, got {X.shape[1]}")
        a = X
        for bw, cf in zip(self.base_weights, self.coeffs):
            s = _sigmoid(a)
            B = self._edge_bases(a)
            a = (a * s) @ bw.T + np.einsum("nif,oif->no", B, cf)
        return a

    def loss_grad(self, X: np.ndarray, Y: np.ndarray) -> tuple[float, np.ndarray]:
        """MSE (mean over samples, sum over outputs) and flat gradient."""
        X = np.atleast_2d(X)
        Y = np.atleast_2d(Y)
        n = X.shape[0]
        if n == 0:
            raise ValueError("batch must be nonempty")
        if Y.shape != (n, self.output_dim):
            raise ValueError(f"target shape {Y.shape} does not match "
                             f"({n}, {self.output_dim})")
        # forward with caches
        inputs, sigs, bases = [], [], []
        a = X
        for bw, cf in zip(self.base_weights, self.coeffs):
            s = _sigmoid(a)
            B = self._edge_bases(a)
            inputs.append(a)
            sigs.append(s)
            bases.append(B)
            a = (a * s) @ bw.T + np.einsum("nif,oif->no", B, cf)
        if not np.isfinite(a).all():
            bad = int(np.argwhere(~np.isfinite(a))[0][0])
            raise FloatingPointError(f"non-finite forward value at sample {bad}")
        R = a - Y
        loss = float((R * R).sum() / n)

        g = np.empty_like(self.theta)
        nb = self.basis.n_basis
        delta = (2.0 / n) * R
        grads: list[tuple[np.ndarray, np.ndarray]] = []
        for l in range(len(self.base_weights) - 1, -1, -1):
            a_in, s, B = inputs[l], sigs[l], bases[l]
            g_bw = delta.T @ (a_in * s)
            g_cf = np.einsum("no,nif->oif", delta, B)
            grads.append((g_bw, g_cf))
            if l > 0:
                silu_dx = s * (1.0 + a_in * (1.0 - s))
                inside = ((a_in >= self.basis.a) & (a_in <= self.basis.b))
                Bd = self.basis.deriv_matrix(a_in.ravel(), clamp=True)
                Bd = Bd.reshape(a_in.shape[0], a_in.shape[1], nb)
                spline_dx = (np.einsum("no,oif->nif", delta, self.coeffs[l])
                             * Bd).sum(axis=2) * inside
                delta = silu_dx * (delta @ self.base_weights[l]) + spline_dx
        grads.reverse()
        ofs = 0
        for g_bw, g_cf in grads:
            g[ofs:ofs + g_bw.size] = g_bw.ravel(); ofs += g_bw.size
            g[ofs:ofs + g_cf.size] = g_cf.ravel(); ofs += g_cf.size
        return loss, g

    def clamp(self) -> "KanLite":
        """No pole-style constraints; kept for a uniform training-loop
        interface."""
        return self
