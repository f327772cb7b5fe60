"""B-spline basis on a clamped uniform knot vector, plus least-squares
fitting.

A basis of degree ``k`` over ``G`` grid cells on [a, b] has G + k basis
functions.  The knot vector repeats each endpoint k+1 times with G - 1
uniform interior knots, so the basis is a partition of unity on [a, b].

Evaluation uses the span-local de Boor triangular scheme (only the k+1
basis functions alive on the containing span are computed), vectorized
over evaluation points.
"""

from __future__ import annotations

import warnings

import numpy as np

__all__ = ["BSplineBasis", "DomainClampWarning", "bspline_eval", "bspline_fit_ls"]

RIDGE = 1e-10


class DomainClampWarning(UserWarning):
    """Raised (as a warning) when evaluation points fall outside the
    basis domain and are clamped to the nearest endpoint."""


class BSplineBasis:
    def __init__(self, degree: int, grid: int, a: float, b: float):
        if degree < 1:
            raise ValueError(f"degree must be >= 1, got {degree}")
        if grid < 1:
            raise ValueError(f"grid size must be >= 1, got {grid}")
        if not a < b:
            raise ValueError(f"domain requires a < b, got [{a}, {b}]")
        self.degree = degree
        self.grid = grid
        self.a = float(a)
        self.b = float(b)
        interior = np.linspace(a, b, grid + 1)[1:-1]
        self.knots = np.concatenate([np.full(degree + 1, self.a), interior,
                                     np.full(degree + 1, self.b)])

    @property
    def n_basis(self) -> int:
        return self.grid + self.degree

    def _spans(self, x: np.ndarray) -> np.ndarray:
        """Index j of the knot span [t_j, t_{j+1}) containing each x;
        x == b maps to the last nonempty span."""
        h = (self.b - self.a) / self.grid
        j = self.degree + np.floor((x - self.a) / h).astype(np.int64)
        return np.clip(j, self.degree, self.degree + self.grid - 1)

    def _deboor_values(self, x: np.ndarray, degree: int,
                       span: np.ndarray) -> np.ndarray:
        """Nonzero basis values of the given degree at each x: column a
        of the result is B_{span - degree + a}(x), a = 0..degree."""
        t = self.knots
        m = x.shape[0]
        vals = np.zeros((m, degree + 1))
        vals[:, 0] = 1.0
        left = np.empty((m, degree + 1))
        right = np.empty((m, degree + 1))
        for r in range(1, degree + 1):
            left[:, r] = x - t[span + 1 - r]
            right[:, r] = t[span + r] - x
            saved = np.zeros(m)
            for i in range(r):
                denom = right[:, i + 1] + left[:, r - i]
                # repeated end knots give 0/0; those terms are 0
                temp = np.divide(vals[:, i], denom, out=np.zeros(m),
                                 where=denom != 0.0)
                vals[:, i] = saved + right[:, i + 1] * temp
                saved = left[:, r - i] * temp
            vals[:, r] = saved
        return vals

    def design_matrix(self, x: np.ndarray, clamp: bool = False) -> np.ndarray:
        """Dense (len(x), n_basis) matrix of basis values.

        With clamp=False out-of-domain points are a contract violation;
        with clamp=True they are silently moved to the nearest endpoint
        (used by spline layers whose inputs are unbounded activations).
        """
        x = np.asarray(x, dtype=float).ravel()
        if clamp:
            x = np.clip(x, self.a, self.b)
        elif np.any(x < self.a) or np.any(x > self.b):
            raise ValueError(f"evaluation points outside domain [{self.a}, {self.b}]")
        span = self._spans(x)
        vals = self._deboor_values(x, self.degree, span)
        out = np.zeros((x.shape[0], self.n_basis))
        cols = span[:, None] - self.degree + np.arange(self.degree + 1)
        np.put_along_axis(out, cols, vals, axis=1)
        return out

    def deriv_matrix(self, x: np.ndarray, clamp: bool = False) -> np.ndarray:
        """Dense matrix of first derivatives of every basis function."""
        x = np.asarray(x, dtype=float).ravel()
        if clamp:
            x = np.clip(x, self.a, self.b)
        elif np.any(x < self.a) or np.any(x > self.b):
            raise ValueError(f"evaluation points outside domain [{self.a}, {self.b}]")
        k, t = self.degree, self.knots
        span = self._spans(x)
        lower = self._deboor_values(x, k - 1, span)   # degree k-1 values
        m = x.shape[0]
        out = np.zeros((m, self.n_basis))
        for a in range(k + 1):
            i = span - k + a
            term = np.zeros(m)
            if a >= 1:
                den = t[i + k] - t[i]
                term += np.divide(lower[:, a - 1], den, out=np.zeros(m),
                                  where=den != 0.0)
            if a <= k - 1:
                den = t[i + k + 1] - t[i + 1]
                term -= np.divide(lower[:, a], den, out=np.zeros(m),
                                  where=den != 0.0)
            np.put_along_axis(out, i[:, None], (k * term)[:, None], axis=1)
        return out


def bspline_eval(basis: BSplineBasis, coeffs: np.ndarray, x: float) -> float:
    """Evaluate sum_i coeffs[i] * B_i(x).  Points outside [a, b] are
    clamped to the nearest endpoint and flagged with DomainClampWarning.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape != (basis.n_basis,):
        raise ValueError(
            f"need {basis.n_basis} coefficients, got shape {coeffs.shape}")
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa < basis.a) or np.any(xa > basis.b):
        warnings.warn(f"point outside domain [{basis.a}, {basis.b}] clamped",
                      DomainClampWarning, stacklevel=2)
    vals = basis.design_matrix(xa, clamp=True) @ coeffs
    return float(vals[0]) if np.isscalar(x) or np.ndim(x) == 0 else vals


def bspline_fit_ls(basis: BSplineBasis, xs: np.ndarray,
                   ys: np.ndarray) -> np.ndarray:
    """Least-squares spline coefficients via normal equations with a
    small ridge term for rank safety (empty knot spans under random
    sampling)."""
    xs = np.asarray(xs, dtype=float).ravel()
    ys = np.asarray(ys, dtype=float).ravel()
    if xs.size != ys.size:
        raise ValueError(f"xs and ys lengths differ: {xs.size} vs {ys.size}")
    if xs.size < basis.n_basis:
        raise ValueError(
            f"need at least {basis.n_basis} samples, got {xs.size}")
    A = basis.design_matrix(xs)
    gram = A.T @ A + RIDGE * np.eye(basis.n_basis)
    try:
        coeffs = np.linalg.solve(gram, A.T @ ys)
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"degenerate design matrix: {exc}") from exc
    if not np.isfinite(coeffs).all():
        raise ValueError("degenerate design matrix: non-finite solution")
    return coeffs
