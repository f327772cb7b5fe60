"""Rational Cauchy activation and its closed-form derivatives.

The activation of one hidden unit is

    phi(x) = (lam1 * x + lam2) / (x^2 + d^2)

with trainable (lam1, lam2, d).  Every derivative used anywhere in the
package -- with respect to the input (orders 1..3) and with respect to
each parameter, including the parameter sensitivities of phi' and phi''
needed when differentiating PDE residuals -- is hard-coded below from
the quotient rule.  No autodiff engine is involved.

All functions broadcast: scalars and numpy arrays mix freely, so the
same expressions serve both the scalar public API and the batched
hidden-layer evaluations.

Writing D = x^2 + d^2, the implemented expressions are:

    phi    = (lam1*x + lam2) / D
    phi'   = (lam1*(d^2 - x^2) - 2*lam2*x) / D^2
    phi''  = 2*(lam1*x^3 + 3*lam2*x^2 - 3*lam1*d^2*x - lam2*d^2) / D^3
    phi''' = -6*lam1*(x^4 - 6*d^2*x^2 + d^4)/D^4 - 24*lam2*x*(x^2 - d^2)/D^4

    d phi / d lam1 = x / D
    d phi / d lam2 = 1 / D
    d phi / d d    = -2*d*(lam1*x + lam2) / D^2

    d phi'  / d lam1 = (d^2 - x^2) / D^2
    d phi'  / d lam2 = -2*x / D^2
    d phi'  / d d    = 2*d*(3*lam1*x^2 + 4*lam2*x - lam1*d^2) / D^3

    d phi'' / d lam1 = 2*x*(x^2 - 3*d^2) / D^3
    d phi'' / d lam2 = 2*(3*x^2 - d^2) / D^3
    d phi'' / d d    = -8*d*(3*lam1*x^3 + 5*lam2*x^2 - 3*lam1*d^2*x - lam2*d^2) / D^4
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "D_MIN",
    "CauchyUnitParams",
    "activation",
    "activation_dx",
    "activation_grad_params",
    "activation_dx_grad_params",
    "kernel_deriv_wrt_d2",
]

# Pole guard: |d| is clamped to at least D_MIN after every optimizer
# step, keeping the denominator x^2 + d^2 bounded away from zero on the
# real line.
D_MIN = 1e-3


def _check_d(d) -> None:
    if np.any(np.abs(d) < D_MIN):
        raise ValueError(f"|d| must be >= {D_MIN} (pole guard); got min |d| = "
                         f"{float(np.min(np.abs(d)))}")


def activation(x, lam1, lam2, d):
    """Evaluate phi(x) = (lam1*x + lam2)/(x^2 + d^2)."""
    _check_d(d)
    return (lam1 * x + lam2) / (x * x + d * d)


def activation_dx(x, lam1, lam2, d, order: int = 1):
    """Derivative of phi with respect to its input, order 1, 2 or 3.

    Orders 1 and 2 are the public contract; order 3 exists for the PDE
    residual gradients (differentiating phi'' once more).
    """
    _check_d(d)
    d2 = d * d
    x2 = x * x
    D = x2 + d2
    if order == 1:
        return (lam1 * (d2 - x2) - 2.0 * lam2 * x) / (D * D)
    if order == 2:
        num = lam1 * x * x2 + 3.0 * lam2 * x2 - 3.0 * lam1 * d2 * x - lam2 * d2
        return 2.0 * num / (D * D * D)
    if order == 3:
        x4 = x2 * x2
        num = (-6.0 * lam1 * (x4 - 6.0 * d2 * x2 + d2 * d2)
               - 24.0 * lam2 * x * (x2 - d2))
        return num / (D * D * D * D)
    raise ValueError(f"derivative order must be 1, 2 or 3, got {order}")


def activation_grad_params(x, lam1, lam2, d):
    """Gradient of phi with respect to (lam1, lam2, d)."""
    _check_d(d)
    D = x * x + d * d
    g1 = x / D
    g2 = 1.0 / D
    gd = -2.0 * d * (lam1 * x + lam2) / (D * D)
    return g1, g2, gd


def activation_dx_grad_params(x, lam1, lam2, d, order: int):
    """Gradient of phi' (order 1) or phi'' (order 2) with respect to
    (lam1, lam2, d); the mixed input/parameter derivatives required by
    collocation-loss gradients."""
    _check_d(d)
    d2 = d * d
    x2 = x * x
    D = x2 + d2
    D2 = D * D
    D3 = D2 * D
    if order == 1:
        g1 = (d2 - x2) / D2
        g2 = -2.0 * x / D2
        gd = 2.0 * d * (3.0 * lam1 * x2 + 4.0 * lam2 * x - lam1 * d2) / D3
        return g1, g2, gd
    if order == 2:
        D4 = D3 * D
        g1 = 2.0 * x * (x2 - 3.0 * d2) / D3
        g2 = 2.0 * (3.0 * x2 - d2) / D3
        gd = (-8.0 * d * (3.0 * lam1 * x * x2 + 5.0 * lam2 * x2
                          - 3.0 * lam1 * d2 * x - lam2 * d2) / D4)
        return g1, g2, gd
    raise ValueError(f"order must be 1 or 2, got {order}")


def activation_bundle(x, lam1, lam2, d, with_params: bool = True) -> dict:
    """All derivative matrices the collocation-loss gradient needs, in
    one pass sharing the denominator powers.

    Returns a dict with keys "phi1", "phi2", "phi3" (input derivatives)
    and, when with_params is set, "p1_lam1", "p1_lam2", "p1_d" (parameter
    gradients of phi') and "p2_lam1", "p2_lam2", "p2_d" (of phi'').
    Identical formulas to activation_dx / activation_dx_grad_params.
    """
    _check_d(d)
    d2s = d * d
    x2 = x * x
    D = x2 + d2s
    invD = 1.0 / D
    invD2 = invD * invD
    invD3 = invD2 * invD
    invD4 = invD2 * invD2
    x3 = x * x2
    out = {
        "phi1": (lam1 * (d2s - x2) - 2.0 * lam2 * x) * invD2,
        "phi2": 2.0 * (lam1 * x3 + 3.0 * lam2 * x2 - 3.0 * lam1 * d2s * x
                       - lam2 * d2s) * invD3,
        "phi3": (-6.0 * lam1 * (x2 * x2 - 6.0 * d2s * x2 + d2s * d2s)
                 - 24.0 * lam2 * x * (x2 - d2s)) * invD4,
    }
    if with_params:
        out["p1_lam1"] = (d2s - x2) * invD2
        out["p1_lam2"] = -2.0 * x * invD2
        out["p1_d"] = 2.0 * d * (3.0 * lam1 * x2 + 4.0 * lam2 * x
                                 - lam1 * d2s) * invD3
        out["p2_lam1"] = 2.0 * x * (x2 - 3.0 * d2s) * invD3
        out["p2_lam2"] = 2.0 * (3.0 * x2 - d2s) * invD3
        out["p2_d"] = -8.0 * d * (3.0 * lam1 * x3 + 5.0 * lam2 * x2
                                  - 3.0 * lam1 * d2s * x - lam2 * d2s) * invD4
    return out


def kernel_deriv_wrt_d2(x: float, d2: float, n: int) -> float:
    """n-th derivative of the kernel 1/(x^2 + s) with respect to s = d^2:

        d^n/ds^n [ 1/(x^2 + s) ] = (-1)^n * n! / (x^2 + s)^(n+1)

    n=1 gives -1/(x^2 + d^2)^2.
    """
    if d2 <= 0:
        raise ValueError(f"d2 must be positive, got {d2}")
    if n < 1:
        raise ValueError(f"derivative order must be >= 1, got {n}")
    base = x * x + d2
    sign = -1.0 if n % 2 else 1.0
    return sign * math.factorial(n) / base ** (n + 1)


@dataclass
class CauchyUnitParams:
    """Trainable triple of one hidden unit: numerator slope, numerator
    constant, and the pole offset d (the activation uses d^2)."""

    lam1: float
    lam2: float
    d: float

    def eval(self, x):
        return activation(x, self.lam1, self.lam2, self.d)

    def eval_dx(self, x, order: int = 1):
        return activation_dx(x, self.lam1, self.lam2, self.d, order)

    def grad_params(self, x):
        return activation_grad_params(x, self.lam1, self.lam2, self.d)
