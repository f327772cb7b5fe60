"""Numerical-characteristics studies: conditioning of dense Cauchy-kernel
interpolation matrices, and empirical convergence-rate sweeps against a
B-spline least-squares comparator.

Sweep error conventions: per-width test errors are recorded both as MSE
and RMSE.  The trained-network trend is judged on MSE; the comparator
slope uses RMSE, where the classical degree-k spline rate O(N^-(k+1))
applies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .bspline import BSplineBasis, bspline_fit_ls
from .numeric import SeededRng, loglog_slope
from .targets import TargetFunction, make_regression_dataset
from .train import TrainingDiverged, train_regression
from .xnet import XNet

__all__ = [
    "cauchy_matrix",
    "condition_number",
    "gershgorin_bound",
    "power_iteration_spectral_radius",
    "ConditioningReport",
    "conditioning_report",
    "ConvergenceReport",
    "SweepTrainConfig",
    "convergence_sweep",
]


def cauchy_matrix(nodes: np.ndarray, poles: np.ndarray) -> np.ndarray:
    """Dense kernel matrix A[i, j] = 1 / (poles[i] - nodes[j])."""
    nodes = np.asarray(nodes, dtype=float).ravel()
    poles = np.asarray(poles, dtype=float).ravel()
    diff = poles[:, None] - nodes[None, :]
    if np.any(diff == 0.0):
        i, j = np.argwhere(diff == 0.0)[0]
        raise ValueError(f"pole {i} coincides with node {j} "
                         f"(value {poles[i]!r})")
    return 1.0 / diff


def condition_number(A: np.ndarray) -> float:
    """2-norm condition number sigma_max / sigma_min, computed with a
    full dense SVD (LAPACK via numpy)."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"need a square matrix, got shape {A.shape}")
    sv = np.linalg.svd(A, compute_uv=False)
    smin = sv[-1]
    if smin <= sv[0] * 1e-15:
        raise ValueError(f"matrix numerically singular: sigma_min ~ {smin:.3e}")
    return float(sv[0] / smin)


def gershgorin_bound(A: np.ndarray) -> float:
    """Largest disc outer edge max_i sum_j |A[i, j]|; every eigenvalue
    magnitude is below it."""
    return float(np.max(np.sum(np.abs(A), axis=1)))


def power_iteration_spectral_radius(A: np.ndarray, iters: int = 300,
                                    seed: int = 0) -> float:
    """Spectral-radius estimate from the geometric mean of the last two
    norm-growth ratios (stable when the dominant eigenvalues form a
    complex pair)."""
    rng = SeededRng(seed)
    v = rng.uniform(A.shape[0], -1.0, 1.0)
    v /= np.linalg.norm(v)
    prev_ratio = ratio = 1.0
    for _ in range(iters):
        w = A @ v
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        prev_ratio, ratio = ratio, nw
        v = w / nw
    return float(np.sqrt(prev_ratio * ratio))


@dataclass
class ConditioningReport:
    n: int
    kappa: float
    gershgorin: float
    layout: str


def conditioning_report(n: int, pole_offset: float = 0.5) -> ConditioningReport:
    """Conditioning of the kernel matrix with nodes on a uniform grid
    over [0, 1] and poles shifted by a fixed real offset."""
    if n < 1:
        raise ValueError(f"matrix size must be >= 1, got {n}")
    if pole_offset == 0.0:
        raise ValueError("pole offset must be nonzero")
    nodes = np.linspace(0.0, 1.0, n)
    A = cauchy_matrix(nodes, nodes + pole_offset)
    return ConditioningReport(
        n=n, kappa=condition_number(A), gershgorin=gershgorin_bound(A),
        layout=f"uniform-grid[0,1]+offset{pole_offset}")


@dataclass
class SweepTrainConfig:
    n_train: int = 1000
    n_test: int = 1000
    domain: tuple[float, float] = (-1.0, 1.0)
    steps: int = 20000
    lr: float = 1e-3
    bspline_degree: int = 3


@dataclass
class ConvergenceReport:
    widths: list[int]
    xnet_widths: list[int] = field(default_factory=list)
    xnet_mse: list[float] = field(default_factory=list)
    xnet_rmse: list[float] = field(default_factory=list)
    xnet_params: list[int] = field(default_factory=list)
    bspline_widths: list[int] = field(default_factory=list)
    bspline_rmse: list[float] = field(default_factory=list)
    bspline_mse: list[float] = field(default_factory=list)
    failed_widths: list[int] = field(default_factory=list)
    budget: int = 0

    @property
    def xnet_slope_mse(self) -> float:
        return loglog_slope(self.xnet_widths, self.xnet_mse)

    @property
    def bspline_slope_rmse(self) -> float:
        return loglog_slope(self.bspline_widths, self.bspline_rmse)


def convergence_sweep(target: TargetFunction, widths: list[int],
                      cfg: SweepTrainConfig, rng: SeededRng,
                      ) -> ConvergenceReport:
    """Train a fresh Cauchy network per width under a fixed step budget
    and record its test error; fit a least-squares spline of matching
    basis size (grid = width - degree) on the same data as comparator.

    A width whose training diverges is recorded in failed_widths and
    skipped.  The measured empirical slope is a proxy for the kernel
    rate claim, not a proof.
    """
    if target.input_dim != 1:
        raise ValueError("convergence sweeps are defined for 1-D targets")
    if any(w2 <= w1 for w1, w2 in zip(widths, widths[1:])) or min(widths) < 1:
        raise ValueError(f"widths must be strictly increasing and >= 1, "
                         f"got {widths}")
    ds = make_regression_dataset(target, cfg.n_train, cfg.n_test,
                                 cfg.domain, rng)
    report = ConvergenceReport(widths=list(widths), budget=cfg.steps)
    for w in widths:
        model = XNet.init(1, w, 1, SeededRng(rng.seed + w))
        try:
            train_regression(model, ds.X_train, ds.y_train, steps=cfg.steps,
                             lr=cfg.lr, trace_every=0)
        except TrainingDiverged:
            report.failed_widths.append(w)
            continue
        err = model.forward_batch(ds.X_test) - ds.y_test
        mse = float(np.mean(err * err))
        report.xnet_widths.append(w)
        report.xnet_mse.append(mse)
        report.xnet_rmse.append(float(np.sqrt(mse)))
        report.xnet_params.append(model.param_count)

        grid = w - cfg.bspline_degree
        if grid >= 1:
            basis = BSplineBasis(cfg.bspline_degree, grid, *cfg.domain)
            coeffs = bspline_fit_ls(basis, ds.X_train[:, 0], ds.y_train[:, 0])
            pred = basis.design_matrix(ds.X_test[:, 0]) @ coeffs
            bmse = float(np.mean((pred - ds.y_test[:, 0]) ** 2))
            report.bspline_widths.append(w)
            report.bspline_mse.append(bmse)
            report.bspline_rmse.append(float(np.sqrt(bmse)))
    return report
