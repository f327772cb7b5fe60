"""Collocation training for the 1-D heat equation and 2-D Poisson
equation, built on exact network derivatives (no autodiff).

Both PDEs share one residual form

    r(z) = sum_j A_j * du/dx_j + sum_j B_j * d2u/dx_j^2 - forcing(z)

with per-axis coefficient maps: the heat equation (columns x, t on
[0,1]^2) uses A = {t: 1}, B = {x: -nu}, zero forcing, initial face
u(x,0) = sin(pi x) and zero side walls; the Poisson problem (columns
x, y on [-1,1]^2) uses B = {x: 1, y: 1}, forcing
f = -2 pi^2 sin(pi x) sin(pi y), zero boundary.

The collocation objective is

    total = boundary + alpha * interior

with both parts mean-squared over their point sets.  Gradients of the
interior part chain through the parameter sensitivities of phi' and
phi'' (Cauchy networks) or through hand-rolled forward-over-reverse
tangent streams (tanh MLPs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import cauchy
from .mlp import Mlp
from .numeric import AdamState, SeededRng, adam_step
from .train import TrainingDiverged
from .xnet import XNet

__all__ = [
    "HeatProblem",
    "PoissonProblem",
    "AnalyticHeatSolution",
    "AnalyticPoissonSolution",
    "CollocationSet",
    "PinnLossConfig",
    "sample_collocation",
    "heat_residual",
    "poisson_residual",
    "pinn_loss",
    "pinn_loss_grad",
    "train_pinn",
    "evaluate_vs_analytic",
    "field_report",
]


@dataclass(frozen=True)
class HeatProblem:
    """u_t = nu * u_xx on (x, t) in [0,1]^2 with u(x,0) = sin(pi x) and
    u(0,t) = u(1,t) = 0; closed form u = exp(-nu pi^2 t) sin(pi x)."""

    nu: float = 0.01

    def __post_init__(self):
        if self.nu <= 0:
            raise ValueError(f"viscosity must be positive, got {self.nu}")

    bounds = (0.0, 1.0)
    axis_names = ("x", "t")

    @property
    def first_order(self) -> dict[int, float]:
        return {1: 1.0}

    @property
    def second_order(self) -> dict[int, float]:
        return {0: -self.nu}

    def forcing(self, pts: np.ndarray) -> np.ndarray:
        return np.zeros(pts.shape[0])

    def analytic(self) -> "AnalyticHeatSolution":
        return AnalyticHeatSolution(self.nu)


@dataclass(frozen=True)
class PoissonProblem:
    """v_xx + v_yy = f on [-1,1]^2, f = -2 pi^2 sin(pi x) sin(pi y),
    zero on all four edges; closed form v = sin(pi x) sin(pi y)."""

    bounds = (-1.0, 1.0)
    axis_names = ("x", "y")

    @property
    def first_order(self) -> dict[int, float]:
        return {}

    @property
    def second_order(self) -> dict[int, float]:
        return {0: 1.0, 1: 1.0}

    def forcing(self, pts: np.ndarray) -> np.ndarray:
        return (-2.0 * np.pi ** 2 * np.sin(np.pi * pts[:, 0])
                * np.sin(np.pi * pts[:, 1]))

    def analytic(self) -> "AnalyticPoissonSolution":
        return AnalyticPoissonSolution()


class AnalyticHeatSolution:
    """Closed-form heat solution with hard-coded partials, exposing the
    same forward / input_derivs surface as a model."""

    def __init__(self, nu: float):
        self.nu = nu
        self.input_dim = 2
        self.output_dim = 1

    def _u(self, x, t):
        return np.exp(-self.nu * np.pi ** 2 * t) * np.sin(np.pi * x)

    def forward(self, pt) -> np.ndarray:
        pt = np.asarray(pt, dtype=float).ravel()
        return np.array([self._u(pt[0], pt[1])])

    def forward_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        return self._u(X[:, 0], X[:, 1]).reshape(-1, 1)

    def input_derivs(self, pt, j: int, order: int = 1) -> np.ndarray:
        x, t = np.asarray(pt, dtype=float).ravel()
        decay = np.exp(-self.nu * np.pi ** 2 * t)
        if j == 0:
            val = (decay * np.pi * np.cos(np.pi * x) if order == 1
                   else -np.pi ** 2 * decay * np.sin(np.pi * x))
        elif j == 1:
            k = -self.nu * np.pi ** 2
            val = (k if order == 1 else k * k) * decay * np.sin(np.pi * x)
        else:
            raise ValueError(f"axis {j} out of range")
        return np.array([val])


class AnalyticPoissonSolution:
    def __init__(self):
        self.input_dim = 2
        self.output_dim = 1

    def forward(self, pt) -> np.ndarray:
        x, y = np.asarray(pt, dtype=float).ravel()
        return np.array([np.sin(np.pi * x) * np.sin(np.pi * y)])

    def forward_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.atleast_2d(X)
        return (np.sin(np.pi * X[:, 0]) * np.sin(np.pi * X[:, 1])).reshape(-1, 1)

    def input_derivs(self, pt, j: int, order: int = 1) -> np.ndarray:
        x, y = np.asarray(pt, dtype=float).ravel()
        a, b = (x, y) if j == 0 else (y, x)
        if order == 1:
            val = np.pi * np.cos(np.pi * a) * np.sin(np.pi * b)
        else:
            val = -np.pi ** 2 * np.sin(np.pi * a) * np.sin(np.pi * b)
        return np.array([val])


@dataclass
class CollocationSet:
    """Interior points plus boundary/initial points with target values.

    Points are normalized to a fixed lexicographic order on
    construction, so losses reduce in a deterministic order regardless
    of sampling order.
    """

    interior: np.ndarray          # (n_i, 2)
    boundary: np.ndarray          # (n_b, 2)
    boundary_values: np.ndarray   # (n_b, 1)

    def __post_init__(self):
        self.interior = np.atleast_2d(np.asarray(self.interior, dtype=float))
        self.boundary = np.atleast_2d(np.asarray(self.boundary, dtype=float))
        self.boundary_values = np.asarray(self.boundary_values,
                                          dtype=float).reshape(-1, 1)
        if self.interior.shape[0] < 1 or self.boundary.shape[0] < 1:
            raise ValueError("collocation sets must be nonempty")
        if self.boundary.shape[0] != self.boundary_values.shape[0]:
            raise ValueError("boundary points and targets differ in length")
        oi = np.lexsort((self.interior[:, 1], self.interior[:, 0]))
        self.interior = self.interior[oi]
        ob = np.lexsort((self.boundary[:, 1], self.boundary[:, 0]))
        self.boundary = self.boundary[ob]
        self.boundary_values = self.boundary_values[ob]


@dataclass
class PinnLossConfig:
    alpha: float = 0.1
    n_interior: int = 2500
    n_boundary: int = 150

    def __post_init__(self):
        # alpha = 0 is allowed for boundary-only ablations
        if self.alpha < 0:
            raise ValueError(f"alpha must be >= 0, got {self.alpha}")
        if self.n_interior < 1 or self.n_boundary < 1:
            raise ValueError("need at least one interior and one boundary point")


def sample_collocation(problem, cfg: PinnLossConfig,
                       rng: SeededRng) -> CollocationSet:
    """Interior points uniform over the open square; boundary points
    uniform over the faces with exact condition values.

    Heat: n_boundary splits across (t=0 face, x=0 wall, x=1 wall) with
    each wall taking n//3 and the initial face the remainder.  Poisson:
    four edges in order (x=lo, x=hi, y=lo, y=hi), n//4 each with the
    remainder going one-per-edge from the front of that list.
    """
    lo, hi = problem.bounds
    pts = rng.uniform(cfg.n_interior * 2, lo, hi).reshape(cfg.n_interior, 2)
    pts[pts == lo] = np.nextafter(lo, hi)

    if isinstance(problem, HeatProblem):
        n_wall = cfg.n_boundary // 3
        n_init = cfg.n_boundary - 2 * n_wall
        xs = rng.uniform(n_init, lo, hi)
        init_pts = np.column_stack([xs, np.zeros(n_init)])
        init_vals = np.sin(np.pi * xs)
        walls, wall_vals = [], []
        for xw in (lo, hi):
            ts = rng.uniform(n_wall, lo, hi)
            walls.append(np.column_stack([np.full(n_wall, xw), ts]))
            wall_vals.append(np.zeros(n_wall))
        bpts = np.vstack([init_pts] + walls)
        bvals = np.concatenate([init_vals] + wall_vals)
    elif isinstance(problem, PoissonProblem):
        base = cfg.n_boundary // 4
        rem = cfg.n_boundary - 4 * base
        counts = [base + (1 if e < rem else 0) for e in range(4)]
        edges = []
        for e, cnt in enumerate(counts):
            free = rng.uniform(cnt, lo, hi)
            fixed = lo if e % 2 == 0 else hi
            if e < 2:
                edges.append(np.column_stack([np.full(cnt, fixed), free]))
            else:
                edges.append(np.column_stack([free, np.full(cnt, fixed)]))
        bpts = np.vstack(edges)
        bvals = np.zeros(cfg.n_boundary)
    else:
        raise TypeError(f"unsupported problem {type(problem).__name__}")
    return CollocationSet(interior=pts, boundary=bpts,
                          boundary_values=bvals.reshape(-1, 1))


def heat_residual(m, pt, nu: float) -> float:
    """u_t - nu * u_xx at one point, via exact input derivatives."""
    u_t = m.input_derivs(pt, 1, 1)[0]
    u_xx = m.input_derivs(pt, 0, 2)[0]
    return float(u_t - nu * u_xx)


def poisson_residual(m, pt) -> float:
    """u_xx + u_yy - f at one point."""
    pt = np.asarray(pt, dtype=float).ravel()
    u_xx = m.input_derivs(pt, 0, 2)[0]
    u_yy = m.input_derivs(pt, 1, 2)[0]
    f = (-2.0 * np.pi ** 2 * np.sin(np.pi * pt[0]) * np.sin(np.pi * pt[1]))
    return float(u_xx + u_yy - f)


def _xnet_interior(m: XNet, pts: np.ndarray, problem,
                   want_grad: bool, alpha: float = 1.0):
    """Interior mean-squared residual for a Cauchy network and, when
    asked, its gradient (already scaled by ``alpha``) in flat layout."""
    first, second = problem.first_order, problem.second_order
    n = pts.shape[0]
    Z = pts @ m.W.T + m.b
    bundle = cauchy.activation_bundle(Z, m.lam1, m.lam2, m.d,
                                      with_params=want_grad)
    wa = {j: a * m.W[:, j] for j, a in first.items()}
    wb = {j: bcoef * m.W[:, j] ** 2 for j, bcoef in second.items()}

    def combine(mat1, mat2):
        out = np.zeros((n, m.width))
        for j in wa:
            out += mat1 * wa[j]
        for j in wb:
            out += mat2 * wb[j]
        return out

    S = combine(bundle["phi1"], bundle["phi2"])
    v = m.V[0]
    r = S @ v - problem.forcing(pts)
    interior = float((r * r).sum() / n)
    if not want_grad:
        return interior, None

    gi = (2.0 * alpha / n) * r
    Sp = combine(bundle["phi2"], bundle["phi3"])
    gV = (gi @ S)[None, :]
    gc = np.zeros(m.output_dim)
    gb = v * (gi @ Sp)
    gW = np.empty_like(m.W)
    for ax in range(m.input_dim):
        col = (gi * pts[:, ax]) @ Sp
        if ax in first:
            col = col + first[ax] * (gi @ bundle["phi1"])
        if ax in second:
            col = col + 2.0 * second[ax] * (gi @ bundle["phi2"]) * m.W[:, ax]
        gW[:, ax] = v * col
    g1 = v * (gi @ combine(bundle["p1_lam1"], bundle["p2_lam1"]))
    g2 = v * (gi @ combine(bundle["p1_lam2"], bundle["p2_lam2"]))
    gd = v * (gi @ combine(bundle["p1_d"], bundle["p2_d"]))
    grad = m._assemble_grad(gW, gb, g1, g2, gd, gV, gc)
    return interior, grad


def _mlp_interior(m: Mlp, pts: np.ndarray, problem,
                  want_grad: bool, alpha: float = 1.0):
    """Interior residual loss for a tanh MLP via hand-rolled tangent
    streams (forward mode over inputs, reverse mode over weights)."""
    first, second = problem.first_order, problem.second_order
    axes = sorted(set(first) | set(second))
    qaxes = sorted(second)
    n, din = pts.shape
    last = len(m.weights) - 1

    a = pts
    p = {j: np.zeros((n, din)) for j in axes}
    for j in axes:
        p[j][:, j] = 1.0
    q = {j: np.zeros((n, din)) for j in qaxes}

    cache = []
    for l, (W, b) in enumerate(zip(m.weights, m.biases)):
        a_in, p_in, q_in = a, p, q
        z = a @ W.T + b
        pz = {j: p[j] @ W.T for j in axes}
        qz = {j: q[j] @ W.T for j in qaxes}
        if l == last:
            a, p, q = z, pz, qz
            t = None
        else:
            t = np.tanh(z)
            s1 = 1.0 - t * t
            s2 = -2.0 * t * s1
            a = t
            p = {j: s1 * pz[j] for j in axes}
            q = {j: s2 * pz[j] * pz[j] + s1 * qz[j] for j in qaxes}
        cache.append((a_in, p_in, q_in, t, pz, qz))

    r = -problem.forcing(pts)
    for j, coef in first.items():
        r = r + coef * p[j][:, 0]
    for j, coef in second.items():
        r = r + coef * q[j][:, 0]
    interior = float((r * r).sum() / n)
    if not want_grad:
        return interior, None

    gi = (2.0 * alpha / n) * r
    da = np.zeros((n, 1))
    dp = {j: np.zeros((n, 1)) for j in axes}
    dq = {j: np.zeros((n, 1)) for j in qaxes}
    for j, coef in first.items():
        dp[j][:, 0] += coef * gi
    for j, coef in second.items():
        dq[j][:, 0] += coef * gi

    g = np.zeros_like(m.theta)
    sizes = [(W.size, b.size) for W, b in zip(m.weights, m.biases)]
    offsets = np.cumsum([0] + [ws + bs for ws, bs in sizes])
    for l in range(last, -1, -1):
        a_in, p_in, q_in, t, pz, qz = cache[l]
        W = m.weights[l]
        if l == last:
            dz, dpz, dqz = da, dp, dq
        else:
            s1 = 1.0 - t * t
            s2 = -2.0 * t * s1
            s3 = s1 * (4.0 * t * t - 2.0 * s1)
            dz = da * s1
            for j in axes:
                dz = dz + dp[j] * s2 * pz[j]
            for j in qaxes:
                dz = dz + dq[j] * (s3 * pz[j] * pz[j] + s2 * qz[j])
            dpz = {j: dp[j] * s1 for j in axes}
            for j in qaxes:
                dpz[j] = dpz[j] + dq[j] * 2.0 * s2 * pz[j]
            dqz = {j: dq[j] * s1 for j in qaxes}
        gW = dz.T @ a_in
        for j in axes:
            gW += dpz[j].T @ p_in[j]
        for j in qaxes:
            gW += dqz[j].T @ q_in[j]
        gb = dz.sum(axis=0)
        ofs = offsets[l]
        g[ofs:ofs + gW.size] = gW.ravel()
        g[ofs + gW.size:ofs + gW.size + gb.size] = gb
        da = dz @ W
        dp = {j: dpz[j] @ W for j in axes}
        dq = {j: dqz[j] @ W for j in qaxes}
    return interior, g


def _interior_loss(m, pts, problem, want_grad: bool, alpha: float = 1.0):
    if isinstance(m, XNet):
        return _xnet_interior(m, pts, problem, want_grad, alpha)
    if isinstance(m, Mlp):
        return _mlp_interior(m, pts, problem, want_grad, alpha)
    if want_grad:
        raise TypeError(f"no interior gradient path for "
                        f"{type(m).__name__}")
    if isinstance(problem, HeatProblem):
        r = np.array([heat_residual(m, pt, problem.nu) for pt in pts])
    else:
        r = np.array([poisson_residual(m, pt) for pt in pts])
    return float((r * r).sum() / pts.shape[0]), None


def pinn_loss(m, colloc: CollocationSet, cfg: PinnLossConfig,
              problem) -> tuple[float, float, float]:
    """(total, interior, boundary) with total = boundary + alpha*interior."""
    pred = m.forward_batch(colloc.boundary)
    errs = pred - colloc.boundary_values
    boundary = float((errs * errs).sum() / colloc.boundary.shape[0])
    interior, _ = _interior_loss(m, colloc.interior, problem, want_grad=False)
    return boundary + cfg.alpha * interior, interior, boundary


def pinn_loss_grad(m, colloc: CollocationSet, cfg: PinnLossConfig,
                   problem) -> tuple[float, float, float, np.ndarray]:
    """Loss components plus the gradient of the total in flat layout."""
    boundary, g_bnd = m.loss_grad(colloc.boundary, colloc.boundary_values)
    interior, g_int = _interior_loss(m, colloc.interior, problem,
                                     want_grad=True, alpha=cfg.alpha)
    return boundary + cfg.alpha * interior, interior, boundary, g_bnd + g_int


def train_pinn(m, problem, cfg: PinnLossConfig, rng: SeededRng, steps: int,
               lr: float = 1e-3, trace_every: int = 100,
               colloc: CollocationSet | None = None,
               ) -> tuple[object, list[tuple[int, float, float, float]]]:
    """Adam on the collocation objective over a set sampled once up
    front; the pole clamp runs after every step.  Returns the trained
    model and a trace of (step, total, interior, boundary)."""
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    if colloc is None:
        colloc = sample_collocation(problem, cfg, rng)
    state = AdamState.init(m.theta.size, lr=lr)
    trace: list[tuple[int, float, float, float]] = []
    for step in range(1, steps + 1):
        total, interior, boundary, g = pinn_loss_grad(m, colloc, cfg, problem)
        if not math.isfinite(total):
            raise TrainingDiverged(step, m, total)
        new_theta, state = adam_step(state, m.theta, g)
        m.theta[:] = new_theta
        m.clamp()
        if trace_every and (step % trace_every == 0 or step == steps):
            trace.append((step, total, interior, boundary))
    return m, trace


def _eval_grid(problem, resolution: int) -> np.ndarray:
    lo, hi = problem.bounds
    axis = np.linspace(lo, hi, resolution)
    g0, g1 = np.meshgrid(axis, axis, indexing="ij")
    return np.column_stack([g0.ravel(), g1.ravel()])


def evaluate_vs_analytic(m, problem, resolution: int = 100
                         ) -> tuple[float, float, float]:
    """(MSE, RMSE, MAE) against the closed-form solution on a uniform
    tensor grid with ``resolution`` points per axis (endpoints included)."""
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    pts = _eval_grid(problem, resolution)
    pred = m.forward_batch(pts)
    exact = problem.analytic().forward_batch(pts)
    err = pred - exact
    mse = float(np.mean(err * err))
    return mse, math.sqrt(mse), float(np.mean(np.abs(err)))


def field_report(m, problem, resolution: int = 100
                 ) -> tuple[list[str], np.ndarray]:
    """Plot-ready table (header, rows) with columns
    (x, t|y, u_pred, u_exact, abs_err) over the evaluation grid."""
    pts = _eval_grid(problem, resolution)
    pred = m.forward_batch(pts)[:, 0]
    exact = problem.analytic().forward_batch(pts)[:, 0]
    header = [problem.axis_names[0], problem.axis_names[1],
              "u_pred", "u_exact", "abs_err"]
    rows = np.column_stack([pts[:, 0], pts[:, 1], pred, exact,
                            np.abs(pred - exact)])
    return header, rows
