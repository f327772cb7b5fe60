"""Experiment dispatch: one function per subcommand family, each
producing metrics rows plus artifact files (loss trace, serialized
model, field report) under the output directory.

Seed derivation is fixed and documented: the experiment seed drives
dataset/collocation sampling, seed+1 drives model initialization, and
seed+2 drives minibatch index draws.  Wall time is measured around
training only (dataset generation and file I/O excluded) and is the one
non-reproducible CSV field.
"""

from __future__ import annotations

import time
from pathlib import Path

import numpy as np

from .bspline import BSplineBasis, bspline_fit_ls
from .config import ConfigError, ExperimentConfig, echo_config, resolve_for_command
from .diagnostics import SweepTrainConfig, conditioning_report, convergence_sweep
from .kanlite import KanLite
from .metrics import MetricsRecord, compute_metrics, metrics_to_csv
from .mlp import Mlp
from .modelio import dump_model
from .numeric import SeededRng, loglog_slope
from .pinn import (HeatProblem, PinnLossConfig, PoissonProblem,
                   evaluate_vs_analytic, field_report, train_pinn)
from .targets import (NoisySeriesConfig, generate_noisy_series,
                      make_regression_dataset, target_by_name,
                      windowed_dataset)
from .train import TrainingDiverged, train_regression
from .xnet import XNet

__all__ = ["run_experiment", "ExperimentFailed"]


class ExperimentFailed(RuntimeError):
    def __init__(self, experiment_id: str, message: str):
        super().__init__(f"{experiment_id}: {message}")
        self.experiment_id = experiment_id


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)


def _write_csv(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n")


def _shape_tag(sizes: list[int]) -> str:
    return "x".join(str(s) for s in sizes)


def _build_model(cfg: ExperimentConfig, input_dim: int,
                 domain: tuple[float, float]):
    init_rng = SeededRng(cfg.seed + 1)
    if cfg.model_kind == "xnet":
        return XNet.init(input_dim, cfg.width, 1, init_rng)
    if cfg.model_kind == "mlp":
        if cfg.shape[0] != input_dim:
            raise ConfigError(f"model.shape starts with {cfg.shape[0]}, task "
                              f"input dim is {input_dim}")
        return Mlp.init(cfg.shape, init_rng)
    if cfg.model_kind == "kanlite":
        if cfg.shape[0] != input_dim:
            raise ConfigError(f"model.shape starts with {cfg.shape[0]}, task "
                              f"input dim is {input_dim}")
        return KanLite.init(cfg.shape, init_rng, cfg.degree, cfg.grid,
                            domain[0], domain[1])
    raise ConfigError(f"unknown model.kind {cfg.model_kind!r}")


def _model_tag(cfg: ExperimentConfig, model) -> tuple[str, str]:
    if cfg.model_kind == "xnet":
        return "xnet", model.shape_label
    return cfg.model_kind, model.shape_label


def _protocol(cfg: ExperimentConfig) -> str:
    base = "adam-fixed-grid" if cfg.model_kind == "kanlite" else "adam"
    return (f"{base};lr={cfg.lr!r};steps={cfg.steps};"
            f"batch={cfg.batch or 0}")


def _run_fit(cfg: ExperimentConfig, out: Path) -> list[MetricsRecord]:
    task = target_by_name(cfg.task_name)
    ds = make_regression_dataset(task, cfg.n_train, cfg.n_test, cfg.domain,
                                 SeededRng(cfg.seed))
    if cfg.model_kind == "bspline":
        exp_id = (f"fit-{task.name}-bspline-k{cfg.degree}G{cfg.grid}"
                  f"-seed{cfg.seed}")
        basis = BSplineBasis(cfg.degree, cfg.grid, *cfg.domain)
        t0 = time.perf_counter()
        coeffs = bspline_fit_ls(basis, ds.X_train[:, 0], ds.y_train[:, 0])
        wall = time.perf_counter() - t0
        pred = (basis.design_matrix(ds.X_test[:, 0]) @ coeffs).reshape(-1, 1)
        mse, rmse, mae = compute_metrics(pred, ds.y_test)
        dump_model((basis, coeffs), out / f"{exp_id}-model.txt")
        return [MetricsRecord(exp_id, "bspline", f"k={cfg.degree},G={cfg.grid}",
                              cfg.seed, "least-squares;ridge=1e-10",
                              mse, rmse, mae, basis.n_basis, wall)]

    model = _build_model(cfg, task.input_dim, cfg.domain)
    name, shape = _model_tag(cfg, model)
    sizes = cfg.shape if cfg.shape else [task.input_dim, cfg.width, 1]
    exp_id = f"fit-{task.name}-{name}-{_shape_tag(sizes)}-seed{cfg.seed}"
    t0 = time.perf_counter()
    trace = train_regression(model, ds.X_train, ds.y_train, steps=cfg.steps,
                             lr=cfg.lr, batch=cfg.batch or 0,
                             rng=SeededRng(cfg.seed + 2),
                             trace_every=cfg.trace_every)
    wall = time.perf_counter() - t0
    mse, rmse, mae = compute_metrics(model.forward_batch(ds.X_test), ds.y_test)
    _write_csv(out / f"{exp_id}-trace.csv", ["step", "loss"], trace)
    dump_model(model, out / f"{exp_id}-model.txt")
    return [MetricsRecord(exp_id, name, shape, cfg.seed, _protocol(cfg),
                          mse, rmse, mae, model.theta.size, wall)]


def _run_series(cfg: ExperimentConfig, out: Path) -> list[MetricsRecord]:
    scfg = NoisySeriesConfig(n=cfg.series_n, noise_sd=cfg.noise_sd,
                             seed=cfg.seed)
    series = generate_noisy_series(scfg)
    ds = windowed_dataset(series)
    domain = (float(ds.X_train.min()), float(ds.X_train.max()))
    window = ds.X.shape[1]
    model = _build_model(cfg, window, domain)
    name, shape = _model_tag(cfg, model)
    sizes = cfg.shape if cfg.shape else [window, cfg.width, 1]
    exp_id = f"series-noise{cfg.noise_sd}-{name}-{_shape_tag(sizes)}-seed{cfg.seed}"
    t0 = time.perf_counter()
    trace = train_regression(model, ds.X_train, ds.y_train, steps=cfg.steps,
                             lr=cfg.lr, batch=cfg.batch or 0,
                             rng=SeededRng(cfg.seed + 2),
                             trace_every=cfg.trace_every)
    wall = time.perf_counter() - t0
    _write_csv(out / f"{exp_id}-trace.csv", ["step", "loss"], trace)
    dump_model(model, out / f"{exp_id}-model.txt")
    records = []
    for split, X, Y in (("train", ds.X_train, ds.y_train),
                        ("test", ds.X_test, ds.y_test)):
        mse, rmse, mae = compute_metrics(model.forward_batch(X), Y)
        records.append(MetricsRecord(f"{exp_id}-{split}", name, shape,
                                     cfg.seed, _protocol(cfg), mse, rmse,
                                     mae, model.theta.size, wall))
    return records


def _run_pinn(cfg: ExperimentConfig, out: Path) -> list[MetricsRecord]:
    problem = HeatProblem(cfg.nu) if cfg.pde_kind == "heat" else PoissonProblem()
    pcfg = PinnLossConfig(alpha=cfg.alpha, n_interior=cfg.n_interior,
                          n_boundary=cfg.n_boundary)
    model = _build_model(cfg, 2, problem.bounds)
    name, shape = _model_tag(cfg, model)
    tag = _shape_tag(cfg.shape) if cfg.shape else _shape_tag([2, cfg.width, 1])
    exp_id = f"pinn-{cfg.pde_kind}-{name}-{tag}-seed{cfg.seed}"
    t0 = time.perf_counter()
    try:
        _, trace = train_pinn(model, problem, pcfg, SeededRng(cfg.seed),
                              steps=cfg.steps, lr=cfg.lr,
                              trace_every=cfg.trace_every)
    except TrainingDiverged as exc:
        path = out / f"{exp_id}-diverged-model.txt"
        dump_model(exc.model, path)
        raise ExperimentFailed(
            exp_id, f"training diverged at step {exc.step}; model saved to "
                    f"{path}") from exc
    wall = time.perf_counter() - t0
    mse, rmse, mae = evaluate_vs_analytic(model, problem, cfg.resolution)
    _write_csv(out / f"{exp_id}-trace.csv",
               ["step", "total", "interior", "boundary"], trace)
    header, rows = field_report(model, problem, cfg.resolution)
    _write_csv(out / f"{exp_id}-field.csv", header, rows)
    dump_model(model, out / f"{exp_id}-model.txt")
    proto = (f"adam;lr={cfg.lr!r};steps={cfg.steps};alpha={cfg.alpha!r};"
             f"n_i={cfg.n_interior};n_b={cfg.n_boundary}")
    if cfg.pde_kind == "heat":
        proto += f";nu={cfg.nu!r}"
    return [MetricsRecord(exp_id, name, shape, cfg.seed, proto, mse, rmse,
                          mae, model.theta.size, wall)]


def _run_diagnose(cfg: ExperimentConfig, out: Path) -> list[MetricsRecord]:
    rows = []
    for n in cfg.sizes:
        rep = conditioning_report(n, cfg.pole_offset)
        rows.append((rep.n, rep.kappa, rep.gershgorin))
    _write_csv(out / "conditioning.csv", ["N", "kappa", "gershgorin_bound"],
               rows)
    return []


def _slope_prefix(ns: list[int], errs: list[float], i: int) -> str:
    if i < 2 or any(e <= 0 for e in errs[:i]):
        return ""
    return repr(loglog_slope(ns[:i], errs[:i]))


def _run_sweep(cfg: ExperimentConfig, out: Path) -> list[MetricsRecord]:
    target = target_by_name(cfg.task_name)
    scfg = SweepTrainConfig(n_train=cfg.n_train, n_test=cfg.n_test,
                            domain=cfg.domain, steps=cfg.budget, lr=cfg.lr,
                            bspline_degree=cfg.degree)
    report = convergence_sweep(target, cfg.widths, scfg, SeededRng(cfg.seed))
    xrows = []
    for i, w in enumerate(report.xnet_widths, start=1):
        xrows.append((w, report.xnet_params[i - 1],
                      repr(report.xnet_mse[i - 1]),
                      _slope_prefix(report.xnet_widths, report.xnet_mse, i)))
    _write_csv(out / "xnet_sweep.csv",
               ["width", "param_count", "test_mse", "slope_so_far"], xrows)
    brows = []
    for i, w in enumerate(report.bspline_widths, start=1):
        brows.append((w, w, repr(report.bspline_rmse[i - 1]),
                      _slope_prefix(report.bspline_widths,
                                    report.bspline_rmse, i)))
    _write_csv(out / "bspline_sweep.csv",
               ["width", "n_basis", "test_rmse", "slope_so_far"], brows)
    return []


_COMMANDS = {
    "fit": _run_fit,
    "series": _run_series,
    "pinn": _run_pinn,
    "diagnose": _run_diagnose,
    "sweep": _run_sweep,
}


def run_experiment(cfg: ExperimentConfig, command: str) -> list[MetricsRecord]:
    """Resolve defaults, run the pipeline, write artifacts, return the
    metrics rows (also written to metrics.csv when nonempty)."""
    if command not in _COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    cfg = resolve_for_command(cfg, command)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config_echo.txt").write_text(echo_config(cfg, command))
    records = _COMMANDS[command](cfg, out)
    if records:
        (out / "metrics.csv").write_text(metrics_to_csv(records))
    return records
