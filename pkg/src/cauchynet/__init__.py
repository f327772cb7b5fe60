"""Cauchy-activation networks with exact derivatives, comparator models,
collocation PDE solvers, and a reproducible experiment harness."""

from .cauchy import (CauchyUnitParams, D_MIN, activation, activation_dx,
                     activation_grad_params, kernel_deriv_wrt_d2)
from .numeric import (AdamState, SeededRng, adam_step, central_difference,
                      loglog_slope, sample_normal, sample_uniform)
from .xnet import XNet
from .mlp import Mlp
from .kanlite import KanLite
from .bspline import BSplineBasis, bspline_eval, bspline_fit_ls
from .targets import (Dataset, NoisySeriesConfig, TargetFunction,
                      eval_target, generate_noisy_series,
                      make_regression_dataset, target_by_name,
                      windowed_dataset)
from .pinn import (AnalyticHeatSolution, AnalyticPoissonSolution,
                   CollocationSet, HeatProblem, PinnLossConfig,
                   PoissonProblem, evaluate_vs_analytic, heat_residual,
                   pinn_loss, pinn_loss_grad, poisson_residual,
                   sample_collocation, train_pinn)
from .diagnostics import (ConditioningReport, ConvergenceReport,
                          cauchy_matrix, condition_number,
                          conditioning_report, convergence_sweep,
                          gershgorin_bound)
from .metrics import MetricsRecord, compute_metrics
from .train import TrainingDiverged, train_regression
from .config import ExperimentConfig, parse_config
from .runner import run_experiment

__version__ = "0.1.0"
