"""Error metrics and the one-row-per-experiment record.

Metrics CSV column order is fixed and golden-tested:
experiment_id, model, shape, seed, protocol, mse, rmse, mae,
param_count, wall_seconds.  Floats are written with repr (shortest
round-trip), so identical runs produce identical bytes; wall_seconds
is the one informational column that varies between reruns.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

__all__ = ["compute_metrics", "MetricsRecord", "METRICS_COLUMNS",
           "metrics_to_csv"]

METRICS_COLUMNS = ["experiment_id", "model", "shape", "seed", "protocol",
                   "mse", "rmse", "mae", "param_count", "wall_seconds"]


def compute_metrics(pred: np.ndarray, truth: np.ndarray
                    ) -> tuple[float, float, float]:
    """(MSE, RMSE, MAE) over all entries of equal-shaped arrays."""
    pred = np.asarray(pred, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if pred.shape != truth.shape:
        raise ValueError(f"shape mismatch: {pred.shape} vs {truth.shape}")
    if pred.size == 0:
        raise ValueError("empty inputs")
    err = pred - truth
    mse = float(np.mean(err * err))
    return mse, math.sqrt(mse), float(np.mean(np.abs(err)))


@dataclass
class MetricsRecord:
    experiment_id: str
    model: str
    shape: str
    seed: int
    protocol: str
    mse: float
    rmse: float
    mae: float
    param_count: int
    wall_seconds: float

    def row(self) -> list[str]:
        return [self.experiment_id, self.model, self.shape, str(self.seed),
                self.protocol, repr(self.mse), repr(self.rmse),
                repr(self.mae), str(self.param_count),
                repr(self.wall_seconds)]


def metrics_to_csv(records: list[MetricsRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(METRICS_COLUMNS)
    for rec in records:
        writer.writerow(rec.row())
    return buf.getvalue()
