"""Regression evaluation metrics: R^2, RMSE, MAE."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class LengthMismatch(Exception):
    pass


class DegenerateTarget(Exception):
    """Zero-variance target; R^2 is undefined."""


@dataclass(frozen=True)
class EvalResult:
    r2: float
    rmse: float
    mae: float
    n: int


def evaluate(y_true, y_pred) -> EvalResult:
    """Compute R^2, RMSE, and MAE of predictions against true values.

    Sums use compensated (fsum) accumulation; price-scale squares are large.
    """
    y_true = np.asarray(y_true, dtype=np.float64)
    y_pred = np.asarray(y_pred, dtype=np.float64)
    if y_true.shape != y_pred.shape or y_true.ndim != 1:
        raise LengthMismatch(f"shapes {y_true.shape} and {y_pred.shape} do not match")
    n = len(y_true)
    if n < 2:
        raise ValueError("need at least two samples")
    err = y_true - y_pred
    mean = math.fsum(y_true) / n
    ss_tot = math.fsum((v - mean) ** 2 for v in y_true)
    if ss_tot == 0.0:
        raise DegenerateTarget("y_true has zero variance")
    ss_res = math.fsum(e * e for e in err)
    return EvalResult(
        r2=1.0 - ss_res / ss_tot,
        rmse=math.sqrt(ss_res / n),
        mae=math.fsum(abs(e) for e in err) / n,
        n=n,
    )
