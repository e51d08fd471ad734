"""Evaluation statistics and the model-comparison report.

Residuals follow the convention e = y_pred - y_true, so the most negative
residual is the worst under-prediction. The error standard deviation is
taken over absolute errors with the N-1 divisor; skewness and kurtosis are
the population-moment g1 and excess g2 over signed residuals.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConstantTargetError,
    EmptyInputError,
    LengthMismatchError,
    MisalignedPredictionsError,
    TooFewError,
    ZeroVarianceError,
)


def _paired(y_true, y_pred):
    t = np.asarray(y_true, dtype=float).reshape(-1)
    p = np.asarray(y_pred, dtype=float).reshape(-1)
    if t.shape != p.shape:
        raise LengthMismatchError(
            f"lengths differ: {t.shape[0]} true vs {p.shape[0]} predicted"
        )
    if t.size == 0:
        raise EmptyInputError("empty vectors")
    return t, p


def mse(y_true, y_pred) -> float:
    """Mean squared error, (1/N) sum (y_true - y_pred)^2."""
    t, p = _paired(y_true, y_pred)
    d = t - p
    return float(np.mean(d * d))


def mae(y_true, y_pred) -> float:
    """Mean absolute error, (1/N) sum |y_true - y_pred|."""
    t, p = _paired(y_true, y_pred)
    return float(np.mean(np.abs(t - p)))


def error_std(y_true, y_pred) -> float:
    """Sample standard deviation (N-1) of the absolute errors."""
    t, p = _paired(y_true, y_pred)
    if t.size < 2:
        raise TooFewError("error std needs at least 2 pairs")
    alpha = np.abs(t - p)
    return float(alpha.std(ddof=1))


def r2(y_true, y_pred) -> float:
    """Coefficient of determination,
    1 - sum (y_true - y_pred)^2 / sum (y_true - mean)^2."""
    t, p = _paired(y_true, y_pred)
    if t.size < 2:
        raise TooFewError("R^2 needs at least 2 pairs")
    ss_tot = float(np.sum((t - t.mean()) ** 2))
    if ss_tot == 0.0:
        raise ConstantTargetError("target vector is constant")
    ss_res = float(np.sum((t - p) ** 2))
    return 1.0 - ss_res / ss_tot


def _central_moments(residuals, orders):
    r = np.asarray(residuals, dtype=float).reshape(-1)
    mu = r.mean()
    return [float(np.mean((r - mu) ** k)) for k in orders]


def skewness(residuals) -> float:
    """Population-moment skewness g1 = m3 / m2^1.5."""
    r = np.asarray(residuals, dtype=float).reshape(-1)
    if r.size < 3:
        raise TooFewError("skewness needs at least 3 residuals")
    m2, m3 = _central_moments(r, (2, 3))
    if m2 == 0.0:
        raise ZeroVarianceError("residuals are constant")
    return m3 / m2**1.5


def excess_kurtosis(residuals) -> float:
    """Population-moment excess kurtosis g2 = m4 / m2^2 - 3."""
    r = np.asarray(residuals, dtype=float).reshape(-1)
    if r.size < 4:
        raise TooFewError("kurtosis needs at least 4 residuals")
    m2, m4 = _central_moments(r, (2, 4))
    if m2 == 0.0:
        raise ZeroVarianceError("residuals are constant")
    return m4 / m2**2 - 3.0


@dataclass(frozen=True)
class ShapeStats:
    skewness: float
    kurtosis: float
    max_negative_error: float
    max_positive_error: float


def shape_stats(residuals) -> ShapeStats:
    """Distribution-shape summary of signed residuals.

    Needs at least 4 residuals (kurtosis); the extremes are simply the
    minimum and maximum residual and therefore bracket every residual.
    """
    r = np.asarray(residuals, dtype=float).reshape(-1)
    if r.size < 4:
        raise TooFewError("shape statistics need at least 4 residuals")
    return ShapeStats(
        skewness=skewness(r),
        kurtosis=excess_kurtosis(r),
        max_negative_error=float(r.min()),
        max_positive_error=float(r.max()),
    )


@dataclass(frozen=True)
class EvalReport:
    """All test-set statistics for one model, in log10-viscosity units."""

    n: int
    mae: float
    std: float
    r2: float
    skewness: float
    kurtosis: float
    max_negative_error: float
    max_positive_error: float

    def lines(self) -> list[str]:
        return [
            f"n: {self.n}",
            f"mae: {self.mae:.6f}",
            f"std: {self.std:.6f}",
            f"r2: {self.r2:.6f}",
            f"skewness: {self.skewness:.6f}",
            f"kurtosis: {self.kurtosis:.6f}",
            f"max_negative_error: {self.max_negative_error:.6f}",
            f"max_positive_error: {self.max_positive_error:.6f}",
        ]

    def __str__(self) -> str:
        return "\n".join(self.lines())


def evaluate(y_true, y_pred) -> EvalReport:
    """Assemble the full statistics report for one prediction set.

    Constant residuals (e.g. a perfect model) leave skewness and kurtosis
    undefined; they are reported as NaN rather than failing the whole
    report.
    """
    t, p = _paired(y_true, y_pred)
    residuals = p - t
    try:
        shape = shape_stats(residuals)
    except ZeroVarianceError:
        shape = ShapeStats(
            skewness=float("nan"),
            kurtosis=float("nan"),
            max_negative_error=float(residuals.min()),
            max_positive_error=float(residuals.max()),
        )
    return EvalReport(
        n=t.size,
        mae=mae(t, p),
        std=error_std(t, p),
        r2=r2(t, p),
        skewness=shape.skewness,
        kurtosis=shape.kurtosis,
        max_negative_error=shape.max_negative_error,
        max_positive_error=shape.max_positive_error,
    )


def compare_models(named_predictions, y_true) -> list[tuple[str, EvalReport]]:
    """Evaluate several named prediction sets against one test vector.

    ``named_predictions`` is an ordered mapping or list of (name, vector)
    pairs, e.g. externally computed baselines read from CSV. Returns
    (name, report) pairs ranked by MAE, ties keeping input order.

    Raises
    ------
    MisalignedPredictionsError
        If any prediction set's length differs from the test vector's.
    """
    t = np.asarray(y_true, dtype=float).reshape(-1)
    items = (
        list(named_predictions.items())
        if hasattr(named_predictions, "items")
        else list(named_predictions)
    )
    reports = []
    for name, pred in items:
        p = np.asarray(pred, dtype=float).reshape(-1)
        if p.shape != t.shape:
            raise MisalignedPredictionsError(
                f"{name}: {p.shape[0]} predictions for {t.shape[0]} test rows"
            )
        reports.append((name, evaluate(t, p)))
    return sorted(reports, key=lambda item: item[1].mae)


def comparison_table(ranked) -> str:
    """Render ranked (name, report) pairs as aligned text, one column per
    model and one row per statistic."""
    names = [name for name, _ in ranked]
    rows = [
        ("mae", [f"{r.mae:.4f}" for _, r in ranked]),
        ("std", [f"{r.std:.4f}" for _, r in ranked]),
        ("r2", [f"{r.r2:.4f}" for _, r in ranked]),
        ("skewness", [f"{r.skewness:.4f}" for _, r in ranked]),
        ("kurtosis", [f"{r.kurtosis:.4f}" for _, r in ranked]),
        ("max_neg_err", [f"{r.max_negative_error:.4f}" for _, r in ranked]),
        ("max_pos_err", [f"{r.max_positive_error:.4f}" for _, r in ranked]),
    ]
    widths = [
        max(len(name), *(len(row[1][i]) for row in rows))
        for i, name in enumerate(names)
    ]
    label_width = max(len("metric"), *(len(r[0]) for r in rows))
    header = "metric".ljust(label_width) + "  " + "  ".join(
        n.rjust(w) for n, w in zip(names, widths)
    )
    lines = [header]
    for label, cells in rows:
        lines.append(
            label.ljust(label_width)
            + "  "
            + "  ".join(c.rjust(w) for c, w in zip(cells, widths))
        )
    return "\n".join(lines)
