"""Connection-weights variable importance for trained networks.

The raw importance of input i is the (i, 1) entry of the product of all
layer weight matrices W1 @ W2 @ ... @ Wout; biases and activation
nonlinearities are excluded by definition of the algorithm. For a purely
linear network this product IS the exact input-output Jacobian. The sign
carries meaning: negative raw importance marks an input the prediction is
inversely proportional to, positive a directly proportional one.

The single-hidden-layer form of the algorithm generalizes to deeper
topologies here as the full matrix product.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .errors import DegenerateModelError
from .network import MlpModel
from .pipeline import FEATURE_NAMES


class Direction(enum.Enum):
    """How the prediction responds to an input, judged by the sign of its
    raw connection-weights score."""

    DIRECTLY_PROPORTIONAL = "directly_proportional"
    INVERSELY_PROPORTIONAL = "inversely_proportional"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class SensitivityReport:
    """Signed raw scores, relative importances and importance ranks.

    ``relative_pct`` preserves signs and its absolute values sum to 100.
    ``rank[i]`` is the 1-based importance rank of input i by |raw score|.
    """

    inputs: tuple[str, ...]
    raw: np.ndarray
    relative_pct: np.ndarray
    rank: tuple[int, ...]

    def ordered_indices(self) -> list[int]:
        """Input indices from most to least important."""
        return sorted(range(len(self.inputs)), key=lambda i: self.rank[i])


def connection_weights(
    model: MlpModel, input_names: tuple[str, ...] | None = None
) -> SensitivityReport:
    """Score every input of a trained model by connection weights.

    Raises
    ------
    DegenerateModelError
        If every product entry is zero (e.g. an untrained all-zero model).
    """
    product = reduce(np.matmul, model.weights)
    raw = product[:, 0].copy()
    total = float(np.abs(raw).sum())
    if total == 0.0:
        raise DegenerateModelError("all connection-weight products are zero")
    relative = 100.0 * raw / total

    if input_names is None:
        if model.n_inputs == len(FEATURE_NAMES):
            input_names = FEATURE_NAMES
        else:
            input_names = tuple(f"x{i}" for i in range(model.n_inputs))
    elif len(input_names) != model.n_inputs:
        raise ValueError("one name per model input required")

    order = sorted(range(len(raw)), key=lambda i: (-abs(raw[i]), i))
    rank = [0] * len(raw)
    for position, idx in enumerate(order, start=1):
        rank[idx] = position

    raw.flags.writeable = False
    relative.flags.writeable = False
    return SensitivityReport(
        inputs=tuple(input_names),
        raw=raw,
        relative_pct=relative,
        rank=tuple(rank),
    )


def interpret_sign(report: SensitivityReport) -> tuple[Direction, ...]:
    """Map each input's raw-score sign to a direction tag."""
    return tuple(
        Direction.DIRECTLY_PROPORTIONAL
        if r > 0
        else Direction.INVERSELY_PROPORTIONAL
        if r < 0
        else Direction.NEUTRAL
        for r in report.raw
    )
