"""Dense feed-forward network with hand-derived gradients.

The architecture family is fixed: an input layer, ``depth`` equal-width
hidden layers sharing one activation, and a linear single-output head for
the log10-viscosity regression target. Gradients come from reverse-mode
accumulation written out by hand; optimization is Adam over shuffled
mini-batches with early stopping on validation loss.

Everything is double precision and deterministic for a given seed: the seed
fans out to independent substreams for initialization and epoch shuffling.
"""

from __future__ import annotations

import concurrent.futures
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptySetError,
    InvalidCardinalityError,
    ShapeMismatchError,
)
from .pipeline import Scaler


def _relu(z):
    return np.maximum(z, 0.0)


def _relu_prime(z, a):
    return (z > 0.0).astype(float)


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _sigmoid_prime(z, a):
    return a * (1.0 - a)


def _tanh(z):
    return np.tanh(z)


def _tanh_prime(z, a):
    return 1.0 - a * a


def _identity(z):
    return z


def _identity_prime(z, a):
    return np.ones_like(z)


#: activation name -> (function, derivative as f(preactivation, activation))
ACTIVATIONS = {
    "relu": (_relu, _relu_prime),
    "sigmoid": (_sigmoid, _sigmoid_prime),
    "tanh": (_tanh, _tanh_prime),
    "identity": (_identity, _identity_prime),
}

#: activations selectable for training; identity exists for linear fixtures
TRAINABLE_ACTIVATIONS = ("relu", "sigmoid", "tanh")


def min_width_bound(d_x: int, d_y: int) -> int:
    """Upper bound on the minimum hidden width that still grants universal
    approximation at arbitrary depth: d_x + d_y + 1."""
    if d_x < 1 or d_y < 1:
        raise InvalidCardinalityError(
            f"cardinalities must be >= 1, got ({d_x}, {d_y})"
        )
    return d_x + d_y + 1


@dataclass(frozen=True)
class TrainConfig:
    """Training hyperparameters.

    ``depth`` hidden layers of ``width`` neurons each; He-uniform weights;
    biases all zeros or all ones. Early stopping monitors validation MSE
    with the given patience and restores the best epoch's parameters.
    """

    depth: int = 3
    width: int = 22
    activation: str = "relu"
    bias_init: str = "zeros"
    max_epochs: int = 10000
    batch_size: int = 64
    learning_rate: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    patience: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.width < 1:
            raise ValueError("width must be >= 1")
        if self.activation not in TRAINABLE_ACTIVATIONS:
            raise ValueError(
                f"activation must be one of {TRAINABLE_ACTIVATIONS}, "
                f"got {self.activation!r}"
            )
        if self.bias_init not in ("zeros", "ones"):
            raise ValueError("bias_init must be 'zeros' or 'ones'")
        if self.max_epochs < 1 or self.batch_size < 1 or self.patience < 1:
            raise ValueError("max_epochs, batch_size and patience must be >= 1")


@dataclass
class MlpModel:
    """Layer dimensions, per-hidden-layer activations, parameters and the
    input scaler the model was trained against (None for unscaled inputs).

    Hidden layers use the named activations; the output layer is linear
    with width 1 by convention of the regression head.
    """

    layer_dims: tuple[int, ...]
    activations: tuple[str, ...]
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    scaler: Scaler | None = None

    def __post_init__(self):
        dims = self.layer_dims
        if len(dims) < 2:
            raise ValueError("need at least input and output dims")
        if len(self.activations) != len(dims) - 2:
            raise ValueError("one activation per hidden layer")
        for name in self.activations:
            if name not in ACTIVATIONS:
                raise ValueError(f"unknown activation {name!r}")
        if len(self.weights) != len(dims) - 1 or len(self.biases) != len(dims) - 1:
            raise ValueError("one weight matrix and bias vector per layer")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (dims[i], dims[i + 1]):
                raise ShapeMismatchError(
                    f"layer {i}: weight shape {w.shape} != {(dims[i], dims[i + 1])}"
                )
            if b.shape != (dims[i + 1],):
                raise ShapeMismatchError(
                    f"layer {i}: bias shape {b.shape} != {(dims[i + 1],)}"
                )
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise ValueError(f"layer {i}: non-finite parameters")

    @property
    def n_inputs(self) -> int:
        return self.layer_dims[0]

    @property
    def n_params(self) -> int:
        return sum(w.size + b.size for w, b in zip(self.weights, self.biases))

    def copy(self) -> "MlpModel":
        return MlpModel(
            layer_dims=self.layer_dims,
            activations=self.activations,
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
            scaler=self.scaler,
        )

    def forward(self, x) -> np.ndarray:
        """Affine-then-activation per hidden layer, linear output.

        Accepts a (n, d_in) batch or a single (d_in,) row; always returns
        shape (n, 1).
        """
        a, _, _ = _forward_cached(self, _as_batch(x, self.n_inputs))
        return a[-1]

    def predict(self, features) -> np.ndarray:
        """Predict from unscaled feature rows, applying the attached scaler.

        Returns a flat (n,) vector of log10 viscosities.
        """
        x = _as_batch(features, self.n_inputs)
        if self.scaler is not None:
            x = self.scaler.transform(x)
        return self.forward(x)[:, 0]


def _as_batch(x, width: int) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2 or arr.shape[1] != width:
        raise ShapeMismatchError(
            f"expected feature rows of width {width}, got shape {arr.shape}"
        )
    return arr


def _forward_cached(model, x):
    """Forward pass keeping preactivations and activations for backprop."""
    acts = [x]
    pres = []
    last = len(model.weights) - 1
    for i, (w, b) in enumerate(zip(model.weights, model.biases)):
        z = acts[-1] @ w + b
        pres.append(z)
        if i == last:
            acts.append(z)
        else:
            acts.append(ACTIVATIONS[model.activations[i]][0](z))
    return acts, pres, last


def init_network(
    config: TrainConfig,
    scaler: Scaler | None = None,
    n_inputs: int = 20,
    n_outputs: int = 1,
) -> MlpModel:
    """He-uniform initialization: every weight drawn from
    U(-sqrt(6/fan_in), +sqrt(6/fan_in)); biases all zeros or all ones.

    Deterministic per config seed.
    """
    dims = (n_inputs,) + (config.width,) * config.depth + (n_outputs,)
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 0]))
    weights, biases = [], []
    bias_value = 0.0 if config.bias_init == "zeros" else 1.0
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        limit = np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.full(fan_out, bias_value))
    return MlpModel(
        layer_dims=dims,
        activations=(config.activation,) * config.depth,
        weights=weights,
        biases=biases,
        scaler=scaler,
    )


def _as_targets(y, n: int) -> np.ndarray:
    arr = np.asarray(y, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.shape != (n, 1):
        raise ShapeMismatchError(
            f"expected targets of shape ({n},) or ({n}, 1), got {arr.shape}"
        )
    return arr


def loss_and_gradients(model: MlpModel, batch_x, batch_y):
    """Mean-squared-error loss and its gradients for one batch.

    Returns ``(loss, (weight_grads, bias_grads))`` with gradient shapes
    mirroring the parameters.
    """
    x = _as_batch(batch_x, model.n_inputs)
    y = _as_targets(batch_y, x.shape[0])
    acts, pres, last = _forward_cached(model, x)
    n = x.shape[0]
    diff = acts[-1] - y
    loss = float(np.mean(diff * diff))

    delta = 2.0 * diff / n
    weight_grads = [None] * len(model.weights)
    bias_grads = [None] * len(model.biases)
    for i in range(last, -1, -1):
        weight_grads[i] = acts[i].T @ delta
        bias_grads[i] = delta.sum(axis=0)
        if i > 0:
            prime = ACTIVATIONS[model.activations[i - 1]][1](pres[i - 1], acts[i])
            delta = (delta @ model.weights[i].T) * prime
    return loss, (weight_grads, bias_grads)


class AdamState:
    """First/second-moment accumulators mirroring the model parameters."""

    def __init__(self, model: MlpModel):
        self.m = [np.zeros_like(w) for w in model.weights] + [
            np.zeros_like(b) for b in model.biases
        ]
        self.v = [np.zeros_like(x) for x in self.m]
        self.t = 0


def adam_step(model: MlpModel, gradients, state: AdamState, config: TrainConfig):
    """One Adam update with bias-corrected moments; mutates model and state."""
    weight_grads, bias_grads = gradients
    params = model.weights + model.biases
    grads = list(weight_grads) + list(bias_grads)
    state.t += 1
    b1, b2, eps, lr = config.beta1, config.beta2, config.epsilon, config.learning_rate
    correct1 = 1.0 - b1**state.t
    correct2 = 1.0 - b2**state.t
    for p, g, m, v in zip(params, grads, state.m, state.v):
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        p -= lr * (m / correct1) / (np.sqrt(v / correct2) + eps)
    return model, state


@dataclass
class TrainHistory:
    """Per-epoch losses and metrics for the training and validation sets."""

    loss: list[float] = field(default_factory=list)
    mae: list[float] = field(default_factory=list)
    val_loss: list[float] = field(default_factory=list)
    val_mae: list[float] = field(default_factory=list)
    stop_epoch: int = 0
    best_epoch: int = 0

    def rows(self):
        """(epoch, loss, mae, val_loss, val_mae) tuples, epoch 1-based."""
        return [
            (i + 1, l, m, vl, vm)
            for i, (l, m, vl, vm) in enumerate(
                zip(self.loss, self.mae, self.val_loss, self.val_mae)
            )
        ]


def _mse_mae(model, x, y):
    diff = model.forward(x)[:, 0] - y
    return float(np.mean(diff * diff)), float(np.mean(np.abs(diff)))


def train(
    model: MlpModel,
    x_train: np.ndarray,
    y_train: np.ndarray,
    x_val: np.ndarray,
    y_val: np.ndarray,
    config: TrainConfig,
) -> tuple[MlpModel, TrainHistory]:
    """Mini-batch Adam training with early stopping.

    Inputs must already be scaled. Each epoch reshuffles the training rows
    (seeded), walks batches of ``config.batch_size`` keeping the last
    partial batch, then records full-set MSE and MAE for both sets. Training
    stops when validation loss has not improved for ``config.patience``
    consecutive epochs, or at ``config.max_epochs``. Returns a model
    carrying the best-validation epoch's parameters, plus the history.
    """
    x_train = _as_batch(x_train, model.n_inputs)
    x_val = _as_batch(x_val, model.n_inputs)
    y_train = np.asarray(y_train, dtype=float).reshape(-1)
    y_val = np.asarray(y_val, dtype=float).reshape(-1)
    if x_train.shape[0] == 0 or x_val.shape[0] == 0:
        raise EmptySetError("training and validation sets must be non-empty")
    if y_train.shape[0] != x_train.shape[0] or y_val.shape[0] != x_val.shape[0]:
        raise ShapeMismatchError("feature/target row counts differ")

    model = model.copy()
    state = AdamState(model)
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, 1]))
    history = TrainHistory()
    n = x_train.shape[0]

    best_val = np.inf
    best_weights = [w.copy() for w in model.weights]
    best_biases = [b.copy() for b in model.biases]
    bad_epochs = 0

    for epoch in range(1, config.max_epochs + 1):
        perm = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            idx = perm[start : start + config.batch_size]
            _, grads = loss_and_gradients(model, x_train[idx], y_train[idx])
            adam_step(model, grads, state, config)

        tr_loss, tr_mae = _mse_mae(model, x_train, y_train)
        va_loss, va_mae = _mse_mae(model, x_val, y_val)
        history.loss.append(tr_loss)
        history.mae.append(tr_mae)
        history.val_loss.append(va_loss)
        history.val_mae.append(va_mae)

        if va_loss < best_val:
            best_val = va_loss
            history.best_epoch = epoch
            best_weights = [w.copy() for w in model.weights]
            best_biases = [b.copy() for b in model.biases]
            bad_epochs = 0
        else:
            bad_epochs += 1
            if bad_epochs >= config.patience:
                history.stop_epoch = epoch
                break
    else:
        history.stop_epoch = config.max_epochs

    best = MlpModel(
        layer_dims=model.layer_dims,
        activations=model.activations,
        weights=best_weights,
        biases=best_biases,
        scaler=model.scaler,
    )
    return best, history


@dataclass(frozen=True)
class GridResult:
    """Outcome of one grid-search trial."""

    config: TrainConfig
    val_loss: float
    val_mae: float
    train_loss: float
    train_mae: float
    best_epoch: int
    stop_epoch: int


def _run_trial(config, x_train, y_train, x_val, y_val) -> GridResult:
    model = init_network(config, n_inputs=x_train.shape[1])
    _, history = train(model, x_train, y_train, x_val, y_val, config)
    i = history.best_epoch - 1
    return GridResult(
        config=config,
        val_loss=history.val_loss[i],
        val_mae=history.val_mae[i],
        train_loss=history.loss[i],
        train_mae=history.mae[i],
        best_epoch=history.best_epoch,
        stop_epoch=history.stop_epoch,
    )


def grid_search(
    space: list[TrainConfig],
    x_train: np.ndarray,
    y_train: np.ndarray,
    x_val: np.ndarray,
    y_val: np.ndarray,
    jobs: int = 1,
) -> list[GridResult]:
    """Train every config independently and rank by validation loss, then
    validation MAE. Trials are independent, so ``jobs > 1`` runs them in
    worker processes; the ranking is canonical regardless of completion
    order."""
    if not space:
        raise EmptySetError("grid space is empty")
    if jobs > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(
                pool.map(
                    _run_trial,
                    space,
                    *(
                        [arg] * len(space)
                        for arg in (x_train, y_train, x_val, y_val)
                    ),
                )
            )
    else:
        results = [
            _run_trial(c, x_train, y_train, x_val, y_val) for c in space
        ]
    return sorted(results, key=lambda r: (r.val_loss, r.val_mae))
