"""Desk-scale forecasters: persistence, ridge autoregression, and a small MLP
trained from scratch with Adagrad/Adam, seeded batching and early stopping.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    IllConditionedError,
    InsufficientDataError,
    InvalidConfigError,
    InvalidInputError,
    NumericOverflowError,
)

PARAMS_FORMAT_VERSION = 1
DEFAULT_HIDDEN = (64, 64, 64)


@dataclass(frozen=True)
class TrainConfig:
    max_epochs: int = 1000
    batch_size: int = 32
    learning_rate: float = 1e-4
    optimizer: str = "adagrad"
    patience: int = 30
    validation_fraction: float = 0.10
    loss: str = "mse"
    seed: int = 0
    hidden_sizes: tuple[int, ...] = DEFAULT_HIDDEN
    validation: str = "random"

    def __post_init__(self):
        if self.max_epochs < 1 or self.batch_size < 1 or self.patience < 1:
            raise InvalidConfigError("epochs, batch size and patience must be positive")
        if self.learning_rate <= 0:
            raise InvalidConfigError(f"learning rate must be positive, got {self.learning_rate}")
        if not (0.0 < self.validation_fraction < 1.0):
            raise InvalidConfigError(
                f"validation_fraction must be in (0, 1), got {self.validation_fraction}"
            )
        if self.optimizer not in ("adagrad", "adam"):
            raise InvalidConfigError(f"optimizer must be 'adagrad' or 'adam', got {self.optimizer!r}")
        if self.loss not in ("mse", "mae"):
            raise InvalidConfigError(f"loss must be 'mse' or 'mae', got {self.loss!r}")
        if any(h < 1 for h in self.hidden_sizes):
            raise InvalidConfigError(f"hidden sizes must be positive, got {self.hidden_sizes}")
        if self.validation not in ("random", "chronological"):
            raise InvalidConfigError(
                f"validation must be 'random' or 'chronological', got {self.validation!r}"
            )


def _flatten_windows(inputs) -> np.ndarray:
    arr = np.asarray(inputs, dtype=float)
    if arr.ndim == 3:
        arr = arr.reshape(arr.shape[0], -1)
    if arr.ndim != 2:
        raise InvalidInputError(f"model inputs must be (n, W, C) or (n, D), got {arr.shape}")
    return arr


# ---------------------------------------------------------------------------
# persistence


def persistence_predict(window) -> float:
    """Predict the next value as the last value of the window."""
    arr = np.asarray(window, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise InvalidInputError("persistence needs a non-empty 1-D window")
    return float(arr[-1])


# ---------------------------------------------------------------------------
# ridge autoregression


@dataclass(frozen=True)
class RidgeParams:
    coef: np.ndarray
    intercept: float

    def predict(self, inputs) -> np.ndarray:
        x = _flatten_windows(inputs)
        return x @ self.coef + self.intercept


def ridge_fit(inputs, targets, lam: float = 1e-3) -> RidgeParams:
    """Solve the L2-regularized least-squares normal equations (intercept unpenalized)."""
    if lam < 0:
        raise InvalidConfigError(f"ridge lambda must be non-negative, got {lam}")
    x = _flatten_windows(inputs)
    y = np.asarray(targets, dtype=float)
    if y.ndim != 1 or y.size != x.shape[0] or y.size == 0:
        raise InvalidInputError("targets must be 1-D and match the number of windows")
    n, d = x.shape
    design = np.hstack([np.ones((n, 1)), x])
    normal = design.T @ design
    penalty = np.eye(d + 1) * lam
    penalty[0, 0] = 0.0
    system = normal + penalty
    if lam == 0.0 and np.linalg.matrix_rank(system) < d + 1:
        raise IllConditionedError(
            "normal equations are singular with lambda=0; add regularization"
        )
    try:
        beta = np.linalg.solve(system, design.T @ y)
    except np.linalg.LinAlgError as exc:
        raise IllConditionedError(f"ridge solve failed: {exc}") from exc
    return RidgeParams(coef=beta[1:].copy(), intercept=float(beta[0]))


# ---------------------------------------------------------------------------
# multilayer perceptron


@dataclass(frozen=True)
class MlpParams:
    """Weight matrices and bias vectors; all hidden layers use ReLU, the head is linear."""

    weights: tuple[np.ndarray, ...]
    biases: tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.weights) != len(self.biases) or not self.weights:
            raise InvalidConfigError("weights and biases must pair up, one per layer")
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.shape != (w.shape[1],):
                raise InvalidConfigError(f"layer {i} shapes inconsistent: {w.shape} / {b.shape}")
            if i > 0 and w.shape[0] != self.weights[i - 1].shape[1]:
                raise InvalidConfigError(f"layer {i} input dim does not chain")
            if not (np.all(np.isfinite(w)) and np.all(np.isfinite(b))):
                raise InvalidInputError(f"layer {i} parameters contain non-finite values")

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[0]

    def arrays(self) -> list[np.ndarray]:
        return list(self.weights) + list(self.biases)

    @staticmethod
    def from_arrays(arrays: list[np.ndarray]) -> "MlpParams":
        half = len(arrays) // 2
        return MlpParams(weights=tuple(arrays[:half]), biases=tuple(arrays[half:]))

    def predict(self, inputs) -> np.ndarray:
        return mlp_forward(self, inputs)


def mlp_init(input_dim: int, hidden_sizes=DEFAULT_HIDDEN, rng=None) -> MlpParams:
    """He-initialized weights, zero biases; deterministic for a given generator."""
    rng = rng if rng is not None else np.random.default_rng(0)
    dims = [input_dim, *hidden_sizes, 1]
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        weights.append(rng.standard_normal((fan_in, fan_out)) * np.sqrt(2.0 / fan_in))
        biases.append(np.zeros(fan_out))
    return MlpParams(weights=tuple(weights), biases=tuple(biases))


def _forward_cached(params: MlpParams, x: np.ndarray):
    """Forward pass keeping pre-activations for backprop; returns (pred, cache)."""
    activations = [x]
    pre = []
    h = x
    last = len(params.weights) - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = h @ w + b
        pre.append(z)
        h = z if i == last else np.maximum(z, 0.0)
        activations.append(h)
    return h[:, 0], (activations, pre)


def mlp_forward(params: MlpParams, inputs) -> np.ndarray:
    """Predictions for a batch of windows; raises on non-finite activations."""
    x = _flatten_windows(inputs)
    if x.shape[1] != params.input_dim:
        raise InvalidInputError(
            f"input dim {x.shape[1]} does not match parameters ({params.input_dim})"
        )
    pred, _ = _forward_cached(params, x)
    if not np.all(np.isfinite(pred)):
        raise NumericOverflowError("MLP forward produced non-finite values")
    return pred


def _loss_and_grad_pred(pred: np.ndarray, targets: np.ndarray, loss: str):
    err = pred - targets
    n = pred.size
    if loss == "mse":
        return float(np.mean(err**2)), 2.0 * err / n
    return float(np.mean(np.abs(err))), np.sign(err) / n


def mlp_gradient(params: MlpParams, inputs, targets, loss: str = "mse"):
    """Exact analytic gradient of the batch loss; returns (grad arrays, loss value)."""
    x = _flatten_windows(inputs)
    y = np.asarray(targets, dtype=float)
    pred, (activations, pre) = _forward_cached(params, x)
    if not np.all(np.isfinite(pred)):
        raise NumericOverflowError("MLP forward produced non-finite values")
    loss_value, dpred = _loss_and_grad_pred(pred, y, loss)

    n_layers = len(params.weights)
    grad_w = [None] * n_layers
    grad_b = [None] * n_layers
    delta = dpred[:, None]  # gradient wrt the linear head pre-activation
    for i in range(n_layers - 1, -1, -1):
        grad_w[i] = activations[i].T @ delta
        grad_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ params.weights[i].T) * (pre[i - 1] > 0)
    return grad_w + grad_b, loss_value


# ---------------------------------------------------------------------------
# optimizers


@dataclass
class AdagradState:
    accum: list[np.ndarray]
    eps: float = 1e-8

    @staticmethod
    def for_params(arrays: list[np.ndarray]) -> "AdagradState":
        return AdagradState(accum=[np.zeros_like(a) for a in arrays])


def adagrad_step(state: AdagradState, arrays, grads, lr: float) -> list[np.ndarray]:
    """Accumulate squared gradients, then scale the step by their root."""
    out = []
    for a, g, acc in zip(arrays, grads, state.accum):
        acc += g * g
        out.append(a - lr * g / (np.sqrt(acc) + state.eps))
    return out


@dataclass
class AdamState:
    m: list[np.ndarray]
    v: list[np.ndarray]
    step: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8

    @staticmethod
    def for_params(arrays: list[np.ndarray]) -> "AdamState":
        return AdamState(m=[np.zeros_like(a) for a in arrays], v=[np.zeros_like(a) for a in arrays])


def adam_step(state: AdamState, arrays, grads, lr: float) -> list[np.ndarray]:
    """Standard Adam update with bias correction."""
    state.step += 1
    b1, b2 = state.beta1, state.beta2
    correction1 = 1.0 - b1**state.step
    correction2 = 1.0 - b2**state.step
    out = []
    for i, (a, g) in enumerate(zip(arrays, grads)):
        state.m[i] = b1 * state.m[i] + (1.0 - b1) * g
        state.v[i] = b2 * state.v[i] + (1.0 - b2) * g * g
        m_hat = state.m[i] / correction1
        v_hat = state.v[i] / correction2
        out.append(a - lr * m_hat / (np.sqrt(v_hat) + state.eps))
    return out


# ---------------------------------------------------------------------------
# training loop


@dataclass(frozen=True)
class TrainingHistory:
    train_loss: tuple[float, ...]
    val_loss: tuple[float, ...]
    test_loss: tuple[float, ...] | None
    best_epoch: int

    def __post_init__(self):
        if len(self.train_loss) != len(self.val_loss):
            raise InvalidInputError("history arrays must have equal length")
        if self.test_loss is not None and len(self.test_loss) != len(self.train_loss):
            raise InvalidInputError("history arrays must have equal length")
        if not (0 <= self.best_epoch < len(self.train_loss)):
            raise InvalidInputError("best_epoch must index an epoch")

    @property
    def n_epochs(self) -> int:
        return len(self.train_loss)


def _evaluate_loss(params: MlpParams, x: np.ndarray, y: np.ndarray, loss: str) -> float:
    pred, _ = _forward_cached(params, x)
    value, _ = _loss_and_grad_pred(pred, y, loss)
    return value


def train_mlp(
    inputs, targets, cfg: TrainConfig, eval_set=None
) -> tuple[MlpParams, TrainingHistory]:
    """Train an MLP with seeded validation split, batch shuffling and early stopping.

    Returns the parameters of the best-validation epoch and the full per-epoch
    history; the whole run is a pure function of (data, config). Validation is
    a uniformly random subset by default; 'chronological' holds out the last
    windows instead, which avoids the train/validation overlap of randomly
    splitting heavily overlapping windows.
    """
    x = _flatten_windows(inputs)
    y = np.asarray(targets, dtype=float)
    n = x.shape[0]
    if n < 2 or y.size != n:
        raise InsufficientDataError("training needs at least 2 windows with targets")

    rng = np.random.default_rng(cfg.seed)
    n_val = max(1, int(round(cfg.validation_fraction * n)))
    if n_val >= n:
        n_val = n - 1
    if cfg.validation == "chronological":
        train_idx, val_idx = np.arange(n - n_val), np.arange(n - n_val, n)
    else:
        perm = rng.permutation(n)
        val_idx, train_idx = perm[:n_val], perm[n_val:]
    x_train, y_train = x[train_idx], y[train_idx]
    x_val, y_val = x[val_idx], y[val_idx]

    params = mlp_init(x.shape[1], cfg.hidden_sizes, rng)
    arrays = params.arrays()
    if cfg.optimizer == "adam":
        state = AdamState.for_params(arrays)
        step = adam_step
    else:
        state = AdagradState.for_params(arrays)
        step = adagrad_step

    x_eval = y_eval = None
    if eval_set is not None:
        x_eval = _flatten_windows(eval_set[0])
        y_eval = np.asarray(eval_set[1], dtype=float)

    history_train: list[float] = []
    history_val: list[float] = []
    history_eval: list[float] = []
    best_val = np.inf
    best_epoch = 0
    best_arrays = [a.copy() for a in arrays]

    n_train = x_train.shape[0]
    for epoch in range(cfg.max_epochs):
        order = rng.permutation(n_train)
        for start in range(0, n_train, cfg.batch_size):
            batch = order[start : start + cfg.batch_size]
            params = MlpParams.from_arrays(arrays)
            grads, _ = mlp_gradient(params, x_train[batch], y_train[batch], cfg.loss)
            arrays = step(state, arrays, grads, cfg.learning_rate)
        params = MlpParams.from_arrays(arrays)
        history_train.append(_evaluate_loss(params, x_train, y_train, cfg.loss))
        val_loss = _evaluate_loss(params, x_val, y_val, cfg.loss)
        history_val.append(val_loss)
        if x_eval is not None:
            history_eval.append(_evaluate_loss(params, x_eval, y_eval, cfg.loss))
        if val_loss < best_val:
            best_val = val_loss
            best_epoch = epoch
            best_arrays = [a.copy() for a in arrays]
        elif epoch - best_epoch >= cfg.patience:
            break

    history = TrainingHistory(
        train_loss=tuple(history_train),
        val_loss=tuple(history_val),
        test_loss=tuple(history_eval) if x_eval is not None else None,
        best_epoch=best_epoch,
    )
    return MlpParams.from_arrays(best_arrays), history


# ---------------------------------------------------------------------------
# serialization


def params_to_json(params) -> str:
    """Serialize ridge or MLP parameters to a versioned JSON document."""
    if isinstance(params, RidgeParams):
        doc = {
            "format_version": PARAMS_FORMAT_VERSION,
            "kind": "ridge",
            "coef": params.coef.tolist(),
            "intercept": params.intercept,
        }
    elif isinstance(params, MlpParams):
        doc = {
            "format_version": PARAMS_FORMAT_VERSION,
            "kind": "mlp",
            "layers": [
                {"shape": list(w.shape), "weights": w.ravel().tolist(), "bias": b.tolist()}
                for w, b in zip(params.weights, params.biases)
            ],
        }
    else:
        raise InvalidInputError(f"cannot serialize {type(params).__name__}")
    return json.dumps(doc, sort_keys=True)


def params_from_json(text: str):
    doc = json.loads(text)
    version = doc.get("format_version")
    if version != PARAMS_FORMAT_VERSION:
        raise InvalidInputError(f"unsupported params format version {version!r}")
    if doc["kind"] == "ridge":
        return RidgeParams(coef=np.asarray(doc["coef"], dtype=float), intercept=float(doc["intercept"]))
    if doc["kind"] == "mlp":
        weights, biases = [], []
        for layer in doc["layers"]:
            shape = tuple(layer["shape"])
            weights.append(np.asarray(layer["weights"], dtype=float).reshape(shape))
            biases.append(np.asarray(layer["bias"], dtype=float))
        return MlpParams(weights=tuple(weights), biases=tuple(biases))
    raise InvalidInputError(f"unknown params kind {doc.get('kind')!r}")


def history_to_json(history: TrainingHistory) -> str:
    doc = {
        "format_version": PARAMS_FORMAT_VERSION,
        "train_loss": list(history.train_loss),
        "val_loss": list(history.val_loss),
        "test_loss": list(history.test_loss) if history.test_loss is not None else None,
        "best_epoch": history.best_epoch,
    }
    return json.dumps(doc, sort_keys=True)
