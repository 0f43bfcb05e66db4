"""Feed-forward sentiment classifier trained with Adam.

The network is zero to two ReLU hidden layers followed by a 4-way linear
head and softmax.  Two losses are supported: plain cross-entropy (mean
over the batch) and confidence-weighted cross-entropy (per-example terms
scaled by the annotation confidence alpha and summed).  Training shuffles
with a seeded generator, clips the global gradient norm, early-stops on
development macro-F1, and restores the best snapshot.

Everything here is plain numpy on purpose: the loss, its gradients, and
the update rule are part of the method under study, so they are written
out rather than delegated to an autodiff framework.  A finite-difference
gradient check guards the hand-derived backward pass.
"""

from __future__ import annotations

import json
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from .errors import TrainingError, ValidationError
from .evaluation import confusion, metrics
from .polarity import LABELS, SentimentLabel
from .seeding import derive_seed

N_CLASSES = len(LABELS)
PROB_FLOOR = 1e-12

ADAM_BETA1 = 0.9
ADAM_BETA2 = 0.999
ADAM_EPS = 1e-8

LOSS_KINDS = ("ce", "gdwce")

SEARCH_LEARNING_RATE_RANGE = (1e-5, 1e-2)
SEARCH_HIDDEN_SIZES = (64, 128, 256, 512)
SEARCH_LAYER_COUNTS = (0, 1, 2)


@dataclass(frozen=True)
class TrainExample:
    """One feature vector with its label and annotation confidence."""

    features: np.ndarray
    label: SentimentLabel
    alpha: float = 1.0

    def __post_init__(self):
        vec = np.array(self.features, dtype=np.float64)
        if vec.ndim != 1 or vec.size == 0:
            raise ValidationError("features must be a non-empty 1-D vector")
        if not np.all(np.isfinite(vec)):
            raise ValidationError("features must be finite")
        vec.flags.writeable = False
        object.__setattr__(self, "features", vec)
        if not 0.0 <= self.alpha <= 1.0:
            raise ValidationError(f"alpha {self.alpha} outside [0, 1]")


@dataclass
class ModelParams:
    """Per-layer weight matrices and bias vectors, head last."""

    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def __post_init__(self):
        if len(self.weights) != len(self.biases) or not self.weights:
            raise ValidationError("weights and biases must pair up, one per layer")
        self.weights = [np.asarray(w, dtype=np.float64) for w in self.weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in self.biases]
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.ndim != 2 or b.ndim != 1 or w.shape[1] != b.shape[0]:
                raise ValidationError(f"layer {i} weight and bias shapes disagree")
            if i > 0 and self.weights[i - 1].shape[1] != w.shape[0]:
                raise ValidationError(f"layer {i} input does not match layer {i - 1} output")
        if self.weights[-1].shape[1] != N_CLASSES:
            raise ValidationError(f"final layer must have {N_CLASSES} outputs")

    @property
    def input_dim(self) -> int:
        return self.weights[0].shape[0]

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.input_dim,) + tuple(w.shape[1] for w in self.weights)

    def copy(self) -> "ModelParams":
        return ModelParams(
            weights=[w.copy() for w in self.weights],
            biases=[b.copy() for b in self.biases],
        )


@dataclass(frozen=True)
class TrainConfig:
    """Optimization settings for one training run."""

    learning_rate: float = 1e-3
    batch_size: int = 16
    max_epochs: int = 100
    patience: int = 10
    clip_norm: float = 1.0
    loss_kind: str = "ce"
    hidden_sizes: tuple[int, ...] = ()
    seed: int = 0
    log_grad_norms: bool = False

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValidationError("learning_rate must be positive")
        if self.batch_size < 1:
            raise ValidationError("batch_size must be at least 1")
        if self.max_epochs < 1:
            raise ValidationError("max_epochs must be at least 1")
        if self.patience < 1:
            raise ValidationError("patience must be at least 1")
        if self.clip_norm <= 0:
            raise ValidationError("clip_norm must be positive")
        if self.loss_kind not in LOSS_KINDS:
            raise ValidationError(f"loss_kind must be one of {LOSS_KINDS}")
        if any(size < 1 for size in self.hidden_sizes):
            raise ValidationError("hidden sizes must be positive")


@dataclass
class TrainReport:
    """What happened during training, epoch by epoch."""

    epochs_run: int
    best_epoch: int
    best_dev_macro_f1: float
    per_epoch_dev_macro_f1: list[float]
    stopped_early: bool
    grad_norms: list[float] = field(default_factory=list)


def init_params(input_dim: int, hidden_sizes: Sequence[int], seed: int) -> ModelParams:
    """Uniform initialization on [-1/sqrt(fan_in), 1/sqrt(fan_in)] per layer."""
    if input_dim < 1:
        raise ValidationError("input_dim must be positive")
    sizes = (input_dim, *hidden_sizes, N_CLASSES)
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    for fan_in, fan_out in zip(sizes, sizes[1:]):
        bound = 1.0 / math.sqrt(fan_in)
        weights.append(rng.uniform(-bound, bound, size=(fan_in, fan_out)))
        biases.append(rng.uniform(-bound, bound, size=fan_out))
    return ModelParams(weights=weights, biases=biases)


def _softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=1, keepdims=True)


def _forward_batch(params: ModelParams, X: np.ndarray) -> tuple[list[np.ndarray], np.ndarray]:
    """Activations per layer (input first) and softmax probabilities."""
    activations = [X]
    out = X
    for w, b in zip(params.weights[:-1], params.biases[:-1]):
        out = np.maximum(out @ w + b, 0.0)
        activations.append(out)
    logits = out @ params.weights[-1] + params.biases[-1]
    return activations, _softmax(logits)


def predict_proba(params: ModelParams, features) -> np.ndarray:
    """Class probabilities for each feature row."""
    X = np.asarray(features, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != params.input_dim:
        raise ValidationError(f"features must be 2-D with {params.input_dim} columns")
    _, probs = _forward_batch(params, X)
    return probs


def predict(params: ModelParams, features) -> list[SentimentLabel]:
    probs = predict_proba(params, features)
    return [LABELS[k] for k in np.argmax(probs, axis=1)]


def forward(params: ModelParams, features) -> np.ndarray:
    """Probability vector for a single feature vector."""
    vec = np.asarray(features, dtype=np.float64)
    if vec.ndim != 1:
        raise ValidationError("forward takes a single 1-D feature vector")
    return predict_proba(params, vec[None, :])[0]


def _batch_arrays(examples: Sequence[TrainExample]) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if not examples:
        raise ValidationError("need at least one example")
    dims = {ex.features.shape[0] for ex in examples}
    if len(dims) != 1:
        raise ValidationError("examples disagree on feature dimension")
    X = np.stack([ex.features for ex in examples])
    Y = np.zeros((len(examples), N_CLASSES))
    Y[np.arange(len(examples)), [int(ex.label) for ex in examples]] = 1.0
    alphas = np.array([ex.alpha for ex in examples])
    return X, Y, alphas


def _prediction_terms(predicted, gold: Sequence[SentimentLabel]) -> np.ndarray:
    """Per-example cross-entropy terms -log p(gold), floored at PROB_FLOOR."""
    probs = np.asarray(predicted, dtype=np.float64)
    if probs.ndim != 2 or probs.shape[1] != N_CLASSES:
        raise ValidationError(f"predictions must be rows of {N_CLASSES} probabilities")
    if probs.shape[0] != len(gold):
        raise ValidationError(
            f"prediction and gold lengths differ: {probs.shape[0]} vs {len(gold)}"
        )
    if probs.shape[0] == 0:
        raise ValidationError("need at least one prediction")
    picked = probs[np.arange(len(gold)), [int(g) for g in gold]]
    return -np.log(np.maximum(picked, PROB_FLOOR))


def loss_gdwce(predicted, gold: Sequence[SentimentLabel], alphas) -> float:
    """Confidence-weighted cross-entropy: sum of alpha_i * -log p_i(gold_i)."""
    terms = _prediction_terms(predicted, gold)
    weights = np.asarray(alphas, dtype=np.float64)
    if weights.shape != terms.shape:
        raise ValidationError(
            f"alpha and prediction lengths differ: {weights.shape} vs {terms.shape}"
        )
    if np.any(weights < 0.0) or np.any(weights > 1.0) or not np.all(np.isfinite(weights)):
        raise ValidationError("alphas must lie in [0, 1]")
    return float(weights @ terms)


def loss_ce(predicted, gold: Sequence[SentimentLabel]) -> float:
    """Plain cross-entropy, averaged over the batch."""
    terms = _prediction_terms(predicted, gold)
    return float(terms.mean())


def _batch_loss(probs: np.ndarray, examples: Sequence[TrainExample], loss_kind: str) -> float:
    gold = [ex.label for ex in examples]
    if loss_kind == "ce":
        return loss_ce(probs, gold)
    return loss_gdwce(probs, gold, [ex.alpha for ex in examples])


def loss_gradients(
    params: ModelParams, examples: Sequence[TrainExample], loss_kind: str
) -> tuple[float, list[np.ndarray], list[np.ndarray]]:
    """Loss plus gradients for every weight matrix and bias vector."""
    if loss_kind not in LOSS_KINDS:
        raise ValidationError(f"loss_kind must be one of {LOSS_KINDS}")
    X, Y, alphas = _batch_arrays(examples)
    activations, probs = _forward_batch(params, X)
    loss = _batch_loss(probs, examples, loss_kind)
    if loss_kind == "ce":
        row_weights = np.full(len(examples), 1.0 / len(examples))
    else:
        row_weights = alphas
    delta = (probs - Y) * row_weights[:, None]
    grad_w = [np.empty_like(w) for w in params.weights]
    grad_b = [np.empty_like(b) for b in params.biases]
    for layer in range(len(params.weights) - 1, -1, -1):
        grad_w[layer] = activations[layer].T @ delta
        grad_b[layer] = delta.sum(axis=0)
        if layer > 0:
            delta = (delta @ params.weights[layer].T) * (activations[layer] > 0)
    return loss, grad_w, grad_b


def _global_norm(grad_w: list[np.ndarray], grad_b: list[np.ndarray]) -> float:
    total = sum(float(np.sum(g**2)) for g in grad_w)
    total += sum(float(np.sum(g**2)) for g in grad_b)
    return math.sqrt(total)


def clip_gradients(
    grad_w: list[np.ndarray], grad_b: list[np.ndarray], clip_norm: float
) -> float:
    """Scale gradients in place so their global L2 norm is at most clip_norm."""
    norm = _global_norm(grad_w, grad_b)
    if norm > clip_norm:
        scale = clip_norm / norm
        for g in grad_w:
            g *= scale
        for g in grad_b:
            g *= scale
    return norm


class _AdamState:
    """First and second moment accumulators plus the step counter."""

    def __init__(self, params: ModelParams):
        self.m_w = [np.zeros_like(w) for w in params.weights]
        self.v_w = [np.zeros_like(w) for w in params.weights]
        self.m_b = [np.zeros_like(b) for b in params.biases]
        self.v_b = [np.zeros_like(b) for b in params.biases]
        self.t = 0

    def update(
        self,
        params: ModelParams,
        grad_w: list[np.ndarray],
        grad_b: list[np.ndarray],
        learning_rate: float,
    ) -> None:
        self.t += 1
        bias1 = 1.0 - ADAM_BETA1**self.t
        bias2 = 1.0 - ADAM_BETA2**self.t
        for target, grads, m, v in (
            (params.weights, grad_w, self.m_w, self.v_w),
            (params.biases, grad_b, self.m_b, self.v_b),
        ):
            for i, g in enumerate(grads):
                m[i] = ADAM_BETA1 * m[i] + (1.0 - ADAM_BETA1) * g
                v[i] = ADAM_BETA2 * v[i] + (1.0 - ADAM_BETA2) * g**2
                step = learning_rate * (m[i] / bias1) / (np.sqrt(v[i] / bias2) + ADAM_EPS)
                target[i] = target[i] - step


def _dev_macro_f1(params: ModelParams, examples: Sequence[TrainExample]) -> float:
    X = np.stack([ex.features for ex in examples])
    predicted = predict(params, X)
    gold = [ex.label for ex in examples]
    return metrics(confusion(gold, predicted)).macro_f1


def train(
    train_examples: Sequence[TrainExample],
    dev_examples: Sequence[TrainExample],
    config: TrainConfig,
) -> tuple[ModelParams, TrainReport]:
    """Mini-batch training with early stopping on development macro-F1.

    The epoch whose development score is strictly best is snapshotted and
    restored at the end; training stops once `patience` consecutive epochs
    fail to improve on it.
    """
    if not train_examples or not dev_examples:
        raise ValidationError("both training and development sets must be non-empty")
    present = {ex.label for ex in train_examples}
    for label in LABELS:
        if label not in present:
            warnings.warn(f"training data has no {label} examples", stacklevel=2)
    input_dim = train_examples[0].features.shape[0]
    params = init_params(input_dim, config.hidden_sizes, derive_seed(config.seed, "init"))
    shuffle_rng = np.random.default_rng(derive_seed(config.seed, "shuffle"))
    adam = _AdamState(params)
    n = len(train_examples)
    best_params = params.copy()
    best_f1 = -math.inf
    best_epoch = 0
    stale = 0
    per_epoch: list[float] = []
    grad_norms: list[float] = []
    stopped_early = False
    for epoch in range(1, config.max_epochs + 1):
        order = shuffle_rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = [train_examples[i] for i in order[start : start + config.batch_size]]
            loss, grad_w, grad_b = loss_gradients(params, batch, config.loss_kind)
            if not math.isfinite(loss):
                raise TrainingError(f"loss became non-finite ({loss}) at epoch {epoch}")
            clip_gradients(grad_w, grad_b, config.clip_norm)
            if config.log_grad_norms:
                # post-clip norm, recomputed so the log shows what Adam saw
                grad_norms.append(_global_norm(grad_w, grad_b))
            adam.update(params, grad_w, grad_b, config.learning_rate)
        dev_f1 = _dev_macro_f1(params, dev_examples)
        per_epoch.append(dev_f1)
        if dev_f1 > best_f1:
            best_f1 = dev_f1
            best_epoch = epoch
            best_params = params.copy()
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                stopped_early = True
                break
    report = TrainReport(
        epochs_run=len(per_epoch),
        best_epoch=best_epoch,
        best_dev_macro_f1=best_f1,
        per_epoch_dev_macro_f1=per_epoch,
        stopped_early=stopped_early,
        grad_norms=grad_norms,
    )
    return best_params, report


def random_search(
    train_examples: Sequence[TrainExample],
    dev_examples: Sequence[TrainExample],
    eval_examples: Sequence[TrainExample],
    n_trials: int = 4,
    seed: int = 0,
    base_config: TrainConfig | None = None,
) -> tuple[ModelParams, TrainConfig, list[dict]]:
    """Random hyperparameter search; the held-out set picks the winner.

    All trial settings are drawn up front from one master generator, so
    trial t sees the same hyperparameters no matter how earlier trials
    fare.  Learning rate is log-uniform over [1e-5, 1e-2]; hidden width
    and depth come from fixed menus.  Each trial trains with its own
    derived seed; failed trials are logged and skipped.
    """
    if n_trials < 1:
        raise ValidationError("n_trials must be at least 1")
    if not eval_examples:
        raise ValidationError("evaluation set must be non-empty")
    base = base_config if base_config is not None else TrainConfig()
    rng = np.random.default_rng(seed)
    low, high = (math.log10(x) for x in SEARCH_LEARNING_RATE_RANGE)
    configs = []
    for t in range(n_trials):
        lr = 10.0 ** rng.uniform(low, high)
        width = int(rng.choice(SEARCH_HIDDEN_SIZES))
        depth = int(rng.choice(SEARCH_LAYER_COUNTS))
        configs.append(
            replace(
                base,
                learning_rate=lr,
                hidden_sizes=(width,) * depth,
                seed=derive_seed(seed, f"trial-{t}"),
            )
        )
    eval_X = np.stack([ex.features for ex in eval_examples])
    eval_gold = [ex.label for ex in eval_examples]
    log: list[dict] = []
    best: tuple[float, int, ModelParams, TrainConfig] | None = None
    for t, config in enumerate(configs):
        entry = {
            "trial": t,
            "learning_rate": config.learning_rate,
            "hidden_sizes": list(config.hidden_sizes),
            "loss_kind": config.loss_kind,
            "seed": config.seed,
        }
        try:
            params, report = train(train_examples, dev_examples, config)
        except (TrainingError, ValidationError) as exc:
            entry.update(status="failed", error=str(exc))
            log.append(entry)
            continue
        score = metrics(confusion(eval_gold, predict(params, eval_X))).macro_f1
        entry.update(
            status="ok",
            eval_macro_f1=score,
            dev_macro_f1=report.best_dev_macro_f1,
            epochs_run=report.epochs_run,
            best_epoch=report.best_epoch,
        )
        log.append(entry)
        if best is None or score > best[0]:
            best = (score, t, params, config)
    if best is None:
        raise TrainingError("every search trial failed")
    return best[2], best[3], log


def gradient_check(
    params: ModelParams,
    examples: Sequence[TrainExample],
    loss_kind: str = "ce",
    n_samples: int = 50,
    h: float = 1e-5,
    seed: int = 0,
) -> float:
    """Largest relative error between analytic and central-difference gradients.

    Samples coordinates uniformly across every parameter array.  Relative
    error is |a - n| / max(|a|, |n|, 1e-8).
    """
    _, grad_w, grad_b = loss_gradients(params, examples, loss_kind)
    arrays = list(params.weights) + list(params.biases)
    grads = list(grad_w) + list(grad_b)
    sizes = [a.size for a in arrays]
    total = sum(sizes)
    rng = np.random.default_rng(seed)
    picks = rng.choice(total, size=min(n_samples, total), replace=False)
    offsets = np.cumsum([0] + sizes)
    X, _, _ = _batch_arrays(examples)

    def loss_at_params() -> float:
        _, probs = _forward_batch(params, X)
        return _batch_loss(probs, examples, loss_kind)

    worst = 0.0
    for flat in picks:
        which = int(np.searchsorted(offsets, flat, side="right")) - 1
        local = int(flat - offsets[which])
        array = arrays[which]
        index = np.unravel_index(local, array.shape)
        original = array[index]
        array[index] = original + h
        plus = loss_at_params()
        array[index] = original - h
        minus = loss_at_params()
        array[index] = original
        numeric = (plus - minus) / (2.0 * h)
        analytic = float(grads[which][index])
        err = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)
        worst = max(worst, err)
    return worst


def model_to_dict(params: ModelParams) -> dict:
    return {
        "layer_sizes": list(params.layer_sizes),
        "layers": [
            {"weight": w.tolist(), "bias": b.tolist()}
            for w, b in zip(params.weights, params.biases)
        ],
    }


def model_from_dict(data: dict) -> ModelParams:
    try:
        params = ModelParams(
            weights=[np.asarray(layer["weight"], dtype=np.float64) for layer in data["layers"]],
            biases=[np.asarray(layer["bias"], dtype=np.float64) for layer in data["layers"]],
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed model document: {exc}") from exc
    declared = data.get("layer_sizes")
    if declared is not None and tuple(declared) != params.layer_sizes:
        raise ValidationError("declared layer_sizes do not match the stored matrices")
    return params


def save_model(params: ModelParams, stream) -> None:
    json.dump(model_to_dict(params), stream, indent=2)
    stream.write("\n")


def load_model(data) -> ModelParams:
    if hasattr(data, "read"):
        data = data.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        obj = json.loads(data)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid model JSON: {exc.msg}") from exc
    return model_from_dict(obj)
