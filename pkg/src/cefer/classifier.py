"""Feed-forward softmax classifier head, trained with mini-batch gradient
descent. Written directly in numpy so training is deterministic for a fixed
seed and the analytic gradients can be gated against finite differences.
"""

import json
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    BadMagic,
    EmptyEvalSet,
    NonFiniteLoss,
    ShapeMismatch,
    VersionMismatch,
)

CEFM_MAGIC = b"CEFM"
CEFM_VERSION = 1


@dataclass
class MLPConfig:
    input_dim: int
    num_classes: int
    hidden_dims: list = field(default_factory=lambda: [256])
    learning_rate: float = 1e-3
    epochs: int = 30
    batch_size: int = 64
    seed: int = 0
    l2: float = 0.0
    class_weights: str | None = None  # None or "balanced"

    def __post_init__(self):
        if self.num_classes < 2:
            raise ValueError("num_classes must be >= 2")
        if self.input_dim < 1:
            raise ValueError("input_dim must be >= 1")
        if any(h < 1 for h in self.hidden_dims):
            raise ValueError("hidden dims must be >= 1")

    def layer_dims(self) -> list:
        return [self.input_dim, *self.hidden_dims, self.num_classes]

    def to_dict(self) -> dict:
        return {
            "input_dim": self.input_dim,
            "num_classes": self.num_classes,
            "hidden_dims": list(self.hidden_dims),
            "learning_rate": self.learning_rate,
            "epochs": self.epochs,
            "batch_size": self.batch_size,
            "seed": self.seed,
            "l2": self.l2,
            "class_weights": self.class_weights,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MLPConfig":
        return cls(**d)


@dataclass
class Model:
    weights: list  # per layer, shape (fan_in, fan_out), float64
    biases: list  # per layer, shape (fan_out,), float64
    config: MLPConfig


@dataclass
class Metrics:
    accuracy: float
    macro_f1: float
    per_class: list  # of (precision, recall, f1, support)
    confusion: np.ndarray  # (num_classes, num_classes) int counts
    zero_support_classes: list

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "per_class": [
                {"precision": p, "recall": r, "f1": f, "support": int(s)}
                for p, r, f, s in self.per_class
            ],
            "confusion": self.confusion.tolist(),
            "zero_support_classes": self.zero_support_classes,
        }


def init_params(cfg: MLPConfig, rng=None):
    """Hidden layers: seeded uniform scaled by 1/sqrt(fan_in). The output
    layer starts at zero so class index order carries no initialization
    bias (label-permutation equivariance)."""
    if rng is None:
        rng = np.random.default_rng(cfg.seed)
    dims = cfg.layer_dims()
    weights, biases = [], []
    last = len(dims) - 2
    for i, (fan_in, fan_out) in enumerate(zip(dims[:-1], dims[1:])):
        if i == last:
            weights.append(np.zeros((fan_in, fan_out)))
        else:
            weights.append(rng.uniform(-1.0, 1.0, size=(fan_in, fan_out)) / np.sqrt(fan_in))
        biases.append(np.zeros(fan_out))
    return weights, biases


def _forward(weights, biases, X):
    """Returns (activations per layer incl. input, logits)."""
    acts = [X]
    a = X
    for W, b in zip(weights[:-1], biases[:-1]):
        a = np.maximum(a @ W + b, 0.0)
        acts.append(a)
    logits = a @ weights[-1] + biases[-1]
    return acts, logits


def softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(shifted)
    return e / e.sum(axis=-1, keepdims=True)


def _loss_and_grads(weights, biases, X, y, l2=0.0, sample_weights=None):
    """Mean weighted cross-entropy plus L2; analytic gradients by backprop."""
    n = X.shape[0]
    acts, logits = _forward(weights, biases, X)
    probs = softmax(logits)
    eps = 1e-300
    ce = -np.log(probs[np.arange(n), y] + eps)
    if sample_weights is None:
        sw = np.full(n, 1.0 / n)
    else:
        sw = sample_weights / n
    loss = float(ce @ sw)
    if l2:
        loss += 0.5 * l2 * sum(float((W * W).sum()) for W in weights)

    delta = probs.copy()
    delta[np.arange(n), y] -= 1.0
    delta *= sw[:, None]
    grads_W = [None] * len(weights)
    grads_b = [None] * len(biases)
    for i in range(len(weights) - 1, -1, -1):
        grads_W[i] = acts[i].T @ delta
        grads_b[i] = delta.sum(axis=0)
        if l2:
            grads_W[i] = grads_W[i] + l2 * weights[i]
        if i > 0:
            delta = (delta @ weights[i].T) * (acts[i] > 0)
    return loss, grads_W, grads_b


def _sample_weights(labels: np.ndarray, num_classes: int) -> np.ndarray:
    counts = np.bincount(labels, minlength=num_classes).astype(float)
    counts[counts == 0] = 1.0
    per_class = len(labels) / (num_classes * counts)
    return per_class[labels]


def train(features, labels, cfg: MLPConfig) -> Model:
    """Mini-batch gradient descent on softmax cross-entropy.

    Identical seed + data give a bit-identical model on one platform.
    """
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(labels, dtype=np.int64)
    if X.ndim != 2 or X.shape[0] != y.shape[0]:
        raise ShapeMismatch(f"features {X.shape} vs labels {y.shape}")
    if X.shape[1] != cfg.input_dim:
        raise ShapeMismatch(f"feature dim {X.shape[1]} vs config input_dim {cfg.input_dim}")
    if y.size and (y.min() < 0 or y.max() >= cfg.num_classes):
        raise ShapeMismatch("label out of range")

    rng = np.random.default_rng(cfg.seed)
    weights, biases = init_params(cfg, rng)
    all_sw = _sample_weights(y, cfg.num_classes) if cfg.class_weights == "balanced" else None

    n = X.shape[0]
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        for bi, start in enumerate(range(0, n, cfg.batch_size)):
            idx = order[start:start + cfg.batch_size]
            sw = all_sw[idx] if all_sw is not None else None
            loss, gW, gb = _loss_and_grads(weights, biases, X[idx], y[idx], cfg.l2, sw)
            if not np.isfinite(loss):
                raise NonFiniteLoss(epoch=epoch, batch=bi)
            for i in range(len(weights)):
                weights[i] = weights[i] - cfg.learning_rate * gW[i]
                biases[i] = biases[i] - cfg.learning_rate * gb[i]
    return Model(weights=weights, biases=biases, config=cfg)


def predict_proba(model: Model, features: np.ndarray) -> np.ndarray:
    X = np.asarray(features, dtype=np.float64)
    single = X.ndim == 1
    if single:
        X = X[None, :]
    if X.shape[1] != model.config.input_dim:
        raise ShapeMismatch(f"feature dim {X.shape[1]} vs input_dim {model.config.input_dim}")
    _, logits = _forward(model.weights, model.biases, X)
    probs = softmax(logits)
    return probs[0] if single else probs


def predict(model: Model, feature) -> tuple:
    """(argmax class, probability vector); ties break to the lowest index."""
    probs = predict_proba(model, np.asarray(feature))
    return int(np.argmax(probs)), probs


def evaluate(model: Model, features, gold_labels) -> Metrics:
    X = np.asarray(features, dtype=np.float64)
    y = np.asarray(gold_labels, dtype=np.int64)
    if X.shape[0] != y.shape[0]:
        raise ShapeMismatch(f"{X.shape[0]} features vs {y.shape[0]} labels")
    if X.shape[0] == 0:
        raise EmptyEvalSet("nothing to evaluate")
    k = model.config.num_classes
    preds = np.argmax(predict_proba(model, X), axis=1)
    confusion = np.zeros((k, k), dtype=np.int64)
    np.add.at(confusion, (y, preds), 1)
    accuracy = float(np.trace(confusion)) / len(y)

    per_class = []
    zero_support = []
    f1s = []
    for c in range(k):
        tp = confusion[c, c]
        support = int(confusion[c].sum())
        pred_c = int(confusion[:, c].sum())
        precision = tp / pred_c if pred_c else 0.0
        recall = tp / support if support else 0.0
        f1 = 2 * precision * recall / (precision + recall) if (precision + recall) else 0.0
        if support == 0:
            zero_support.append(c)
            f1 = 0.0
        per_class.append((float(precision), float(recall), float(f1), support))
        f1s.append(f1)
    return Metrics(
        accuracy=accuracy,
        macro_f1=float(np.mean(f1s)),
        per_class=per_class,
        confusion=confusion,
        zero_support_classes=zero_support,
    )


def gradient_check(cfg: MLPConfig, tolerance: float = 1e-4, seed: int = 0,
                   batch: int = 5, step: float = 1e-5) -> dict:
    """Analytic gradients vs central finite differences on random params and
    data. Report-only: returns max relative error and whether it beats the
    tolerance."""
    rng = np.random.default_rng(seed)
    dims = cfg.layer_dims()
    weights = [rng.normal(size=(i, o)) / np.sqrt(i) for i, o in zip(dims[:-1], dims[1:])]
    biases = [rng.normal(size=o) * 0.1 for o in dims[1:]]
    X = rng.normal(size=(batch, cfg.input_dim))
    y = rng.integers(0, cfg.num_classes, size=batch)

    _, gW, gb = _loss_and_grads(weights, biases, X, y, cfg.l2)

    def loss_at():
        return _loss_and_grads(weights, biases, X, y, cfg.l2)[0]

    max_rel = 0.0
    for params, grads in ((weights, gW), (biases, gb)):
        for arr, grad in zip(params, grads):
            flat = arr.ravel()
            gflat = grad.ravel()
            for j in range(flat.size):
                orig = flat[j]
                flat[j] = orig + step
                up = loss_at()
                flat[j] = orig - step
                down = loss_at()
                flat[j] = orig
                numeric = (up - down) / (2 * step)
                denom = max(abs(numeric) + abs(gflat[j]), 1e-8)
                max_rel = max(max_rel, abs(numeric - gflat[j]) / denom)
    return {"max_relative_error": max_rel, "tolerance": tolerance,
            "passed": max_rel < tolerance}


def save_model(model: Model, path):
    """CEFM container: magic, u32 version, u32 config-JSON length + bytes,
    u32 layer count, then per layer u32 rows, u32 cols, float64 row-major
    weights, float64 biases."""
    cfg_bytes = json.dumps(model.config.to_dict(), sort_keys=True).encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(CEFM_MAGIC)
        fh.write(struct.pack("<I", CEFM_VERSION))
        fh.write(struct.pack("<I", len(cfg_bytes)))
        fh.write(cfg_bytes)
        fh.write(struct.pack("<I", len(model.weights)))
        for W, b in zip(model.weights, model.biases):
            rows, cols = W.shape
            fh.write(struct.pack("<II", rows, cols))
            fh.write(np.ascontiguousarray(W, dtype="<f8").tobytes())
            fh.write(np.ascontiguousarray(b, dtype="<f8").tobytes())


def load_model(path) -> Model:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != CEFM_MAGIC:
            raise BadMagic(f"{path}: expected CEFM magic, got {magic!r}")
        (version,) = struct.unpack("<I", fh.read(4))
        if version != CEFM_VERSION:
            raise VersionMismatch(f"{path}: version {version}, expected {CEFM_VERSION}")
        (cfg_len,) = struct.unpack("<I", fh.read(4))
        cfg = MLPConfig.from_dict(json.loads(fh.read(cfg_len).decode("utf-8")))
        (n_layers,) = struct.unpack("<I", fh.read(4))
        weights, biases = [], []
        for _ in range(n_layers):
            rows, cols = struct.unpack("<II", fh.read(8))
            W = np.frombuffer(fh.read(rows * cols * 8), dtype="<f8").reshape(rows, cols)
            b = np.frombuffer(fh.read(cols * 8), dtype="<f8")
            weights.append(W.copy())
            biases.append(b.copy())
    model = Model(weights=weights, biases=biases, config=cfg)
    for W, b in zip(model.weights, model.biases):
        if not (np.isfinite(W).all() and np.isfinite(b).all()):
            raise ShapeMismatch(f"{path}: non-finite parameters")
    return model
