"""A desk-scale multitask text classifier: hashed bag of tokens -> softmax.

Tokens are hashed with FNV-1a 64 into a fixed number of buckets and a linear
layer plus softmax is trained by mini-batch SGD on cross-entropy with L2
weight decay. Parameters start at zero (the objective is convex) and the
shuffle generator is seeded, so training is bit-for-bit reproducible.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DataError, DivergenceError, ShapeError

DEFAULT_DIM = 4096
HASH_NAME = "fnv1a64"
MODEL_MAGIC = "tweetpipe-linear-model"
MODEL_VERSION = 1

_TOKEN_RE = re.compile(r"[^\W_]+")

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    """FNV-1a 64-bit hash; fixed published constants for cross-platform stability."""
    h = _FNV_OFFSET
    for byte in data:
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


@dataclass(frozen=True)
class FeatureVector:
    """Sparse token counts: strictly increasing indices in [0, dim)."""

    indices: tuple[int, ...]
    counts: tuple[int, ...]
    dim: int


@dataclass
class ModelParams:
    """Linear layer: weights (K x D) and bias (K)."""

    weights: np.ndarray
    bias: np.ndarray

    @property
    def num_classes(self) -> int:
        return self.bias.shape[0]

    @property
    def dim(self) -> int:
        return self.weights.shape[1]

    def copy(self) -> "ModelParams":
        return ModelParams(self.weights.copy(), self.bias.copy())


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 10
    learning_rate: float = 0.1
    seed: int = 0
    l2: float = 1e-4
    batch_size: int = 16

    def __post_init__(self):
        if self.epochs <= 0:
            raise DataError("epochs must be positive")
        if self.learning_rate < 0:
            raise DataError("learning rate must be non-negative")
        if self.l2 < 0:
            raise DataError("l2 must be non-negative")
        if self.batch_size <= 0:
            raise DataError("batch size must be positive")


def featurize(text: str, dim: int = DEFAULT_DIM) -> FeatureVector:
    """Hash lowercased alphanumeric tokens into dim buckets, accumulating counts."""
    if dim <= 0 or dim & (dim - 1):
        raise DataError(f"dim must be a positive power of two, got {dim}")
    buckets: dict[int, int] = {}
    for token in _TOKEN_RE.findall(text.lower()):
        idx = fnv1a_64(token.encode("utf-8")) % dim
        buckets[idx] = buckets.get(idx, 0) + 1
    indices = tuple(sorted(buckets))
    return FeatureVector(indices, tuple(buckets[i] for i in indices), dim)


def _logits(params: ModelParams, x: FeatureVector) -> np.ndarray:
    if x.dim != params.dim:
        raise ShapeError(f"feature dim {x.dim} != model dim {params.dim}")
    z = params.bias.astype(float).copy()
    if x.indices:
        z += params.weights[:, list(x.indices)] @ np.asarray(x.counts, dtype=float)
    return z


def predict_proba(params: ModelParams, x: FeatureVector) -> np.ndarray:
    """Softmax of the linear scores, max-subtracted for stability."""
    z = _logits(params, x)
    z -= z.max()
    e = np.exp(z)
    return e / e.sum()


def loss_and_grad(
    params: ModelParams,
    batch: Sequence[tuple[FeatureVector, int]],
    l2: float = 0.0,
) -> tuple[float, ModelParams]:
    """Mean cross-entropy plus l2*||W||^2/2 and its exact analytic gradient."""
    if not batch:
        raise DataError("batch must be non-empty")
    k = params.num_classes
    grad_w = l2 * params.weights
    grad_b = np.zeros(k)
    loss = 0.5 * l2 * float(np.sum(params.weights * params.weights))
    n = len(batch)
    for x, y in batch:
        if not 0 <= y < k:
            raise DataError(f"class index {y} outside [0, {k})")
        p = predict_proba(params, x)
        with np.errstate(divide="ignore"):  # log(0) -> -inf, reported as divergence
            loss -= float(np.log(p[y])) / n
        diff = p.copy()
        diff[y] -= 1.0
        grad_b += diff / n
        for idx, count in zip(x.indices, x.counts):
            grad_w[:, idx] += diff * (count / n)
    return loss, ModelParams(grad_w, grad_b)


def train(
    data: Sequence[tuple[FeatureVector, int]],
    cfg: TrainConfig,
    num_classes: int,
) -> ModelParams:
    """Mini-batch SGD from zero init; deterministic for a fixed seed."""
    if not data:
        raise DataError("training data must be non-empty")
    dim = data[0][0].dim
    for x, y in data:
        if x.dim != dim:
            raise ShapeError(f"inconsistent feature dims {x.dim} and {dim}")
        if not 0 <= y < num_classes:
            raise DataError(f"class index {y} outside [0, {num_classes})")
    params = ModelParams(np.zeros((num_classes, dim)), np.zeros(num_classes))
    rng = np.random.default_rng(cfg.seed)
    for epoch in range(cfg.epochs):
        order = rng.permutation(len(data))
        for lo in range(0, len(data), cfg.batch_size):
            batch = [data[i] for i in order[lo : lo + cfg.batch_size]]
            loss, grad = loss_and_grad(params, batch, cfg.l2)
            if not np.isfinite(loss):
                raise DivergenceError(epoch)
            params.weights -= cfg.learning_rate * grad.weights
            params.bias -= cfg.learning_rate * grad.bias
    return params


def save_model(params: ModelParams, classes: Sequence[str], path: str) -> None:
    """Write a versioned text matrix file: header line, JSON metadata, b row, W rows."""
    if len(classes) != params.num_classes:
        raise ShapeError(f"{len(classes)} class names for {params.num_classes} classes")
    header = {
        "k": params.num_classes,
        "d": params.dim,
        "hash": HASH_NAME,
        "classes": list(classes),
    }
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{MODEL_MAGIC} v{MODEL_VERSION}\n")
        fh.write(json.dumps(header, sort_keys=True, ensure_ascii=False) + "\n")
        fh.write(" ".join(repr(float(v)) for v in params.bias) + "\n")
        for row in params.weights:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def load_model(path: str) -> tuple[ModelParams, list[str]]:
    """Read a model file written by save_model; floats round-trip exactly."""
    with open(path, encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != f"{MODEL_MAGIC} v{MODEL_VERSION}":
        raise DataError(f"{path}: not a {MODEL_MAGIC} v{MODEL_VERSION} file")
    try:
        header = json.loads(lines[1])
        k, d = int(header["k"]), int(header["d"])
        classes = [str(c) for c in header["classes"]]
    except (IndexError, KeyError, ValueError) as exc:
        raise DataError(f"{path}: malformed model header ({exc})") from None
    if header.get("hash") != HASH_NAME:
        raise DataError(f"{path}: unsupported hash {header.get('hash')!r}")
    if len(classes) != k or len(lines) != 3 + k:
        raise DataError(f"{path}: model body does not match header")
    bias = np.array([float(v) for v in lines[2].split()], dtype=float)
    weights = np.array(
        [[float(v) for v in lines[3 + i].split()] for i in range(k)], dtype=float
    )
    if bias.shape != (k,) or weights.shape != (k, d):
        raise ShapeError(f"{path}: matrix shapes do not match header")
    return ModelParams(weights, bias), classes
