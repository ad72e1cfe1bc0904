"""Minimal dense feed-forward regression network.

ReLU hidden layers, linear scalar output, hand-written backprop, and the
Adam optimizer with bias correction. Everything is deterministic given
the seeds carried in the configs; no global RNG state is touched.

Features are standardized inside ``train`` using statistics of the
training data it receives (targets are left on their original scale),
and the fitted scaler travels with the returned model so predictions on
held-out data see the same transform.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .losses import LossSpec, _grad_values, _loss_values

__all__ = [
    "NetworkConfig",
    "TrainConfig",
    "Parameters",
    "AdamState",
    "FeatureScaler",
    "TrainedModel",
    "TrainingDiverged",
    "init_params",
    "forward",
    "backward",
    "predict",
    "adam_step",
    "init_adam_state",
    "minibatch_indices",
    "train",
    "params_to_json",
    "params_from_json",
]


class TrainingDiverged(RuntimeError):
    """Raised when a non-finite training loss appears; carries the epoch."""

    def __init__(self, epoch: int, detail: str = ""):
        self.epoch = epoch
        msg = f"training diverged at epoch {epoch}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


@dataclass(frozen=True)
class NetworkConfig:
    input_dim: int
    hidden_layers: tuple[int, ...]
    output_dim: int = 1

    def __post_init__(self):
        object.__setattr__(self, "hidden_layers", tuple(int(h) for h in self.hidden_layers))
        if self.input_dim < 1 or self.output_dim < 1:
            raise ValueError("input_dim and output_dim must be >= 1")
        if not self.hidden_layers or any(h < 1 for h in self.hidden_layers):
            raise ValueError("hidden_layers must be a nonempty sequence of positive ints")

    @property
    def layer_sizes(self) -> tuple[int, ...]:
        return (self.input_dim, *self.hidden_layers, self.output_dim)


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    epochs: int = 100
    batch_size: int = 32
    seed: int = 0

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if not (0 < self.beta1 < 1 and 0 < self.beta2 < 1):
            raise ValueError("beta1 and beta2 must lie in (0, 1)")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if self.epochs < 0 or self.batch_size < 1:
            raise ValueError("epochs must be >= 0 and batch_size >= 1")


@dataclass
class Parameters:
    """Per-layer weight matrices (fan_out x fan_in) and bias vectors.

    Also reused as the container for gradients, which share the shapes.
    """

    weights: list[np.ndarray]
    biases: list[np.ndarray]

    def copy(self) -> "Parameters":
        return Parameters([w.copy() for w in self.weights], [b.copy() for b in self.biases])

    def zeros_like(self) -> "Parameters":
        return Parameters(
            [np.zeros_like(w) for w in self.weights],
            [np.zeros_like(b) for b in self.biases],
        )

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    def allclose(self, other: "Parameters", **kw) -> bool:
        return all(np.allclose(a, b, **kw) for a, b in zip(self.weights, other.weights)) and all(
            np.allclose(a, b, **kw) for a, b in zip(self.biases, other.biases)
        )


@dataclass
class AdamState:
    m: Parameters
    v: Parameters
    t: int = 0


def init_adam_state(params: Parameters) -> AdamState:
    return AdamState(m=params.zeros_like(), v=params.zeros_like(), t=0)


def init_params(cfg: NetworkConfig, seed) -> Parameters:
    """Fan-in-scaled uniform weights U(-1/sqrt(fan_in), 1/sqrt(fan_in)), zero biases."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    sizes = cfg.layer_sizes
    for fan_in, fan_out in zip(sizes[:-1], sizes[1:]):
        scale = 1.0 / np.sqrt(fan_in)
        weights.append(rng.uniform(-scale, scale, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return Parameters(weights, biases)


@dataclass
class ForwardCache:
    inputs: np.ndarray          # (n, input_dim)
    pre_acts: list[np.ndarray]  # per layer, (n, fan_out)
    acts: list[np.ndarray]      # post-ReLU per hidden layer, (n, fan_out)


def _forward_2d(params: Parameters, x: np.ndarray):
    a = x
    pre_acts, acts = [], []
    last = params.n_layers - 1
    for i, (w, b) in enumerate(zip(params.weights, params.biases)):
        z = a @ w.T + b
        pre_acts.append(z)
        if i < last:
            a = np.maximum(z, 0.0)
            acts.append(a)
    preds = pre_acts[-1][:, 0]
    return preds, ForwardCache(inputs=x, pre_acts=pre_acts, acts=acts)


def forward(params: Parameters, x):
    """Run the network on a single input vector or an (n, d) batch.

    Returns (prediction, cache); prediction is a float for a 1-D input
    and an (n,) array for a batch. The cache feeds ``backward``.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x2 = x[None, :] if single else x
    if x2.shape[1] != params.weights[0].shape[1]:
        raise ValueError(
            f"input has {x2.shape[1]} features, network expects {params.weights[0].shape[1]}"
        )
    preds, cache = _forward_2d(params, x2)
    return (float(preds[0]) if single else preds), cache


def predict(params: Parameters, X: np.ndarray) -> np.ndarray:
    """Predictions for an (n, d) matrix, no cache kept."""
    return _forward_2d(params, np.asarray(X, dtype=float))[0]


def backward(params: Parameters, cache: ForwardCache, dloss_dpred) -> Parameters:
    """Backpropagate dL/dprediction to parameter gradients.

    ``dloss_dpred`` is a scalar for a single-sample cache or an (n,)
    vector for a batch cache; for a batch the returned gradients are the
    SUM over samples (divide by n for the batch mean). The ReLU
    subgradient at exactly 0 is taken as 0.
    """
    g = np.atleast_1d(np.asarray(dloss_dpred, dtype=float))
    n = cache.inputs.shape[0]
    if g.shape != (n,):
        raise ValueError(f"dloss_dpred has shape {g.shape}, cache holds {n} samples")
    delta = g[:, None]  # output layer is affine
    grad_w = [None] * params.n_layers
    grad_b = [None] * params.n_layers
    for i in range(params.n_layers - 1, -1, -1):
        a_prev = cache.inputs if i == 0 else cache.acts[i - 1]
        grad_w[i] = delta.T @ a_prev
        grad_b[i] = delta.sum(axis=0)
        if i > 0:
            delta = (delta @ params.weights[i]) * (cache.pre_acts[i - 1] > 0.0)
    return Parameters(grad_w, grad_b)


def adam_step(
    params: Parameters, grads: Parameters, state: AdamState, tc: TrainConfig
) -> tuple[Parameters, AdamState]:
    """One bias-corrected Adam update; returns fresh (Parameters, AdamState)."""
    t = state.t + 1
    b1, b2, lr, eps = tc.beta1, tc.beta2, tc.learning_rate, tc.epsilon
    c1 = 1.0 - b1**t
    c2 = 1.0 - b2**t

    def upd(theta, g, m, v):
        m_new = b1 * m + (1.0 - b1) * g
        v_new = b2 * v + (1.0 - b2) * g * g
        theta_new = theta - lr * (m_new / c1) / (np.sqrt(v_new / c2) + eps)
        return theta_new, m_new, v_new

    new_w, new_b = [], []
    m_w, m_b, v_w, v_b = [], [], [], []
    for i in range(params.n_layers):
        w, mw, vw = upd(params.weights[i], grads.weights[i], state.m.weights[i], state.v.weights[i])
        b, mb, vb = upd(params.biases[i], grads.biases[i], state.m.biases[i], state.v.biases[i])
        new_w.append(w)
        new_b.append(b)
        m_w.append(mw)
        m_b.append(mb)
        v_w.append(vw)
        v_b.append(vb)
    new_state = AdamState(m=Parameters(m_w, m_b), v=Parameters(v_w, v_b), t=t)
    return Parameters(new_w, new_b), new_state


@dataclass(frozen=True)
class FeatureScaler:
    mean: np.ndarray
    scale: np.ndarray

    @staticmethod
    def fit(X: np.ndarray) -> "FeatureScaler":
        mean = X.mean(axis=0)
        scale = X.std(axis=0)
        scale = np.where(scale > 0.0, scale, 1.0)  # constant columns pass through
        return FeatureScaler(mean=mean, scale=scale)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.mean) / self.scale


@dataclass
class TrainedModel:
    params: Parameters
    scaler: FeatureScaler
    net: NetworkConfig

    def predict(self, X: np.ndarray) -> np.ndarray:
        return predict(self.params, self.scaler.transform(X))


def minibatch_indices(n: int, batch_size: int, rng: np.random.Generator) -> list[np.ndarray]:
    """One epoch's shuffled batch index arrays (last batch may be short)."""
    order = rng.permutation(n)
    return [order[i : i + batch_size] for i in range(0, n, batch_size)]


def _shuffle_rng(seed) -> np.random.Generator:
    # Separate stream from init_params(seed) so the two never interact.
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(1,)))


def train(data, net: NetworkConfig, loss: LossSpec, tc: TrainConfig) -> TrainedModel:
    """Mini-batch Adam training of ``net`` under ``loss``.

    Initialization is exactly ``init_params(net, tc.seed)``; the epoch
    shuffle uses an independent stream derived from the same seed, so the
    whole run is a pure function of (data, net, loss, tc). The per-batch
    gradient is the mean over the batch of per-sample prediction
    gradients pushed through backprop.

    Raises TrainingDiverged (carrying the epoch index) if a non-finite
    prediction or batch loss shows up.
    """
    X = np.asarray(data.X, dtype=float)
    y = np.asarray(data.y, dtype=float)
    n = X.shape[0]
    if n == 0:
        raise ValueError("empty training data")
    if X.shape[1] != net.input_dim:
        raise ValueError(f"data has {X.shape[1]} features, network expects {net.input_dim}")
    if net.output_dim != 1:
        raise ValueError("training supports scalar outputs only")

    scaler = FeatureScaler.fit(X)
    Xs = scaler.transform(X)
    params = init_params(net, tc.seed)
    state = init_adam_state(params)
    shuffle = _shuffle_rng(tc.seed)

    for epoch in range(tc.epochs):
        for idx in minibatch_indices(n, tc.batch_size, shuffle):
            with np.errstate(over="ignore", invalid="ignore"):
                # Overflow here is the divergence signal itself, not an anomaly.
                preds, cache = _forward_2d(params, Xs[idx])
                if not np.all(np.isfinite(preds)):
                    raise TrainingDiverged(epoch, "non-finite prediction")
                batch_loss = float(np.mean(_loss_values(y[idx], preds, loss)))
            if not np.isfinite(batch_loss):
                raise TrainingDiverged(epoch, "non-finite loss")
            g = _grad_values(y[idx], preds, loss)
            grads = backward(params, cache, g)
            inv = 1.0 / idx.size
            for i in range(grads.n_layers):
                grads.weights[i] *= inv
                grads.biases[i] *= inv
            params, state = adam_step(params, grads, state, tc)

    return TrainedModel(params=params, scaler=scaler, net=net)


def params_to_json(params: Parameters) -> str:
    """Checkpoint-inspection JSON (layer-indexed arrays); not a stable format."""
    doc = {
        "layers": [
            {"weights": w.tolist(), "biases": b.tolist()}
            for w, b in zip(params.weights, params.biases)
        ]
    }
    return json.dumps(doc)


def params_from_json(text: str) -> Parameters:
    doc = json.loads(text)
    weights = [np.asarray(layer["weights"], dtype=float) for layer in doc["layers"]]
    biases = [np.asarray(layer["biases"], dtype=float) for layer in doc["layers"]]
    return Parameters(weights, biases)
