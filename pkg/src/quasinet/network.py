"""Stacking layers into a trainable network.

A network is an ordered stack of tanh summation and product layers with
chained dimensions. Training is online SGD: one pass over the patterns in
shuffled order, updating after each pattern, with the update w += alpha * grad
where grad is the (target - output) descent increment produced by the layer
backward passes. Loss per pattern is E = 1/2 sum_i (d_i - y_i)^2.

The per-epoch hot loop is a numba kernel that reuses the exact same layer
kernels as the step-by-step API, so `train_epoch` is bit-for-bit the
composition forward -> backward -> sgd_step over the shuffled patterns.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from numba import njit
from numba.typed import List as NumbaList

from .layers import (
    ProductLayer,
    TanhSumLayer,
    product_backward_cached,
    product_forward_cached,
    sum_backward_into,
    sum_forward_into,
)
from .numerics import RngState, as_vector

LAYER_KINDS = ("tanh_sum", "product")


@dataclass(frozen=True)
class LayerSpec:
    kind: str  # "tanh_sum" | "product"
    size: int

    def __post_init__(self):
        if self.kind not in LAYER_KINDS:
            raise ValueError(f"unknown layer kind {self.kind!r}")
        if self.size < 1:
            raise ValueError(f"layer size must be >= 1, got {self.size}")


@dataclass(frozen=True)
class NetworkSpec:
    input_dim: int
    layers: tuple
    init_std: float = 1.0
    init_mean: float = 0.0

    def __post_init__(self):
        if self.input_dim < 1:
            raise ValueError(f"input_dim must be >= 1, got {self.input_dim}")
        if len(self.layers) == 0:
            raise ValueError("network needs at least one layer")
        if self.init_std <= 0:
            raise ValueError(f"init_std must be > 0, got {self.init_std}")
        object.__setattr__(self, "layers", tuple(self.layers))

    @property
    def output_dim(self) -> int:
        return self.layers[-1].size


@dataclass
class LayerActivations:
    """Cached input/output of one layer from a forward pass."""

    input: np.ndarray
    output: np.ndarray


@dataclass
class EpochStats:
    mse: float
    all_correct: bool


@njit(cache=True)
def _forward_batch_kernel(Ws, kinds, X, Y):
    """Forward pass over the rows of X into Y (evaluation only)."""
    n_layers = len(kinds)
    Ws = [Ws[li] for li in range(n_layers)]
    acts = [np.empty(Ws[li].shape[0]) for li in range(n_layers)]
    sigmas = [np.empty(Ws[li].shape if kinds[li] == 1 else (1, 1)) for li in range(n_layers)]
    factors = [np.empty(Ws[li].shape if kinds[li] == 1 else (1, 1)) for li in range(n_layers)]
    for t in range(X.shape[0]):
        a = X[t]
        for li in range(n_layers):
            if kinds[li] == 0:
                sum_forward_into(Ws[li], a, acts[li])
            else:
                product_forward_cached(Ws[li], a, sigmas[li], factors[li], acts[li])
            a = acts[li]
        Y[t] = a


@njit(cache=True)
def _epoch_kernel(Ws, kinds, X, D, order, alpha):
    """One shuffled online-SGD epoch, fused forward/backward/update.

    Weight matrices in Ws are updated in place. Returns (mean per-pattern
    squared error, all patterns sign-correct), both measured on each
    pattern's pre-update output. All scratch is allocated once up front:
    this loop runs millions of times per experiment batch.
    """
    n = order.shape[0]
    n_layers = len(kinds)
    # hoist the typed-list elements into a plain list: element access on the
    # boxed list from Python is far too slow for the per-pattern loop
    Ws = [Ws[li] for li in range(n_layers)]
    acts = [np.empty(Ws[li].shape[0]) for li in range(n_layers)]
    grads = [np.empty(Ws[li].shape) for li in range(n_layers)]
    # per-layer input-side delta, plus sigma/factor caches for product layers
    deltas = [np.empty(Ws[li].shape[1] - (1 if kinds[li] == 0 else 0)) for li in range(n_layers)]
    sigmas = [np.empty(Ws[li].shape if kinds[li] == 1 else (1, 1)) for li in range(n_layers)]
    factors = [np.empty(Ws[li].shape if kinds[li] == 1 else (1, 1)) for li in range(n_layers)]
    delta_out = np.empty(Ws[n_layers - 1].shape[0])

    sse = 0.0
    all_correct = True
    for t in range(n):
        idx = order[t]
        x = X[idx]
        d = D[idx]
        a = x
        for li in range(n_layers):
            if kinds[li] == 0:
                sum_forward_into(Ws[li], a, acts[li])
            else:
                product_forward_cached(Ws[li], a, sigmas[li], factors[li], acts[li])
            a = acts[li]
        y = acts[n_layers - 1]
        perr = 0.0
        for i in range(y.shape[0]):
            e = d[i] - y[i]
            perr += e * e
            delta_out[i] = e
            if y[i] == 0.0 or (y[i] > 0.0) != (d[i] > 0.0):
                all_correct = False
        sse += 0.5 * perr
        delta = delta_out
        for li in range(n_layers - 1, -1, -1):
            W = Ws[li]
            inp = acts[li - 1] if li > 0 else x
            if kinds[li] == 0:
                sum_backward_into(W, inp, acts[li], delta, grads[li], deltas[li])
            else:
                product_backward_cached(sigmas[li], factors[li], inp, acts[li], delta,
                                        grads[li], deltas[li])
            g = grads[li]
            for i in range(W.shape[0]):
                for j in range(W.shape[1]):
                    W[i, j] += alpha * g[i, j]
            delta = deltas[li]
    return sse / n, all_correct


class Network:
    """Live stack of layers; single-owner during training."""

    def __init__(self, layers):
        if not layers:
            raise ValueError("network needs at least one layer")
        for lo, hi in zip(layers, layers[1:]):
            if lo.n_out != hi.n_in:
                raise ValueError(
                    f"layer dimension mismatch: {lo.n_out} outputs feed {hi.n_in} inputs"
                )
        self.layers = list(layers)

    # -- construction -----------------------------------------------------

    @classmethod
    def init(cls, spec: NetworkSpec, rng: RngState) -> "Network":
        """All weights (biases included) i.i.d. N(init_mean, init_std^2)."""
        layers = []
        prev = spec.input_dim
        for ls in spec.layers:
            if ls.kind == "tanh_sum":
                W = rng.gaussian_matrix(ls.size, prev + 1, spec.init_mean, spec.init_std)
                layers.append(TanhSumLayer(W))
            else:
                W = rng.gaussian_matrix(ls.size, prev, spec.init_mean, spec.init_std)
                layers.append(ProductLayer(W))
            prev = ls.size
        return cls(layers)

    @property
    def input_dim(self) -> int:
        return self.layers[0].n_in

    @property
    def output_dim(self) -> int:
        return self.layers[-1].n_out

    # -- forward / backward ----------------------------------------------

    def forward(self, x) -> list:
        """Run the stack, returning per-layer cached activations."""
        a = as_vector(x)
        if a.shape[0] != self.input_dim:
            raise ValueError(f"expected input of length {self.input_dim}, got {a.shape[0]}")
        acts = []
        for layer in self.layers:
            out = layer.forward(a)
            acts.append(LayerActivations(input=a, output=out))
            a = out
        return acts

    def output(self, x) -> np.ndarray:
        return self.forward(x)[-1].output

    def forward_batch(self, X: np.ndarray) -> np.ndarray:
        """Batched forward over the rows of X (evaluation only)."""
        A = np.ascontiguousarray(X, dtype=np.float64)
        if A.ndim != 2 or A.shape[1] != self.input_dim:
            raise ValueError(f"expected (n, {self.input_dim}) inputs, got {A.shape}")
        Y = np.empty((A.shape[0], self.output_dim))
        Ws, kinds = self._kernel_args()
        _forward_batch_kernel(Ws, kinds, A, Y)
        return Y

    def backward(self, acts, target) -> list:
        """Per-layer weight increments for one pattern; delta chains through
        arbitrary tanh/product interleavings."""
        d = as_vector(target)
        y = acts[-1].output
        if d.shape[0] != y.shape[0]:
            raise ValueError(f"target length {d.shape[0]} != output length {y.shape[0]}")
        delta = d - y
        grads = [None] * len(self.layers)
        for li in range(len(self.layers) - 1, -1, -1):
            a = acts[li]
            grads[li], delta = self.layers[li].backward(a.input, a.output, delta)
        return grads

    def sgd_step(self, grads, alpha: float):
        if len(grads) != len(self.layers):
            raise ValueError("one gradient per layer expected")
        for layer, g in zip(self.layers, grads):
            if g.shape != layer.W.shape:
                raise ValueError(f"gradient shape {g.shape} != weight shape {layer.W.shape}")
            layer.W += alpha * g

    # -- training ---------------------------------------------------------

    def _kernel_args(self):
        Ws = NumbaList()
        for layer in self.layers:
            Ws.append(layer.W)
        kinds = np.array(
            [0 if layer.kind == "tanh_sum" else 1 for layer in self.layers], dtype=np.int64
        )
        return Ws, kinds

    def train_epoch(self, data, alpha: float, rng: RngState) -> EpochStats:
        """One shuffled online pass over `data` (Dataset or (X, D) pair)."""
        X, D = (data.inputs, data.targets) if hasattr(data, "inputs") else data
        if X.shape[0] == 0:
            raise ValueError("dataset is empty")
        order = rng.permutation(X.shape[0])
        Ws, kinds = self._kernel_args()
        mse, all_correct = _epoch_kernel(
            Ws, kinds, np.ascontiguousarray(X), np.ascontiguousarray(D), order, alpha
        )
        return EpochStats(mse=mse, all_correct=bool(all_correct))

    # -- serialization ----------------------------------------------------

    def to_json(self) -> str:
        doc = {
            "input_dim": self.input_dim,
            "layers": [
                {"kind": layer.kind, "shape": list(layer.W.shape), "weights": layer.W.tolist()}
                for layer in self.layers
            ],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "Network":
        doc = json.loads(text)
        layers = []
        for entry in doc["layers"]:
            W = np.array(entry["weights"], dtype=np.float64)
            if list(W.shape) != entry["shape"]:
                raise ValueError(f"weight shape {W.shape} disagrees with header {entry['shape']}")
            if entry["kind"] == "tanh_sum":
                layers.append(TanhSumLayer(W))
            elif entry["kind"] == "product":
                layers.append(ProductLayer(W))
            else:
                raise ValueError(f"unknown layer kind {entry['kind']!r}")
        return cls(layers)


def predict_correct(y, d) -> bool:
    """Sign agreement on every output; an exactly-zero output never counts."""
    y = as_vector(y)
    d = as_vector(d)
    if y.shape != d.shape:
        raise ValueError(f"shape mismatch {y.shape} vs {d.shape}")
    if np.any(y == 0.0):
        return False
    return bool(np.all(np.sign(y) == np.sign(d)))
