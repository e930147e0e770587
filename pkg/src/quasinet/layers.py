"""The two layer types and their exact forward/backward math.

A tanh summation layer computes h_i = tanh(sum_j W[i,j] x_j + W[i,-1]);
the last weight column is the bias, applied to a constant input of 1.

A product layer computes y_i = prod_j (1 - sigma(W[i,j]) (1 - h_j)):
each raw weight is squashed to a mixing coefficient d = sigma(w) in (0,1),
and the factor 1 - d(1 - h) interpolates between ignoring the input (d=0,
factor 1) and passing it through (d=1, factor h), which mimics raising h
to the power 0 or 1 without ever leaving the reals. Product layers carry
no bias.

The backward passes are hand-derived; "grad" throughout means the descent
increment (built from the (target - output) delta), so the update rule is
w += alpha * grad. The leave-one-out partial products in the product-layer
rule are computed as y_i / factor_ij, falling back to direct multiplication
when the factor is too close to zero for the division to be trusted.

All kernels are numba-compiled: the experiment harness runs millions of
per-pattern updates on one core, and these same kernels are reused inside
the fused training loop so there is a single implementation of the math.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .numerics import logistic

# below this factor magnitude the division shortcut is replaced by the
# exact leave-one-out product
EPS_DIV = 1e-6

# largest double strictly below 1: tanh outputs are clamped to the open
# interval (-1, 1) so saturation never produces exactly +/-1
ONE_MINUS = np.nextafter(1.0, 0.0)


@njit(cache=True)
def _tanh_open(s: float) -> float:
    t = math.tanh(s)
    if t >= 1.0:
        return ONE_MINUS
    if t <= -1.0:
        return -ONE_MINUS
    return t


@njit(cache=True)
def quasi_pow(h: float, d: float) -> float:
    """Quasi-exponentiation weighting: 1 - d*(1 - h).

    Computed as (1 - d) + d*h, which is the same expression with one less
    rounding, so the identities quasi_pow(h, 1) == h, quasi_pow(h, 0) == 1,
    quasi_pow(1, d) == 1 and quasi_pow(0, d) == 1 - d hold exactly in
    floating point, not just up to round-off.
    """
    return (1.0 - d) + d * h


@njit(cache=True)
def sum_forward_into(W: np.ndarray, x: np.ndarray, h: np.ndarray):
    """Tanh layer forward into a caller-owned buffer."""
    n_out, n_in1 = W.shape
    for i in range(n_out):
        s = W[i, n_in1 - 1]
        for j in range(n_in1 - 1):
            s += W[i, j] * x[j]
        h[i] = _tanh_open(s)


@njit(cache=True)
def sum_forward(W: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Tanh layer forward. W is (out, in+1) with the bias in the last column."""
    h = np.empty(W.shape[0])
    sum_forward_into(W, x, h)
    return h


@njit(cache=True)
def product_forward_cached(W, h, S, F, y):
    """Product layer forward, also filling the sigma and factor caches.

    S_ij = sigma(W_ij) and F_ij = 1 - S_ij (1 - h_j) are exactly the values
    the backward pass needs for the same pattern, so computing them once here
    saves recomputing the logistics (the dominant cost) during backprop.
    """
    n_out, n_in = W.shape
    for i in range(n_out):
        p = 1.0
        for j in range(n_in):
            s = logistic(W[i, j])
            f = (1.0 - s) + s * h[j]
            S[i, j] = s
            F[i, j] = f
            p *= f
        y[i] = p


@njit(cache=True)
def product_forward_into(W: np.ndarray, h: np.ndarray, y: np.ndarray):
    """Product layer forward into a caller-owned buffer."""
    S = np.empty(W.shape)
    F = np.empty(W.shape)
    product_forward_cached(W, h, S, F, y)


@njit(cache=True)
def product_forward(W: np.ndarray, h: np.ndarray) -> np.ndarray:
    """Product layer forward: y_i = prod_j quasi_pow(h_j, sigma(W_ij))."""
    y = np.empty(W.shape[0])
    product_forward_into(W, h, y)
    return y


@njit(cache=True)
def product_factors(W: np.ndarray, h: np.ndarray) -> np.ndarray:
    """All individual factors 1 - sigma(W_ij)(1 - h_j) as an (out, in) matrix."""
    n_out, n_in = W.shape
    F = np.empty((n_out, n_in))
    for i in range(n_out):
        for j in range(n_in):
            s = logistic(W[i, j])
            F[i, j] = (1.0 - s) + s * h[j]
    return F


@njit(cache=True)
def partial_product(y_i: float, factors_i: np.ndarray, j: int) -> float:
    """Leave-one-out product prod_{k != j} factors_i[k].

    Uses the division shortcut y_i / factors_i[j] when the excluded factor
    is safely away from zero, otherwise multiplies the remaining factors
    directly so the result is always finite and exact.
    """
    f = factors_i[j]
    if abs(f) > EPS_DIV:
        return y_i / f
    p = 1.0
    for k in range(factors_i.shape[0]):
        if k != j:
            p *= factors_i[k]
    return p


@njit(cache=True)
def product_backward_cached(S, F, h, y, delta_out, gradW, delta_in):
    """Product layer backward from the sigma/factor caches of the forward pass."""
    n_out, n_in = S.shape
    for j in range(n_in):
        delta_in[j] = 0.0
    for i in range(n_out):
        y_i = y[i]
        do_i = delta_out[i]
        for j in range(n_in):
            # division shortcut for the leave-one-out product, with the exact
            # fallback when the excluded factor is too close to zero
            f = F[i, j]
            if abs(f) > EPS_DIV:
                rest = y_i / f
            else:
                rest = 1.0
                for k in range(n_in):
                    if k != j:
                        rest *= F[i, k]
            d = S[i, j]
            common = do_i * rest
            gradW[i, j] = common * (h[j] - 1.0) * d * (1.0 - d)
            delta_in[j] += common * d


@njit(cache=True)
def product_backward(W: np.ndarray, h: np.ndarray, y: np.ndarray, delta_out: np.ndarray):
    """Product layer backward pass.

    gradW_ij = delta_out_i * (prod_{k!=j} factor_ik) * (h_j - 1) * d_ij * (1 - d_ij)
    delta_in_j = sum_i delta_out_i * (prod_{k!=j} factor_ik) * d_ij
    with d_ij = sigma(W_ij).
    """
    n_out, n_in = W.shape
    S = np.empty((n_out, n_in))
    F = np.empty((n_out, n_in))
    for i in range(n_out):
        for j in range(n_in):
            s = logistic(W[i, j])
            S[i, j] = s
            F[i, j] = (1.0 - s) + s * h[j]
    gradW = np.empty((n_out, n_in))
    delta_in = np.empty(n_in)
    product_backward_cached(S, F, h, y, delta_out, gradW, delta_in)
    return gradW, delta_in


@njit(cache=True)
def sum_backward_into(W, x, h, delta_h, gradW, delta_x):
    """Tanh layer backward into caller-owned buffers."""
    n_out, n_in1 = W.shape
    n_in = n_in1 - 1
    for j in range(n_in):
        delta_x[j] = 0.0
    for i in range(n_out):
        g = delta_h[i] * (1.0 - h[i] * h[i])
        for j in range(n_in):
            gradW[i, j] = g * x[j]
            delta_x[j] += g * W[i, j]
        gradW[i, n_in] = g


@njit(cache=True)
def sum_backward(W: np.ndarray, x: np.ndarray, h: np.ndarray, delta_h: np.ndarray):
    """Tanh layer backward pass.

    gradW_ij = delta_h_i * (1 - h_i^2) * x_j, bias column sees x = 1.
    delta_x_j = sum_i delta_h_i * (1 - h_i^2) * W_ij, which is what lets
    tanh layers stack below other layers.
    """
    n_out, n_in1 = W.shape
    gradW = np.empty((n_out, n_in1))
    delta_x = np.empty(n_in1 - 1)
    sum_backward_into(W, x, h, delta_h, gradW, delta_x)
    return gradW, delta_x


class TanhSumLayer:
    """Summation layer with tanh activation and a trainable bias column."""

    kind = "tanh_sum"

    def __init__(self, W: np.ndarray):
        W = np.asarray(W, dtype=np.float64)
        if W.ndim != 2 or W.shape[1] < 2:
            raise ValueError(f"tanh layer weights must be (out, in+1), got {W.shape}")
        self.W = W

    @property
    def n_in(self) -> int:
        return self.W.shape[1] - 1

    @property
    def n_out(self) -> int:
        return self.W.shape[0]

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.shape[0] != self.n_in:
            raise ValueError(f"expected input of length {self.n_in}, got {x.shape[0]}")
        return sum_forward(self.W, x)

    def backward(self, x, h, delta_h):
        if delta_h.shape[0] != self.n_out:
            raise ValueError(f"expected delta of length {self.n_out}, got {delta_h.shape[0]}")
        return sum_backward(self.W, x, h, delta_h)


class ProductLayer:
    """Product layer with quasi-exponentiation weighting; no bias."""

    kind = "product"

    def __init__(self, W: np.ndarray):
        W = np.asarray(W, dtype=np.float64)
        if W.ndim != 2:
            raise ValueError(f"product layer weights must be 2-d, got {W.shape}")
        self.W = W

    @property
    def n_in(self) -> int:
        return self.W.shape[1]

    @property
    def n_out(self) -> int:
        return self.W.shape[0]

    def forward(self, h: np.ndarray) -> np.ndarray:
        if h.shape[0] != self.n_in:
            raise ValueError(f"expected input of length {self.n_in}, got {h.shape[0]}")
        return product_forward(self.W, h)

    def backward(self, h, y, delta_out):
        if delta_out.shape[0] != self.n_out:
            raise ValueError(f"expected delta of length {self.n_out}, got {delta_out.shape[0]}")
        return product_backward(self.W, h, y, delta_out)
