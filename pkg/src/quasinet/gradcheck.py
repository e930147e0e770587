"""Finite-difference oracle for the hand-derived backward passes.

The trainer ascends J = -1/2 sum_i (d_i - y_i)^2 (its per-layer "grads" are
the increments it adds), so the oracle differentiates that same signed
objective: a sign error in any backward pass cannot cancel out silently.

The oracle's forward pass is a separate plain-numpy implementation running
in 80-bit extended precision. That matters: some individual gradients in the
deeper product stacks are ~1e-9, and a 64-bit central difference of an O(1)
objective carries ~5e-12 of round-off, which would swamp the 1e-6 relative
tolerance on those entries. Extended precision pushes the noise to ~1e-14;
the rare entries still too close to the tolerance are re-evaluated with
mpmath at 40 digits, where round-off is gone entirely. The difference
formula itself stays the plain central difference with eps = 1e-5.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import mpmath
import numpy as np

DEFAULT_EPS = 1e-5
DEFAULT_TOL = 1e-6


def _logistic_ld(W):
    out = np.empty_like(W)
    pos = W >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-W[pos]))
    e = np.exp(W[~pos])
    out[~pos] = e / (1.0 + e)
    return out


def _objective_ld(net, x, d) -> np.longdouble:
    """-1/2 |d - y|^2 with the whole forward pass in extended precision."""
    a = np.asarray(x, dtype=np.longdouble)
    for layer in net.layers:
        W = layer.W.astype(np.longdouble)
        if layer.kind == "tanh_sum":
            a = np.tanh(W[:, :-1] @ a + W[:, -1])
        else:
            S = _logistic_ld(W)
            a = np.prod((1.0 - S) + S * a[None, :], axis=1)
    r = np.asarray(d, dtype=np.longdouble) - a
    return -0.5 * np.sum(r * r)


def _objective_mp(net, x, d):
    """Same objective via mpmath at 40 significant digits."""
    a = [mpmath.mpf(v) for v in np.asarray(x, dtype=np.float64)]
    for layer in net.layers:
        W = layer.W
        out = []
        if layer.kind == "tanh_sum":
            for i in range(W.shape[0]):
                s = mpmath.mpf(W[i, -1])
                for j in range(W.shape[1] - 1):
                    s += mpmath.mpf(W[i, j]) * a[j]
                out.append(mpmath.tanh(s))
        else:
            for i in range(W.shape[0]):
                p = mpmath.mpf(1)
                for j in range(W.shape[1]):
                    sig = 1 / (1 + mpmath.exp(-mpmath.mpf(W[i, j])))
                    p *= (1 - sig) + sig * a[j]
                out.append(p)
        a = out
    total = mpmath.mpf(0)
    for di, yi in zip(np.asarray(d, dtype=np.float64), a):
        r = mpmath.mpf(di) - yi
        total += r * r
    return -total / 2


def relative_error(a: float, b: float) -> float:
    return float(abs(a - b) / max(abs(a), abs(b), 1e-8))


def _central_difference(objective, net, coords, eps: float) -> float:
    layer_idx, i, j = coords
    W = net.layers[layer_idx].W
    orig = W[i, j]
    try:
        W[i, j] = orig + eps
        j_plus = objective(net)
        W[i, j] = orig - eps
        j_minus = objective(net)
    finally:
        W[i, j] = orig
    return float((j_plus - j_minus) / (2 * eps))


def numeric_grad(net, x, d, param_coords, eps: float = DEFAULT_EPS) -> float:
    """Central difference of the ascent objective w.r.t. one weight."""
    if eps <= 0:
        raise ValueError(f"eps must be > 0, got {eps}")
    return _central_difference(lambda n: _objective_ld(n, x, d), net, param_coords, eps)


def _numeric_grad_mp(net, x, d, param_coords, eps: float) -> float:
    with mpmath.workdps(40):
        return _central_difference(lambda n: _objective_mp(n, x, d), net, param_coords, eps)


@dataclass
class GradCheckReport:
    entries: list = field(default_factory=list)  # (layer, row, col, analytic, numeric, rel_err)
    max_rel_err: float = 0.0
    tolerance: float = DEFAULT_TOL

    @property
    def passed(self) -> bool:
        return self.max_rel_err < self.tolerance

    def worst(self):
        if not self.entries:
            return None
        return max(self.entries, key=lambda e: e[5])

    def to_json(self) -> str:
        return json.dumps(
            {
                "max_rel_err": self.max_rel_err,
                "tolerance": self.tolerance,
                "passed": self.passed,
                "n_checked": len(self.entries),
                "worst": self.worst(),
            }
        )


def check_network(net, samples, eps: float = DEFAULT_EPS, tol: float = DEFAULT_TOL) -> GradCheckReport:
    """Sweep every weight of every layer over every sample; keep the worst case.

    Entries whose first-pass relative error lands within a factor of ten of
    the tolerance are re-evaluated with the 40-digit oracle before being
    trusted either way.
    """
    X, D = (samples.inputs, samples.targets) if hasattr(samples, "inputs") else samples
    if len(X) == 0:
        raise ValueError("need at least one sample")
    report = GradCheckReport(tolerance=tol)
    for x, d in zip(np.asarray(X, dtype=np.float64), np.asarray(D, dtype=np.float64)):
        acts = net.forward(x)
        grads = net.backward(acts, d)
        for li, g in enumerate(grads):
            rows, cols = g.shape
            for i in range(rows):
                for j in range(cols):
                    num = numeric_grad(net, x, d, (li, i, j), eps)
                    err = relative_error(g[i, j], num)
                    if err > 0.1 * tol:
                        num = _numeric_grad_mp(net, x, d, (li, i, j), eps)
                        err = relative_error(g[i, j], num)
                    report.entries.append((li, i, j, float(g[i, j]), float(num), err))
                    if err > report.max_rel_err:
                        report.max_rel_err = err
    return report
