"""Discrete entropy, divergence, and mutual-information sums in nats.

Every sum uses the 0 ln 0 = 0 convention.  Divergence returns +inf when the
first law puts mass outside the support of the second.
"""

from __future__ import annotations

import math

import numpy as np

__all__ = [
    "entropy",
    "binary_entropy",
    "kl_divergence",
    "conditional_entropy_output",
    "mutual_information",
]


def entropy(p) -> float:
    """Shannon entropy of a weight vector, in nats."""
    p = np.asarray(p, dtype=float)
    pos = p > 0
    return float(-(p[pos] @ np.log(p[pos])))


def binary_entropy(d: float) -> float:
    """Entropy of a Bernoulli(d) variable, in nats."""
    d = float(d)
    if not 0.0 <= d <= 1.0:
        raise ValueError(f"binary entropy argument must lie in [0, 1], got {d!r}")
    if d == 0.0 or d == 1.0:
        return 0.0
    return -d * math.log(d) - (1.0 - d) * math.log1p(-d)


def kl_divergence(p, q) -> float:
    """Relative entropy sum p ln(p/q), in nats.

    +inf if p has mass on a symbol where q has none; such arguments are
    legal because grid searches use the value to reject candidates.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("divergence arguments must have matching shapes")
    pos = p > 0
    if np.any(q[pos] <= 0):
        return math.inf
    return float(p[pos] @ (np.log(p[pos]) - np.log(q[pos])))


def conditional_entropy_output(p, w) -> float:
    """Entropy of the output given the input, H(Y|X), in nats.

    p holds input weights, w is the row-stochastic channel matrix.
    """
    p = np.asarray(p, dtype=float)
    w = np.asarray(w, dtype=float)
    t = np.zeros_like(w)
    mask = w > 0
    t[mask] = w[mask] * np.log(w[mask])
    return float(-(p @ t.sum(axis=1)))


def mutual_information(p, w) -> float:
    """I(X; Y) in nats for input weights p and row-stochastic channel w.

    Computed against the induced output marginal.  Whenever a retained
    channel entry is positive on an input of positive weight, the marginal
    at that output is positive too, so no ratio here ever divides by zero.
    """
    p = np.asarray(p, dtype=float)
    w = np.asarray(w, dtype=float)
    q = p @ w
    total = 0.0
    for i in range(w.shape[0]):
        if p[i] == 0.0:
            continue
        row = w[i]
        mask = row > 0
        total += p[i] * float(row[mask] @ (np.log(row[mask]) - np.log(q[mask])))
    return max(total, 0.0)
