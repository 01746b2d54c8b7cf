"""Mutual information at fixed input law via tilted posterior variances.

Raising a channel's transition weights to a power s in [0, 1] and
renormalizing against the input law gives a posterior family that sweeps
from the prior at s = 0 to the Bayes posterior at s = 1.  The
output-averaged variance of the log transition weight under this family,
integrated against s with weight s, equals the mutual information whenever
every output can be produced by every input.  Structural channel zeros
shrink the tilted supports and the raw integral then falls short by the
averaged log prior mass of those supports; the integral routine adds that
closed-form correction and also exposes the defect so callers can report
the raw value next to the repaired one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .info import conditional_entropy_output, mutual_information
from .problem import Grid, Pmf, _freeze
from .quadrature import QuadratureConfig, adaptive_quadrature

__all__ = [
    "ChannelProblem",
    "output_marginal",
    "capacity_posterior",
    "capacity_mmse",
    "capacity_by_integral",
    "capacity_legendre",
    "posterior_support_defect",
    "direct_mutual_information",
]


@dataclass(frozen=True)
class ChannelProblem:
    """Discrete memoryless channel with a fixed input law.

    w[i, j] is the probability of output j given input i; rows must be
    probability vectors over the output alphabet.
    """

    x_grid: Grid
    p: Pmf
    w: np.ndarray = field(repr=False)

    def __post_init__(self):
        w = _freeze(self.w)
        if w.ndim != 2 or w.shape[1] < 1:
            raise ValueError("channel matrix must be 2-D with at least one output")
        if len(self.x_grid.points) != w.shape[0] or len(self.p.weights) != w.shape[0]:
            raise ValueError("input grid, input weights, and channel rows disagree")
        if np.any(w < 0):
            raise ValueError("channel entries must be nonnegative")
        if np.max(np.abs(w.sum(axis=1) - 1.0)) > 1e-12:
            raise ValueError("channel rows must sum to 1 within 1e-12")
        object.__setattr__(self, "w", w)

    @classmethod
    def from_rows(cls, p, w, x_values=None) -> "ChannelProblem":
        """Build from plain arrays; input points default to 0, 1, ..."""
        w = np.asarray(w, dtype=float)
        if x_values is None:
            x_values = np.arange(w.shape[0], dtype=float) if w.ndim == 2 else []
        return cls(x_grid=Grid(x_values), p=Pmf(p), w=w)

    @property
    def nx(self) -> int:
        return self.w.shape[0]

    @property
    def ny(self) -> int:
        return self.w.shape[1]


def _check_unit_s(s: float) -> float:
    s = float(s)
    if not (0.0 <= s <= 1.0):
        raise ValueError(f"tilt parameter must lie in [0, 1], got {s!r}")
    return s


def output_marginal(cp: ChannelProblem) -> Pmf:
    """Output law induced by pushing the input weights through the channel."""
    q = cp.p.weights @ cp.w
    return Pmf(q)


def _support_stats(cp: ChannelProblem, s: float):
    """Per-output (marginal, log partition, posterior columns, log-weight variance).

    Restricted throughout to transition entries that are positive under an
    input of positive weight, so the s -> 0 end is the prior conditioned on
    each output's producer set rather than the raw prior.
    """
    p = cp.p.weights
    w = cp.w
    q = p @ w
    nx, ny = w.shape
    post = np.zeros((nx, ny))
    lnz = np.zeros(ny)
    var = np.zeros(ny)
    logp = np.log(p, out=np.full(nx, -np.inf), where=p > 0)
    for j in range(ny):
        if q[j] <= 0.0:
            continue
        keep = (p > 0) & (w[:, j] > 0)
        if not keep.any():
            raise RuntimeError(
                "internal error: no positive transition into an output of "
                "positive marginal weight"
            )
        ell = np.log(w[keep, j])
        a = logp[keep] + s * ell
        amax = a.max()
        u = np.exp(a - amax)
        tot = u.sum()
        lnz[j] = amax + math.log(tot)
        v = u / tot
        post[keep, j] = v
        m1 = float(v @ ell)
        m2 = float(v @ ell**2)
        var[j] = max(m2 - m1 * m1, 0.0)
    return q, lnz, post, var


def capacity_posterior(cp: ChannelProblem, s: float) -> np.ndarray:
    """Posterior matrix v_s with v_s[i, j] the weight of input i given output j.

    Each column tilts the input weights by the s-th power of its transition
    column.  At s = 0 the zeroth power of every entry is taken as 1, so each
    column is the untouched prior; for s > 0 zero transitions carry zero
    posterior weight.  Columns for outputs of zero marginal weight are
    left at zero.
    """
    s = _check_unit_s(s)
    q = cp.p.weights @ cp.w
    if s == 0.0:
        post = np.zeros((cp.nx, cp.ny))
        post[:, q > 0] = cp.p.weights[:, None]
        return post
    _, _, post, _ = _support_stats(cp, s)
    return post


def capacity_mmse(cp: ChannelProblem, s: float) -> float:
    """Output-averaged posterior variance of the log transition weight.

    Pairs with zero transition weight never carry tilted mass and are
    skipped, which at s = 0 makes this the variance under the prior
    conditioned on each output's producer set.
    """
    s = _check_unit_s(s)
    q, _, _, var = _support_stats(cp, s)
    return float(q @ var)


def posterior_support_defect(cp: ChannelProblem) -> float:
    """Gap between the raw variance integral and the mutual information.

    Equals minus the output-averaged log prior mass of each output's
    producer set; zero exactly when every transition weight is positive,
    and positive when structural zeros prune the tilted posteriors.
    """
    p = cp.p.weights
    q = p @ cp.w
    defect = 0.0
    for j in range(cp.ny):
        if q[j] <= 0.0:
            continue
        mass = float(p[cp.w[:, j] > 0].sum())
        defect -= q[j] * math.log(mass)
    return max(defect, 0.0)


def capacity_by_integral(cp: ChannelProblem, quad: QuadratureConfig | None = None) -> float:
    """Mutual information recovered from the weighted variance integral.

    Adaptive quadrature of s times the posterior log-weight variance over
    s in [0, 1], plus the support-defect term that restores equality with
    the directly computed mutual information for channels with structural
    zeros.  Callers wanting the raw integral alone can subtract
    posterior_support_defect.
    """
    config = quad if quad is not None else QuadratureConfig()

    def integrand(s: float) -> float:
        return s * capacity_mmse(cp, s)

    value, _ = adaptive_quadrature(integrand, 0.0, 1.0, config, what="capacity integral")
    return value + posterior_support_defect(cp)


def capacity_legendre(cp: ChannelProblem, s: float) -> float:
    """Conjugate objective -(s H(Y|X) + sum_y q(y) ln Z_y(s)).

    Z_y(s) is the tilted column normalizer; at s = 1 it collapses to the
    output marginal and the objective equals the mutual information
    identically.  Stationarity of this objective at s = 1 is the
    verification hook callers rely on.  At s = 0 every zeroth power is 1,
    so the objective is exactly 0.
    """
    s = float(s)
    if not (s >= 0.0) or not math.isfinite(s):
        raise ValueError(f"tilt parameter must be finite and >= 0, got {s!r}")
    if s == 0.0:
        return 0.0
    q, lnz, _, _ = _support_stats(cp, s)
    hyx = conditional_entropy_output(cp.p.weights, cp.w)
    pos = q > 0
    return -(s * hyx + float(q[pos] @ lnz[pos]))


def direct_mutual_information(cp: ChannelProblem) -> float:
    """Plain double-sum mutual information of the channel problem, in nats."""
    return mutual_information(cp.p.weights, cp.w)
