"""Exponentially tilted reproduction channels and their distortion statistics.

For a tilt parameter s >= 0 the channel row for source symbol x weights each
reproduction symbol by q(y) exp(-s d(x, y)), normalized by the row partition
sum Z_x(s).  The distortion along this family sweeps from the independent-
coupling value at s = 0 down to the per-source minimum as s grows, and the
expected conditional variance of d(x, Y) under these rows is the derivative
magnitude of that sweep.  Everything is computed in the log domain with a
per-row shift so no tilt magnitude within floating range can overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .problem import Pmf, RdProblem, _freeze

__all__ = [
    "GibbsChannel",
    "log_partition",
    "gibbs_channel",
    "parametric_distortion",
    "mmse",
    "induced_marginal",
    "rate_at_parameter",
]


def _check_s(s: float) -> float:
    s = float(s)
    if not (s >= 0.0) or not math.isfinite(s):
        raise ValueError(f"tilt parameter must be finite and >= 0, got {s!r}")
    return s


@dataclass(frozen=True)
class GibbsChannel:
    """Row-stochastic tilted channel with its per-row log partition sums."""

    rows: np.ndarray = field(repr=False)
    log_partition: np.ndarray = field(repr=False)

    def __post_init__(self):
        rows = _freeze(self.rows)
        lz = _freeze(self.log_partition)
        if rows.ndim != 2 or lz.shape != (rows.shape[0],):
            raise ValueError("channel rows and log partition shapes are inconsistent")
        if np.any(rows < 0):
            raise ValueError("channel weights must be nonnegative")
        if np.max(np.abs(rows.sum(axis=1) - 1.0)) > 1e-12:
            raise ValueError("channel rows must sum to 1 within 1e-12")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "log_partition", lz)


def _row_stats(problem: RdProblem, s: float):
    """Per-row (log Z, conditional mean of d, conditional variance of d).

    The exponent shift is the per-row minimum distortion over symbols that
    carry reproduction mass, which keeps every exponent <= 0; symbols with
    zero q-weight can never be produced by the tilt, so they are excluded
    from the shift as well as from the sums.
    """
    q = problem.q.weights
    support = q > 0
    dsup = problem.d[:, support]
    qsup = q[support]
    m = dsup.min(axis=1)
    e = qsup * np.exp(-s * (dsup - m[:, None]))
    z = e.sum(axis=1)
    lnz = np.log(z) - s * m
    w = e / z[:, None]
    m1 = (w * dsup).sum(axis=1)
    m2 = (w * dsup**2).sum(axis=1)
    var = np.maximum(m2 - m1**2, 0.0)
    return support, lnz, w, m1, var


def log_partition(problem: RdProblem, s: float) -> np.ndarray:
    """Per-source-row log of sum_y q(y) exp(-s d(x, y))."""
    s = _check_s(s)
    _, lnz, _, _, _ = _row_stats(problem, s)
    return lnz


def gibbs_channel(problem: RdProblem, s: float) -> GibbsChannel:
    """Tilted channel at parameter s; zero q-weights give zero channel weights."""
    s = _check_s(s)
    support, lnz, w, _, _ = _row_stats(problem, s)
    rows = np.zeros((problem.nx, problem.ny))
    rows[:, support] = w
    return GibbsChannel(rows=rows, log_partition=lnz)


def parametric_distortion(problem: RdProblem, s: float) -> float:
    """Expected distortion under the tilted channel at parameter s."""
    s = _check_s(s)
    _, _, _, m1, _ = _row_stats(problem, s)
    return float(problem.p.weights @ m1)


def mmse(problem: RdProblem, s: float) -> float:
    """Source-averaged conditional variance of d(x, Y) under the tilted rows.

    Computed from the first two conditional moments with a nonnegativity
    clamp against roundoff; this is the negated derivative of the parametric
    distortion in s.
    """
    s = _check_s(s)
    _, _, _, _, var = _row_stats(problem, s)
    return float(problem.p.weights @ var)


def induced_marginal(problem: RdProblem, s: float) -> Pmf:
    """Reproduction marginal induced by the source and the tilted channel.

    Exposed for inspection only: the tilt family holds q fixed inside each
    row, and the induced marginal generally differs from q except at the
    optimum reproduction law.
    """
    ch = gibbs_channel(problem, s)
    w = problem.p.weights @ ch.rows
    return Pmf(w / w.sum())


def rate_at_parameter(problem: RdProblem, s: float) -> float:
    """Rate (nats) at tilt s via the conjugate identity -(s D_s + E_p log Z_x(s)).

    Exact up to floating arithmetic; its s-derivative is s times the
    conditional-variance functional, which makes it the cheap counterpart of
    the cumulative-integral rate forms.
    """
    s = _check_s(s)
    _, lnz, _, m1, _ = _row_stats(problem, s)
    p = problem.p.weights
    rate = -(s * float(p @ m1) + float(p @ lnz))
    return max(rate, 0.0)
