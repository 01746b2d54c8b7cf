"""Rate-distortion curve evaluation for a fixed reproduction law.

Two routes to the same curve: solve the tilt parameter that meets a target
distortion and evaluate the conjugate identity there (`legendre_rate`), or
accumulate the conditional-variance integrals in the tilt parameter
(`rate_by_integral` and friends).  They must agree to tight tolerances, and
the tests hold them to that.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .gibbs import mmse, parametric_distortion, rate_at_parameter, _row_stats, _check_s
from .problem import RdProblem, d_infinity, d_zero
from .quadrature import QuadratureConfig, QuadratureError, adaptive_quadrature

__all__ = [
    "CurvePoint",
    "Curve",
    "SolveError",
    "legendre_rate",
    "solve_s_for_distortion",
    "rate_by_integral",
    "distortion_by_integral",
    "rate_by_tail_integral",
    "distortion_by_tail_integral",
    "rate_at_d_infinity",
    "trace_curve",
]

_BRACKET_CAP = 2.0**80
_MONOTONE_SLACK = 1e-9


class SolveError(RuntimeError):
    """Root bracketing for the distortion target failed."""


@dataclass(frozen=True)
class CurvePoint:
    s: float
    distortion: float
    rate_nats: float
    mmse: float


@dataclass(frozen=True)
class Curve:
    """Traced curve points with the method that produced them."""

    points: tuple[CurvePoint, ...]
    provenance: str

    def __post_init__(self):
        if self.provenance not in ("legendre", "integral-from-zero", "integral-from-infinity"):
            raise ValueError(f"unknown provenance {self.provenance!r}")
        pts = tuple(self.points)
        for a, b in zip(pts, pts[1:]):
            if b.s <= a.s:
                raise ValueError("curve points must have strictly increasing s")
            if b.distortion > a.distortion + _MONOTONE_SLACK:
                raise ValueError("distortion must be nonincreasing along the curve")
            if b.rate_nats < a.rate_nats - _MONOTONE_SLACK:
                raise ValueError("rate must be nondecreasing along the curve")
        for pt in pts:
            if pt.rate_nats < -_MONOTONE_SLACK or pt.mmse < 0:
                raise ValueError("curve points need nonnegative rate and mmse")
        object.__setattr__(self, "points", pts)

    def distortions(self) -> np.ndarray:
        return np.array([pt.distortion for pt in self.points])

    def rates(self) -> np.ndarray:
        return np.array([pt.rate_nats for pt in self.points])


def solve_s_for_distortion(problem: RdProblem, target: float, rel_tol: float = 1e-10) -> float:
    """Tilt parameter whose parametric distortion equals `target`.

    Bisection on the monotone map s -> D_s after doubling an upper bracket
    from 1; accepts s once |D_s - target| <= rel_tol * D_0.  Targets so close
    to the infimum that no floating bracket reaches them raise SolveError.
    """
    dz = d_zero(problem)
    di = d_infinity(problem)
    if not (di < target < dz):
        raise ValueError(f"target distortion must lie strictly between {di!r} and {dz!r}")
    tol = rel_tol * dz

    lo, f_lo = 0.0, dz
    hi = 1.0
    while True:
        f_hi = parametric_distortion(problem, hi)
        if f_hi < target:
            break
        lo, f_lo = hi, f_hi
        hi *= 2.0
        if hi > _BRACKET_CAP:
            raise SolveError("target distortion numerically indistinguishable from D-infinity")
    if abs(f_lo - target) <= tol:
        return lo

    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        f_mid = parametric_distortion(problem, mid)
        if abs(f_mid - target) <= tol:
            return mid
        if f_mid > target:
            lo = mid
        else:
            hi = mid
    raise SolveError("bisection did not reach the distortion tolerance")


def legendre_rate(problem: RdProblem, target: float, rel_tol: float = 1e-10) -> tuple[float, float]:
    """Rate (nats) at distortion `target` and the tilt that achieves it.

    Targets at or below the per-source minimum distortion are infeasible and
    raise; targets at or above the independent-coupling distortion cost zero
    rate (above it a warning notes the clamp).
    """
    dz = d_zero(problem)
    di = d_infinity(problem)
    if target <= di:
        raise ValueError(f"distortion below D-infinity: {target!r} <= {di!r}")
    if target >= dz:
        if target > dz:
            warnings.warn(
                f"distortion {target!r} above the zero-rate point {dz!r}; clamping rate to 0",
                stacklevel=2,
            )
        return 0.0, 0.0
    s = solve_s_for_distortion(problem, target, rel_tol=rel_tol)
    p = problem.p.weights
    _, lnz, _, _, _ = _row_stats(problem, s)
    rate = -(s * target + float(p @ lnz))
    return max(rate, 0.0), s


def _integrate_decades(
    f, lo: float, hi: float, config: Optional[QuadratureConfig], what: str
) -> float:
    """Adaptive quadrature over [lo, hi], one call per decade past the switch.

    A single panel spanning several orders of magnitude can put every node
    beyond a localized integrand and report a deceptive zero error estimate,
    so wide stretches are walked a decade at a time.
    """
    config = config or QuadratureConfig()
    total = 0.0
    a = lo
    if a < config.tail_switch:
        b = min(hi, config.tail_switch)
        val, _ = adaptive_quadrature(f, a, b, config, what=what)
        total += val
        a = b
    while a < hi:
        b = min(10.0 * a, hi)
        val, _ = adaptive_quadrature(f, a, b, config, what=what)
        total += val
        a = b
    return total


def rate_by_integral(problem: RdProblem, s: float, config: Optional[QuadratureConfig] = None) -> float:
    """Rate at tilt s as the cumulative integral of t * mmse(t) from 0."""
    s = _check_s(s)
    if s == 0.0:
        return 0.0
    val = _integrate_decades(lambda t: t * mmse(problem, t), 0.0, s, config, "rate integral")
    return max(val, 0.0)


def distortion_by_integral(problem: RdProblem, s: float, config: Optional[QuadratureConfig] = None) -> float:
    """Distortion at tilt s as D_0 minus the integral of mmse from 0."""
    s = _check_s(s)
    dz = d_zero(problem)
    if s == 0.0:
        return dz
    val = _integrate_decades(lambda t: mmse(problem, t), 0.0, s, config, "distortion integral")
    return max(dz - val, d_infinity(problem))


def _tail_integral(problem: RdProblem, s: float, weight_power: int, config: QuadratureConfig) -> float:
    """Integral over (s, infinity) of t^k * mmse(t), k in {0, 1}, via u = 1/t.

    The direct stretch [s, T] is integrated as-is when s sits below the
    configured switch point; the remainder becomes a bounded integral in u
    whose integrand vanishes at u = 0 for any problem with finite distortion.
    The u interval is walked downward a decade at a time (see
    _integrate_decades for why), stopping once two consecutive decades fall
    below tolerance; the stub down to u = 0 gets one final call.
    """
    T = max(s, config.tail_switch)
    total = 0.0
    if T > s:
        val, _ = adaptive_quadrature(
            lambda t: (t**weight_power) * mmse(problem, t), s, T, config, what="tail integral"
        )
        total += val
    # u = 1/t: dt = -du/u^2, so t^k mmse(t) dt = mmse(1/u) / u^(k+2) du
    def g(u: float) -> float:
        return mmse(problem, 1.0 / u) / u ** (weight_power + 2)

    b = 1.0 / T
    quiet = 0
    while quiet < 2 and b > 0.0:
        a = 0.1 * b
        val, _ = adaptive_quadrature(g, a, b, config, what="tail integral")
        total += val
        b = a
        quiet = quiet + 1 if abs(val) <= 0.25 * max(config.abs_tol, config.rel_tol * abs(total)) else 0
    val, _ = adaptive_quadrature(g, 0.0, b, config, what="tail integral")
    return total + val


def rate_at_d_infinity(problem: RdProblem, tie_tol: float = 1e-12) -> float:
    """Limiting rate as distortion falls to its infimum.

    Equals -E_p log q(argmin set), where each source row's argmin set
    collects reproduction symbols (with q-mass) whose distortion is within
    tie_tol of the row minimum over the q-support.
    """
    q = problem.q.weights
    support = q > 0
    dsup = problem.d[:, support]
    qsup = q[support]
    m = dsup.min(axis=1)
    mass = np.where(dsup <= m[:, None] + tie_tol, qsup, 0.0).sum(axis=1)
    return float(-(problem.p.weights @ np.log(mass)))


def rate_by_tail_integral(problem: RdProblem, s: float, config: Optional[QuadratureConfig] = None) -> float:
    """Rate at tilt s > 0 approached from above: R_inf minus the tail integral."""
    s = _check_s(s)
    if s <= 0.0:
        raise ValueError("tail form needs s > 0; the curve starts at rate 0 for s = 0")
    config = config or QuadratureConfig()
    try:
        tail = _tail_integral(problem, s, 1, config)
    except QuadratureError as exc:
        raise QuadratureError("tail integral did not converge", exc.value, exc.estimate) from exc
    return max(rate_at_d_infinity(problem) - tail, 0.0)


def distortion_by_tail_integral(problem: RdProblem, s: float, config: Optional[QuadratureConfig] = None) -> float:
    """Distortion at tilt s > 0 as D_infinity plus the tail integral of mmse."""
    s = _check_s(s)
    if s <= 0.0:
        raise ValueError("tail form needs s > 0; the curve starts at D_0 for s = 0")
    config = config or QuadratureConfig()
    try:
        tail = _tail_integral(problem, s, 0, config)
    except QuadratureError as exc:
        raise QuadratureError("tail integral did not converge", exc.value, exc.estimate) from exc
    return d_infinity(problem) + tail


def trace_curve(
    problem: RdProblem,
    s_values: Sequence[float],
    method: str = "legendre",
    config: Optional[QuadratureConfig] = None,
) -> Curve:
    """Curve points at increasing tilt values by the chosen method.

    Integral methods accumulate quadrature over the segments between
    consecutive tilt values instead of restarting from the endpoint, so a
    trace costs one sweep regardless of its length.
    """
    svals = [float(s) for s in s_values]
    if not svals:
        raise ValueError("s_values must be nonempty")
    if any(s < 0 or not math.isfinite(s) for s in svals):
        raise ValueError("s_values must be finite and nonnegative")
    if any(b <= a for a, b in zip(svals, svals[1:])):
        raise ValueError("s_values must be strictly increasing")
    config = config or QuadratureConfig()

    mm = [mmse(problem, s) for s in svals]
    points: list[CurvePoint] = []

    if method == "legendre":
        for s, m in zip(svals, mm):
            D = parametric_distortion(problem, s)
            points.append(CurvePoint(s, D, rate_at_parameter(problem, s), m))
    elif method == "integral-from-zero":
        R, D = 0.0, d_zero(problem)
        prev = 0.0
        for s, m in zip(svals, mm):
            if s > prev:
                dr = _integrate_decades(lambda t: t * mmse(problem, t), prev, s, config, "rate integral")
                dd = _integrate_decades(lambda t: mmse(problem, t), prev, s, config, "distortion integral")
                R += dr
                D -= dd
            points.append(CurvePoint(s, D, max(R, 0.0), m))
            prev = s
    elif method == "integral-from-infinity":
        top = svals[-1]
        pts_rev: list[CurvePoint] = []
        if top > 0:
            R = rate_by_tail_integral(problem, top, config)
            D = distortion_by_tail_integral(problem, top, config)
        else:  # single point at s = 0
            R, D = 0.0, d_zero(problem)
        pts_rev.append(CurvePoint(top, D, R, mm[-1]))
        for s, m in zip(reversed(svals[:-1]), reversed(mm[:-1])):
            upper = pts_rev[-1]
            if s == 0.0:
                R, D = 0.0, d_zero(problem)
            else:
                dr = _integrate_decades(lambda t: t * mmse(problem, t), s, upper.s, config, "rate integral")
                dd = _integrate_decades(lambda t: mmse(problem, t), s, upper.s, config, "distortion integral")
                R = max(upper.rate_nats - dr, 0.0)
                D = upper.distortion + dd
            pts_rev.append(CurvePoint(s, D, R, m))
        points = list(reversed(pts_rev))
    else:
        raise ValueError(f"unknown method {method!r}")
    return Curve(points=tuple(points), provenance=method)
