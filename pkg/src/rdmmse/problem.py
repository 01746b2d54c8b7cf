"""Discrete source/reproduction models for rate-distortion computations.

A problem instance couples a source alphabet with weights, a reproduction
alphabet with fixed weights, and a nonnegative distortion matrix.  Continuous
densities enter through `discretize_density`, which samples the density
pointwise on a uniform grid and renormalizes; with a few hundred points this
is accurate far beyond the tolerances used downstream, and it keeps every
later quantity an exact finite-alphabet object.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

WEIGHT_TOL = 1e-12

DISTORTION_KINDS = ("hamming", "squared-error", "power-law", "custom-matrix")


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Grid:
    """Strictly increasing finite alphabet of real codes."""

    points: np.ndarray

    def __post_init__(self):
        pts = _freeze(self.points)
        if pts.ndim != 1 or pts.size < 1:
            raise ValueError("grid must be a nonempty 1-d array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("grid points must be finite")
        if pts.size > 1 and not np.all(np.diff(pts) > 0):
            raise ValueError("grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.size

    @property
    def spacing(self) -> Optional[float]:
        """Common spacing if the grid is uniform, else None."""
        if len(self) < 2:
            return None
        d = np.diff(self.points)
        h = float(d[0])
        if np.all(np.abs(d - h) <= 1e-12 * max(abs(h), 1.0)):
            return h
        return None


@dataclass(frozen=True)
class Pmf:
    """Probability weights; nonnegative and summing to one within 1e-12."""

    weights: np.ndarray

    def __post_init__(self):
        w = _freeze(self.weights)
        if w.ndim != 1 or w.size < 1:
            raise ValueError("pmf must be a nonempty 1-d array")
        if not np.all(np.isfinite(w)) or np.any(w < 0):
            raise ValueError("pmf weights must be finite and nonnegative")
        if abs(float(w.sum()) - 1.0) > WEIGHT_TOL:
            raise ValueError(f"pmf weights sum to {w.sum()!r}, expected 1 within {WEIGHT_TOL}")
        object.__setattr__(self, "weights", w)

    def __len__(self) -> int:
        return self.weights.size


@dataclass(frozen=True)
class DistortionSpec:
    """Distortion rule: hamming, squared-error, power-law (|x-y|^r), or custom-matrix."""

    kind: str
    r: Optional[float] = None
    matrix: Optional[np.ndarray] = None

    def __post_init__(self):
        if self.kind not in DISTORTION_KINDS:
            raise ValueError(f"unknown distortion kind {self.kind!r}; expected one of {DISTORTION_KINDS}")
        if self.kind == "power-law":
            if self.r is None or not (self.r > 0) or not math.isfinite(self.r):
                raise ValueError("power-law distortion needs a finite exponent r > 0")
        elif self.r is not None:
            raise ValueError(f"exponent r is only meaningful for power-law, not {self.kind!r}")
        if self.kind == "custom-matrix":
            if self.matrix is None:
                raise ValueError("custom-matrix distortion needs a matrix")
            m = _freeze(self.matrix)
            if m.ndim != 2:
                raise ValueError("distortion matrix must be 2-d")
            if not np.all(np.isfinite(m)) or np.any(m < 0):
                raise ValueError("distortion matrix entries must be finite and nonnegative")
            object.__setattr__(self, "matrix", m)
        elif self.matrix is not None:
            raise ValueError("matrix is only meaningful for custom-matrix")


def build_distortion_matrix(x_grid: Grid, y_grid: Grid, spec: DistortionSpec) -> np.ndarray:
    """|X| x |Y| matrix of d(x, y) under the given distortion rule.

    Hamming compares the numeric codes exactly: 0 on equal codes, 1 otherwise.
    """
    x = x_grid.points[:, None]
    y = y_grid.points[None, :]
    if spec.kind == "hamming":
        d = np.where(x == y, 0.0, 1.0)
    elif spec.kind == "squared-error":
        d = (x - y) ** 2
    elif spec.kind == "power-law":
        d = np.abs(x - y) ** spec.r
    else:
        d = np.array(spec.matrix, dtype=float)
        if d.shape != (len(x_grid), len(y_grid)):
            raise ValueError(
                f"custom matrix shape {d.shape} does not match alphabets ({len(x_grid)}, {len(y_grid)})"
            )
    return _freeze(d)


@dataclass(frozen=True)
class RdProblem:
    """Source (x_grid, p), fixed reproduction (y_grid, q), and distortion matrix d."""

    x_grid: Grid
    p: Pmf
    y_grid: Grid
    q: Pmf
    d: np.ndarray = field(repr=False)

    def __post_init__(self):
        if len(self.p) != len(self.x_grid):
            raise ValueError("source pmf length does not match source grid")
        if len(self.q) != len(self.y_grid):
            raise ValueError("reproduction pmf length does not match reproduction grid")
        d = _freeze(self.d)
        if d.shape != (len(self.x_grid), len(self.y_grid)):
            raise ValueError(f"distortion matrix shape {d.shape} does not match alphabets")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise ValueError("distortion entries must be finite and nonnegative")
        object.__setattr__(self, "d", d)

    @classmethod
    def from_spec(cls, x_grid: Grid, p: Pmf, y_grid: Grid, q: Pmf, spec: DistortionSpec) -> "RdProblem":
        return cls(x_grid, p, y_grid, q, build_distortion_matrix(x_grid, y_grid, spec))

    @property
    def nx(self) -> int:
        return len(self.x_grid)

    @property
    def ny(self) -> int:
        return len(self.y_grid)


@dataclass(frozen=True)
class GaussianDensity:
    mean: float = 0.0
    var: float = 1.0

    def __post_init__(self):
        if not (self.var > 0 and math.isfinite(self.var) and math.isfinite(self.mean)):
            raise ValueError("gaussian density needs finite mean and variance > 0")

    @property
    def std(self) -> float:
        return math.sqrt(self.var)

    def log_density(self, x: np.ndarray) -> np.ndarray:
        return -((x - self.mean) ** 2) / (2.0 * self.var)


@dataclass(frozen=True)
class LaplacianDensity:
    """Two-sided exponential, density (theta/2) exp(-theta |x|); variance 2/theta^2."""

    theta: float = 1.0

    def __post_init__(self):
        if not (self.theta > 0 and math.isfinite(self.theta)):
            raise ValueError("laplacian density needs theta > 0")

    @property
    def mean(self) -> float:
        return 0.0

    @property
    def std(self) -> float:
        return math.sqrt(2.0) / self.theta

    def log_density(self, x: np.ndarray) -> np.ndarray:
        return -self.theta * np.abs(x)


@dataclass(frozen=True)
class UniformDensity:
    """Uniform on [-halfwidth, halfwidth]."""

    halfwidth: float = 1.0

    def __post_init__(self):
        if not (self.halfwidth > 0 and math.isfinite(self.halfwidth)):
            raise ValueError("uniform density needs halfwidth > 0")

    @property
    def mean(self) -> float:
        return 0.0

    @property
    def std(self) -> float:
        return self.halfwidth / math.sqrt(3.0)

    def log_density(self, x: np.ndarray) -> np.ndarray:
        return np.zeros_like(x)


Density = Union[GaussianDensity, LaplacianDensity, UniformDensity]


def discretize_density(density: Density, n_points: int = 1001, span_sigmas: float = 8.0) -> tuple[Grid, Pmf]:
    """Pointwise-sampled, renormalized pmf on a uniform grid.

    The grid covers mean +/- span_sigmas * std, except that a uniform density
    is sampled on its own support [-A, A].  n_points must be odd and >= 3 so
    that the center of a symmetric density lands on a grid point.
    """
    if n_points < 3 or n_points % 2 == 0:
        raise ValueError("n_points must be odd and >= 3")
    if not (span_sigmas > 0 and math.isfinite(span_sigmas)):
        raise ValueError("span_sigmas must be finite and > 0")
    if isinstance(density, UniformDensity):
        lo, hi = -density.halfwidth, density.halfwidth
    else:
        half = span_sigmas * density.std
        lo, hi = density.mean - half, density.mean + half
    pts = np.linspace(lo, hi, n_points)
    logw = density.log_density(pts)
    w = np.exp(logw - logw.max())
    w /= w.sum()
    return Grid(pts), Pmf(w)


def d_zero(problem: RdProblem) -> float:
    """Distortion of the independent coupling p x q: the zero-rate end of the curve."""
    return float(problem.p.weights @ problem.d @ problem.q.weights)


def d_infinity(problem: RdProblem) -> float:
    """Expected per-source minimum distortion: the infinite-slope end of the curve."""
    return float(problem.p.weights @ problem.d.min(axis=1))
