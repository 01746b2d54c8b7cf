"""Built-in example problems, each reproducible from a single name.

Every preset bundles a ready-to-trace problem, optional analytic moment
data for the bound formulas, and default parameter grids for the command
line.  Grid densities follow the same recipes the acceptance checks use,
so a preset run reproduces the corresponding worked example directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .bounds import MomentSummary, gaussian_moments
from .problem import (
    DistortionSpec,
    GaussianDensity,
    Grid,
    Pmf,
    RdProblem,
    UniformDensity,
    discretize_density,
)

__all__ = ["Preset", "PRESET_NAMES", "load_preset"]


@dataclass(frozen=True)
class Preset:
    """A named problem with CLI defaults attached."""

    name: str
    description: str
    problem: RdProblem
    moments: Optional[MomentSummary] = None
    # (lo, hi, n, scale) defaults for the curve and bounds grids
    s_grid: tuple = (0.01, 10.0, 25, "log")
    d_grid: Optional[tuple] = None
    lr_exponent: Optional[float] = None


def _bss() -> Preset:
    half = np.array([0.5, 0.5])
    grid = Grid(np.array([0.0, 1.0]))
    problem = RdProblem.from_spec(
        x_grid=grid, p=Pmf(half), y_grid=grid, q=Pmf(half), spec=DistortionSpec("hamming")
    )
    return Preset(
        name="bss",
        description="symmetric binary source, Hamming distortion, symmetric reproduction",
        problem=problem,
    )


def _gauss() -> Preset:
    x_grid, p = discretize_density(GaussianDensity(0.0, 1.0), 1001, 8.0)
    y_grid, q = discretize_density(GaussianDensity(0.0, 0.75), 1001, 8.0)
    problem = RdProblem.from_spec(
        x_grid=x_grid, p=p, y_grid=y_grid, q=q, spec=DistortionSpec("squared-error")
    )
    return Preset(
        name="gauss",
        description="unit Gaussian source, squared error, Gaussian reproduction of variance 0.75",
        problem=problem,
    )


def _binary_rep_problem() -> RdProblem:
    x_grid, p = discretize_density(GaussianDensity(0.0, 1.0), 1001, 8.0)
    y_grid = Grid(np.array([-1.0, 1.0]))
    q = Pmf(np.array([0.5, 0.5]))
    return RdProblem.from_spec(
        x_grid=x_grid, p=p, y_grid=y_grid, q=q, spec=DistortionSpec("squared-error")
    )


def _binary_rep() -> Preset:
    return Preset(
        name="binary-rep",
        description="unit Gaussian source, squared error, symmetric two-level reproduction",
        problem=_binary_rep_problem(),
        moments=gaussian_moments(1.0, 1.0),
        d_grid=(1.25, 2.0, 31),
    )


def _lr() -> Preset:
    x_grid, p = discretize_density(GaussianDensity(0.0, 0.01), 1001, 8.0)
    y_grid, q = discretize_density(UniformDensity(1.0), 2001)
    problem = RdProblem.from_spec(
        x_grid=x_grid, p=p, y_grid=y_grid, q=q, spec=DistortionSpec("power-law", r=2.0)
    )
    return Preset(
        name="lr",
        description="narrow Gaussian source, |x-y|^2 distortion, uniform reproduction on [-1, 1]",
        problem=problem,
        s_grid=(10.0, 200.0, 13, "log"),
        lr_exponent=2.0,
    )


def _fig1() -> Preset:
    return Preset(
        name="fig1",
        description="high-distortion bound sandwich for the two-level reproduction problem",
        problem=_binary_rep_problem(),
        moments=gaussian_moments(1.0, 1.0),
        d_grid=(1.25, 2.0, 31),
    )


_BUILDERS: dict[str, Callable[[], Preset]] = {
    "bss": _bss,
    "gauss": _gauss,
    "binary-rep": _binary_rep,
    "lr": _lr,
    "fig1": _fig1,
}

PRESET_NAMES = tuple(sorted(_BUILDERS))


def load_preset(name: str) -> Preset:
    """Build the named preset; unknown names raise ValueError."""
    try:
        builder = _BUILDERS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}") from None
    return builder()
