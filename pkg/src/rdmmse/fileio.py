"""JSON loaders for problem and channel descriptions.

A problem document has three sections::

    {
      "source":       {"density": "gaussian", "var": 1.0, "points": 1001, "span": 8.0}
                      or {"grid": [...], "pmf": [...]},
      "reproduction": same shape as "source",
      "distortion":   {"kind": "hamming" | "squared-error"}
                      or {"kind": "power-law", "r": 2.0}
                      or {"kind": "custom-matrix", "matrix": [[...], ...]},
      "moments":      optional {"sigma2": .., "rho4": .., "diff_entropy": .., "a": .., "theta": ..}
    }

Density names: gaussian (mean, var), laplacian (theta), uniform (halfwidth);
"points" and "span" control the discretization.  A channel document is
``{"input_pmf": [...], "channel": [[...], ...]}``.  All loaders raise
ValueError on malformed content so callers can map them to input errors.
"""

from __future__ import annotations

import json
from typing import Optional

import numpy as np

from .bounds import MomentSummary
from .capacity import ChannelProblem
from .problem import (
    DistortionSpec,
    GaussianDensity,
    Grid,
    LaplacianDensity,
    Pmf,
    RdProblem,
    UniformDensity,
    discretize_density,
)

__all__ = ["load_problem", "load_moments", "load_channel"]


def _read_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValueError(f"{path}: top level must be a JSON object")
    return doc


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ValueError(f"{where}: missing required key {key!r}")
    return obj[key]


def _parse_side(obj, where: str) -> tuple[Grid, Pmf]:
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: must be a JSON object")
    if "grid" in obj or "pmf" in obj:
        grid = np.asarray(_require(obj, "grid", where), dtype=float)
        pmf = np.asarray(_require(obj, "pmf", where), dtype=float)
        return Grid(grid), Pmf(pmf)
    name = _require(obj, "density", where)
    points = int(obj.get("points", 1001))
    span = float(obj.get("span", 8.0))
    if name == "gaussian":
        density = GaussianDensity(mean=float(obj.get("mean", 0.0)), var=float(obj.get("var", 1.0)))
    elif name == "laplacian":
        density = LaplacianDensity(theta=float(obj.get("theta", 1.0)))
    elif name == "uniform":
        density = UniformDensity(halfwidth=float(obj.get("halfwidth", 1.0)))
    else:
        raise ValueError(f"{where}: unknown density {name!r}; expected gaussian, laplacian, or uniform")
    return discretize_density(density, n_points=points, span_sigmas=span)


def _parse_distortion(obj, where: str) -> DistortionSpec:
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: must be a JSON object")
    kind = _require(obj, "kind", where)
    if kind == "power-law":
        return DistortionSpec(kind=kind, r=float(_require(obj, "r", where)))
    if kind == "custom-matrix":
        m = np.asarray(_require(obj, "matrix", where), dtype=float)
        return DistortionSpec(kind=kind, matrix=m)
    return DistortionSpec(kind=kind)


def load_problem(path: str) -> RdProblem:
    """Read a problem document; malformed content raises ValueError."""
    doc = _read_json(path)
    x_grid, p = _parse_side(_require(doc, "source", path), f"{path}: source")
    y_grid, q = _parse_side(_require(doc, "reproduction", path), f"{path}: reproduction")
    spec = _parse_distortion(_require(doc, "distortion", path), f"{path}: distortion")
    return RdProblem.from_spec(x_grid=x_grid, p=p, y_grid=y_grid, q=q, spec=spec)


def load_moments(path: str) -> Optional[MomentSummary]:
    """Moment summary from a problem document, or None when absent."""
    doc = _read_json(path)
    obj = doc.get("moments")
    if obj is None:
        return None
    where = f"{path}: moments"
    if not isinstance(obj, dict):
        raise ValueError(f"{where}: must be a JSON object")
    theta = obj.get("theta")
    return MomentSummary(
        sigma2=float(_require(obj, "sigma2", where)),
        rho4=float(_require(obj, "rho4", where)),
        diff_entropy=float(_require(obj, "diff_entropy", where)),
        a=float(_require(obj, "a", where)),
        theta=None if theta is None else float(theta),
    )


def load_channel(path: str) -> ChannelProblem:
    """Read a channel document; malformed content raises ValueError."""
    doc = _read_json(path)
    p = np.asarray(_require(doc, "input_pmf", path), dtype=float)
    w = np.asarray(_require(doc, "channel", path), dtype=float)
    if w.ndim != 2:
        raise ValueError(f"{path}: channel must be a matrix with one row per input symbol")
    return ChannelProblem.from_rows(p, w)
