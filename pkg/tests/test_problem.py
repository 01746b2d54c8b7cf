import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rdmmse.problem import (
    DistortionSpec,
    GaussianDensity,
    Grid,
    LaplacianDensity,
    Pmf,
    RdProblem,
    UniformDensity,
    build_distortion_matrix,
    d_infinity,
    d_zero,
    discretize_density,
)


def test_grid_requires_strictly_increasing_finite_points():
    Grid(np.array([0.0, 1.0, 2.5]))
    Grid(np.array([3.0]))
    with pytest.raises(ValueError):
        Grid(np.array([0.0, 0.0, 1.0]))
    with pytest.raises(ValueError):
        Grid(np.array([1.0, 0.0]))
    with pytest.raises(ValueError):
        Grid(np.array([0.0, np.inf]))
    with pytest.raises(ValueError):
        Grid(np.array([]))


def test_grid_spacing_detects_uniformity():
    assert Grid(np.array([0.0, 0.5, 1.0])).spacing == 0.5
    assert Grid(np.array([0.0, 0.5, 2.0])).spacing is None
    assert Grid(np.array([7.0])).spacing is None


def test_grid_is_immutable():
    g = Grid(np.array([0.0, 1.0]))
    with pytest.raises((ValueError, RuntimeError)):
        g.points[0] = 5.0


def test_pmf_validation():
    Pmf(np.array([0.25, 0.75]))
    Pmf(np.array([1.0]))
    with pytest.raises(ValueError):
        Pmf(np.array([0.6, 0.6]))
    with pytest.raises(ValueError):
        Pmf(np.array([-0.1, 1.1]))
    with pytest.raises(ValueError):
        Pmf(np.array([0.5, 0.5 + 1e-9]))
    # within the stated tolerance is fine
    Pmf(np.array([0.5, 0.5 + 1e-13]))


def test_distortion_spec_validation():
    DistortionSpec(kind="hamming")
    DistortionSpec(kind="power-law", r=1.5)
    with pytest.raises(ValueError):
        DistortionSpec(kind="power-law", r=0.0)
    with pytest.raises(ValueError):
        DistortionSpec(kind="hamming", r=2.0)
    with pytest.raises(ValueError):
        DistortionSpec(kind="custom-matrix")
    with pytest.raises(ValueError):
        DistortionSpec(kind="custom-matrix", matrix=np.array([[1.0, -1.0]]))
    with pytest.raises(ValueError):
        DistortionSpec(kind="nearest-neighbor")


def test_build_matrix_hamming():
    d = build_distortion_matrix(Grid(np.array([0.0, 1.0])), Grid(np.array([0.0, 1.0])), DistortionSpec("hamming"))
    assert np.array_equal(d, [[0.0, 1.0], [1.0, 0.0]])


def test_build_matrix_squared_error():
    d = build_distortion_matrix(Grid(np.array([0.0])), Grid(np.array([-1.0, 1.0])), DistortionSpec("squared-error"))
    assert np.array_equal(d, [[1.0, 1.0]])


def test_build_matrix_power_law():
    d = build_distortion_matrix(
        Grid(np.array([0.5])), Grid(np.array([0.0, 1.0])), DistortionSpec("power-law", r=1.0)
    )
    assert np.allclose(d, [[0.5, 0.5]])


def test_build_matrix_custom_shape_mismatch():
    spec = DistortionSpec("custom-matrix", matrix=np.zeros((2, 3)))
    with pytest.raises(ValueError):
        build_distortion_matrix(Grid(np.array([0.0, 1.0])), Grid(np.array([0.0, 1.0])), spec)


def test_problem_dimension_checks():
    x = Grid(np.array([0.0, 1.0]))
    half = Pmf(np.array([0.5, 0.5]))
    with pytest.raises(ValueError):
        RdProblem(x, half, x, half, np.zeros((2, 3)))
    with pytest.raises(ValueError):
        RdProblem(x, half, x, Pmf(np.array([1.0])), np.zeros((2, 2)))
    with pytest.raises(ValueError):
        RdProblem(x, half, x, half, np.array([[0.0, 1.0], [1.0, -0.5]]))


def test_extremes_on_bss(bss):
    assert d_zero(bss) == pytest.approx(0.5, abs=1e-15)
    assert d_infinity(bss) == 0.0


def test_d_infinity_point_mass():
    x = Grid(np.array([0.0]))
    y = Grid(np.array([-1.0, 1.0]))
    problem = RdProblem.from_spec(x, Pmf(np.array([1.0])), y, Pmf(np.array([0.5, 0.5])), DistortionSpec("squared-error"))
    assert d_infinity(problem) == 1.0


def test_d_infinity_ignores_reproduction_weights():
    # the per-source minimum ranges over every code, including zero-weight ones
    x = Grid(np.array([0.0, 1.0]))
    q = Pmf(np.array([1.0, 0.0]))
    problem = RdProblem.from_spec(x, Pmf(np.array([0.5, 0.5])), x, q, DistortionSpec("hamming"))
    assert d_infinity(problem) == 0.0
    assert d_zero(problem) == 0.5


@settings(max_examples=40, deadline=None, derandomize=True)
@given(st.integers(min_value=0, max_value=10**6), st.integers(min_value=2, max_value=4), st.integers(min_value=2, max_value=4))
def test_extremes_ordered_on_random_problems(seed, nx, ny):
    rng = np.random.default_rng(seed)
    p = rng.dirichlet(np.ones(nx))
    q = rng.dirichlet(np.ones(ny))
    d = rng.uniform(0.0, 3.0, size=(nx, ny))
    problem = RdProblem(Grid(np.arange(float(nx))), Pmf(p), Grid(np.arange(float(ny))), Pmf(q), d)
    lo, hi = d_infinity(problem), d_zero(problem)
    assert 0.0 <= lo <= hi + 1e-15


def test_d_zero_invariant_under_reordering():
    rng = np.random.default_rng(7)
    p = rng.dirichlet(np.ones(3))
    q = rng.dirichlet(np.ones(3))
    d = rng.uniform(0.0, 2.0, size=(3, 3))
    base = RdProblem(Grid(np.arange(3.0)), Pmf(p), Grid(np.arange(3.0)), Pmf(q), d)
    perm = np.array([2, 0, 1])
    # relabel the reproduction symbols and permute the matrix columns to match
    flipped = RdProblem(Grid(np.arange(3.0)), Pmf(p), Grid(np.arange(3.0)), Pmf(q[perm]), d[:, perm])
    assert d_zero(flipped) == pytest.approx(d_zero(base), abs=1e-15)
    assert d_infinity(flipped) == pytest.approx(d_infinity(base), abs=1e-15)


def test_discretize_uniform_three_points():
    g, w = discretize_density(UniformDensity(1.0), n_points=3)
    assert np.array_equal(g.points, [-1.0, 0.0, 1.0])
    assert np.allclose(w.weights, [1.0 / 3.0] * 3, atol=1e-15)


def test_discretize_gaussian_symmetry():
    g, w = discretize_density(GaussianDensity(0.0, 1.0), n_points=1001, span_sigmas=8.0)
    assert abs(float(w.weights.sum()) - 1.0) <= 1e-12
    assert np.max(np.abs(w.weights - w.weights[::-1])) <= 1e-15
    assert g.points[500] == 0.0


def test_discretize_laplacian_second_moment():
    g, w = discretize_density(LaplacianDensity(1.0), n_points=2001, span_sigmas=8.0)
    m2 = float(w.weights @ g.points**2)
    # span-8 truncation leaves ~1.9e-3 of the second moment in the tails
    assert abs(m2 - 2.0) <= 2e-3
    g, w = discretize_density(LaplacianDensity(1.0), n_points=4001, span_sigmas=12.0)
    assert abs(float(w.weights @ g.points**2) - 2.0) <= 1e-4


def test_discretize_rejects_bad_settings():
    with pytest.raises(ValueError):
        discretize_density(GaussianDensity(0.0, 1.0), n_points=1000)
    with pytest.raises(ValueError):
        discretize_density(GaussianDensity(0.0, 1.0), n_points=1)
    with pytest.raises(ValueError):
        discretize_density(GaussianDensity(0.0, 1.0), n_points=101, span_sigmas=0.0)
    with pytest.raises(ValueError):
        GaussianDensity(0.0, -1.0)
    with pytest.raises(ValueError):
        LaplacianDensity(0.0)
    with pytest.raises(ValueError):
        UniformDensity(-2.0)


def test_density_scales():
    assert GaussianDensity(0.0, 4.0).std == 2.0
    assert LaplacianDensity(2.0).std == pytest.approx(math.sqrt(2.0) / 2.0)
    assert UniformDensity(3.0).std == pytest.approx(3.0 / math.sqrt(3.0))
