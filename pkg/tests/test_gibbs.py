import math

import numpy as np
import pytest

from rdmmse.gibbs import (
    GibbsChannel,
    gibbs_channel,
    induced_marginal,
    log_partition,
    mmse,
    parametric_distortion,
    rate_at_parameter,
)
from rdmmse.problem import DistortionSpec, Grid, Pmf, RdProblem, d_infinity, d_zero


def _single_symbol_problem():
    x = Grid(np.array([0.0, 1.0]))
    return RdProblem.from_spec(
        x, Pmf(np.array([0.5, 0.5])), Grid(np.array([0.5])), Pmf(np.array([1.0])), DistortionSpec("squared-error")
    )


def test_log_partition_at_zero_tilt(bss):
    assert np.array_equal(log_partition(bss, 0.0), [0.0, 0.0])


def test_log_partition_bss_closed_form(bss):
    for s in (0.1, 1.0, 7.5):
        want = math.log((1.0 + math.exp(-s)) / 2.0)
        assert np.allclose(log_partition(bss, s), want, atol=1e-14)


def test_log_partition_survives_huge_tilt(bss):
    lz = log_partition(bss, 1e5)
    assert np.allclose(lz, math.log(0.5), atol=1e-12)
    assert np.all(np.isfinite(log_partition(bss, 1e6)))


def test_tilt_validation(bss):
    with pytest.raises(ValueError):
        log_partition(bss, -1.0)
    with pytest.raises(ValueError):
        mmse(bss, math.inf)


def test_channel_rows_at_zero_equal_q(gauss):
    ch = gibbs_channel(gauss, 0.0)
    assert np.allclose(ch.rows, np.broadcast_to(gauss.q.weights, ch.rows.shape), atol=1e-15)


def test_channel_bss_off_diagonal(bss):
    ch = gibbs_channel(bss, math.log(3.0))
    assert ch.rows[0, 1] == pytest.approx(0.25, abs=1e-12)
    assert ch.rows[1, 0] == pytest.approx(0.25, abs=1e-12)


def test_channel_rows_stochastic_at_large_tilt(fig1):
    ch = gibbs_channel(fig1.problem, 5e4)
    assert np.all(ch.rows >= 0)
    assert np.max(np.abs(ch.rows.sum(axis=1) - 1.0)) <= 1e-12


def test_channel_zero_weight_symbols_get_zero_mass():
    x = Grid(np.array([0.0, 1.0]))
    problem = RdProblem.from_spec(x, Pmf(np.array([0.5, 0.5])), x, Pmf(np.array([1.0, 0.0])), DistortionSpec("hamming"))
    ch = gibbs_channel(problem, 2.0)
    assert np.array_equal(ch.rows[:, 1], [0.0, 0.0])
    assert np.array_equal(ch.rows[:, 0], [1.0, 1.0])


def test_channel_invariants_reject_bad_rows():
    with pytest.raises(ValueError):
        GibbsChannel(rows=np.array([[0.6, 0.6]]), log_partition=np.array([0.0]))
    with pytest.raises(ValueError):
        GibbsChannel(rows=np.array([[1.2, -0.2]]), log_partition=np.array([0.0]))


def test_binary_reproduction_channel_closed_form(fig1):
    # with y in {-1, +1} and symmetric q the tilted row is e^(2sxy)/(2 cosh(2sx))
    problem = fig1.problem
    s = 0.7
    ch = gibbs_channel(problem, s)
    x = problem.x_grid.points
    want_plus = np.exp(2.0 * s * x) / (2.0 * np.cosh(2.0 * s * x))
    assert np.allclose(ch.rows[:, 1], want_plus, atol=1e-12)
    assert np.allclose(ch.rows[:, 0], 1.0 - want_plus, atol=1e-12)


def test_parametric_distortion_endpoints(bss):
    assert parametric_distortion(bss, 0.0) == pytest.approx(d_zero(bss), abs=1e-15)
    assert parametric_distortion(bss, math.log(3.0)) == pytest.approx(0.25, abs=1e-12)


def test_parametric_distortion_monotone_and_bounded(gauss):
    svals = np.geomspace(1e-3, 1e4, 30)
    dvals = [parametric_distortion(gauss, s) for s in svals]
    lo, hi = d_infinity(gauss), d_zero(gauss)
    assert all(b <= a + 1e-12 for a, b in zip(dvals, dvals[1:]))
    assert all(lo - 1e-12 <= v <= hi + 1e-12 for v in dvals)


def test_mmse_bss_closed_form(bss):
    s = math.log(3.0)
    assert mmse(bss, s) == pytest.approx(3.0 / 16.0, abs=1e-12)


def test_mmse_single_symbol_is_zero():
    problem = _single_symbol_problem()
    for s in (0.0, 1.0, 1e5):
        assert mmse(problem, s) == 0.0
        assert parametric_distortion(problem, s) == pytest.approx(d_zero(problem), abs=1e-15)


def test_mmse_nonnegative_at_extreme_tilt(fig1):
    for s in (1e4, 1e5, 1e6):
        assert mmse(fig1.problem, s) >= 0.0


def test_mmse_matches_tanh_identity(fig1):
    # same conditional variance through the hyperbolic form 4[sx2 - E X^2 tanh^2(2sX)]
    problem = fig1.problem
    x = problem.x_grid.points
    p = problem.p.weights
    for s in (0.05, 0.4, 1.3):
        direct = mmse(problem, s)
        hyp = 4.0 * float(p @ (x**2 * (1.0 - np.tanh(2.0 * s * x) ** 2)))
        assert abs(direct - hyp) <= 1e-10


def test_mmse_is_negated_distortion_derivative(bss, gauss):
    for problem in (bss, gauss):
        for s in np.geomspace(0.01, 10.0, 12):
            h = 1e-4 * max(s, 1.0)
            slope = (parametric_distortion(problem, s + h) - parametric_distortion(problem, s - h)) / (2.0 * h)
            m = mmse(problem, s)
            assert abs(slope + m) <= 1e-4 * max(m, 1e-12)


def test_induced_marginal_symmetric_case(bss):
    for s in (0.0, 1.0, 20.0):
        ind = induced_marginal(bss, s)
        assert np.allclose(ind.weights, [0.5, 0.5], atol=1e-14)


def test_induced_marginal_drifts_from_q(gauss):
    # fixed q is generally not the induced law away from the optimum
    ind = induced_marginal(gauss, 5.0)
    assert np.max(np.abs(ind.weights - gauss.q.weights)) > 1e-4


def test_rate_at_parameter(bss):
    assert rate_at_parameter(bss, 0.0) == 0.0
    want = math.log(2.0) - (0.25 * math.log(4.0) + 0.75 * math.log(4.0 / 3.0))
    assert rate_at_parameter(bss, math.log(3.0)) == pytest.approx(want, abs=1e-12)
    for s in (0.1, 2.0, 1e5):
        assert rate_at_parameter(bss, s) >= 0.0
