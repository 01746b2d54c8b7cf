import math

import numpy as np
import pytest

from rdmmse.curve import (
    Curve,
    CurvePoint,
    SolveError,
    distortion_by_integral,
    distortion_by_tail_integral,
    legendre_rate,
    rate_at_d_infinity,
    rate_by_integral,
    rate_by_tail_integral,
    solve_s_for_distortion,
    trace_curve,
)
from rdmmse.gibbs import mmse, parametric_distortion
from rdmmse.problem import DistortionSpec, Grid, Pmf, RdProblem, d_zero
from rdmmse.quadrature import QuadratureConfig

LN3 = math.log(3.0)


def _bss_reference_rate(D: float) -> float:
    return math.log(2.0) - (-D * math.log(D) - (1.0 - D) * math.log(1.0 - D))


def _unreachable_target_problem():
    # one reproduction symbol carries no weight, so no tilt reaches below 0.5
    x = Grid(np.array([0.0, 1.0]))
    return RdProblem.from_spec(x, Pmf(np.array([0.5, 0.5])), x, Pmf(np.array([1.0, 0.0])), DistortionSpec("hamming"))


def test_solve_recovers_bss_tilt(bss):
    assert solve_s_for_distortion(bss, 0.25) == pytest.approx(LN3, abs=1e-8)


def test_solve_small_tilt_linearization(bss):
    eps = 1e-6
    s = solve_s_for_distortion(bss, 0.5 - eps)
    assert s == pytest.approx(4.0 * eps, rel=1e-2)


def test_solve_rejects_out_of_range_targets(bss):
    with pytest.raises(ValueError):
        solve_s_for_distortion(bss, 0.0)
    with pytest.raises(ValueError):
        solve_s_for_distortion(bss, 0.5)


def test_solve_unreachable_target_exhausts_bracket():
    with pytest.raises(SolveError, match="indistinguishable"):
        solve_s_for_distortion(_unreachable_target_problem(), 0.25)


def test_legendre_rate_bss(bss):
    rate, s_star = legendre_rate(bss, 0.25)
    assert rate == pytest.approx(_bss_reference_rate(0.25), abs=1e-9)
    assert s_star == pytest.approx(LN3, abs=1e-8)


def test_legendre_rate_zero_rate_corner(bss):
    assert legendre_rate(bss, 0.5) == (0.0, 0.0)
    with pytest.warns(UserWarning, match="clamping"):
        assert legendre_rate(bss, 0.7) == (0.0, 0.0)


def test_legendre_rate_below_infimum_rejected(bss):
    with pytest.raises(ValueError, match="below D-infinity"):
        legendre_rate(bss, -0.1)
    with pytest.raises(ValueError, match="below D-infinity"):
        legendre_rate(bss, 0.0)


def test_legendre_rate_nonnegative_and_zero_only_past_corner(bss):
    for D in (0.05, 0.2, 0.45):
        rate, _ = legendre_rate(bss, D)
        assert rate > 0.0
    assert legendre_rate(bss, 0.499999999)[0] >= 0.0


def test_integral_forms_at_zero(bss):
    assert rate_by_integral(bss, 0.0) == 0.0
    assert distortion_by_integral(bss, 0.0) == pytest.approx(d_zero(bss), abs=1e-15)


def test_integral_forms_bss(bss):
    assert rate_by_integral(bss, LN3) == pytest.approx(_bss_reference_rate(0.25), abs=1e-8)
    assert distortion_by_integral(bss, LN3) == pytest.approx(0.25, abs=1e-8)


def test_single_symbol_distortion_is_flat():
    x = Grid(np.array([0.0, 1.0]))
    problem = RdProblem.from_spec(
        x, Pmf(np.array([0.5, 0.5])), Grid(np.array([0.5])), Pmf(np.array([1.0])), DistortionSpec("squared-error")
    )
    for s in (0.5, 3.0, 50.0):
        assert distortion_by_integral(problem, s) == pytest.approx(d_zero(problem), abs=1e-12)
        assert rate_by_integral(problem, s) == pytest.approx(0.0, abs=1e-12)


def test_tail_forms_bss(bss):
    assert rate_by_tail_integral(bss, LN3) == pytest.approx(_bss_reference_rate(0.25), abs=1e-6)
    assert distortion_by_tail_integral(bss, LN3) == pytest.approx(0.25, abs=1e-6)


def test_tail_forms_need_positive_tilt(bss):
    with pytest.raises(ValueError):
        rate_by_tail_integral(bss, 0.0)
    with pytest.raises(ValueError):
        distortion_by_tail_integral(bss, 0.0)


def test_tail_vanishes_at_large_tilt(bss):
    assert rate_by_tail_integral(bss, 60.0) == pytest.approx(rate_at_d_infinity(bss), abs=1e-9)


def test_rate_at_d_infinity_values(bss, fig1):
    assert rate_at_d_infinity(bss) == pytest.approx(math.log(2.0), abs=1e-14)
    # the grid carries mass exactly at x = 0, where both symbols tie and the
    # whole reproduction mass is an argmin; that row contributes no rate
    p_center = float(fig1.problem.p.weights[len(fig1.problem.x_grid) // 2])
    want = (1.0 - p_center) * math.log(2.0)
    assert rate_at_d_infinity(fig1.problem) == pytest.approx(want, abs=1e-12)
    x = Grid(np.array([0.0, 1.0]))
    one = RdProblem.from_spec(
        x, Pmf(np.array([0.5, 0.5])), Grid(np.array([0.5])), Pmf(np.array([1.0])), DistortionSpec("squared-error")
    )
    assert rate_at_d_infinity(one) == 0.0


def test_rate_at_d_infinity_aggregates_ties():
    x = Grid(np.array([0.0]))
    y = Grid(np.array([-1.0, 1.0]))
    problem = RdProblem.from_spec(x, Pmf(np.array([1.0])), y, Pmf(np.array([0.5, 0.5])), DistortionSpec("squared-error"))
    # both symbols are distortion-1 minimizers, so the whole mass counts
    assert rate_at_d_infinity(problem) == pytest.approx(0.0, abs=1e-14)


def test_forward_and_tail_integrals_meet(bss):
    for s in (0.5, 1.0, 2.0):
        assert abs(rate_by_integral(bss, s) - rate_by_tail_integral(bss, s)) <= 1e-5


def test_trace_curve_bss_closed_form(bss):
    curve = trace_curve(bss, [0.0, LN3])
    assert curve.provenance == "legendre"
    first, second = curve.points
    assert (first.s, first.distortion, first.rate_nats, first.mmse) == pytest.approx((0.0, 0.5, 0.0, 0.25), abs=1e-12)
    assert second.distortion == pytest.approx(0.25, abs=1e-12)
    assert second.rate_nats == pytest.approx(_bss_reference_rate(0.25), abs=1e-9)
    assert second.mmse == pytest.approx(0.1875, abs=1e-12)


def test_trace_curve_methods_agree(bss):
    svals = list(np.linspace(0.0, 3.0, 7))
    by_method = {
        m: trace_curve(bss, svals, method=m)
        for m in ("legendre", "integral-from-zero", "integral-from-infinity")
    }
    for m, curve in by_method.items():
        ref = by_method["legendre"]
        for a, b in zip(curve.points, ref.points):
            assert abs(a.distortion - b.distortion) <= 1e-6, m
            assert abs(a.rate_nats - b.rate_nats) <= 1e-6, m


def test_trace_curve_input_validation(bss):
    with pytest.raises(ValueError):
        trace_curve(bss, [])
    with pytest.raises(ValueError):
        trace_curve(bss, [0.0, 0.0])
    with pytest.raises(ValueError):
        trace_curve(bss, [1.0, 0.5])
    with pytest.raises(ValueError):
        trace_curve(bss, [-1.0, 1.0])
    with pytest.raises(ValueError):
        trace_curve(bss, [0.0, 1.0], method="spline")


def test_trace_curve_is_convex(gauss):
    svals = list(np.geomspace(0.05, 20.0, 16))
    curve = trace_curve(gauss, svals)
    order = np.argsort(curve.distortions())
    D = curve.distortions()[order]
    R = curve.rates()[order]
    slopes = np.diff(R) / np.diff(D)
    assert np.all(slopes <= 0.0)
    assert np.all(np.diff(slopes) >= -1e-9)


def test_trace_curve_midpoint_slope_matches_tilt(gauss):
    svals = [1.0, 1.02]
    curve = trace_curve(gauss, svals)
    a, b = curve.points
    slope = (b.rate_nats - a.rate_nats) / (b.distortion - a.distortion)
    assert slope == pytest.approx(-1.01, rel=0.01)


def test_curve_type_rejects_disorder():
    good = (CurvePoint(0.0, 0.5, 0.0, 0.25), CurvePoint(1.0, 0.3, 0.1, 0.2))
    Curve(points=good, provenance="legendre")
    with pytest.raises(ValueError):
        Curve(points=good[::-1], provenance="legendre")
    with pytest.raises(ValueError):
        Curve(points=good, provenance="newton")
    rising = (CurvePoint(0.0, 0.3, 0.0, 0.25), CurvePoint(1.0, 0.5, 0.1, 0.2))
    with pytest.raises(ValueError):
        Curve(points=rising, provenance="legendre")


def test_quadrature_override_is_honored(bss):
    loose = QuadratureConfig(abs_tol=1e-6, rel_tol=1e-5, max_subdivisions=12)
    assert rate_by_integral(bss, LN3, loose) == pytest.approx(_bss_reference_rate(0.25), abs=1e-4)


def test_forward_integrals_survive_a_huge_upper_limit(bss):
    # everything interesting happens below s ~ 10; the walk up to 1e4 must
    # not step over it
    assert rate_by_integral(bss, 1e4) == pytest.approx(math.log(2.0), abs=1e-8)
    assert distortion_by_integral(bss, 1e4) == pytest.approx(0.0, abs=1e-8)
    assert distortion_by_integral(bss, 1e4) >= 0.0
