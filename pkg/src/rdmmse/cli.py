"""Command-line front end.

Four subcommands: ``curve`` traces a rate-distortion curve to CSV,
``bounds`` tabulates the closed-form bounds next to the computed rate,
``capacity`` runs the channel-side integral, and ``verify`` executes the
built-in consistency suite.  Exit codes: 0 success, 1 verification
failure, 2 input error, 3 numerical error.

CSV values are rendered with 12 significant digits so identical inputs
give byte-identical output.  Cells whose formula does not apply at a
grid point are left empty.  With ``--plot`` each report also renders a
PNG figure next to the CSV file.

The environment variable RDMMSE_MMSE_SCALE (default 1.0) multiplies the
estimation-error values used inside verify's derivative check.  It
exists so tests can prove the check actually bites; any value other
than 1.0 must make verify fail.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import warnings
from typing import Optional

import numpy as np

from .bounds import high_distortion_lower, high_distortion_upper
from .capacity import (
    ChannelProblem,
    capacity_by_integral,
    capacity_legendre,
    capacity_mmse,
    direct_mutual_information,
    posterior_support_defect,
)
from .curve import legendre_rate, rate_by_integral, distortion_by_integral, trace_curve
from .fileio import load_channel, load_moments, load_problem
from .gibbs import mmse, parametric_distortion, rate_at_parameter
from .oracle import bruteforce_rq, mot_rate_function
from .presets import PRESET_NAMES, load_preset
from .problem import d_infinity, d_zero
from .quadrature import QuadratureConfig, adaptive_quadrature

__all__ = ["main"]

_METHODS = {
    "legendre": "legendre",
    "integral": "integral-from-zero",
    "tail": "integral-from-infinity",
}


def _fmt(value) -> str:
    return format(float(value) + 0.0, ".12g")  # +0.0 folds -0.0 into 0


def _cell(value) -> str:
    return "" if value is None else _fmt(value)


def _parse_grid(text: str, flag: str) -> list[float]:
    """lo:hi:n with an optional log/lin suffix on n (default lin)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"{flag} must look like lo:hi:n, lo:hi:nlog, or lo:hi:nlin")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise ValueError(f"{flag}: endpoints must be numbers, got {text!r}") from None
    tail = parts[2]
    kind = "lin"
    if tail.endswith(("log", "lin")):
        kind, tail = tail[-3:], tail[:-3]
    if not tail.isdigit():
        raise ValueError(f"{flag}: point count must be a nonnegative integer, got {parts[2]!r}")
    n = int(tail)
    if n < 1:
        raise ValueError(f"{flag}: grid must contain at least one point")
    if hi < lo:
        raise ValueError(f"{flag}: upper endpoint is below the lower one")
    if kind == "log":
        if lo <= 0:
            raise ValueError(f"{flag}: log spacing needs a positive lower endpoint")
        return [float(v) for v in np.geomspace(lo, hi, n)]
    return [float(v) for v in np.linspace(lo, hi, n)]


def _build_grid(arg: Optional[str], preset_grid, fallback, flag: str) -> list[float]:
    if arg is not None:
        return _parse_grid(arg, flag)
    lo, hi, n, *rest = preset_grid if preset_grid is not None else fallback
    kind = rest[0] if rest else "lin"
    return _parse_grid(f"{lo!r}:{hi!r}:{n}{kind}", flag)


def _quad_config(tol: Optional[float]) -> QuadratureConfig:
    if tol is None:
        return QuadratureConfig()
    if tol <= 0:
        raise ValueError("--tol must be positive")
    return QuadratureConfig(abs_tol=tol * 1e-3, rel_tol=tol)


def _write_text(out: Optional[str], text: str) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _plot_path(args) -> Optional[str]:
    if not args.plot:
        return None
    if args.out in (None, "-"):
        raise ValueError("--plot needs --out so the figure has somewhere to live")
    root, _ = os.path.splitext(args.out)
    return root + ".png"


def _resolve_problem(args):
    """Problem plus the preset it came from, if any."""
    if (args.preset is None) == (args.infile is None):
        raise ValueError("exactly one of --preset and --in is required")
    if args.preset is not None:
        preset = load_preset(args.preset)
        return preset.problem, preset
    return load_problem(args.infile), None


# ---------------------------------------------------------------- curve

def _cmd_curve(args) -> int:
    problem, preset = _resolve_problem(args)
    svals = _build_grid(args.s_grid, preset.s_grid if preset else None, (0.01, 10.0, 25, "log"), "--s-grid")
    curve = trace_curve(problem, svals, method=_METHODS[args.method], config=_quad_config(args.tol))
    lines = ["s,D,R_nats,mmse"]
    for pt in curve.points:
        lines.append(",".join(_fmt(v) for v in (pt.s, pt.distortion, pt.rate_nats, pt.mmse)))
    _write_text(args.out, "\n".join(lines) + "\n")
    png = _plot_path(args)
    if png is not None:
        from .plotting import save_curve_plot

        save_curve_plot(
            png,
            [pt.s for pt in curve.points],
            [pt.distortion for pt in curve.points],
            [pt.rate_nats for pt in curve.points],
            [pt.mmse for pt in curve.points],
        )
    return 0


# --------------------------------------------------------------- bounds

def _try(fn, *fargs) -> Optional[float]:
    try:
        return fn(*fargs)
    except ValueError:
        return None


def _numeric_rate(problem, D: float) -> Optional[float]:
    # The clamp warning above the zero-rate point is expected at the top of
    # a bounds grid; keep it off stderr so the report stays quiet.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            return legendre_rate(problem, D)[0]
        except ValueError:
            return None


def _cmd_bounds(args) -> int:
    if (args.preset is None) == (args.infile is None):
        raise ValueError("exactly one of --preset and --in is required")
    if args.preset is not None:
        preset = load_preset(args.preset)
        problem, moments, preset_grid = preset.problem, preset.moments, preset.d_grid
    else:
        with open(args.infile, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
        problem = load_problem(args.infile) if "source" in doc else None
        moments = load_moments(args.infile)
        preset_grid = None
    if moments is None:
        raise ValueError("bounds need a moment summary: use a preset that carries one or add a 'moments' section")
    dvals = _build_grid(args.d_grid, preset_grid, None, "--d-grid") if (args.d_grid or preset_grid) else None
    if dvals is None:
        raise ValueError("no distortion grid: pass --d-grid lo:hi:n")

    lines = ["D,R_L,R_U,R_SLB,R_numeric"]
    rows = []
    for D in dvals:
        rl = _try(high_distortion_lower, moments, D)
        ru = _try(high_distortion_upper, moments, D)
        raw = moments.diff_entropy - 0.5 * math.log(2.0 * math.pi * math.e * D)
        slb = raw if raw > 0.0 else None
        rn = _numeric_rate(problem, D) if problem is not None else None
        rows.append((D, rl, ru, slb, rn))
        lines.append(_fmt(D) + "," + ",".join(_cell(v) for v in (rl, ru, slb, rn)))
    _write_text(args.out, "\n".join(lines) + "\n")
    png = _plot_path(args)
    if png is not None:
        from .plotting import save_bounds_plot

        nan = float("nan")
        cols = [[nan if v is None else v for v in col] for col in zip(*rows)]
        save_bounds_plot(png, cols[0], cols[1], cols[2], cols[3], cols[4])
    return 0


# ------------------------------------------------------------- capacity

def _cmd_capacity(args) -> int:
    if args.infile is None:
        raise ValueError("capacity needs --in pointing at a channel file")
    cp = load_channel(args.infile)
    svals = _build_grid(args.s_grid, None, (0.0, 1.0, 11, "lin"), "--s-grid")
    config = _quad_config(args.tol)

    total, prev = 0.0, 0.0
    lines = ["s,mmse,partial_integral"]
    mvals, pvals = [], []
    for s in svals:
        m = capacity_mmse(cp, s)
        if s > prev:
            seg, _ = adaptive_quadrature(
                lambda t: t * capacity_mmse(cp, t), prev, s, config, what="capacity integral"
            )
            total += seg
        lines.append(",".join(_fmt(v) for v in (s, m, total)))
        mvals.append(m)
        pvals.append(total)
        prev = s

    c_val = capacity_legendre(cp, 1.0)
    i_val = direct_mutual_information(cp)
    lines.append(f"C_p,{_fmt(c_val)},I_XY,{_fmt(i_val)}")
    _write_text(args.out, "\n".join(lines) + "\n")

    defect = posterior_support_defect(cp)
    if defect > 1e-9:
        print(
            "warning: channel has structural zeros; the raw integral column "
            f"undershoots C_p by {_fmt(defect)} nats",
            file=sys.stderr,
        )
    png = _plot_path(args)
    if png is not None:
        from .plotting import save_capacity_plot

        save_capacity_plot(png, svals, mvals, pvals, c_val)
    return 0


# --------------------------------------------------------------- verify

def _mmse_hook_scale() -> float:
    return float(os.environ.get("RDMMSE_MMSE_SCALE", "1.0"))


def _check_bss_closed_form():
    problem = load_preset("bss").problem
    rate, s_star = legendre_rate(problem, 0.25)
    want = math.log(2.0) - (0.25 * math.log(4.0) + 0.75 * math.log(4.0 / 3.0))
    err = max(abs(rate - want), abs(s_star - math.log(3.0)))
    return err <= 1e-6, f"closed-form error {err:.3e} (tolerance 1e-06)"


def _check_bss_derivative():
    problem = load_preset("bss").problem
    scale = _mmse_hook_scale()
    h = 1e-5
    worst = 0.0
    for s in (0.25, 1.0, 3.0):
        slope = (parametric_distortion(problem, s + h) - parametric_distortion(problem, s - h)) / (2.0 * h)
        m = mmse(problem, s) * scale
        worst = max(worst, abs(slope + m) / max(abs(m), 1e-12))
    return worst <= 1e-4, f"distortion-derivative mismatch {worst:.3e} (tolerance 1e-04)"


def _check_bss_representation():
    problem = load_preset("bss").problem
    s = math.log(3.0)
    rate, _ = legendre_rate(problem, 0.25)
    err = max(
        abs(rate_by_integral(problem, s) - rate),
        abs(distortion_by_integral(problem, s) - 0.25),
    )
    return err <= 1e-6, f"integral-vs-Legendre error {err:.3e} (tolerance 1e-06)"


def _check_bss_oracle():
    problem = load_preset("bss").problem
    rate, _ = legendre_rate(problem, 0.25)
    bf = bruteforce_rq(problem, 0.25, grid_step=0.02)
    mot = mot_rate_function(problem, 0.25, grid_step=0.01)
    err = max(abs(bf.value_nats - rate), abs(mot.value_nats - rate))
    return err <= 2e-3, f"exhaustive-search gap {err:.3e} (tolerance 2e-03)"


def _check_gauss_closed_form():
    problem = load_preset("gauss").problem
    rate, _ = legendre_rate(problem, 0.25)
    err = abs(rate - 0.5 * math.log(1.0 / 0.25))
    return err <= 5e-3, f"Gaussian closed-form error {err:.3e} (tolerance 5e-03)"


def _check_gauss_slope():
    problem = load_preset("gauss").problem
    _, s_star = legendre_rate(problem, 0.25)
    err = abs(s_star - 2.0)
    return err <= 1e-2, f"minimizing-slope error {err:.3e} (tolerance 1e-02)"


def _check_capacity_bsc():
    cp = ChannelProblem.from_rows([0.5, 0.5], [[0.9, 0.1], [0.1, 0.9]])
    err = abs(capacity_by_integral(cp) - direct_mutual_information(cp))
    return err <= 1e-6, f"BSC integral-vs-direct error {err:.3e} (tolerance 1e-06)"


def _check_capacity_zchannel():
    cp = ChannelProblem.from_rows([0.5, 0.5], [[1.0, 0.0], [0.3, 0.7]])
    err = abs(capacity_by_integral(cp) - direct_mutual_information(cp))
    return err <= 1e-6, f"Z-channel integral-vs-direct error {err:.3e} (tolerance 1e-06)"


def _check_sandwich_order():
    preset = load_preset("fig1")
    problem, m = preset.problem, preset.moments
    slack = 1e-9
    ok = True
    for D in np.linspace(1.7, 1.95, 9):
        rn = legendre_rate(problem, float(D))[0]
        lo = high_distortion_lower(m, float(D))
        hi = high_distortion_upper(m, float(D))
        ok = ok and (lo - slack <= rn <= hi + slack)
    return ok, "lower <= computed <= upper on the high-distortion span"


def _check_sandwich_point():
    # Frozen from the closed forms at D=1.8: (0.2)^2/8 - 3*(0.2)^4/64 exactly,
    # and (2/3)*sin^2((1/3)*asin(0.15*sqrt(3))) evaluated in double precision.
    m = load_preset("fig1").moments
    err_l = abs(high_distortion_lower(m, 1.8) - 0.004925)
    err_u = abs(high_distortion_upper(m, 1.8) - 0.0051036575345097)
    ok = err_l <= 1e-12 and err_u <= 1e-12
    return ok, f"bounds at D=1.8 off by {err_l:.2e} and {err_u:.2e}"


def _check_robust_large():
    ok = True
    for name in PRESET_NAMES:
        problem = load_preset(name).problem
        s = 1e5
        D = parametric_distortion(problem, s)
        vals = (D, mmse(problem, s), rate_at_parameter(problem, s))
        in_range = d_infinity(problem) - 1e-9 <= D <= d_zero(problem) + 1e-9
        ok = ok and in_range and all(math.isfinite(v) and v >= 0.0 for v in vals)
    return ok, "all presets finite and ordered at tilt 1e5"


def _check_robust_small():
    ok = True
    for name in PRESET_NAMES:
        problem = load_preset(name).problem
        D0 = d_zero(problem)
        D = parametric_distortion(problem, 1e-9)
        ok = ok and abs(D - D0) <= 1e-6 * max(D0, 1.0) and rate_at_parameter(problem, 1e-9) <= 1e-6
    return ok, "all presets collapse to the zero-rate corner at tilt 1e-9"


_VERIFY_CASES = {
    "bss": (
        ("bss closed form", _check_bss_closed_form),
        ("bss derivative identity", _check_bss_derivative),
        ("bss representation consistency", _check_bss_representation),
        ("bss oracle equality", _check_bss_oracle),
    ),
    "gauss": (
        ("gauss closed form", _check_gauss_closed_form),
        ("gauss minimizing slope", _check_gauss_slope),
    ),
    "capacity": (
        ("capacity bsc", _check_capacity_bsc),
        ("capacity z-channel", _check_capacity_zchannel),
    ),
    "sandwich": (
        ("sandwich ordering", _check_sandwich_order),
        ("sandwich frozen point", _check_sandwich_point),
    ),
    "robustness": (
        ("robustness large tilt", _check_robust_large),
        ("robustness small tilt", _check_robust_small),
    ),
}


def _cmd_verify(args) -> int:
    if args.case is not None and args.case not in _VERIFY_CASES:
        raise ValueError(f"unknown case {args.case!r}; available: {', '.join(_VERIFY_CASES)}")
    cases = (args.case,) if args.case is not None else tuple(_VERIFY_CASES)
    failures = 0
    for case in cases:
        for name, check in _VERIFY_CASES[case]:
            ok, detail = check()
            failures += 0 if ok else 1
            print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return 0 if failures == 0 else 1


# ----------------------------------------------------------------- main

def _add_common(sub, *, s_grid=False, d_grid=False, preset=False, infile=True, method=False):
    if preset:
        sub.add_argument("--preset", help=f"built-in problem: {', '.join(PRESET_NAMES)}")
    if infile:
        sub.add_argument("--in", dest="infile", help="JSON input file")
    if s_grid:
        sub.add_argument("--s-grid", dest="s_grid", help="tilt grid, lo:hi:n with optional log/lin suffix")
    if d_grid:
        sub.add_argument("--d-grid", dest="d_grid", help="distortion grid, lo:hi:n")
    if method:
        sub.add_argument("--method", choices=sorted(_METHODS), default="legendre")
    sub.add_argument("--tol", type=float, help="relative quadrature tolerance (absolute runs 1000x tighter)")
    sub.add_argument("--out", help="output CSV path; default stdout")
    sub.add_argument("--plot", action="store_true", help="also render a PNG next to the CSV (needs --out)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rdmmse",
        description="Rate-distortion curves under a fixed reproduction law, their bounds, and the capacity analogue.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pc = sub.add_parser("curve", help="trace a rate-distortion curve to CSV")
    _add_common(pc, s_grid=True, preset=True, method=True)
    pc.set_defaults(func=_cmd_curve)

    pb = sub.add_parser("bounds", help="tabulate closed-form bounds against the computed rate")
    _add_common(pb, d_grid=True, preset=True)
    pb.set_defaults(func=_cmd_bounds)

    pk = sub.add_parser("capacity", help="channel-side integral report")
    _add_common(pk, s_grid=True)
    pk.set_defaults(func=_cmd_capacity)

    pv = sub.add_parser("verify", help="run the built-in consistency suite")
    pv.add_argument("--case", help=f"run one case: {', '.join(_VERIFY_CASES)}")
    pv.set_defaults(func=_cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors, 0 on --help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except RuntimeError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
