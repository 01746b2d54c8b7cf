"""Slow, independent certifiers for the fast conjugate-transform path.

Exhaustive channel searches on two- and three-letter alphabets, the
classical alternating-minimization solver for the optimized-reproduction
curve, and a simplex scan over reproduction laws.  These are deliberately
restricted to tiny problems with documented grid error: they exist to
certify the fast code, not to scale.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .curve import legendre_rate
from .info import kl_divergence, mutual_information
from .problem import Grid, Pmf, RdProblem, _freeze

__all__ = [
    "OracleResult",
    "bruteforce_rq",
    "mot_rate_function",
    "blahut_arimoto",
    "q_search_infimum",
]

_FEAS_TOL = 1e-12


@dataclass(frozen=True)
class OracleResult:
    """Minimum found by a search, its witness, and the lattice resolution.

    The witness is a channel matrix for the channel searches and a
    reproduction weight vector for the marginal search.
    """

    value_nats: float
    argmin: np.ndarray = field(repr=False)
    resolution: float

    def __post_init__(self):
        v = float(self.value_nats)
        if v < -1e-9 or not math.isfinite(v):
            raise ValueError(f"oracle value must be finite and nonnegative, got {v!r}")
        object.__setattr__(self, "value_nats", max(v, 0.0))
        if not (self.resolution > 0):
            raise ValueError("search resolution must be positive")
        object.__setattr__(self, "argmin", _freeze(self.argmin))


def _check_alphabets(nx: int, ny: int) -> None:
    if nx > 3 or ny > 3:
        raise ValueError(
            f"alphabet too large for exhaustive search: {nx}x{ny}, maximum is 3x3"
        )


def _check_step(grid_step: float) -> float:
    grid_step = float(grid_step)
    if not (0.0 < grid_step <= 0.05):
        raise ValueError(f"grid step must lie in (0, 0.05], got {grid_step!r}")
    return grid_step


def _simplex_grid(dim: int, step: float) -> np.ndarray:
    """Lattice of probability vectors with coordinates at multiples of ~step."""
    n = max(1, round(1.0 / step))
    if dim == 1:
        return np.ones((1, 1))
    if dim == 2:
        k = np.arange(n + 1)
        return np.stack([k / n, (n - k) / n], axis=1)
    if dim == 3:
        rows = []
        for i in range(n + 1):
            j = np.arange(n - i + 1)
            blk = np.empty((j.size, 3))
            blk[:, 0] = i / n
            blk[:, 1] = j / n
            blk[:, 2] = (n - i - j) / n
            rows.append(blk)
        return np.concatenate(rows, axis=0)
    raise ValueError(f"simplex lattice only supports dimension <= 3, got {dim}")


def _stack_information(p: np.ndarray, W: np.ndarray, q: np.ndarray) -> np.ndarray:
    """I(X;Y) for a stack of channels whose induced marginal equals q."""
    keep = p > 0
    Wk = W[:, keep, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(Wk > 0, Wk * (np.log(Wk) - np.log(q)[None, None, :]), 0.0)
    return np.einsum("i,nij->n", p[keep], t)


def bruteforce_rq(problem: RdProblem, D: float, grid_step: float) -> OracleResult:
    """Exhaustive minimum of I(X;Y) over marginal-matched, distortion-feasible channels.

    One channel row is solved analytically from the reproduction-marginal
    equality, the remaining rows sweep a simplex lattice, and every lattice
    candidate additionally spawns mass-transfer variants that land exactly
    on the distortion budget.  Cost is the product of the free-row lattice
    sizes, so three-letter sources want a coarse step.
    """
    _check_alphabets(problem.nx, problem.ny)
    grid_step = _check_step(grid_step)
    D = float(D)
    p = problem.p.weights
    q = problem.q.weights
    d = problem.d
    nx, ny = problem.nx, problem.ny

    elim = int(np.argmax(p))
    if p[elim] <= 0:
        raise ValueError("source weights are all zero")
    free = [i for i in range(nx) if i != elim]
    lattice = _simplex_grid(ny, grid_step)

    best_val = math.inf
    best_w = None

    def consider(W: np.ndarray) -> None:
        nonlocal best_val, best_w
        if W.shape[0] == 0:
            return
        vals = _stack_information(p, W, q)
        i = int(np.argmin(vals))
        if vals[i] < best_val:
            best_val = float(vals[i])
            best_w = W[i].copy()

    def assemble(free_rows: list, We: np.ndarray) -> np.ndarray:
        n = We.shape[0]
        W = np.empty((n, nx, ny))
        for idx, rows in zip(free, free_rows):
            W[:, idx, :] = rows
        W[:, elim, :] = We
        return W

    def scan(free_rows: list) -> None:
        """Filter one batch of free-row choices and snap onto the budget."""
        used = sum(p[idx] * rows for idx, rows in zip(free, free_rows))
        We = (q[None, :] - used) / p[elim]
        ok = We.min(axis=1) >= -1e-9
        if not ok.any():
            return
        free_rows = [rows[ok] for rows in free_rows]
        We = np.maximum(We[ok], 0.0)
        Ed = p[elim] * (We @ d[elim])
        for idx, rows in zip(free, free_rows):
            Ed = Ed + p[idx] * (rows @ d[idx])
        consider(assemble(free_rows, We)[Ed <= D + _FEAS_TOL])
        # exact-budget variants: transfer mass between two columns of the
        # first free row, with the eliminated row absorbing the marginal shift
        f0 = free[0]
        ratio = p[f0] / p[elim]
        for j, k in combinations(range(ny), 2):
            c = p[f0] * ((d[f0, j] - d[f0, k]) - (d[elim, j] - d[elim, k]))
            if abs(c) < 1e-13:
                continue
            beta = (D - Ed) / c
            r0 = free_rows[0]
            ok = (
                (r0[:, j] + beta >= 0.0)
                & (r0[:, k] - beta >= 0.0)
                & (We[:, j] - beta * ratio >= 0.0)
                & (We[:, k] + beta * ratio >= 0.0)
            )
            if not ok.any():
                continue
            rows0 = r0[ok].copy()
            rows0[:, j] += beta[ok]
            rows0[:, k] -= beta[ok]
            We2 = We[ok].copy()
            We2[:, j] -= beta[ok] * ratio
            We2[:, k] += beta[ok] * ratio
            shifted = [rows0] + [rows[ok] for rows in free_rows[1:]]
            consider(assemble(shifted, We2))

    if nx == 1:
        scan([])
    elif nx == 2:
        scan([lattice])
    else:
        for w1 in lattice:
            scan([np.broadcast_to(w1, lattice.shape).copy(), lattice])

    # the independent coupling is feasible whenever the budget covers it
    if float(p @ (d @ q)) <= D + _FEAS_TOL:
        indep = np.broadcast_to(q, (nx, ny)).copy()
        if 0.0 < best_val:
            best_val = 0.0
            best_w = indep

    if best_w is None:
        raise ValueError(
            "infeasible: no channel meets the marginal and distortion "
            f"constraints at resolution {grid_step}"
        )
    return OracleResult(value_nats=best_val, argmin=best_w, resolution=grid_step)


def _profile_two(dsup: np.ndarray, qsup: np.ndarray, tau: float):
    """Exact min of KL(w || q) over two-point laws with mean distortion <= tau."""
    if float(qsup @ dsup) <= tau + _FEAS_TOL:
        return 0.0, qsup.copy()
    d0, d1 = float(dsup[0]), float(dsup[1])
    if d0 == d1:
        return None
    t_star = (tau - d1) / (d0 - d1)
    if d0 < d1:
        lo, hi = max(0.0, t_star), 1.0
    else:
        lo, hi = 0.0, min(1.0, t_star)
    if lo > hi:
        return None
    t = min(max(float(qsup[0]), lo), hi)
    w = np.array([t, 1.0 - t])
    return kl_divergence(w, qsup), w


def _profile_three(dsup: np.ndarray, qsup: np.ndarray, tau: float, step: float):
    """Min of KL(w || q) over three-point laws with mean distortion <= tau.

    When the reproduction law itself is infeasible the minimum sits on the
    exact-budget plane; that segment is sampled along each coordinate axis
    in turn, which keeps the resolution O(step^2) and covers degenerate
    distortion patterns.
    """
    if float(qsup @ dsup) <= tau + _FEAS_TOL:
        return 0.0, qsup.copy()
    n = max(1, round(1.0 / step))
    u = np.arange(n + 1) / n
    best = None
    # axis order: coordinate held on the lattice, coordinate solved, remainder
    for hold, solve, rest in ((0, 1, 2), (1, 0, 2), (2, 0, 1)):
        denom = dsup[solve] - dsup[rest]
        if abs(denom) < 1e-13:
            continue
        ws = (tau - dsup[rest] - u * (dsup[hold] - dsup[rest])) / denom
        wr = 1.0 - u - ws
        ok = (ws >= 0.0) & (wr >= 0.0)
        if not ok.any():
            continue
        w = np.empty((int(ok.sum()), 3))
        w[:, hold] = u[ok]
        w[:, solve] = ws[ok]
        w[:, rest] = wr[ok]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = np.where(w > 0, w * (np.log(w) - np.log(qsup)[None, :]), 0.0)
        vals = t.sum(axis=1)
        i = int(np.argmin(vals))
        if best is None or vals[i] < best[0]:
            best = (float(vals[i]), w[i].copy())
    return best


def _row_profile(dsup: np.ndarray, qsup: np.ndarray, tau: float, step: float):
    if dsup.size == 1:
        return (0.0, qsup.copy()) if dsup[0] <= tau + _FEAS_TOL else None
    if dsup.size == 2:
        return _profile_two(dsup, qsup, tau)
    return _profile_three(dsup, qsup, tau, step)


def _profile_table(dsup, qsup, taus, step):
    vals = np.full(taus.size, np.inf)
    for i, tau in enumerate(taus):
        r = _row_profile(dsup, qsup, float(tau), step)
        if r is not None:
            vals[i] = r[0]
    return vals


def mot_rate_function(problem: RdProblem, D: float, grid_step: float) -> OracleResult:
    """Minimum of I(X;Y') + KL(induced marginal || q) over feasible channels.

    The objective collapses to a weighted sum of per-row divergences from q,
    so the search allocates the distortion budget across source rows and
    solves each row against its share; the reported value is the objective
    recomputed directly at the reconstructed channel, so it is always
    achieved by a concrete feasible witness.
    """
    _check_alphabets(problem.nx, problem.ny)
    grid_step = _check_step(grid_step)
    D = float(D)
    p = problem.p.weights
    q = problem.q.weights

    active = p > 0
    if not active.all():
        # weightless source rows carry no budget and no divergence; solve the
        # reduced problem and hand them the reproduction law as witness rows
        sub = RdProblem(
            x_grid=Grid(np.arange(int(active.sum()), dtype=float)),
            p=Pmf(p[active] / p[active].sum()),
            y_grid=problem.y_grid,
            q=problem.q,
            d=problem.d[active],
        )
        r = mot_rate_function(sub, D, grid_step)
        W = np.empty((problem.nx, problem.ny))
        W[active] = r.argmin
        W[~active] = q
        return OracleResult(value_nats=r.value_nats, argmin=W, resolution=grid_step)

    support = q > 0
    qsup = q[support]
    dsup = problem.d[:, support]
    nx = problem.nx

    def embed(rows_sup: list) -> np.ndarray:
        W = np.zeros((nx, problem.ny))
        for i, w in enumerate(rows_sup):
            W[i, support] = w
        return W

    def report(rows_sup: list) -> OracleResult:
        W = embed(rows_sup)
        induced = p @ W
        val = mutual_information(p, W) + kl_divergence(induced / induced.sum(), q)
        return OracleResult(value_nats=val, argmin=W, resolution=grid_step)

    mins = dsup.min(axis=1)
    caps = dsup @ qsup
    d_inf = float(p @ mins)
    if D < d_inf - _FEAS_TOL:
        raise ValueError(f"infeasible: target {D} is below the reachable minimum {d_inf}")
    if float(p @ caps) <= D + _FEAS_TOL:
        return report([qsup.copy() for _ in range(nx)])

    n_tau = max(2, round(1.0 / grid_step)) + 1

    if nx == 1:
        r = _row_profile(dsup[0], qsup, D / p[0] if p[0] > 0 else math.inf, grid_step)
        if r is None:
            raise ValueError("infeasible: no reproduction law meets the budget")
        return report([r[1]])

    if nx == 2:
        lo = max(mins[0], (D - p[1] * caps[1]) / p[0])
        hi = min(caps[0], (D - p[1] * mins[1]) / p[0])
        taus = np.linspace(lo, hi, n_tau)
        best = None
        for tau0 in taus:
            r0 = _row_profile(dsup[0], qsup, float(tau0), grid_step)
            if r0 is None:
                continue
            tau1 = (D - p[0] * tau0) / p[1]
            r1 = _row_profile(dsup[1], qsup, float(tau1), grid_step)
            if r1 is None:
                continue
            total = p[0] * r0[0] + p[1] * r1[0]
            if best is None or total < best[0]:
                best = (total, [r0[1], r1[1]])
        if best is None:
            raise ValueError("infeasible: no budget split admits feasible rows")
        return report(best[1])

    # three source letters: tabulate the first two row profiles on budget
    # lattices, interpolate the third, then resolve the winner exactly
    taus0 = np.linspace(mins[0], caps[0], n_tau)
    taus1 = np.linspace(mins[1], caps[1], n_tau)
    taus2 = np.linspace(mins[2], caps[2], n_tau)
    g0 = _profile_table(dsup[0], qsup, taus0, grid_step)
    g1 = _profile_table(dsup[1], qsup, taus1, grid_step)
    g2 = _profile_table(dsup[2], qsup, taus2, grid_step)
    t2 = (D - p[0] * taus0[:, None] - p[1] * taus1[None, :]) / p[2]
    interp = np.interp(np.clip(t2, taus2[0], taus2[-1]), taus2, g2)
    interp = np.where(t2 < taus2[0] - _FEAS_TOL, np.inf, interp)
    total = p[0] * g0[:, None] + p[1] * g1[None, :] + p[2] * interp
    i, j = np.unravel_index(int(np.argmin(total)), total.shape)
    if not math.isfinite(total[i, j]):
        raise ValueError("infeasible: no budget split admits feasible rows")
    rows = []
    for dx, tau in ((dsup[0], taus0[i]), (dsup[1], taus1[j]), (dsup[2], t2[i, j])):
        r = _row_profile(dx, qsup, float(tau), grid_step)
        if r is None:
            raise ValueError("infeasible: no budget split admits feasible rows")
        rows.append(r[1])
    return report(rows)


def blahut_arimoto(p, d, slope: float, iters: int, tol: float):
    """Classical alternating updates at a fixed trade-off slope.

    Returns the achieved (distortion, rate, optimal reproduction weights)
    once successive reproduction laws move less than tol in max norm.  The
    zero-slope point is degenerate and returned in closed form: rate zero
    at the cheapest single reproduction symbol.
    """
    p = np.asarray(p, dtype=float)
    d = np.asarray(d, dtype=float)
    slope = float(slope)
    iters = int(iters)
    if not (slope >= 0.0) or not math.isfinite(slope):
        raise ValueError(f"slope must be finite and >= 0, got {slope!r}")
    if iters < 1:
        raise ValueError("need at least one iteration")
    if d.ndim != 2 or d.shape[0] != p.size:
        raise ValueError("distortion matrix shape does not match source weights")
    ny = d.shape[1]

    if slope == 0.0:
        cols = p @ d
        j = int(np.argmin(cols))
        q = np.zeros(ny)
        q[j] = 1.0
        return float(cols[j]), 0.0, Pmf(q)

    shift = d.min(axis=1, keepdims=True)
    e = np.exp(-slope * (d - shift))
    q = np.full(ny, 1.0 / ny)
    for _ in range(iters):
        a = q[None, :] * e
        z = a.sum(axis=1)
        if np.any(z <= 0.0):
            raise RuntimeError("tilted rows lost all mass; slope too aggressive")
        w = a / z[:, None]
        q_new = p @ w
        delta = float(np.max(np.abs(q_new - q)))
        q = q_new
        if delta < tol:
            break
    else:
        raise RuntimeError(f"alternating minimization did not converge in {iters} iterations")
    D = float(p @ (w * d).sum(axis=1))
    R = mutual_information(p, w)
    return D, R, Pmf(q / q.sum())


def q_search_infimum(p, d, D: float, q_grid_step: float) -> OracleResult:
    """Smallest fixed-marginal rate over a lattice of reproduction laws.

    Lattice points whose support cannot reach the distortion budget are
    skipped as infeasible.
    """
    p = np.asarray(p, dtype=float)
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != p.size:
        raise ValueError("distortion matrix shape does not match source weights")
    ny = d.shape[1]
    if ny > 3:
        raise ValueError(f"alphabet too large for lattice search: |Y|={ny}, maximum is 3")
    q_grid_step = float(q_grid_step)
    if not (0.0 < q_grid_step <= 0.5):
        raise ValueError(f"lattice step must lie in (0, 0.5], got {q_grid_step!r}")

    x_grid = Grid(np.arange(p.size, dtype=float))
    y_grid = Grid(np.arange(ny, dtype=float))
    src = Pmf(p)
    best = None
    for qvec in _simplex_grid(ny, q_grid_step):
        # laws whose support cannot reach the budget are infeasible, and the
        # tilt family never leaves the support
        reach = float(p @ d[:, qvec > 0].min(axis=1))
        if D <= reach + _FEAS_TOL:
            continue
        try:
            prob = RdProblem(x_grid=x_grid, p=src, y_grid=y_grid, q=Pmf(qvec), d=d)
            rate, _ = legendre_rate(prob, D)
        except ValueError:
            continue
        if best is None or rate < best[0]:
            best = (rate, qvec)
    if best is None:
        raise ValueError("infeasible: every lattice law sits above the budget")
    return OracleResult(value_nats=best[0], argmin=best[1], resolution=q_grid_step)
