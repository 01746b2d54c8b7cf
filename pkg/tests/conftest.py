import numpy as np
import pytest

from rdmmse.oracle import blahut_arimoto
from rdmmse.presets import load_preset
from rdmmse.problem import Grid, Pmf, RdProblem


@pytest.fixture(scope="session")
def bss():
    return load_preset("bss").problem


@pytest.fixture(scope="session")
def gauss():
    return load_preset("gauss").problem


@pytest.fixture(scope="session")
def fig1():
    return load_preset("fig1")


@pytest.fixture(scope="session")
def lr_preset():
    return load_preset("lr")


def consistent_random_problem(rng: np.random.Generator, ny: int):
    """Random tiny problem whose reproduction law is optimal at its own budget.

    Draw (p, d, slope), run the alternating-minimization oracle to its fixed
    point, and adopt the fixed-point law as q.  Only at such a q do the
    marginal-constrained search, the unconstrained search, and the conjugate
    form all meet: for an arbitrary q the exact-marginal minimum genuinely
    exceeds the other two, so equality tests on fully random q would be
    testing a false statement.

    A binary source essentially never supports three reproduction letters,
    so weights the fixed point has already driven below 1e-9 are snapped to
    exact zero instead of redrawn; the snapped law is still a fixed point
    and the dead column stays in the problem for the searches to handle.
    Redraws when the slope lands past the zero-rate corner or a surviving
    weight is small enough to make the lattice searches marginal.
    """
    while True:
        p = rng.uniform(0.1, 0.9, size=2)
        p = p / p.sum()
        d = rng.uniform(0.0, 1.0, size=(2, ny))
        slope = rng.uniform(0.8, 5.0)
        try:
            D, R, q = blahut_arimoto(p, d, slope, iters=20000, tol=1e-13)
        except RuntimeError:
            continue
        w = q.weights.copy()
        w[w < 1e-9] = 0.0
        live = w[w > 0]
        if R < 0.01 or live.size < 2 or float(live.min()) < 5e-3:
            continue
        problem = RdProblem(
            Grid(np.arange(2.0)), Pmf(p), Grid(np.arange(float(ny))), Pmf(w / w.sum()), d
        )
        return problem, D, R
