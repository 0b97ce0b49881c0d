"""Scalar test equation y' = cos(t) y + (cos(t) - y) y."""
import logging
import math

import numpy as np
from scipy.integrate import quad

from src.integrator.problem import SemiLinearProblem
from src.problems.bundle import ProblemBundle

logger = logging.getLogger(__name__)


def scalar_exact(t):
    """y(t) = exp(2 sin t) / (1 + int_0^t exp(2 sin s) ds), with y(0) = 1."""
    if t == 0:
        return 1.0
    integral, _ = quad(lambda s: math.exp(2.0 * math.sin(s)), 0.0, t, epsabs=1e-13, epsrel=1e-13, limit=200)
    return math.exp(2.0 * math.sin(t)) / (1.0 + integral)


def scalar_problem():
    """The N = 1 system with f = cos(t) y and G = cos(t) - y."""
    def f(t, y):
        return math.cos(t) * y

    def assemble_G(t, y):
        return np.array([[math.cos(t) - y[0]]])

    return SemiLinearProblem(
        dim=1,
        f=f,
        assemble_G=assemble_G,
        u0=[1.0],
        t0=0.0,
        exact=lambda t: np.array([scalar_exact(t)]),
        name="scalar",
    )


def scalar_bundle(params=None):
    problem = scalar_problem()
    return ProblemBundle(kind="scalar", problem=problem, params={})
