import numpy as np
import pytest

from src.integrator.problem import SemiLinearProblem
from src.problems.diffusion import diffusion_problem
from src.problems.scalar import scalar_problem
from src.tableau.catalog import catalog_names, make_builtin


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False,
                     help="run the slow step-size and convergence table reproductions")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def isolated_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("SEMIMEX_CACHE_DIR", str(tmp_path / "cache"))
    monkeypatch.setenv("SEMIMEX_THREADS", "1")


@pytest.fixture(scope="session")
def catalog():
    return {name: make_builtin(name) for name in catalog_names()}


@pytest.fixture
def scalar():
    return scalar_problem()


@pytest.fixture
def small_diffusion():
    return diffusion_problem(kappa=1.0, n=33)


def make_random_problem(seed=0, dim=4):
    """Nonlinear system with state-dependent G and no constraint rows."""
    rng = np.random.default_rng(seed)
    coupling = 0.2 * rng.normal(size=(dim, dim))
    u0 = rng.normal(size=dim)

    def f(t, u):
        return np.sin(u) + np.cos(t)

    def assemble_G(t, u):
        return -np.diag(1.0 + u ** 2) + coupling * (1.0 + 0.1 * t)

    return SemiLinearProblem(dim=dim, f=f, assemble_G=assemble_G, u0=u0, name="random")


@pytest.fixture
def random_problem():
    return make_random_problem()


@pytest.fixture
def random_problem_factory():
    return make_random_problem
