import math

import numpy as np
import pytest

from freepiston.model import EngineParams

# filled by tests/test_acceptance.py, printed after the run
ACCEPTANCE_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, name, ok, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {name} -- {detail}")


PAPER_PHYSICS = dict(p1_left=225000.0, p1_right=120000.0, q_in=18.0, x_s=0.0225,
                     bore_left=0.05, friction=0.0, n_poly=1.33)


def paper_params(x_m=0.05, mass=1.0, lam=1.0, **overrides):
    kw = dict(PAPER_PHYSICS, x_m=x_m, mass=mass, lam=lam)
    kw.update(overrides)
    return EngineParams(**kw)


def random_params(rng, with_friction=True):
    """Random valid engine: log-uniform pressures, x_s in (0.3, 0.8) x_m."""
    x_m = rng.uniform(0.03, 0.15)
    return EngineParams(
        p1_left=math.exp(rng.uniform(math.log(5e4), math.log(5e5))),
        p1_right=math.exp(rng.uniform(math.log(5e4), math.log(5e5))),
        q_in=rng.uniform(0.0, 50.0),
        x_s=rng.uniform(0.3, 0.8) * x_m,
        x_m=x_m,
        bore_left=rng.uniform(0.03, 0.08),
        n_poly=rng.uniform(1.1, 1.6),
        mass=math.exp(rng.uniform(math.log(0.2), math.log(5.0))),
        friction=rng.uniform(0.0, 20.0) if with_friction and rng.random() < 0.5 else 0.0,
        lam=rng.uniform(0.5, 2.5),
    )


@pytest.fixture
def paper():
    return paper_params()


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
