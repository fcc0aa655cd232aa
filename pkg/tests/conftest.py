import numpy as np
import pytest

import growthlab as gl

BENCH = {"kappa": 1.5, "theta": [0.5, 0.5], "sigma2": 1.0}


@pytest.fixture(scope="session")
def wf_spec():
    return gl.wright_fisher(BENCH["kappa"], BENCH["theta"], BENCH["sigma2"])


@pytest.fixture(scope="session")
def uniform2():
    return gl.SimplexPoint(np.array([0.5, 0.5]))


@pytest.fixture(scope="session")
def wf_kernel(wf_spec):
    return gl.euler_kernel(wf_spec, 0.01)


@pytest.fixture(scope="session")
def wf_path_T100(wf_spec, uniform2):
    """One benchmark diffusion path: T=100 time units at dt=1e-3."""
    return gl.simulate_diffusion(wf_spec, 100.0, 1e-3, uniform2, 123)


@pytest.fixture(scope="session")
def wf_chain_2e4(wf_kernel, uniform2):
    return gl.simulate_discrete(wf_kernel, 20_000, uniform2, 5)
