"""
Pytest configuration and shared fixtures.

This module provides small model specifications, parameter sets and
simulated panels shared by the unit and integration tests.
"""

from collections.abc import Generator
from unittest.mock import Mock

import numpy as np
import pytest

from kalman.state_space import build_state_space
from simulate.dgp import DGPConfig, gen_dfm
from utils.config import SingletonSettingsMeta
from utils.model import ModelSpec, Params, StateSpace


@pytest.fixture(autouse=True)
def clean_settings(monkeypatch) -> Generator[None]:
    """
    Drop environment overrides and the cached Settings instance.

    Runs for every test so an OUTPUT_DIR exported in the shell never
    redirects the files a test writes.
    """
    monkeypatch.delenv("OUTPUT_DIR", raising=False)
    SingletonSettingsMeta.reset()
    try:
        yield
    finally:
        SingletonSettingsMeta.reset()


@pytest.fixture
def rng() -> np.random.Generator:
    """Return a seeded random generator."""
    return np.random.default_rng(12345)


@pytest.fixture
def silent_logger() -> Mock:
    """Return a logger double that records calls instead of printing."""
    return Mock(spec=["debug", "info", "warning", "error", "exception", "success"])


@pytest.fixture
def small_spec() -> ModelSpec:
    """Return a five-series, two-factor, one-shock specification."""
    return ModelSpec(n=5, T=30, r=2, q=1, diffuse_scale=10.0)


@pytest.fixture
def small_params() -> Params:
    """Return stable parameters matching ``small_spec``."""
    return Params(
        Lambda=np.array([[1.0, 0.2], [0.5, -0.4], [-0.3, 0.8], [0.9, 0.1], [0.2, 0.6]]),
        A1=np.diag([0.5, 0.3]),
        A2=np.array([[0.1, 0.0], [0.05, 0.1]]),
        H=np.array([[1.0], [0.5]]),
        R=np.full(5, 0.5),
        rho=np.zeros(5, dtype=int),
        floor=np.full(5, 1e-4),
    )


@pytest.fixture
def i1_params(small_params: Params) -> Params:
    """Return ``small_params`` with random-walk idiosyncratic states on series 1 and 3."""
    rho = np.array([0, 1, 0, 1, 0])
    R = np.array([0.5, 0.05, 0.5, 0.08, 0.5])
    return small_params.with_updates(rho=rho, R=R, floor=np.full(5, 0.01))


def simulate_state_space(ss: StateSpace, T: int, rng: np.random.Generator) -> np.ndarray:
    """Draw an n×T panel from a state space started at zero."""
    m, n = ss.m, ss.n
    chol = np.linalg.cholesky(ss.Qmat + 1e-12 * np.eye(m))
    s = np.zeros(m)
    X = np.empty((n, T))
    for t in range(T):
        s = ss.Tmat @ s + chol @ rng.standard_normal(m)
        X[:, t] = ss.Zmat @ s + np.sqrt(ss.Hobs) * rng.standard_normal(n)
    return X


@pytest.fixture
def small_state_space(small_params: Params, small_spec: ModelSpec) -> StateSpace:
    """Return the state space built from ``small_params``."""
    return build_state_space(small_params, small_spec)


@pytest.fixture
def small_panel(small_state_space: StateSpace, small_spec: ModelSpec, rng) -> np.ndarray:
    """Return a 5×30 panel drawn from ``small_state_space``."""
    return simulate_state_space(small_state_space, small_spec.T, rng)


@pytest.fixture
def dgp_static() -> DGPConfig:
    """DGP whose static and dynamic factor counts coincide (r = q = 2)."""
    return DGPConfig(n=20, T=80, q=2, d=1, s=0, seed=11)


@pytest.fixture
def dgp_lagged() -> DGPConfig:
    """DGP loading one lag of the dynamic factors (q = 2, r = 4)."""
    return DGPConfig(n=20, T=80, q=2, d=1, s=1, seed=3)


@pytest.fixture
def simulated_static(dgp_static: DGPConfig):
    """Return ``(X, truth)`` drawn from ``dgp_static``."""
    return gen_dfm(dgp_static)


@pytest.fixture
def simulated_lagged(dgp_lagged: DGPConfig):
    """Return ``(X, truth)`` drawn from ``dgp_lagged``."""
    return gen_dfm(dgp_lagged)
