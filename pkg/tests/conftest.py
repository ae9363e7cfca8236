"""
Shared fixtures for the crflow test suite.

Hypothesis profiles: 'default' (20 examples, no deadline) and 'fast'
(5 examples); select with HYPOTHESIS_PROFILE=fast.
"""

import logging
import os

import numpy as np
import pytest
from hypothesis import settings

from crflow.flowcore.flow_types import FlowConfig, FlowKind, GeometryKind
from crflow.flowutils.properties_configurator import PropertiesConfigurator
from crflow.flowutils.system_initializer import FlowSystem
from crflow.geometries.initial_data import (
    flat,
    perturbed_schwarzschild,
    schwarzschild_conformal,
    squashed_homogeneous,
    throat_radius,
)
from crflow.geometries.radial import build_radial_grid

settings.register_profile("default", max_examples=20, deadline=None)
settings.register_profile("fast", max_examples=5, deadline=None)
settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long flow integrations (deselect with -m 'not slow')")


@pytest.fixture(autouse=True)
def quiet_numpy():
    old = np.seterr(over='ignore', under='ignore')
    yield
    np.seterr(**old)


@pytest.fixture
def clean_settings(monkeypatch):
    """Fresh singletons and no CRFLOW_* environment leaking in."""
    for key in ('CRFLOW_OUT', 'CRFLOW_LOG_LEVEL'):
        monkeypatch.delenv(key, raising=False)
    PropertiesConfigurator().clear()
    FlowSystem.reset()
    yield PropertiesConfigurator()
    PropertiesConfigurator().clear()
    FlowSystem.reset()
    logging.getLogger().setLevel(logging.WARNING)


@pytest.fixture
def schwarzschild_factory():
    """Schwarzschild-conformal slice closed at its throat, A0 = 0.1 by default."""
    def build(n_nodes=400, A0=0.1, rho_max=1000.0):
        grid = build_radial_grid(throat_radius(A0), rho_max, n_nodes)
        return schwarzschild_conformal(grid, A0)
    return build


@pytest.fixture
def perturbed_factory():
    """Schwarzschild slice in a bumped radial coordinate, mass 0.4."""
    def build(n_nodes=400, A0=0.1, amplitude=0.1, rho_max=1000.0):
        grid = build_radial_grid(throat_radius(A0), rho_max, n_nodes)
        return perturbed_schwarzschild(grid, A0, amplitude)
    return build


@pytest.fixture
def flat_metric():
    return flat(build_radial_grid(0.01, 1000.0, 64))


@pytest.fixture
def squashed():
    return squashed_homogeneous((1.0, 1.0, 2.0))


@pytest.fixture
def homogeneous_config():
    def build(s0=4.0, **kwargs):
        kwargs.setdefault('flow_kind', FlowKind.CRF)
        return FlowConfig(geometry_kind=GeometryKind.HOMOGENEOUS, s0=s0, **kwargs)
    return build
