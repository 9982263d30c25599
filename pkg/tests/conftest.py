"""Shared fixtures and helpers for the test suite."""
from __future__ import annotations

import numpy as np
import pytest

from ottomon import DirectStroke, EngineConfig, PerfectThermo


@pytest.fixture(scope="session")
def default_config() -> EngineConfig:
    """Imperfect-thermalization reference point used across the suite."""
    return EngineConfig()


@pytest.fixture(scope="session")
def adiabatic_perfect_config() -> EngineConfig:
    """Adiabatic strokes, perfect thermalization onto finite-coupling targets."""
    return EngineConfig(
        stroke=DirectStroke(alpha=0.0, phi=0.0),
        thermo=PerfectThermo(
            beta_c=0.25,
            beta_h=0.025,
            gamma=0.5,
            omega_d=0.2,
            targets="generalized_gibbs",
        ),
        init="generalized_gibbs_cold",
    )


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(20260815)


def random_density_matrices(rng: np.random.Generator, count: int) -> np.ndarray:
    """Batch of random qubit density matrices (Hermitian, unit trace, psd)."""
    a = rng.normal(size=(count, 2, 2)) + 1j * rng.normal(size=(count, 2, 2))
    rho = a @ a.conj().transpose(0, 2, 1)
    trace = np.trace(rho, axis1=1, axis2=2).real
    return rho / trace[:, None, None]
