import numpy as np
import pytest

from purex.model import ModelParams


def random_density_matrix(rng, dim: int = 2) -> np.ndarray:
    a = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_model_params(rng) -> ModelParams:
    return ModelParams.from_ratios(
        omega_over_epsilon=rng.uniform(2.0, 20.0),
        gamma2_over_epsilon=rng.uniform(0.0, 0.5),
        gamma1_over_gamma2=rng.uniform(0.0, 2.0),
        kt_over_omega=rng.uniform(0.0, 10.0),
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20260809)
