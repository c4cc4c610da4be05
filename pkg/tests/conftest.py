import numpy as np
import pytest


def random_matrix(rng: np.random.Generator, n: int, max_norm: float) -> np.ndarray:
    """Random n x n matrix rescaled to the given infinity norm."""
    matrix = rng.uniform(-1.0, 1.0, size=(n, n))
    norm = np.linalg.norm(matrix, ord=np.inf)
    return matrix * (max_norm * rng.uniform(0.0, 1.0) / norm)


def random_closed_vertices(rng: np.random.Generator, n_vertices: int, dim: int = 2) -> np.ndarray:
    return rng.normal(size=(n_vertices, dim))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)
