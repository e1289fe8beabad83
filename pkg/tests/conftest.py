import numpy as np
import pytest

from ppkitaev.model import ModelParams


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_params(rng, L=64, q_min=0.02):
    """Generic non-degenerate parameter point."""
    return ModelParams(
        mu=float(rng.uniform(-0.95, 0.95)),
        gamma=float(rng.uniform(0.3, 5.0)),
        q=float(rng.uniform(q_min, 1.0)),
        L=L,
    )
