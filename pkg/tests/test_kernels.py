import numpy as np
import pytest

from ppkitaev import _core
from ppkitaev.model import ModelParams
from ppkitaev.riccati import closed_form_entries


def test_backend_selected():
    assert _core.BACKEND in ("cython", "numpy")
    assert "numpy" in _core.available_backends()


def test_kernel_rejects_q0():
    with pytest.raises(ValueError):
        _core.gamma_minus(0.4, 1.0, 0.0, np.array([0.3 + 0j]))


def test_backends_agree():
    if "cython" not in _core.available_backends():
        pytest.skip("compiled kernel not built")
    rng = np.random.default_rng(5)
    k = rng.uniform(-np.pi, np.pi, 4096) + 1j * rng.uniform(0, 2.5, 4096)
    for (mu, g, q) in [(0.4, 1.0, 0.5), (0.0, 3.0, 0.97), (-0.8, 0.4, 0.1)]:
        a = _core.gamma_minus(mu, g, q, k, backend="numpy")
        b = _core.gamma_minus(mu, g, q, k, backend="cython")
        assert np.max(np.abs(a - b)) < 1e-12


def test_shape_handling():
    k = np.zeros((3, 5), dtype=complex) + 0.3
    out = _core.gamma_minus(0.4, 1.0, 0.5, k)
    assert out.shape == (3, 5, 3)
    out_scalar = _core.gamma_minus(0.4, 1.0, 0.5, 0.3 + 0.1j)
    assert out_scalar.shape == (1, 3)


def test_entries_wrapper_shape():
    p = ModelParams(mu=0.4, gamma=1.0, q=0.5, L=8)
    e = closed_form_entries(p, np.array([[0.3, 0.5], [1.1, 2.0]], dtype=complex))
    assert e.shape == (2, 2, 2, 2)
    assert np.allclose(e[..., 1, 1], -e[..., 0, 0])
