"""Hot-kernel backend selection: compiled extension if built, numpy otherwise."""

import numpy as np

try:
    from ._gamma_cy import gamma_minus as _gamma_minus_impl

    BACKEND = "cython"
except ImportError:
    from ._gamma_np import gamma_minus as _gamma_minus_impl

    BACKEND = "numpy"


def gamma_minus(mu, gamma, q, k, backend=None):
    """Minus-branch covariance entries (G11, G12, G21) for an array of momenta.

    Accepts any array shape (or scalar); returns shape k.shape + (3,).
    backend overrides the import-time selection ("cython" | "numpy").
    """
    if q <= 0:
        raise ValueError("kernel defined for q > 0 (q = 0 is the Lyapunov regime)")
    impl = _gamma_minus_impl if backend is None else _load(backend)
    karr = np.ascontiguousarray(np.atleast_1d(np.asarray(k, dtype=np.complex128)))
    shape = karr.shape
    res = impl(float(mu), float(gamma), float(q), karr.ravel())
    return res.reshape(shape + (3,))


def _load(backend):
    if backend == "numpy":
        from ._gamma_np import gamma_minus

        return gamma_minus
    if backend == "cython":
        from ._gamma_cy import gamma_minus

        return gamma_minus
    raise ValueError(f"unknown backend {backend!r}")


def available_backends():
    """Backends importable in this environment ("numpy" always is)."""
    out = ["numpy"]
    try:
        from . import _gamma_cy  # noqa: F401

        out.append("cython")
    except ImportError:
        pass
    return out
