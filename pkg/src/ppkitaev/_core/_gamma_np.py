"""Vectorized numpy fallback for the minus-branch covariance kernel."""

import numpy as np

SQRT2 = np.sqrt(2.0)


def gamma_minus(mu, gamma, q, k):
    """Minus-branch covariance entries (G11, G12, G21) at momenta k.

    k: 1-D complex array. Returns (len(k), 3) complex. q must be > 0.
    Product form: no removable 0/0 at I = 0 or R = 0; the principal
    square roots carry the physical branch cuts.
    """
    R = 2.0 * mu - 2.0 * np.cos(k)
    I = 2.0 * np.sin(k)
    u = R * R + I * I
    S = np.sqrt(
        gamma**4
        + 16.0 * u * u
        + 8.0 * gamma * gamma * ((1.0 - 4.0 * q + 2.0 * q * q) * I * I + R * R)
    )
    den = gamma * gamma - 4.0 * u + S
    sq = np.sqrt(den)
    dof = q * gamma * (den + 8.0 * R * R)
    A = I * (den - SQRT2 * (1.0 - q) * gamma * sq) / dof
    Aa = 2.0 * I * R * (2.0 * (1.0 - q) * gamma - SQRT2 * sq) / dof
    Ab = (sq - SQRT2 * (1.0 - q) * gamma) / (2.0 * SQRT2 * q * gamma)
    out = np.empty((k.shape[0], 3), dtype=complex)
    out[:, 0] = 1j * A
    out[:, 1] = 1j * Aa - Ab
    out[:, 2] = 1j * Aa + Ab
    return out
