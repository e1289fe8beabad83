# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled minus-branch covariance kernel (hot loop of the complex-k scans)."""

import numpy as np

cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double complex csqrt(double complex)
    double complex cexp(double complex)

cnp.import_array()


def gamma_minus(double mu, double gamma, double q, cnp.ndarray[cnp.complex128_t, ndim=1] k):
    """Minus-branch covariance entries (G11, G12, G21) at momenta k.

    Same contract as the numpy fallback: k 1-D complex, q > 0, returns
    (len(k), 3) complex128.
    """
    cdef Py_ssize_t n = k.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] out = np.empty((n, 3), dtype=np.complex128)
    cdef double complex kk, z, zi, R, I, u, S, den, sq, dof, A, Aa, Ab
    cdef double g2 = gamma * gamma
    cdef double g4 = g2 * g2
    cdef double cq = 1.0 - 4.0 * q + 2.0 * q * q
    cdef double omq = 1.0 - q
    cdef double SQRT2 = 1.4142135623730951
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            kk = k[i]
            z = cexp(1j * kk)  # cos k = (z + 1/z)/2, sin k = (z - 1/z)/(2i)
            zi = 1.0 / z
            R = 2.0 * mu - (z + zi)
            I = -1j * (z - zi)
            u = R * R + I * I
            S = csqrt(g4 + 16.0 * u * u + 8.0 * g2 * (cq * I * I + R * R))
            den = g2 - 4.0 * u + S
            sq = csqrt(den)
            dof = q * gamma * (den + 8.0 * R * R)
            A = I * (den - SQRT2 * omq * gamma * sq) / dof
            Aa = 2.0 * I * R * (2.0 * omq * gamma - SQRT2 * sq) / dof
            Ab = (sq - SQRT2 * omq * gamma) / (2.0 * SQRT2 * q * gamma)
            out[i, 0] = 1j * A
            out[i, 1] = 1j * Aa - Ab
            out[i, 2] = 1j * Aa + Ab
    return out
