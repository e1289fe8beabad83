"""Model definition: parameters, operators and momentum-space kernels.

Everything downstream is built from four knobs: chemical potential mu,
monitoring rate gamma, detection efficiency q and chain length L. This
module constructs the real-space Majorana kernels (Hamiltonian kernel H
and bath matrix M), their momentum-space counterparts X(k), Y(k), Z(k)
entering the per-mode Riccati equation, and the R/I/S helper functions.

Conventions fixed project-wide:
  * Majorana operators w_{j,1} = (c_j + c^dag_j)/sqrt(2),
    w_{j,2} = -i(c_j - c^dag_j)/sqrt(2), so {w_a, w_b} = delta_ab.
  * Site-major index order: (site j, type mu) -> 2*j + (mu - 1), j = 0..L-1.
  * Antiperiodic wrap bond: the (L-1, 0) bond carries a -1 sign, making
    every translation-invariant kernel anti-circulant and the momentum
    grid k_m = (2m-1)pi/L exact at finite L.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SQRT2 = np.sqrt(2.0)


@dataclass(frozen=True)
class ModelParams:
    """Physical knobs, validated once and passed everywhere.

    mu    : chemical potential (dimensionless)
    gamma : monitoring rate, >= 0
    q     : detection/postselection efficiency in [0, 1]
    L     : chain length, positive even integer
    """

    mu: float
    gamma: float
    q: float
    L: int

    def __post_init__(self):
        if not np.isfinite(self.mu):
            raise ValueError("mu must be finite")
        if not (self.gamma >= 0):
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        if not (0.0 <= self.q <= 1.0):
            raise ValueError(f"q must lie in [0, 1], got {self.q}")
        if self.L < 2 or self.L % 2 != 0:
            raise ValueError(f"L must be a positive even integer >= 2, got {self.L}")


@dataclass
class OperatorSet:
    """Real-space Majorana kernels.

    H is the Hamiltonian kernel (2L x 2L, purely imaginary entries,
    H = -H^T exactly); M is the Hermitian bath matrix, block-diagonal
    with identical site blocks (gamma/2) [[1, -i], [i, 1]].
    """

    H: np.ndarray
    M: np.ndarray


@dataclass
class KModeMatrices:
    """The 2x2 momentum-space triples defining the per-mode ARE."""

    k: complex
    Xk: np.ndarray
    Yk: np.ndarray
    Zk: np.ndarray


@dataclass
class RISTriple:
    """R = 2mu - 2cos k, I = 2sin k and the discriminant root S.

    S uses the principal branch; its branch-cut locus in complex k is
    what the spatial scan detects.
    """

    R: complex
    I: complex
    S: complex


def gamma_c(mu: float) -> float:
    """Critical monitoring rate of the no-click limit, 4*sqrt(1 - mu^2).

    The critical phase exists only for |mu| <= 1; outside, returns 0.
    """
    if abs(mu) > 1.0:
        return 0.0
    return 4.0 * np.sqrt(1.0 - mu * mu)


def build_k_grid(params: ModelParams) -> np.ndarray:
    """Antiperiodic momentum grid k_m = (2m-1)pi/L, m = -L/2+1 .. L/2.

    Returns L values in (-pi, pi], ordered increasingly; symmetric under
    k -> -k except for the single k = pi - pi/L ... endpoint pairing
    convention (every +k has its -k partner on the grid).
    """
    L = params.L
    m = np.arange(-L // 2 + 1, L // 2 + 1)
    return (2 * m - 1) * np.pi / L


def build_xyz(params: ModelParams, k: complex) -> KModeMatrices:
    """Momentum-space kernels X(k), Y(k), Z(k) of the covariance flow.

    X(k) = [[-(1-q) gamma/2, 2mu - 2e^{-ik}], [-2mu + 2e^{ik}, -(1-q) gamma/2]]
    Y(k) = -(1 - q/2)(gamma/2) [[0, 1], [-1, 0]]
    Z(k) = -q gamma [[0, 1], [-1, 0]]
    """
    mu, g, q = params.mu, params.gamma, params.q
    damp = -(1.0 - q) * g / 2.0
    Xk = np.array(
        [
            [damp, 2.0 * mu - 2.0 * np.exp(-1j * k)],
            [-2.0 * mu + 2.0 * np.exp(1j * k), damp],
        ],
        dtype=complex,
    )
    J = np.array([[0.0, 1.0], [-1.0, 0.0]], dtype=complex)
    Yk = -(1.0 - q / 2.0) * (g / 2.0) * J
    Zk = -q * g * J
    return KModeMatrices(k=k, Xk=Xk, Yk=Yk, Zk=Zk)


def ris(params: ModelParams, k: complex) -> RISTriple:
    """R, I and the principal-branch discriminant root S at momentum k.

    S^2 = gamma^4 + 16 (R^2+I^2)^2 + 8 gamma^2 [(1-4q+2q^2) I^2 + R^2].
    (The prefactor 16 follows from inserting the traceless anti-Hermitian
    ansatz into the ARE; it makes S^2 >= 0 on the whole real-k axis.)
    """
    mu, g, q = params.mu, params.gamma, params.q
    R = 2.0 * mu - 2.0 * np.cos(k)
    I = 2.0 * np.sin(k)
    u = R * R + I * I
    S2 = g**4 + 16.0 * u * u + 8.0 * g * g * ((1.0 - 4.0 * q + 2.0 * q * q) * I * I + R * R)
    S = np.sqrt(complex(S2))
    if np.imag(S) == 0 and np.imag(R) == 0 and np.imag(I) == 0:
        R, I, S = float(np.real(R)), float(np.real(I)), S.real
    return RISTriple(R=R, I=I, S=S)


def _site_block_M(gamma: float) -> np.ndarray:
    return (gamma / 2.0) * np.array([[1.0, -1.0j], [1.0j, 1.0]], dtype=complex)


def build_real_space_operators(params: ModelParams) -> OperatorSet:
    """Real-space H and M on the 2L-dimensional Majorana index.

    H carries the chemical-potential blocks i*mu on site and +-i on the
    (j,2)-(j+1,1) bonds, with the wrap bond sign-flipped (antiperiodic
    convention). Its Fourier transform on the build_k_grid momenta
    reproduces build_xyz exactly.
    """
    L = params.L
    mu = params.mu
    H = np.zeros((2 * L, 2 * L), dtype=complex)
    for j in range(L):
        a1, a2 = 2 * j, 2 * j + 1
        H[a1, a2] += 1j * mu
        H[a2, a1] += -1j * mu
        jn = (j + 1) % L
        sign = -1.0 if j == L - 1 else 1.0
        b1 = 2 * jn
        H[a2, b1] += sign * 1j
        H[b1, a2] += sign * (-1j)
    M = np.zeros((2 * L, 2 * L), dtype=complex)
    blk = _site_block_M(params.gamma)
    for j in range(L):
        M[2 * j : 2 * j + 2, 2 * j : 2 * j + 2] = blk
    return OperatorSet(H=H, M=M)


def fourier_block(kernel: np.ndarray, L: int, k: complex) -> np.ndarray:
    """2x2 symbol of an anti-circulant 2L x 2L site-blocked kernel.

    A_{mu,nu}(k) = sum_x e^{-ikx} A_{mu,nu}(x) with A read off the first
    block row, x = (m - n) mod L and the antiperiodic sign convention.
    """
    out = np.zeros((2, 2), dtype=complex)
    for x in range(L):
        # first block row: m = 0, n = x -> distance m - n = -x == L - x (antiperiodic)
        blk = kernel[0:2, 2 * x : 2 * x + 2]
        if x == 0:
            out += blk
        else:
            # A(m-n = -x) = -A(L-x): phase e^{-ik(L-x)} with the wrap sign
            out += -blk * np.exp(-1j * k * (L - x))
    return out
