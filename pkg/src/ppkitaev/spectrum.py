"""Third-quantization structure matrix, rapidities and the Liouvillian gap.

The quadratic part of the generator (the trace-preserving constant only
shifts the spectrum) is encoded in the structure matrix; in this
package's Majorana normalization ({w_a, w_b} = delta_ab, so H-tilde =
H/2 and M-tilde = M/2 relative to unit-normalized Majoranas) it reads

    A = [[-i H + (i/2) Im M, (i/2)(1-q) M],
         [-(i/2)(1-q) M^T,   -i H - (i/2) Im M]],
    A0 = Tr M / 2,

whose eigenvalues come in (beta, -beta) pairs; the representatives with
Re beta >= 0 are the rapidities and the gap is Delta = 2 min_j Re beta_j.
The coefficients are fixed by matching the exact dense Liouvillian
spectrum (the eigenvalue lattice -B0 - 2 sum_S beta) at small L, which
the tests verify directly. A dense 4L x 4L path validates a
momentum-blocked fast path (L 4x4 blocks; the bath matrix is on-site,
hence k-independent).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PairingFailure
from .model import ModelParams, build_k_grid, build_real_space_operators, build_xyz

#: (beta, -beta) partner matching tolerance
PAIRING_TOL = 1e-6
#: dense eigendecomposition feasibility cap
DENSE_L_MAX = 512


@dataclass
class StructureMatrix:
    """Dense matrix or per-momentum blocks, plus the spectral shift A0 = 2 Tr M."""

    params: ModelParams
    A0: float
    A_matrix: np.ndarray | None = None
    blocks: np.ndarray | None = None  # (L, 4, 4)

    def eigenvalues(self) -> np.ndarray:
        if self.A_matrix is not None:
            return np.linalg.eigvals(self.A_matrix)
        return np.linalg.eigvals(self.blocks).ravel()


@dataclass
class RapiditySpectrum:
    """Rapidities sorted by descending real part; gap = 2 min Re beta."""

    beta: np.ndarray
    gap: float


def build_structure_matrix_dense(params: ModelParams) -> StructureMatrix:
    """Assemble the 4L x 4L structure matrix from the real-space operators."""
    if params.L > DENSE_L_MAX:
        raise ValueError(f"dense path capped at L = {DENSE_L_MAX}")
    ops = build_real_space_operators(params)
    H, M = ops.H, ops.M
    ImM = np.imag(M)
    one_q = 1.0 - params.q
    A = np.block(
        [
            [-1j * H + 0.5j * ImM, 0.5j * one_q * M],
            [-0.5j * one_q * M.T, -1j * H - 0.5j * ImM],
        ]
    )
    A0 = float(0.5 * np.trace(M).real)
    return StructureMatrix(params=params, A0=A0, A_matrix=A)


def build_structure_blocks_k(params: ModelParams) -> StructureMatrix:
    """Momentum-blocked fast path: one 4x4 block per grid momentum.

    H(k) is read off X(k) = -2i H(k) - (1-q)(gamma/2) 1; the on-site bath
    block M = (gamma/2)[[1, -i], [i, 1]] is k-independent.
    """
    g, q = params.gamma, params.q
    Mblk = (g / 2.0) * np.array([[1.0, -1.0j], [1.0j, 1.0]])
    ImM = np.imag(Mblk)
    one_q = 1.0 - q
    blocks = np.empty((params.L, 4, 4), dtype=complex)
    for i, k in enumerate(build_k_grid(params)):
        Xk = build_xyz(params, k).Xk
        Hk = (Xk + one_q * (g / 2.0) * np.eye(2)) / (-2j)
        blocks[i, :2, :2] = -1j * Hk + 0.5j * ImM
        blocks[i, :2, 2:] = 0.5j * one_q * Mblk
        blocks[i, 2:, :2] = -0.5j * one_q * Mblk.T
        blocks[i, 2:, 2:] = -1j * Hk - 0.5j * ImM
    A0 = float(0.5 * params.L * np.trace(Mblk).real)
    return StructureMatrix(params=params, A0=A0, blocks=blocks)


def rapidities(sm: StructureMatrix) -> RapiditySpectrum:
    """Pair the eigenvalues into (beta, -beta) and keep the Re >= 0 set.

    Greedy nearest-match pairing with ties broken by imaginary-part
    magnitude; PairingFailure reports any eigenvalue lacking a partner
    within tolerance.
    """
    vals = sm.eigenvalues()
    order = np.argsort(-np.abs(vals))
    reps = []
    unpaired = []
    used = np.zeros(len(vals), dtype=bool)
    for idx in order:
        if used[idx]:
            continue
        used[idx] = True
        v = vals[idx]
        target = -v
        best_j, best_d = -1, np.inf
        for j in order:
            if used[j]:
                continue
            d = abs(vals[j] - target)
            if d < best_d - 1e-15:
                best_j, best_d = j, d
            elif d <= best_d + 1e-15 and best_j >= 0 and abs(vals[j].imag) > abs(vals[best_j].imag):
                best_j, best_d = j, min(d, best_d)
        tol = PAIRING_TOL * max(1.0, abs(v))
        if best_j < 0 or best_d > tol:
            unpaired.append(v)
            continue
        used[best_j] = True
        w = vals[best_j]
        rep = v if v.real >= w.real else -w
        if rep.real < 0:
            rep = -rep
        reps.append(rep)
    if unpaired:
        raise PairingFailure(
            f"{len(unpaired)} eigenvalues lack a (-beta) partner within {PAIRING_TOL}",
            unpaired=unpaired,
        )
    beta = np.array(sorted(reps, key=lambda z: -z.real), dtype=complex)
    gap = float(max(2.0 * beta[-1].real, 0.0)) if len(beta) else 0.0
    return RapiditySpectrum(beta=beta, gap=gap)


def liouvillian_gap(spec: RapiditySpectrum) -> float:
    """Slowest relaxation rate Delta = 2 min_j Re beta_j (>= 0)."""
    return spec.gap


def gap_for_params(params: ModelParams, dense: bool = False) -> float:
    sm = build_structure_matrix_dense(params) if dense else build_structure_blocks_k(params)
    return liouvillian_gap(rapidities(sm))
