"""Fermionic entanglement negativity of the Gaussian steady state.

For a contiguous block A of length ell against the rest of the chain,
the logarithmic negativity of the twisted partial transpose follows from
the normalized covariance G = 2*Gamma (pure states have G^2 = -1):

    G(+-) = [[-G_AA, +-i G_AB], [+-i G_BA, G_BB]]
    Gx    = (1 - G+ G-)^{-1} (G+ + G-),  eigenvalues +-i nu_j

    N = sum_j ln[ sqrt((1+nu_j)/2) + sqrt((1-nu_j)/2) ]
      + (1/2) sum_j ln[ ((1+mu_j)/2)^2 + ((1-mu_j)/2)^2 ]

with +-i mu_j the eigenvalues of G; both sums run over the L pair
indices. Note the minus sign in the composite's denominator: G+ G- =
-1 identically for pure states, so the (1 + G+ G-) variant seen in
parts of the literature is singular exactly where Fig.-4-type scans
need it most. Numerically the composite is evaluated in the Hermitian
occupation form

    O(+-) = (1 + i G(+-))/2,   O+^dag = O-
    K = O- [O+ O- + (1-O+)(1-O-)]^{-1} O+   (Hermitian)

whose spectrum {g_j} = {(1 +- nu_j)/2}; the first sum equals
(1/4) sum ln(1 + 2 sqrt(g(1-g))) over the full spectrum. Defect
eigenvalues g(1-g) below a small floor are structural zeros (nu = 1)
polluted by round-off and are truncated, which is what makes the q = 1
pure-state identity N = S_{1/2}(A) hold to ~1e-9.

The convention is pinned operationally by two oracles: the q = 1
Renyi-1/2 identity and the L = 4 dense master-equation steady state.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedComposite
from .model import ModelParams
from .spatial import RealSpaceCorrelations, correlations_real_space

#: eigenvalues may stick out of [0, 1] by round-off before clamping
CLAMP_TOL = 1e-8
#: defect eigenvalues g(1-g) below this are structural zeros plus noise
DEFECT_FLOOR = 1e-12


@dataclass
class NegativityResult:
    ell: int
    chord: float
    mu_spectrum: np.ndarray
    nu_spectrum: np.ndarray
    value: float


def _cov_matrix(corr) -> np.ndarray:
    if isinstance(corr, RealSpaceCorrelations):
        return corr.full_matrix()
    return np.asarray(corr)


def _pairs_antisym(G: np.ndarray, label: str) -> np.ndarray:
    """Positive mu_j of a real antisymmetric matrix with +-i mu_j spectrum."""
    w = np.linalg.eigvalsh(1j * (G + 0j))
    n = len(w) // 2
    mism = np.max(np.abs(w[:n] + w[::-1][:n]))
    if mism > 1e-8:
        raise ValueError(f"{label} spectrum does not come in +- pairs (mismatch {mism:.2e})")
    pos = w[n:][::-1].copy()
    if np.max(pos) > 1.0 + CLAMP_TOL:
        raise ValueError(f"{label} eigenvalue {np.max(pos):.12f} exceeds 1 beyond tolerance")
    return np.clip(pos, 0.0, 1.0)


def _log_sum_from_defects(lam: np.ndarray) -> float:
    """sum over pairs of ln(sqrt(g) + sqrt(1-g)) from the g(1-g) spectrum.

    lam holds each pair's defect twice; ln(sqrt(g)+sqrt(1-g)) =
    (1/2) ln(1 + 2 sqrt(g(1-g))).
    """
    lam = np.where(lam < DEFECT_FLOOR, 0.0, lam)
    return 0.25 * float(np.sum(np.log1p(2.0 * np.sqrt(lam))))


def chord_length(L: int, ell: int) -> float:
    """Finite-size conformal distance (L/pi) sin(pi ell / L)."""
    return (L / np.pi) * np.sin(np.pi * ell / L)


def _twisted_blocks(G: np.ndarray, ell: int):
    n2 = G.shape[0]
    a = 2 * ell
    Gp = np.empty((n2, n2), dtype=complex)
    Gm = np.empty((n2, n2), dtype=complex)
    for Gx, s in ((Gp, 1j), (Gm, -1j)):
        Gx[:a, :a] = -G[:a, :a]
        Gx[:a, a:] = s * G[:a, a:]
        Gx[a:, :a] = s * G[a:, :a]
        Gx[a:, a:] = G[a:, a:]
    return Gp, Gm


def composite_matrix(corr, ell: int) -> np.ndarray:
    """The composite Gx = (1 - G+ G-)^{-1}(G+ + G-), eigenvalues +-i nu_j."""
    G = 2.0 * _cov_matrix(corr)
    Gp, Gm = _twisted_blocks(G, ell)
    n2 = G.shape[0]
    comp = np.eye(n2) - Gp @ Gm
    cond = np.linalg.cond(comp)
    if cond > 1e12:
        try:
            import scipy.linalg

            out = scipy.linalg.solve(comp, Gp + Gm)
        except Exception as exc:
            raise IllConditionedComposite(
                f"(1 - G+G-) condition number {cond:.2e}; pivoted solve failed"
            ) from exc
        if not np.all(np.isfinite(out)):
            raise IllConditionedComposite(f"(1 - G+G-) condition number {cond:.2e}: singular")
        return out
    return np.linalg.solve(comp, Gp + Gm)


def fermionic_negativity(corr, ell: int) -> NegativityResult:
    """Logarithmic negativity of block A = sites 0..ell-1.

    corr is a RealSpaceCorrelations or a raw 2L x 2L covariance Gamma.
    ell = 0 and ell = L return 0 by convention (empty bipartition).
    """
    Gam = _cov_matrix(corr)
    n2 = Gam.shape[0]
    L = n2 // 2
    if not (0 <= ell <= L):
        raise ValueError(f"ell must lie in [0, {L}], got {ell}")
    G = 2.0 * Gam
    mu = _pairs_antisym(G, "mu")
    if ell in (0, L):
        return NegativityResult(
            ell=ell,
            chord=chord_length(L, ell),
            mu_spectrum=mu,
            nu_spectrum=np.array([]),
            value=0.0,
        )
    Gp, Gm = _twisted_blocks(G, ell)
    eye = np.eye(n2)
    Op = 0.5 * (eye + 1j * Gp)
    Om = 0.5 * (eye + 1j * Gm)
    D = Op @ Om + (eye - Op) @ (eye - Om)  # = (1 - G+ G-)/2, Hermitian
    cond = float(np.linalg.cond(D))
    if cond > 1e12:
        raise IllConditionedComposite(f"occupation denominator condition number {cond:.2e}")
    K = Om @ np.linalg.solve(D, Op)
    K = 0.5 * (K + K.conj().T)
    lam = np.linalg.eigvalsh(K @ (eye - K))
    term1 = _log_sum_from_defects(lam)
    lam_nu = np.where(lam < DEFECT_FLOOR, 0.0, np.clip(lam, 0.0, 0.25))
    nu = np.sqrt(1.0 - 4.0 * np.sort(lam_nu)[::2])  # one defect per pair
    nu = np.sort(np.clip(nu, 0.0, 1.0))[::-1]
    term2 = 0.5 * float(np.sum(np.log(((1.0 + mu) / 2.0) ** 2 + ((1.0 - mu) / 2.0) ** 2)))
    return NegativityResult(
        ell=ell,
        chord=chord_length(L, ell),
        mu_spectrum=mu,
        nu_spectrum=nu,
        value=term1 + term2,
    )


def renyi_half_entropy(corr, ell: int) -> float:
    """Renyi-1/2 entropy of block A from the subsystem covariance spectrum.

    Independent oracle for the q = 1 pure steady state, where the
    negativity must equal S_{1/2} = 2 sum_j ln(sqrt(p_j) + sqrt(1-p_j)),
    p_j = (1 + mu_j^A)/2. Evaluated through the same defect form
    P(1-P), P = (1 + 2i Gamma_AA)/2, for numerical parity with the
    negativity route.
    """
    Gam = _cov_matrix(corr)
    if ell == 0 or 2 * ell == Gam.shape[0]:
        return 0.0
    GA = 2.0 * Gam[: 2 * ell, : 2 * ell]
    eye = np.eye(2 * ell)
    P = 0.5 * (eye + 1j * (GA + 0j))
    lam = np.linalg.eigvalsh(P @ (eye - P))
    return 2.0 * _log_sum_from_defects(lam)


def default_ell_grid(L: int) -> list[int]:
    """Powers of two up to L/2, plus L/2."""
    out = []
    ell = 1
    while ell <= L // 2:
        out.append(ell)
        ell *= 2
    if L // 2 not in out:
        out.append(L // 2)
    return out


def negativity_profile(
    params: ModelParams, ell_list: list[int] | None = None
) -> list[NegativityResult]:
    """Negativity at each ell from a single steady-state solve."""
    corr = correlations_real_space(params)
    if ell_list is None:
        ell_list = default_ell_grid(params.L)
    if any(ell < 0 or ell > params.L for ell in ell_list):
        raise ValueError("ell values must lie in [0, L]")
    Gam = corr.full_matrix()
    return [fermionic_negativity(Gam, ell) for ell in ell_list]
