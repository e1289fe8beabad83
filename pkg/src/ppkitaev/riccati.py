"""Per-momentum steady-state Riccati solvers.

The stationary covariance of each k-mode solves the 2x2 algebraic
Riccati equation

    X(k) G + G X^T(-k) + Y(k) + G Z(k) G = 0.

Three independent routes are provided and cross-validated:

  * solve_closed_form : the analytic minus-branch solution (A, a, b)
  * solve_eigen       : 4x4 block-matrix eigenvector construction with
                        all six candidates and physicality filters
  * solve_lyapunov    : q = 0, where the quadratic term vanishes
  * integrate_flow    : RK4 time integration of the covariance flow,
                        the dynamical tie-breaking oracle

Branch selection: among the candidates that are anti-Hermitian with
G_11 = -G_22, the physical one is the stabilizing solution (spectrum of
X + G Z in the open left half-plane); flow integration confirms it is
the attractor.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateEigenbasis,
    DegenerateMomentum,
    NoPhysicalSolution,
    NotConverged,
    SingularLyapunov,
    ZeroQ,
)
from .model import ModelParams, build_xyz, ris

SQRT2 = np.sqrt(2.0)

#: closed form falls back to the eigen route below these
DEGENERACY_TOL = 1e-8
#: anti-Hermiticity / traceless acceptance in the eigen filter
CONSTRAINT_TOL = 1e-7
#: stationarity target of the flow integrator
FLOW_TOL = 1e-10


@dataclass
class GammaK:
    """Steady-state covariance of one k-mode.

    matrix is authoritative; (A, a, b) is the traceless anti-Hermitian
    parameterization G = iA [[1, a+ib], [a-ib, -1]], stored as None when
    it is singular (A -> 0 with finite products, e.g. k = 0, pi).
    """

    k: complex
    A: complex | None
    a: complex | None
    b: complex | None
    matrix: np.ndarray


@dataclass
class Candidate:
    pair: tuple[int, int]
    matrix: np.ndarray
    antiherm_defect: float
    traceless_defect: float
    max_re_closed_loop: float
    residual: float
    physical: bool = False


@dataclass
class CandidateSet:
    """All eigenvector-pair solutions of the ARE at one momentum."""

    k: complex
    Q: np.ndarray
    eigenvalues: np.ndarray
    candidates: list[Candidate] = field(default_factory=list)


def _gamma_from_matrix(k: complex, G: np.ndarray) -> GammaK:
    A = G[0, 0] / 1j
    scale = np.max(np.abs(G))
    if scale > 0 and abs(A) > 1e-12 * scale:
        w = G[0, 1] / (1j * A)
        v = G[1, 0] / (1j * A)
        a = (w + v) / 2.0
        b = (w - v) / 2.0j
        if abs(np.imag(k)) == 0:
            # physical real-k solutions have real parameters
            if max(abs(np.imag(A)), abs(np.imag(a)), abs(np.imag(b))) < 1e-7 * max(1.0, abs(A)):
                A, a, b = A.real, a.real, b.real
        return GammaK(k=k, A=A, a=a, b=b, matrix=G)
    return GammaK(k=k, A=None, a=None, b=None, matrix=G)


def residual(params: ModelParams, k: complex, G: np.ndarray) -> float:
    """Max-entry magnitude of X G + G X^T(-k) + Y + G Z G."""
    km = build_xyz(params, k)
    Xm = build_xyz(params, -k).Xk
    E = km.Xk @ G + G @ Xm.T + km.Yk + G @ km.Zk @ G
    return float(np.max(np.abs(E)))


def closed_form_entries(params: ModelParams, k, backend: str | None = None) -> np.ndarray:
    """Minus-branch covariance in cancellation-free product form.

    Accepts scalar or array momenta; returns (..., 2, 2) complex. Wraps
    the _core kernel (compiled when built, numpy otherwise), which uses
    A   = I [den - sqrt(2)(1-q) gamma sq] / (q gamma (den + 8R^2)),
    A*a = 2 I R [2(1-q) gamma - sqrt(2) sq] / (q gamma (den + 8R^2)),
    A*b = [sq - sqrt(2)(1-q) gamma] / (2 sqrt(2) q gamma),
    with den = gamma^2 - 4(R^2+I^2) + S, sq = sqrt(den): no removable
    0/0 at I = 0 or R = 0; the only true singularities are the branch
    cuts of the principal square roots (plus den + 8R^2 = 0).
    """
    from . import _core

    if params.q <= 0:
        raise ZeroQ("closed form undefined at q = 0; use solve_lyapunov")
    karr = np.asarray(k, dtype=complex)
    e = _core.gamma_minus(params.mu, params.gamma, params.q, karr, backend=backend)
    out = np.empty(karr.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = e[..., 0]
    out[..., 0, 1] = e[..., 1]
    out[..., 1, 0] = e[..., 2]
    out[..., 1, 1] = -e[..., 0]
    return out


def solve_closed_form(params: ModelParams, k: complex) -> GammaK:
    """Analytic minus-branch solution via the paper parameterization.

    a_- = -2 sqrt(2) R / sqrt(gamma^2 - 4(R^2+I^2) + S)
    b_- = -((1 + a^2)/a)(R/I)
    A_- = ((1-q) gamma a + 2R) I / (2 q gamma (1 + a^2) R)

    Raises ZeroQ at q = 0 and DegenerateMomentum when |I|, |R| or |a_-|
    is below tolerance (removable 0/0; callers fall back to solve_eigen).
    """
    if params.q <= 0:
        raise ZeroQ("closed form undefined at q = 0; use solve_lyapunov")
    g, q = params.gamma, params.q
    t = ris(params, k)
    R, I, S = t.R, t.I, t.S
    scale = max(1.0, abs(R), abs(I))
    if abs(I) < DEGENERACY_TOL * scale or abs(R) < DEGENERACY_TOL * scale:
        raise DegenerateMomentum(f"k={k}: |R|={abs(R):.2e}, |I|={abs(I):.2e}")
    den = g * g - 4.0 * (R * R + I * I) + S
    sq = np.sqrt(complex(den))
    if abs(sq) < DEGENERACY_TOL:
        raise DegenerateMomentum(f"k={k}: branch denominator {abs(den):.2e}")
    a = -2.0 * SQRT2 * R / sq
    if abs(a) < DEGENERACY_TOL:
        raise DegenerateMomentum(f"k={k}: |a_-|={abs(a):.2e}")
    b = -((1.0 + a * a) / a) * (R / I)
    A = ((1.0 - q) * g * a + 2.0 * R) * I / (2.0 * q * g * (1.0 + a * a) * R)
    if np.imag(k) == 0:
        if max(abs(np.imag(A)), abs(np.imag(a)), abs(np.imag(b))) < 1e-9 * max(1.0, abs(A)):
            A, a, b = np.real(A), np.real(a), np.real(b)
    G = 1j * A * np.array([[1.0, a + 1j * b], [a - 1j * b, -1.0]], dtype=complex)
    return GammaK(k=k, A=A, a=a, b=b, matrix=G)


def solve_eigen(params: ModelParams, k: complex) -> tuple[GammaK, CandidateSet]:
    """All six eigenvector-pair ARE solutions plus the physical one.

    Builds Q = [[X^T(-k), Z], [-Y, -X]], forms G = W21 W11^{-1} for every
    2-subset of eigenvectors, filters by (i) anti-Hermiticity,
    (ii) G_11 = -G_22, (iii) stability of X + G Z, and returns the
    unique survivor. Ties on (iii) (marginal momenta) resolve to the
    most stable candidate among those passing (i)+(ii).
    """
    km = build_xyz(params, k)
    Xm = build_xyz(params, -k).Xk
    Q = np.block([[Xm.T, km.Zk], [-km.Yk, -km.Xk]])
    lam, W = np.linalg.eig(Q)
    cset = CandidateSet(k=k, Q=Q, eigenvalues=lam)
    n_singular = 0
    for pair in itertools.combinations(range(4), 2):
        W11 = W[:2, list(pair)]
        W21 = W[2:, list(pair)]
        if abs(np.linalg.det(W11)) < 1e-12:
            n_singular += 1
            continue
        G = W21 @ np.linalg.inv(W11)
        scale = max(1.0, float(np.max(np.abs(G))))
        anti = float(np.max(np.abs(G + G.conj().T))) / scale
        trless = float(abs(G[0, 0] + G[1, 1])) / scale
        closed_loop = km.Xk + G @ km.Zk
        max_re = float(np.max(np.linalg.eigvals(closed_loop).real))
        cset.candidates.append(
            Candidate(
                pair=pair,
                matrix=G,
                antiherm_defect=anti,
                traceless_defect=trless,
                max_re_closed_loop=max_re,
                residual=residual(params, k, G),
            )
        )
    if not cset.candidates:
        raise DegenerateEigenbasis(f"k={k}: W11 singular for all eigenvector pairs")
    if abs(np.imag(k)) == 0:
        admissible = [
            c
            for c in cset.candidates
            if c.antiherm_defect < CONSTRAINT_TOL and c.traceless_defect < CONSTRAINT_TOL
        ]
    else:
        # analytic continuation: anti-Hermiticity only holds on the real axis
        admissible = [c for c in cset.candidates if c.traceless_defect < CONSTRAINT_TOL]
    if not admissible:
        diag = [
            (c.pair, c.antiherm_defect, c.traceless_defect, c.max_re_closed_loop, c.residual)
            for c in cset.candidates
        ]
        raise NoPhysicalSolution(
            f"k={k}: no candidate passed the physicality filters", diagnostics=diag
        )
    stable = [c for c in admissible if c.max_re_closed_loop < 0.0]
    chosen = min(stable or admissible, key=lambda c: c.max_re_closed_loop)
    chosen.physical = True
    return _gamma_from_matrix(k, chosen.matrix), cset


def solve_lyapunov(params: ModelParams, k: float) -> GammaK:
    """q = 0 steady state: X G + G X^T(-k) + Y = 0 as a 4x4 linear solve.

    Unique because X carries the strictly negative damping -gamma/2 on
    the diagonal; SingularLyapunov at gamma = 0 flags the undamped case.
    """
    if params.q != 0:
        raise ValueError("solve_lyapunov applies at q = 0 only")
    if params.gamma == 0:
        raise SingularLyapunov("gamma = 0 with q = 0: steady state not unique")
    km = build_xyz(params, k)
    Xm = build_xyz(params, -k).Xk
    # row-major vec: vec(X G) = (X kron 1) vec(G), vec(G X(-k)^T) = (1 kron X(-k)) vec(G)
    eye = np.eye(2)
    op = np.kron(km.Xk, eye) + np.kron(eye, Xm)
    vec = np.linalg.solve(op, -km.Yk.reshape(4))
    G = vec.reshape(2, 2)
    return _gamma_from_matrix(k, G)


def flow_derivative(params: ModelParams, k: complex, G: np.ndarray) -> np.ndarray:
    """Right-hand side of the covariance flow dG/dt = X G + G X^T(-k) + Y + G Z G."""
    km = build_xyz(params, k)
    Xm = build_xyz(params, -k).Xk
    return km.Xk @ G + G @ Xm.T + km.Yk + G @ km.Zk @ G


def default_dt(params: ModelParams) -> float:
    """RK4 step resolving the fastest scale in X."""
    return 0.01 / max(params.gamma, 4.0 * (1.0 + abs(params.mu)))


def integrate_flow(
    params: ModelParams,
    k: float,
    G0: np.ndarray,
    T: float = 200.0,
    dt: float | None = None,
    tol: float = FLOW_TOL,
) -> GammaK:
    """RK4 integration of the covariance flow to its fixed point.

    Stops when ||dG/dt||_max < tol; raises NotConverged (with the final
    residual) if the horizon T is reached first. The fixed point is the
    branch selected by solve_eigen: this is the dynamical justification
    of the stability filter.
    """
    if dt is None:
        dt = default_dt(params)
    G = np.array(G0, dtype=complex)
    if G.shape != (2, 2):
        raise ValueError("G0 must be 2x2")
    km = build_xyz(params, k)
    X, Y, Z = km.Xk, km.Yk, km.Zk
    XmT = build_xyz(params, -k).Xk.T.copy()

    def rhs(M):
        return X @ M + M @ XmT + Y + M @ Z @ M

    t = 0.0
    steps_per_check = 25
    while t < T:
        for _ in range(steps_per_check):
            k1 = rhs(G)
            k2 = rhs(G + 0.5 * dt * k1)
            k3 = rhs(G + 0.5 * dt * k2)
            k4 = rhs(G + dt * k3)
            G = G + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            t += dt
            if t >= T:
                break
        r = float(np.max(np.abs(rhs(G))))
        if r < tol:
            return _gamma_from_matrix(k, G)
    raise NotConverged(f"flow at k={k} reached T={T} with residual {r:.3e}", residual=r)


def steady_gamma(params: ModelParams, k: complex) -> GammaK:
    """Physical steady-state mode covariance with automatic routing.

    q = 0 -> Lyapunov; otherwise the closed form, falling back to the
    eigenvector route at degenerate momenta.
    """
    if params.q == 0:
        return solve_lyapunov(params, k)
    try:
        return solve_closed_form(params, k)
    except DegenerateMomentum:
        return solve_eigen(params, k)[0]
