"""Brute-force dense oracle at tiny sizes.

Ground truth for everything else: Jordan-Wigner dense operators on the
2^L Fock space, RK4 integration of the full nonlinear master equation
(including the trace-preserving q<L^dag L> rho term, with trace
renormalization deliberately OFF so trace drift stays a diagnostic),
exact covariance extraction, and POVM trajectory sampling with biased
discarding. The boundary bond carries the same antiperiodic sign as the
momentum-space modules, so finite-L comparisons are exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import AllDiscarded, NotConverged
from .model import ModelParams

DENSE_L_MAX = 6


@dataclass
class DenseState:
    """Dense density matrix with validity diagnostics."""

    rho: np.ndarray
    trace_drift: float = 0.0
    residual: float = 0.0

    def check(self, tol: float = 1e-8):
        tr = complex(np.trace(self.rho))
        if abs(tr - 1.0) > tol:
            raise ValueError(f"trace deviates from 1 by {abs(tr - 1.0):.2e}")
        herm = float(np.max(np.abs(self.rho - self.rho.conj().T)))
        if herm > tol:
            raise ValueError(f"Hermiticity defect {herm:.2e}")
        w = np.linalg.eigvalsh(self.rho)
        if w.min() < -1e-10:
            raise ValueError(f"negative eigenvalue {w.min():.2e}")
        return self


@dataclass
class OracleConfig:
    """Integration and sampling knobs for the dense oracle."""

    dt: float | None = None
    T: float = 500.0
    tol: float = 1e-10
    n_traj: int = 1000
    seed: int = 1234

    def step_for(self, params: ModelParams) -> float:
        cap = 0.01 / max(params.gamma, 4.0 * (1.0 + abs(params.mu)))
        if self.dt is None:
            return cap
        if self.dt > cap + 1e-15:
            raise ValueError(f"dt={self.dt} exceeds stability cap {cap:.3e}")
        return self.dt

    def __post_init__(self):
        if self.n_traj < 1:
            raise ValueError("n_traj must be >= 1")


@dataclass
class DenseOperators:
    c: list[np.ndarray]
    w: list[np.ndarray]
    H: np.ndarray
    jump: list[np.ndarray]
    number: np.ndarray


def _kron_chain(ops: list[np.ndarray]) -> np.ndarray:
    out = np.array([[1.0 + 0j]])
    for o in ops:
        out = np.kron(out, o)
    return out


def build_dense_operators(params: ModelParams, boundary: str = "antiperiodic") -> DenseOperators:
    """Jordan-Wigner fermions, Majoranas, Hamiltonian and jump operators.

    boundary selects the sign of the wrap bond; "antiperiodic" (default)
    matches the momentum-space convention used project-wide.
    """
    L = params.L
    if L > DENSE_L_MAX:
        raise ValueError(f"dense oracle capped at L = {DENSE_L_MAX}")
    if boundary not in ("antiperiodic", "periodic"):
        raise ValueError("boundary must be 'antiperiodic' or 'periodic'")
    Z = np.diag([1.0, -1.0])
    lower = np.array([[0.0, 1.0], [0.0, 0.0]])
    eye = np.eye(2)
    c = [_kron_chain([Z] * j + [lower] + [eye] * (L - 1 - j)) for j in range(L)]
    w = []
    for j in range(L):
        w.append((c[j] + c[j].conj().T) / np.sqrt(2.0))
        w.append(-1j * (c[j] - c[j].conj().T) / np.sqrt(2.0))
    dim = 2**L
    H = np.zeros((dim, dim), dtype=complex)
    for j in range(L):
        jn = (j + 1) % L
        sign = -1.0 if (j == L - 1 and boundary == "antiperiodic") else 1.0
        H += -sign * (c[j].conj().T @ c[jn] + c[j].conj().T @ c[jn].conj().T)
    H = H + H.conj().T
    number = sum(c[j].conj().T @ c[j] for j in range(L))
    H = H + 2.0 * params.mu * number
    jump = [np.sqrt(params.gamma) * c[j] for j in range(L)]
    return DenseOperators(c=c, w=w, H=H, jump=jump, number=number)


def master_rhs(params: ModelParams, ops: DenseOperators, rho: np.ndarray) -> np.ndarray:
    """Full nonlinear generator including the q <L^dag L> rho term."""
    g, q = params.gamma, params.q
    out = -1j * (ops.H @ rho - rho @ ops.H)
    out -= 0.5 * g * (ops.number @ rho + rho @ ops.number)
    if q != 1.0:
        for Lj in ops.jump:
            out += (1.0 - q) * (Lj @ rho @ Lj.conj().T)
    if q != 0.0:
        # <L^dag L> is the expectation in the (normalized) state; dividing by
        # Tr rho keeps the trace-conservation manifold neutrally stable so the
        # drift stays a diagnostic rather than an exponential instability
        expect = float((np.trace(ops.number @ rho) / np.trace(rho)).real)
        out += q * g * expect * rho
    return out


def evolve_master_equation(
    params: ModelParams,
    cfg: OracleConfig | None = None,
    rho0: np.ndarray | None = None,
    require_stationary: bool = True,
) -> DenseState:
    """RK4 integration of the nonlinear master equation.

    With require_stationary (default) stops when ||d rho/dt||_max <
    cfg.tol and raises NotConverged if T is hit first; otherwise
    integrates exactly to T and returns the state there (for matched-
    time comparisons with trajectory ensembles). Trace renormalization
    is off: the nonlinear term must keep Tr rho = 1, and the recorded
    drift is a correctness diagnostic.
    """
    if cfg is None:
        cfg = OracleConfig()
    ops = build_dense_operators(params)
    dim = 2 ** params.L
    if rho0 is None:
        rho = np.zeros((dim, dim), dtype=complex)
        rho[0, 0] = 1.0  # vacuum (index 0 = all sites empty in the JW basis)
    else:
        rho = np.array(rho0, dtype=complex)
    dt = cfg.step_for(params)
    n_steps = int(np.ceil(cfg.T / dt))
    drift = 0.0
    check_every = 50
    resid = np.inf
    done = 0
    while done < n_steps:
        for _ in range(min(check_every, n_steps - done)):
            k1 = master_rhs(params, ops, rho)
            k2 = master_rhs(params, ops, rho + 0.5 * dt * k1)
            k3 = master_rhs(params, ops, rho + 0.5 * dt * k2)
            k4 = master_rhs(params, ops, rho + dt * k3)
            rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            done += 1
        drift = max(drift, abs(complex(np.trace(rho)) - 1.0))
        if require_stationary:
            resid = float(np.max(np.abs(master_rhs(params, ops, rho))))
            if resid < cfg.tol:
                return DenseState(rho=rho, trace_drift=drift, residual=resid)
    resid = float(np.max(np.abs(master_rhs(params, ops, rho))))
    if require_stationary and resid >= cfg.tol:
        raise NotConverged(
            f"master equation at T={cfg.T} with residual {resid:.3e} (trace drift {drift:.1e})",
            residual=resid,
        )
    return DenseState(rho=rho, trace_drift=drift, residual=resid)


def covariance_from_density(state: DenseState | np.ndarray, params: ModelParams) -> np.ndarray:
    """Gamma_ab = (i/2) Tr(rho [w_a, w_b]); real antisymmetric 2L x 2L."""
    rho = state.rho if isinstance(state, DenseState) else np.asarray(state)
    ops = build_dense_operators(params)
    n = 2 * params.L
    out = np.zeros((n, n))
    for a in range(n):
        for b in range(a + 1, n):
            comm = ops.w[a] @ ops.w[b] - ops.w[b] @ ops.w[a]
            val = 0.5j * complex(np.trace(rho @ comm))
            if abs(val.imag) > 1e-10:
                raise ValueError(f"covariance entry ({a},{b}) has imaginary part {val.imag:.2e}")
            out[a, b] = val.real
            out[b, a] = -val.real
    return out


@dataclass
class TrajectoryResult:
    """Surviving-trajectory ensemble covariance with per-entry stderr."""

    mean_cov: np.ndarray
    stderr: np.ndarray
    n_surviving: int
    n_traj: int
    seed: int
    mode: str = "discard"


def sample_trajectories(
    params: ModelParams,
    cfg: OracleConfig | None = None,
    T: float | None = None,
    mode: str = "discard",
) -> TrajectoryResult:
    """POVM trajectory sampling with biased discarding.

    Per step and site the click probability is p = dt gamma <n_j>; a
    click applies the jump, and with probability q the trajectory is
    dropped (mode="discard") or flagged as detected and excluded from
    the final ensemble (mode="postselect" - the undetected-click-mixing
    interpretation; statistically identical). No-click evolution applies
    exp[(-iH - gamma N/2) dt] and renormalizes. Returns the ensemble
    covariance over survivors with standard errors.
    """
    if cfg is None:
        cfg = OracleConfig()
    if mode not in ("discard", "postselect"):
        raise ValueError("mode must be 'discard' or 'postselect'")
    if params.L > 4:
        raise ValueError("trajectory sampling capped at L = 4")
    ops = build_dense_operators(params)
    rng = np.random.Generator(np.random.Philox(cfg.seed))
    dim = 2 ** params.L
    n_traj = cfg.n_traj
    dt = cfg.step_for(params)
    horizon = cfg.T if T is None else T
    n_steps = int(np.ceil(horizon / dt))
    K0 = scipy.linalg.expm((-1j * ops.H - 0.5 * params.gamma * ops.number) * dt)
    K0T = K0.T.copy()
    n_diag = [np.real(np.diag(ops.c[j].conj().T @ ops.c[j])) for j in range(params.L)]
    psi = np.zeros((n_traj, dim), dtype=complex)
    psi[:, 0] = 1.0  # vacuum start
    included = np.ones(n_traj, dtype=bool)
    for _ in range(n_steps):
        for j in range(params.L):
            occ = np.einsum("td,d,td->t", psi.conj(), n_diag[j], psi).real
            p_click = dt * params.gamma * np.clip(occ, 0.0, None)
            clicked = rng.random(n_traj) < p_click
            if mode == "discard":
                clicked &= included  # dropped trajectories stop evolving
            if clicked.any():
                detected = rng.random(n_traj) < params.q
                included &= ~(clicked & detected)
                # postselect keeps evolving excluded trajectories (the physical
                # trajectory continues; only the conditional ensemble drops it)
                do_jump = clicked & included if mode == "discard" else clicked
                idx = np.flatnonzero(do_jump)
                if idx.size:
                    jumped = psi[idx] @ (np.sqrt(params.gamma) * ops.c[j]).T
                    norms = np.linalg.norm(jumped, axis=1, keepdims=True)
                    good = norms[:, 0] > 1e-300
                    psi[idx[good]] = jumped[good] / norms[good]
        psi = psi @ K0T
        norms = np.linalg.norm(psi, axis=1, keepdims=True)
        psi = psi / np.where(norms > 1e-300, norms, 1.0)
    survivors = np.flatnonzero(included)
    if survivors.size == 0:
        raise AllDiscarded(f"all {n_traj} trajectories discarded; raise n_traj or shorten T")
    n2 = 2 * params.L
    covs = np.zeros((survivors.size, n2, n2))
    comms = {}
    for a in range(n2):
        for b in range(a + 1, n2):
            comms[(a, b)] = 0.5j * (ops.w[a] @ ops.w[b] - ops.w[b] @ ops.w[a])
    sel = psi[survivors]
    for (a, b), op in comms.items():
        vals = np.einsum("td,de,te->t", sel.conj(), op, sel).real
        covs[:, a, b] = vals
        covs[:, b, a] = -vals
    mean = covs.mean(axis=0)
    stderr = covs.std(axis=0, ddof=1) / np.sqrt(survivors.size) if survivors.size > 1 else np.full(
        (n2, n2), np.inf
    )
    return TrajectoryResult(
        mean_cov=mean,
        stderr=stderr,
        n_surviving=int(survivors.size),
        n_traj=n_traj,
        seed=cfg.seed,
        mode=mode,
    )
