import numpy as np
import pytest

from ppkitaev.errors import AllDiscarded, NotConverged
from ppkitaev.model import ModelParams
from ppkitaev.oracle import (
    DenseState,
    OracleConfig,
    build_dense_operators,
    covariance_from_density,
    evolve_master_equation,
    master_rhs,
    sample_trajectories,
)
from ppkitaev.spatial import correlations_real_space

P2 = ModelParams(mu=0.4, gamma=1.0, q=0.5, L=2)


def test_anticommutators_exact():
    ops = build_dense_operators(P2)
    eye = np.eye(2**P2.L)
    for i, ci in enumerate(ops.c):
        for j, cj in enumerate(ops.c):
            assert np.array_equal(ci @ cj + cj @ ci, np.zeros_like(ci))
            target = eye if i == j else np.zeros_like(ci)
            assert np.max(np.abs(ci @ cj.conj().T + cj.conj().T @ ci - target)) == 0.0
    for a, wa in enumerate(ops.w):
        for b, wb in enumerate(ops.w):
            target = eye if a == b else 0.0 * eye
            assert np.max(np.abs(wa @ wb + wb @ wa - target)) < 1e-14


def test_hamiltonian_hermitian_and_vacuum():
    ops = build_dense_operators(P2)
    assert np.max(np.abs(ops.H - ops.H.conj().T)) < 1e-14
    vac = np.zeros(4)
    vac[0] = 1.0
    for Lj in ops.jump:
        assert abs(vac @ (Lj.conj().T @ Lj) @ vac) == 0.0


def test_large_mu_ground_state_is_vacuum_like():
    p = ModelParams(mu=8.0, gamma=0.0, q=0.5, L=2)
    ops = build_dense_operators(p)
    w, v = np.linalg.eigh(ops.H)
    ground = v[:, 0]
    occ = abs(ground[0]) ** 2  # weight on the empty state
    assert occ > 0.95


def test_vacuum_covariance_blocks():
    vac = np.zeros((4, 4), dtype=complex)
    vac[0, 0] = 1.0
    G = covariance_from_density(vac, P2)
    blk = np.array([[0.0, -0.5], [0.5, 0.0]])
    assert np.allclose(G[:2, :2], blk)
    assert np.allclose(G[2:, 2:], blk)
    assert np.max(np.abs(G + G.T)) == 0.0


def test_maximally_mixed_covariance_vanishes():
    rho = np.eye(4, dtype=complex) / 4.0
    assert np.max(np.abs(covariance_from_density(rho, P2))) < 1e-14


def test_pure_gaussian_purity_identity():
    p1 = ModelParams(mu=0.4, gamma=1.0, q=1.0, L=2)
    st = evolve_master_equation(p1, OracleConfig(T=500.0))
    G = covariance_from_density(st, p1)
    assert np.max(np.abs((2 * G) @ (2 * G) + np.eye(4))) < 1e-8


def test_q1_steady_state_pure():
    p1 = ModelParams(mu=0.4, gamma=1.0, q=1.0, L=2)
    st = evolve_master_equation(p1, OracleConfig(T=500.0))
    st.check()
    w = np.linalg.eigvalsh(st.rho)
    assert w[-1] > 1 - 1e-6
    assert st.trace_drift < 1e-8


def test_q0_matches_lindblad_nullspace():
    p0 = ModelParams(mu=0.4, gamma=1.0, q=0.0, L=2)
    st = evolve_master_equation(p0, OracleConfig(T=500.0))
    ops = build_dense_operators(p0)
    eye = np.eye(4)
    sup = -1j * (np.kron(ops.H, eye) - np.kron(eye, ops.H.T))
    for Lj in ops.jump:
        nj = Lj.conj().T @ Lj
        sup += np.kron(Lj, Lj.conj()) - 0.5 * (np.kron(nj, eye) + np.kron(eye, nj.T))
    w, v = np.linalg.eig(sup)
    rho_ness = v[:, np.argmin(np.abs(w))].reshape(4, 4)
    rho_ness = rho_ness / np.trace(rho_ness)
    assert np.max(np.abs(st.rho - rho_ness)) < 1e-8


def test_trace_preserved_across_parameters():
    for q in (0.0, 0.3, 0.7, 1.0):
        p = ModelParams(mu=0.4, gamma=1.0, q=q, L=2)
        st = evolve_master_equation(p, OracleConfig(T=500.0))
        assert st.trace_drift < 1e-8


def test_not_converged():
    with pytest.raises(NotConverged) as exc:
        evolve_master_equation(P2, OracleConfig(T=0.5))
    assert exc.value.residual > 0


def test_dt_cap_enforced():
    with pytest.raises(ValueError):
        OracleConfig(dt=1.0).step_for(P2)
    with pytest.raises(ValueError):
        OracleConfig(n_traj=0)


def test_central_cross_validation_l4():
    p = ModelParams(mu=0.4, gamma=1.0, q=0.5, L=4)
    st = evolve_master_equation(p, OracleConfig(T=500.0))
    G_dense = covariance_from_density(st, p)
    G_are = correlations_real_space(p).full_matrix()
    assert np.max(np.abs(G_dense - G_are)) < 1e-6


def test_trajectories_match_master_equation():
    cfg = OracleConfig(n_traj=4000, seed=7)
    res = sample_trajectories(P2, cfg, T=10.0)
    st = evolve_master_equation(P2, OracleConfig(T=500.0))
    G = covariance_from_density(st, P2)
    sig = np.where(res.stderr > 0, res.stderr, np.inf)
    assert res.n_surviving > 20
    assert np.max(np.abs(res.mean_cov - G) / sig) < 3.0


def test_trajectories_q0_unbiased():
    p0 = ModelParams(mu=0.4, gamma=1.0, q=0.0, L=2)
    res = sample_trajectories(p0, OracleConfig(n_traj=2000, seed=3), T=10.0)
    assert res.n_surviving == 2000  # q=0 never discards
    st = evolve_master_equation(p0, OracleConfig(T=500.0))
    G = covariance_from_density(st, p0)
    sig = np.where(res.stderr > 0, res.stderr, np.inf)
    assert np.max(np.abs(res.mean_cov - G) / sig) < 3.5


def test_trajectories_q1_deterministic_no_click():
    p1 = ModelParams(mu=0.4, gamma=1.0, q=1.0, L=2)
    T = 5.0
    res = sample_trajectories(p1, OracleConfig(n_traj=800, seed=5), T=T)
    # every click kills: survivors all followed the unique no-click path,
    # so the ensemble is deterministic and matches the nonlinear equation
    # at the same finite time
    assert res.n_surviving > 3
    assert np.max(res.stderr[np.isfinite(res.stderr)]) < 1e-10
    st = evolve_master_equation(p1, OracleConfig(T=T), require_stationary=False)
    G = covariance_from_density(st, p1)
    assert np.max(np.abs(res.mean_cov - G)) < 5e-3  # O(dt) Trotter bias


def test_both_interpretations_agree():
    a = sample_trajectories(P2, OracleConfig(n_traj=3000, seed=11), T=8.0, mode="discard")
    b = sample_trajectories(P2, OracleConfig(n_traj=3000, seed=12), T=8.0, mode="postselect")
    comb = np.sqrt(a.stderr**2 + b.stderr**2)
    sig = np.where(comb > 0, comb, np.inf)
    assert np.max(np.abs(a.mean_cov - b.mean_cov) / sig) < 3.5


def test_all_discarded():
    p = ModelParams(mu=0.4, gamma=4.0, q=1.0, L=2)
    # seed a strongly-occupied initial? vacuum still clicks eventually at long T
    with pytest.raises(AllDiscarded):
        sample_trajectories(p, OracleConfig(n_traj=3, seed=2), T=200.0)


def test_finite_dt_bias_shrinks():
    """Halving dt must not move the trajectory mean beyond the statistics."""
    cfg_a = OracleConfig(n_traj=1500, seed=21)
    cfg_b = OracleConfig(n_traj=1500, seed=22, dt=0.5 * cfg_a.step_for(P2))
    a = sample_trajectories(P2, cfg_a, T=8.0)
    b = sample_trajectories(P2, cfg_b, T=8.0)
    comb = np.sqrt(a.stderr**2 + b.stderr**2)
    sig = np.where(comb > 0, comb, np.inf)
    assert np.max(np.abs(a.mean_cov - b.mean_cov) / sig) < 3.5


def test_dense_state_check_flags_bad_rho():
    bad = DenseState(rho=np.diag([0.7, 0.2, 0.05, 0.0]).astype(complex) * 1.2)
    with pytest.raises(ValueError):
        bad.check()
