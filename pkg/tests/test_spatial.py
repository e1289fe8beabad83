import numpy as np
import pytest

from ppkitaev.errors import EmptyScan, FitFailed
from ppkitaev.model import ModelParams, gamma_c
from ppkitaev.spatial import (
    RealSpaceCorrelations,
    correlations_real_space,
    fit_correlation_length,
    lyapunov_pole_seeds,
    scan_singularities,
    seed_candidates,
    xi_up_asymptote,
    xi_upper_bound,
)


def test_reality_and_antisymmetry():
    p = ModelParams(mu=0.4, gamma=1.0, q=0.5, L=64)
    corr = correlations_real_space(p)
    assert corr.blocks.shape == (64, 2, 2)
    assert abs(corr.blocks[0, 0, 0]) < 1e-12
    assert abs(corr.blocks[0, 1, 1]) < 1e-12
    M = corr.full_matrix()
    assert np.max(np.abs(M + M.T)) < 1e-12
    # Gamma_{mu nu}(x) = -Gamma_{nu mu}(-x) with antiperiodic wrap
    for x in range(1, p.L):
        assert np.allclose(corr.blocks[x], corr.blocks[p.L - x].T, atol=1e-12)


def test_rejects_undamped_lindblad():
    with pytest.raises(ValueError):
        correlations_real_space(ModelParams(mu=0.4, gamma=0.0, q=0.0, L=8))


def test_critical_profile_is_long_ranged():
    p = ModelParams(mu=0.4, gamma=1.0, q=1.0, L=2048)
    corr = correlations_real_space(p)
    fit = fit_correlation_length(corr)
    assert fit.alpha > 0
    assert fit.xi > 10 * p.L  # effectively infinite: algebraic decay


def test_fit_recovers_synthetic_model():
    L = 512
    x = np.arange(L)
    blocks = np.zeros((L, 2, 2))
    blocks[1:, 0, 1] = 0.7 * np.exp(-x[1:] / 5.0) / x[1:] ** 1.3
    fake = RealSpaceCorrelations(params=ModelParams(0.0, 1.0, 0.5, L), blocks=blocks)
    fit = fit_correlation_length(fake, window=(2, 60))
    assert abs(fit.xi - 5.0) < 0.05
    assert abs(fit.alpha - 1.3) < 0.01
    assert abs(fit.amplitude - 0.7) < 0.01
    assert fit.r2 > 0.999999


def test_fit_failed_on_underflow():
    L = 64
    blocks = np.zeros((L, 2, 2))
    blocks[1:4, 0, 1] = [1e-2, 1e-18, 1e-20]
    fake = RealSpaceCorrelations(params=ModelParams(0.0, 1.0, 0.5, L), blocks=blocks)
    with pytest.raises(FitFailed):
        fit_correlation_length(fake, window=(2, 16))


def test_scan_q1_critical_touches_axis():
    p = ModelParams(mu=0.4, gamma=1.0, q=1.0, L=64)
    s = scan_singularities(p, im_max=3.0, n_re=512, n_im=128)
    assert s.min_im == 0.0
    assert xi_upper_bound(s) == np.inf


def test_scan_q_half_terminates_off_axis():
    p = ModelParams(mu=0.4, gamma=1.0, q=0.5, L=64)
    s = scan_singularities(p, im_max=3.0, n_re=512, n_im=128)
    assert s.min_im > 0.1
    # analytic branch point of the a_- denominator: Im k = ln((2-q)/q)/2
    assert abs(s.min_im - 0.5 * np.log((2 - 0.5) / 0.5)) < 1e-3


def test_scan_asymptote_near_perfect_detection():
    p = ModelParams(mu=0.4, gamma=2.0, q=0.99, L=64)
    s = scan_singularities(p, im_max=3.0, n_re=512, n_im=128)
    assert abs(s.min_im - 0.01) < 0.002  # within 20%


def test_scan_empty_raises():
    p = ModelParams(mu=0.4, gamma=1.0, q=0.5, L=64)
    with pytest.raises(EmptyScan):
        scan_singularities(p, im_max=0.08, n_re=128, n_im=32)


def test_scan_points_have_nonnegative_im():
    p = ModelParams(mu=0.4, gamma=2.0, q=0.9, L=64)
    s = scan_singularities(p, im_max=3.0, n_re=512, n_im=128)
    if len(s.points):
        assert np.min(np.imag(s.points)) >= 0.0


def test_xi_upper_bound_reciprocal():
    p = ModelParams(mu=0.4, gamma=1.0, q=0.5, L=64)
    s = scan_singularities(p, im_max=3.0, n_re=256, n_im=64)
    s.min_im = 0.5
    assert xi_upper_bound(s) == 2.0


def test_xi_up_monotone_in_q():
    prev = 0.0
    for q in np.arange(0.1, 0.95, 0.1):
        p = ModelParams(mu=0.4, gamma=1.0, q=round(float(q), 2), L=64)
        xu = xi_upper_bound(scan_singularities(p, im_max=3.0, n_re=512, n_im=128))
        assert xu >= prev - 1e-9
        prev = xu


def test_asymptote_helper():
    assert xi_up_asymptote(0.99) == pytest.approx(100.0)
    assert xi_up_asymptote(1.0) == np.inf


def test_exponential_decay_certificate():
    """|Gamma(x)| e^{min_im x} stays bounded by its short-distance scale
    (testable only above the float64 noise floor of the momentum sum)."""
    p = ModelParams(mu=0.4, gamma=2.0, q=0.7, L=2048)
    corr = correlations_real_space(p)
    s = scan_singularities(p, im_max=3.0, n_re=1024, n_im=256)
    x = np.arange(1, p.L // 2)
    mags = np.max(np.abs(corr.blocks[x]), axis=(1, 2))
    keep = mags > 1e-13
    assert keep.sum() > 20
    weighted = mags[keep] * np.exp(s.min_im * x[keep])
    C = weighted[: max(keep.sum() // 4, 8)].max()
    assert weighted.max() <= 1.5 * C


def test_q0_pole_seeds_match_fit():
    p = ModelParams(mu=0.4, gamma=1.0, q=0.0, L=2048)
    seeds = lyapunov_pole_seeds(p)
    assert seeds, "no Lyapunov poles found"
    xi_pole = 1.0 / min(np.imag(s) for s in seeds)
    corr = correlations_real_space(p)
    fit = fit_correlation_length(corr, window=(2, 40))
    assert abs(fit.xi - xi_pole) < 1e-3 * xi_pole


def test_seed_candidates_q1_critical_on_axis():
    p = ModelParams(mu=0.4, gamma=1.0, q=1.0, L=64)
    seeds = seed_candidates(p)
    kstar = np.arccos(0.4)
    assert any(abs(s - kstar) < 1e-6 for s in seeds)
    assert gamma_c(0.4) > 1.0  # the point is critical, so the on-axis seed is genuine
