import numpy as np
import pytest
import scipy.sparse as sp

from spinkerr import (DegenerateSteadyStateError, Mode, build_space,
                      convergence_check, evolve, paper_derived, solve_steady,
                      steady_state)
from spinkerr.errors import DimensionError, EvolutionError
from spinkerr.model import liouvillian, vectorize
from spinkerr.observables import g2, mean_photon
from spinkerr.steadystate import evolve_from_vacuum, vacuum_state


def linear_cavity(delta0=0.0, xi_over_gamma=0.25):
    """Single driven mode: no Kerr, no backscattering, no spin."""
    d = paper_derived(delta0=delta0)
    return d.replace(chi=0.0, backscattering=0.0,
                     xi=xi_over_gamma * d.gamma)


def test_zero_drive_steady_state_is_vacuum(space4):
    d = paper_derived(omega=17e3, delta0=-2e6).replace(xi=0.0)
    rho = steady_state(d, space4)
    expected = np.zeros((space4.dim, space4.dim))
    expected[0, 0] = 1.0
    assert np.allclose(rho.data, expected, atol=1e-12)


def test_resonant_linear_cavity_saturates_normalization():
    d = linear_cavity(delta0=0.0)
    rho = steady_state(d, build_space(8, 1))
    assert mean_photon(rho, Mode.CW) == pytest.approx(d.n0, rel=1e-6)


def test_resonant_linear_cavity_at_default_cutoff(space4):
    # four retained photons truncate the coherent tail at the 1e-3 level
    d = linear_cavity(delta0=0.0)
    rho = steady_state(d, space4)
    assert mean_photon(rho, Mode.CW) == pytest.approx(d.n0, rel=1e-3)


def test_detuned_linear_cavity_mean(space4):
    d = linear_cavity(delta0=0.7e6)
    rho = steady_state(d, space4)
    expected = d.xi**2 / (d.delta0**2 + d.gamma**2 / 4)
    assert mean_photon(rho, Mode.CW) == pytest.approx(expected, rel=1e-6)


def test_steady_state_invariants(space4, d_spinning):
    rho = steady_state(d_spinning, space4)
    rho.validate()
    assert rho.hermiticity_defect() <= 1e-10
    assert abs(rho.trace() - 1.0) <= 1e-10
    assert rho.min_eigenvalue() >= -1e-8
    assert rho.residual <= 1e-10


def test_dimension_mismatch_rejected(space4):
    with pytest.raises(DimensionError):
        solve_steady(sp.identity(7, format="csr"), space4)


def test_degenerate_generator_reported(space4):
    n = space4.dim**2
    zero = sp.csr_matrix((n, n), dtype=complex)
    with pytest.raises(DegenerateSteadyStateError):
        solve_steady(zero, space4, scale=1.0)


def test_commutator_only_generator_is_degenerate(space4, d_spinning):
    # without dissipation every eigenprojector is stationary
    h = np.diag(np.arange(space4.dim, dtype=complex))
    eye = np.eye(space4.dim)
    lv = sp.csr_matrix(-1j * (np.kron(eye, h) - np.kron(h.T, eye)))
    with pytest.raises(DegenerateSteadyStateError):
        solve_steady(lv, space4)


def test_evolve_zero_time_returns_copy(space4, d_spinning):
    lv = liouvillian(d_spinning, space4)
    rho0 = vacuum_state(space4)
    out = evolve(lv, rho0, 0.0)
    assert np.array_equal(out.data, rho0.data)
    assert out.data is not rho0.data


def test_evolve_matches_linear_transient(space4):
    # driven harmonic mode from vacuum: <n>(t) = |alpha(t)|^2 with
    # alpha(t) = -i xi (1 - exp(-(i delta0 + gamma/2) t)) / (i delta0 + gamma/2)
    d = linear_cavity(delta0=0.5e6)
    lv = liouvillian(d, space4)
    for t_gammas in (0.5, 2.0, 6.0):
        t = t_gammas / d.gamma
        out = evolve(lv, vacuum_state(space4), t, rtol=1e-10, atol=1e-15,
                     scale=d.gamma)
        pole = 1j * d.delta0 + d.gamma / 2
        alpha = -1j * d.xi * (1 - np.exp(-pole * t)) / pole
        assert mean_photon(out, Mode.CW) == pytest.approx(
            abs(alpha) ** 2, rel=1e-6)


def test_evolve_reaches_steady_state(space4, d_static):
    # slowest relaxation is gamma/2: the residual transient at 20/gamma
    # is a few 1e-6 elementwise, and decayed to roundoff by 40/gamma
    rho_ss = steady_state(d_static, space4)
    rho_20 = evolve_from_vacuum(d_static, space4, 20.0, rtol=1e-10,
                                atol=1e-15)
    assert np.max(np.abs(rho_20.data - rho_ss.data)) < 1e-5
    rho_40 = evolve_from_vacuum(d_static, space4, 40.0, rtol=1e-10,
                                atol=1e-15)
    assert np.max(np.abs(rho_40.data - rho_ss.data)) < 1e-8


def test_evolve_rejects_negative_time(space4, d_static):
    lv = liouvillian(d_static, space4)
    with pytest.raises(EvolutionError):
        evolve(lv, vacuum_state(space4), -1.0)


def test_oracle_equivalence_on_observables(space4, d_spinning):
    rho_t = evolve_from_vacuum(d_spinning, space4, 40.0, rtol=1e-11,
                               atol=1e-16)
    rho_ss = steady_state(d_spinning, space4)
    for mode in Mode:
        assert mean_photon(rho_t, mode) == pytest.approx(
            mean_photon(rho_ss, mode), rel=1e-6)
        assert g2(rho_t, mode) == pytest.approx(g2(rho_ss, mode), rel=1e-5)


def test_convergence_check_passes_at_blockade_point(d_spinning):
    # the operating points of the figures are converged at four photons;
    # far off resonance the third-order tail of the undriven mode is not
    report = convergence_check(d_spinning, (4, 5))
    assert report.passed
    assert report.max_rel_change < 1e-3
    assert "pass: True" in report.summary()


def test_convergence_check_flags_low_cutoff(d_static):
    report = convergence_check(d_static, (1, 2))
    assert not report.passed
    row = report.rows[0]
    assert "g2_cw" in row.undefined
    assert "undefined at cutoff 1" in report.summary()


def test_convergence_exact_at_zero_drive():
    d = paper_derived().replace(xi=0.0)
    report = convergence_check(d, (2, 3, 4))
    assert report.max_rel_change == 0.0
    assert report.passed


def test_convergence_needs_two_cutoffs(d_static):
    from spinkerr.errors import SpaceError
    with pytest.raises(SpaceError):
        convergence_check(d_static, (4,))
