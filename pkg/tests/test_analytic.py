import numpy as np
import pytest

from spinkerr import (Mode, build_space, g2_analytic, g2_cw_single_mode,
                      g3_analytic, ladder, paper_derived, steady_amplitudes,
                      steady_state)
from spinkerr.analytic import equation_residual
from spinkerr.errors import (ResonantDegeneracyError,
                             UndefinedObservableError)
from spinkerr.observables import photon_distribution


@pytest.fixture(scope="module")
def d_ref():
    return paper_derived(omega=30e3, delta0=-2.3e6)


def test_ladder_identities(d_ref):
    lad = ladder(d_ref)
    chi = d_ref.chi
    assert lad.d1 - lad.d2 == pytest.approx(2 * d_ref.delta_sag, rel=1e-12)
    assert lad.d3 == pytest.approx(2 * (lad.d1 + chi), rel=1e-12)
    assert lad.d4 == pytest.approx(lad.d1 + lad.d2 + 2 * chi, rel=1e-12)
    assert lad.d5 == pytest.approx(2 * (lad.d2 + chi), rel=1e-12)
    assert lad.d6 == pytest.approx(3 * (lad.d1 + 2 * chi), rel=1e-12)
    assert lad.d7 == pytest.approx(2 * lad.d1 + lad.d2 + 6 * chi, rel=1e-12)
    assert lad.d8 == pytest.approx(lad.d1 + 2 * lad.d2 + 6 * chi, rel=1e-12)
    assert lad.d9 == pytest.approx(3 * (lad.d2 + 2 * chi), rel=1e-12)
    j2 = d_ref.backscattering**2
    assert lad.eta1 == pytest.approx(lad.d1 * lad.d2 - j2, rel=1e-12)
    assert lad.eta3 == pytest.approx(lad.d4 * lad.d5 - 2 * j2, rel=1e-12)
    assert lad.sigma1 == pytest.approx(lad.d5 * lad.eta2 - 2 * j2 * lad.d3,
                                       rel=1e-12)
    assert lad.sigma2 == pytest.approx(
        lad.eta4 * lad.eta5 - 4 * j2 * lad.d6 * lad.d9, rel=1e-12)


def test_static_resonator_degenerate_detunings():
    lad = ladder(paper_derived(omega=0.0, delta0=-1e6))
    assert lad.d1 == lad.d2


def test_no_kerr_static_collapses_two_photon_ladder():
    d = paper_derived(omega=0.0, delta0=-1e6).replace(chi=0.0)
    lad = ladder(d)
    assert lad.d3 == lad.d4 == lad.d5


def test_first_ladder_rung_value(d_ref):
    # delta0 = -2.3e6, spin 30 krad/s: d1 = delta0 + dsag - i gamma/2
    lad = ladder(d_ref)
    assert lad.d1.real == pytest.approx(d_ref.delta0 + d_ref.delta_sag)
    assert lad.d1.imag == pytest.approx(-d_ref.gamma / 2)
    assert lad.d1.real == pytest.approx(0.1506e6, rel=1e-2)


def test_amplitudes_satisfy_their_equations(d_ref):
    amps = steady_amplitudes(d_ref)
    scale = d_ref.xi * abs(ladder(d_ref).d1)
    assert equation_residual(d_ref, amps) < 1e-10 * scale


def test_amplitudes_satisfy_equations_across_points():
    for delta0 in np.linspace(-5e6, 5e6, 7):
        for omega in (0.0, 10e3, 30e3):
            d = paper_derived(omega=omega, delta0=float(delta0))
            amps = steady_amplitudes(d)
            scale = max(abs(ladder(d).d1), d.chi, d.gamma) * d.xi
            assert equation_residual(d, amps) < 1e-10 * scale


def test_no_backscattering_leaves_ccw_empty(d_ref):
    d = d_ref.replace(backscattering=0.0)
    amps = steady_amplitudes(d)
    lad = ladder(d)
    assert amps.c01 == 0 and amps.c11 == 0 and amps.c02 == 0
    assert amps.c21 == 0 and amps.c12 == 0 and amps.c03 == 0
    assert amps.c10 == pytest.approx(-d.xi / lad.d1, rel=1e-12)


def test_zero_drive_zeroes_all_amplitudes(d_ref):
    amps = steady_amplitudes(d_ref.replace(xi=0.0))
    for m, n in ((1, 0), (0, 1), (2, 0), (1, 1), (0, 2),
                 (3, 0), (2, 1), (1, 2), (0, 3)):
        assert amps.amplitude(m, n) == 0


def test_amplitude_ordering_at_weak_drive(d_ref):
    amps = steady_amplitudes(d_ref)
    assert abs(amps.c20) < abs(amps.c10)
    assert abs(amps.c30) < abs(amps.c20)


def test_c00_fixed_to_one(d_ref):
    amps = steady_amplitudes(d_ref)
    assert amps.amplitude(0, 0) == 1.0
    with pytest.raises(KeyError):
        amps.amplitude(4, 0)


def test_g2_closed_forms_match_probability_ratios(d_ref):
    amps = steady_amplitudes(d_ref)
    assert g2_analytic(d_ref, Mode.CW) == pytest.approx(
        2 * amps.probability(2, 0) / amps.probability(1, 0) ** 2, rel=1e-10)
    assert g2_analytic(d_ref, Mode.CCW) == pytest.approx(
        2 * amps.probability(0, 2) / amps.probability(0, 1) ** 2, rel=1e-10)


def test_correlations_bit_stable_under_drive_halving(d_ref):
    half = d_ref.replace(xi=d_ref.xi / 2)
    for mode in Mode:
        assert g2_analytic(d_ref, mode) == g2_analytic(half, mode)
        assert g3_analytic(d_ref, mode) == g3_analytic(half, mode)


def test_single_mode_limit_consistency(d_ref):
    # with J = 0 the general CW form reduces to the single-mode expression
    d = d_ref.replace(backscattering=0.0)
    assert abs(g2_analytic(d, Mode.CW) / g2_cw_single_mode(d) - 1.0) < 1e-10
    d2 = paper_derived(omega=12e3, delta0=1.3e6).replace(backscattering=0.0)
    assert abs(g2_analytic(d2, Mode.CW) / g2_cw_single_mode(d2) - 1.0) < 1e-10


def test_single_mode_no_kerr_is_coherent():
    d = paper_derived(delta0=-1e6).replace(backscattering=0.0, chi=0.0)
    assert g2_analytic(d, Mode.CW) == pytest.approx(1.0, rel=1e-12)
    assert g2_cw_single_mode(d) == pytest.approx(1.0, rel=1e-12)


def test_ccw_correlations_undefined_without_backscattering(d_ref):
    d = d_ref.replace(backscattering=0.0)
    with pytest.raises(UndefinedObservableError):
        g2_analytic(d, Mode.CCW)
    with pytest.raises(UndefinedObservableError):
        g3_analytic(d, Mode.CCW)


def test_resonant_degeneracy_detected():
    # near-lossless modes tuned to delta0 = J cancel eta1 = d1 d2 - J^2
    d = paper_derived()
    tuned = d.replace(gamma=1e-8, chi=0.0, backscattering=1e6, delta0=1e6,
                      delta_sag=0.0, xi=0.25)
    with pytest.raises(ResonantDegeneracyError):
        steady_amplitudes(tuned)


def test_static_exchange_relabelling():
    # at rest the ladder branches are degenerate, and driving from the
    # other side reproduces the mode-swapped amplitude set exactly
    d = paper_derived(omega=0.0, delta0=-2e6)
    lad = ladder(d)
    assert lad.d1 == lad.d2
    assert lad.d3 == lad.d5 and lad.d6 == lad.d9 and lad.d7 == lad.d8
    cw_driven = steady_amplitudes(d)
    ccw_driven = steady_amplitudes(d.replace(drive_direction=Mode.CCW))
    for m in range(4):
        for n in range(4 - m):
            assert ccw_driven.amplitude(m, n) == cw_driven.amplitude(n, m)


def test_ccw_drive_swaps_correlation_roles():
    d = paper_derived(omega=0.0, delta0=-2.1e6)
    flipped = d.replace(drive_direction=Mode.CCW)
    assert g2_analytic(flipped, Mode.CCW) == g2_analytic(d, Mode.CW)
    assert g2_analytic(flipped, Mode.CW) == g2_analytic(d, Mode.CCW)
    assert g3_analytic(flipped, Mode.CCW) == g3_analytic(d, Mode.CW)


def test_occupation_matches_master_equation(space4):
    # the one-photon occupation of the driven mode agrees with the master
    # equation to the weak-drive truncation error at xi/gamma = 1/4
    d = paper_derived(omega=30e3, delta0=-3.5e6)
    amps = steady_amplitudes(d)
    rho = steady_state(d, space4)
    p_cw, _ = photon_distribution(rho, Mode.CW)
    assert amps.probability(1, 0) == pytest.approx(p_cw[1], rel=0.1)
