"""Closed-form weak-drive steady state of the non-Hermitian Hamiltonian.

Truncating the state at three total excitations,

    |psi> = sum_{N=0..3} sum_{m=0..N} C_{m,N-m} |m, N-m>,

and keeping, per excitation sector, only the drive coupling from the
sector below (amplitudes scale as ``C_{m,N-m} ~ (xi/gamma)^N``), the
stationary amplitudes follow from nine linear equations built on the
complex detunings

    d1 = delta0 + dsag - i gamma/2      d2 = delta0 - dsag - i gamma/2
    d3 = 2 (d1 + chi)                   d4 = d1 + d2 + 2 chi
    d5 = 2 (d2 + chi)                   d6 = 3 (d1 + 2 chi)
    d7 = 2 d1 + d2 + 6 chi              d8 = d1 + 2 d2 + 6 chi
    d9 = 3 (d2 + 2 chi)

with the combinations ``eta1 = d1 d2 - J^2``, ``eta2 = d3 d4 - 2 J^2``,
``eta3 = d4 d5 - 2 J^2``, ``eta4 = d6 d7 - 3 J^2``, ``eta5 = d8 d9 - 3 J^2``,
``sigma1 = d5 eta2 - 2 J^2 d3`` and ``sigma2 = eta4 eta5 - 4 J^2 d6 d9``.

Correlations follow from the occupation probabilities ``P_mn = |C_mn|^2``:
``g2_cw ~ 2 P20 / P10^2`` (and the CCW analog), extended to third order as
``g3 ~ 6 P30 / P10^3``.  This module is one of the two independent oracles
for the master-equation solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ResonantDegeneracyError, UndefinedObservableError
from .params import DerivedParams, Mode

__all__ = [
    "DetuningLadder", "AmplitudeSet", "ladder", "steady_amplitudes",
    "equation_residual", "g2_analytic", "g3_analytic", "g2_cw_single_mode",
]

_SQRT2 = math.sqrt(2.0)
_SQRT3 = math.sqrt(3.0)
DENOMINATOR_RTOL = 1e-12


@dataclass(frozen=True)
class DetuningLadder:
    """Complex detunings of the excitation ladder and their combinations."""

    d1: complex
    d2: complex
    d3: complex
    d4: complex
    d5: complex
    d6: complex
    d7: complex
    d8: complex
    d9: complex
    eta1: complex
    eta2: complex
    eta3: complex
    eta4: complex
    eta5: complex
    sigma1: complex
    sigma2: complex


def ladder(d: DerivedParams) -> DetuningLadder:
    """All sixteen complex quantities entering the stationary amplitudes.

    ``d1`` belongs to the driven branch and ``d2`` to the undriven one;
    with the conventional CW drive, ``d1 = delta0 + dsag - i gamma/2``.
    """
    driven = d.drive_direction
    d1 = d.mode_detuning(driven) - 0.5j * d.gamma
    d2 = d.mode_detuning(driven.other()) - 0.5j * d.gamma
    chi = d.chi
    j2 = d.backscattering**2
    d3 = 2.0 * (d1 + chi)
    d4 = d1 + d2 + 2.0 * chi
    d5 = 2.0 * (d2 + chi)
    d6 = 3.0 * (d1 + 2.0 * chi)
    d7 = 2.0 * d1 + d2 + 6.0 * chi
    d8 = d1 + 2.0 * d2 + 6.0 * chi
    d9 = 3.0 * (d2 + 2.0 * chi)
    eta1 = d1 * d2 - j2
    eta2 = d3 * d4 - 2.0 * j2
    eta3 = d4 * d5 - 2.0 * j2
    eta4 = d6 * d7 - 3.0 * j2
    eta5 = d8 * d9 - 3.0 * j2
    sigma1 = d5 * eta2 - 2.0 * j2 * d3
    sigma2 = eta4 * eta5 - 4.0 * j2 * d6 * d9
    return DetuningLadder(d1, d2, d3, d4, d5, d6, d7, d8, d9,
                          eta1, eta2, eta3, eta4, eta5, sigma1, sigma2)


@dataclass(frozen=True)
class AmplitudeSet:
    """Stationary amplitudes c_{m n}: m CW photons, n CCW photons.

    c00 is fixed to 1 and never renormalized; probabilities are only used
    in ratios where the normalization cancels.
    """

    c10: complex
    c01: complex
    c20: complex
    c11: complex
    c02: complex
    c30: complex
    c21: complex
    c12: complex
    c03: complex

    def swapped(self) -> "AmplitudeSet":
        """Mode-relabelled set (CW <-> CCW)."""
        return AmplitudeSet(c10=self.c01, c01=self.c10, c20=self.c02,
                            c11=self.c11, c02=self.c20, c30=self.c03,
                            c21=self.c12, c12=self.c21, c03=self.c30)

    def amplitude(self, m: int, n: int) -> complex:
        if (m, n) == (0, 0):
            return 1.0 + 0.0j
        try:
            return getattr(self, f"c{m}{n}")
        except AttributeError:
            raise KeyError(f"no amplitude C_{m}{n} in the three-excitation "
                           "truncation") from None

    def probability(self, m: int, n: int) -> float:
        """Occupation probability P_mn = |C_mn|^2."""
        return abs(self.amplitude(m, n)) ** 2


def steady_amplitudes(d: DerivedParams) -> AmplitudeSet:
    """Solve the truncated amplitude hierarchy in its stationary limit.

    A denominator is treated as resonantly degenerate when its value is
    cancelled below DENOMINATOR_RTOL times the magnitude of the terms
    composing it (the closed form then carries no significance).
    """
    lad = ladder(d)
    j2 = d.backscattering**2
    checks = (
        ("eta1", lad.eta1, max(abs(lad.d1 * lad.d2), j2)),
        ("sigma1", lad.sigma1,
         max(abs(lad.d5 * lad.eta2), 2.0 * j2 * abs(lad.d3))),
        ("sigma2", lad.sigma2,
         max(abs(lad.eta4 * lad.eta5), 4.0 * j2 * abs(lad.d6 * lad.d9))),
    )
    for name, value, term_scale in checks:
        if abs(value) < DENOMINATOR_RTOL * term_scale:
            raise ResonantDegeneracyError(
                f"denominator {name} = {value:.3e} is resonantly degenerate "
                f"(cancelled below {DENOMINATOR_RTOL:.0e} of its terms)")
    xi = d.xi
    j = d.backscattering
    c10 = -xi * lad.d2 / lad.eta1
    c01 = j * xi / lad.eta1
    c20 = -_SQRT2 * xi * (lad.eta3 * c10 - j * lad.d5 * c01) / lad.sigma1
    c11 = lad.d5 * xi * (2.0 * j * c10 - lad.d3 * c01) / lad.sigma1
    c02 = _SQRT2 * j * xi * (lad.d3 * c01 - 2.0 * j * c10) / lad.sigma1
    c30 = _SQRT3 * xi * (-(lad.eta5 * lad.d7 - 4.0 * j**2 * lad.d9) * c20
                         + _SQRT2 * j * lad.eta5 * c11
                         - 2.0 * j**2 * lad.d9 * c02) / lad.sigma2
    c21 = xi * (3.0 * j * lad.eta5 * c20
                - _SQRT2 * lad.eta5 * lad.d6 * c11
                + 2.0 * j * lad.d6 * lad.d9 * c02) / lad.sigma2
    c12 = xi * lad.d9 * (-6.0 * j**2 * c20
                         + 2.0 * _SQRT2 * j * lad.d6 * c11
                         - lad.eta4 * c02) / lad.sigma2
    c03 = _SQRT3 * xi * j * (6.0 * j**2 * c20
                             - 2.0 * _SQRT2 * j * lad.d6 * c11
                             + lad.eta4 * c02) / lad.sigma2
    amps = AmplitudeSet(c10, c01, c20, c11, c02, c30, c21, c12, c03)
    # the hierarchy is solved in the (driven, undriven) basis; relabel to
    # (CW, CCW) when the drive enters from the CCW direction
    return amps if d.drive_direction is Mode.CW else amps.swapped()


def equation_residual(d: DerivedParams, amps: AmplitudeSet) -> float:
    """Largest residual of the stationary amplitude equations.

    Independent correctness check: the returned amplitudes must satisfy
    the linear system they were solved from.
    """
    lad = ladder(d)
    if d.drive_direction is Mode.CCW:
        amps = amps.swapped()  # back to the (driven, undriven) basis
    xi, j = d.xi, d.backscattering
    r = [
        lad.d1 * amps.c10 + j * amps.c01 + xi,
        lad.d2 * amps.c01 + j * amps.c10,
        lad.d3 * amps.c20 + _SQRT2 * j * amps.c11 + _SQRT2 * xi * amps.c10,
        lad.d4 * amps.c11 + _SQRT2 * j * amps.c20 + _SQRT2 * j * amps.c02
        + xi * amps.c01,
        lad.d5 * amps.c02 + _SQRT2 * j * amps.c11,
        lad.d6 * amps.c30 + _SQRT3 * j * amps.c21 + _SQRT3 * xi * amps.c20,
        lad.d7 * amps.c21 + _SQRT3 * j * amps.c30 + 2.0 * j * amps.c12
        + _SQRT2 * xi * amps.c11,
        lad.d8 * amps.c12 + 2.0 * j * amps.c21 + _SQRT3 * j * amps.c03
        + xi * amps.c02,
        lad.d9 * amps.c03 + _SQRT3 * j * amps.c12,
    ]
    return float(np.max(np.abs(r)))


def g2_analytic(d: DerivedParams, mode: Mode) -> float:
    """Weak-drive g2(0) from the closed forms.

    Driven mode: ``4 |eta1 (d2 d4 d5 + 2 J^2 chi) / (sigma1 d2^2)|^2``;
    undriven mode: ``16 |eta1 (d4 - chi) / sigma1|^2``.  Both are exactly
    independent of the drive amplitude.  The undriven form has no meaning
    without backscattering (the mode is then never populated).
    """
    lad = ladder(d)
    if mode is not d.drive_direction:
        if d.backscattering == 0.0:
            raise UndefinedObservableError(
                "g2 of the undriven mode is undefined at J = 0 "
                "(its one- and two-photon probabilities vanish)")
        return 16.0 * abs(lad.eta1 * (lad.d4 - d.chi) / lad.sigma1) ** 2
    num = lad.d2 * lad.d4 * lad.d5 + 2.0 * d.backscattering**2 * d.chi
    return 4.0 * abs(lad.eta1 * num / (lad.sigma1 * lad.d2**2)) ** 2


def g3_analytic(d: DerivedParams, mode: Mode) -> float:
    """Weak-drive g3(0) = 6 P3 / P1^3 of the requested mode."""
    if mode is not d.drive_direction and d.backscattering == 0.0:
        raise UndefinedObservableError(
            "g3 of the undriven mode is undefined at J = 0")
    probe = d if d.xi > 0 else d.replace(xi=d.gamma)
    amps = steady_amplitudes(probe)
    if mode is Mode.CW:
        return 6.0 * amps.probability(3, 0) / amps.probability(1, 0) ** 3
    return 6.0 * amps.probability(0, 3) / amps.probability(0, 1) ** 3


def g2_cw_single_mode(d: DerivedParams) -> float:
    """J = 0 limit of the driven-mode g2 (drive from the CW side):

    ``[(delta0 + dsag)^2 + gamma^2/4] / [(delta0 + dsag + chi)^2 + gamma^2/4]``.
    """
    det = d.mode_detuning(d.drive_direction)
    return (det**2 + d.gamma**2 / 4.0) \
        / ((det + d.chi)**2 + d.gamma**2 / 4.0)
