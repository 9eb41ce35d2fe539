"""Scalar observables of a two-mode density matrix.

Per mode: mean photon number, normalized excitation spectrum
``S = N / (4 xi^2 / gamma^2)``, equal-time correlations
``g^(k)(0) = <a^dag^k a^k> / N^k`` for k = 2, 3, the photon-number
distribution ``P_k`` with its equal-mean Poissonian reference, and the
blockade-regime classification:

* 1PB   g2 < 1                (sub-Poissonian, single-photon blockade)
* 2PB   g2 > 1 and g3 < 1     (photon pairs pass, triples blocked)
* PIT   g2 > 1 and g3 > 1     (photon-induced tunneling)

Correlations of an essentially empty mode (N below ``CORRELATION_FLOOR``)
are reported as undefined rather than zero.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import UndefinedObservableError
from .fock import power_moment_op
from .params import DerivedParams, Mode
from .steadystate import DensityMatrix

__all__ = [
    "CORRELATION_FLOOR", "Regime", "ModeObservables", "CorrelationResult",
    "mean_photon", "excitation_spectrum", "correlation", "g2", "g3",
    "photon_distribution", "poisson_reference", "classify", "correlations",
]

CORRELATION_FLOOR = 1e-12
REGIME_BOUNDARY_TOL = 1e-6


class Regime(enum.Enum):
    """Photon-statistics regime at one parameter point."""

    ONE_PB = "1PB"
    TWO_PB = "2PB"
    PIT = "PIT"
    NONE = "none"


def _mode_populations(rho: DensityMatrix, mode: Mode) -> np.ndarray:
    """Reduced photon-number distribution of one mode (diagonal trace-out)."""
    space = rho.space
    diag = np.real(np.diag(rho.data)).reshape(space.n_max_cw + 1,
                                              space.n_max_ccw + 1)
    return diag.sum(axis=1) if mode is Mode.CW else diag.sum(axis=0)


def expectation(op, rho: DensityMatrix) -> complex:
    """trace(op @ rho) for a sparse operator."""
    return complex(op.multiply(rho.data.T).sum())


def mean_photon(rho: DensityMatrix, mode: Mode) -> float:
    """N = trace(a^dag a rho)."""
    return float(expectation(power_moment_op(rho.space, mode, 1), rho).real)


def excitation_spectrum(rho: DensityMatrix, mode: Mode,
                        d: DerivedParams) -> float:
    """S = N / n0 with n0 = 4 xi^2 / gamma^2.

    Raises UndefinedObservableError at zero drive, where the
    normalization vanishes.
    """
    if d.n0 == 0.0:
        raise UndefinedObservableError(
            "excitation spectrum is undefined at zero drive (n0 = 0)")
    return mean_photon(rho, mode) / d.n0


def correlation(rho: DensityMatrix, mode: Mode, order: int) -> float:
    """Equal-time correlation g^(order)(0) = <a^dag^k a^k> / N^k."""
    n = mean_photon(rho, mode)
    if n < CORRELATION_FLOOR:
        raise UndefinedObservableError(
            f"g{order} undefined: mean photon number {n:.3e} below "
            f"{CORRELATION_FLOOR:.0e}")
    moment = expectation(power_moment_op(rho.space, mode, order), rho).real
    return float(moment / n**order)


def g2(rho: DensityMatrix, mode: Mode) -> float:
    return correlation(rho, mode, 2)


def g3(rho: DensityMatrix, mode: Mode) -> float:
    return correlation(rho, mode, 3)


def poisson_reference(mean: float, n_max: int) -> np.ndarray:
    """Poissonian P_k = mean^k exp(-mean) / k! for k = 0..n_max.

    Means at or below zero (solver dust on an empty mode) give the vacuum
    distribution.
    """
    k = np.arange(n_max + 1)
    if mean <= 0.0:
        out = np.zeros(n_max + 1)
        out[0] = 1.0
        return out
    log_p = k * math.log(mean) - mean - np.array(
        [math.lgamma(v + 1.0) for v in k])
    return np.exp(log_p)


def photon_distribution(rho: DensityMatrix,
                        mode: Mode) -> tuple[np.ndarray, np.ndarray]:
    """(P_k, Poissonian reference with the same mean), k = 0..cutoff."""
    p = _mode_populations(rho, mode)
    return p, poisson_reference(float((np.arange(p.size) * p).sum()),
                                p.size - 1)


def classify(g2_value: float, g3_value: float) -> Regime:
    """Regime from the two correlations; NONE on boundary ties."""
    if abs(g2_value - 1.0) < REGIME_BOUNDARY_TOL:
        return Regime.NONE
    if g2_value < 1.0:
        return Regime.ONE_PB
    if abs(g3_value - 1.0) < REGIME_BOUNDARY_TOL:
        return Regime.NONE
    return Regime.TWO_PB if g3_value < 1.0 else Regime.PIT


@dataclass(frozen=True)
class ModeObservables:
    """Everything extracted for a single propagation direction."""

    n: float
    s: float | None
    g2: float | None
    g3: float | None
    p: np.ndarray
    poisson: np.ndarray
    regime: Regime | None
    flags: tuple[str, ...] = ()


@dataclass(frozen=True)
class CorrelationResult:
    cw: ModeObservables
    ccw: ModeObservables
    params_key: str = ""

    def mode(self, mode: Mode) -> ModeObservables:
        return self.cw if mode is Mode.CW else self.ccw


def _mode_result(rho: DensityMatrix, mode: Mode,
                 d: DerivedParams) -> ModeObservables:
    tag = mode.value
    flags = []
    n = mean_photon(rho, mode)
    try:
        s = excitation_spectrum(rho, mode, d)
    except UndefinedObservableError:
        s = None
        flags.append(f"s_{tag}_undefined")
    values = {}
    for order in (2, 3):
        try:
            values[order] = correlation(rho, mode, order)
        except UndefinedObservableError:
            values[order] = None
            flags.append(f"g{order}_{tag}_undefined")
    if values[2] is None or values[3] is None:
        regime = None
    else:
        regime = classify(values[2], values[3])
    p, poisson = photon_distribution(rho, mode)
    return ModeObservables(n=n, s=s, g2=values[2], g3=values[3], p=p,
                           poisson=poisson, regime=regime,
                           flags=tuple(flags))


def correlations(rho: DensityMatrix, d: DerivedParams) -> CorrelationResult:
    """Full per-mode observable set, with undefined values flagged instead
    of raised."""
    return CorrelationResult(
        cw=_mode_result(rho, Mode.CW, d),
        ccw=_mode_result(rho, Mode.CCW, d),
        params_key=rho.params_key or d.key(),
    )
