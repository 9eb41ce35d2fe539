"""Steady states of the Lindblad generator, with a time-evolution oracle.

The steady state solves ``L vec(rho) = 0`` with the trace normalized to
one.  The singular linear system is closed by replacing the first row of
``L`` (the equation for ``d rho[0,0] / dt``, which is implied by the other
diagonal rows through trace preservation) with the trace functional, then
factorizing the sparse system directly.  All rates are divided by a
characteristic scale (the loss rate, when known) before solving, for
conditioning and reproducibility across parameter presets.

:func:`evolve` integrates ``d rho/dt = L rho`` with an adaptive explicit
Dormand-Prince 4(5) pair and serves as an independent cross-check of the
linear solve.  :func:`convergence_check` re-solves at increasing photon
cutoffs and reports how much the scalar observables move.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from . import _kernels, model
from .errors import (DegenerateSteadyStateError, DimensionError,
                     EvolutionError, SpaceError, StepSizeUnderflowError,
                     SteadyStateError)
from .fock import FockSpace, build_space
from .params import DerivedParams, Mode

__all__ = [
    "DensityMatrix", "solve_steady", "steady_state", "evolve",
    "evolve_from_vacuum", "vacuum_state", "convergence_check",
    "ConvergenceReport",
]

RESIDUAL_RTOL = 1e-10
DEGENERACY_RTOL = 1e-8
HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
POSITIVITY_FLOOR = -1e-8


@dataclass(frozen=True)
class DensityMatrix:
    """Dense density matrix with its space and provenance metadata."""

    data: np.ndarray
    space: FockSpace
    params_key: str = ""
    residual: float = 0.0

    def trace(self) -> float:
        return float(np.trace(self.data).real)

    def hermiticity_defect(self) -> float:
        """Largest elementwise deviation from rho = rho^dagger."""
        return float(np.max(np.abs(self.data - self.data.conj().T)))

    def min_eigenvalue(self) -> float:
        herm = 0.5 * (self.data + self.data.conj().T)
        return float(np.linalg.eigvalsh(herm)[0])

    def validate(self) -> None:
        """Raise unless Hermitian, unit-trace and positive to tolerance."""
        defect = self.hermiticity_defect()
        if defect > HERMITICITY_TOL:
            raise SteadyStateError(
                f"density matrix not Hermitian: defect {defect:.3e}")
        tdev = abs(self.trace() - 1.0)
        if tdev > TRACE_TOL:
            raise SteadyStateError(f"trace deviates from 1 by {tdev:.3e}")
        lam = self.min_eigenvalue()
        if lam < POSITIVITY_FLOOR:
            raise SteadyStateError(f"negative eigenvalue {lam:.3e}")

    def dump(self, path) -> None:
        """Text snapshot: metadata header plus one ``re im`` row per entry
        in column-stacked order."""
        vec = model.vectorize(self.data)
        with open(path, "w") as fh:
            fh.write(f"# space {self.space.n_max_cw} {self.space.n_max_ccw}\n")
            fh.write(f"# params {self.params_key}\n")
            fh.write(f"# residual {self.residual:.17g}\n")
            for z in vec:
                fh.write(f"{z.real:.17g} {z.imag:.17g}\n")


def vacuum_state(space: FockSpace, params_key: str = "") -> DensityMatrix:
    rho = np.zeros((space.dim, space.dim), dtype=np.complex128)
    rho[0, 0] = 1.0
    return DensityMatrix(rho, space, params_key)


def _check_liouvillian(lv, space: FockSpace) -> sp.csr_matrix:
    n = space.dim * space.dim
    if lv.shape != (n, n):
        raise DimensionError(
            f"Liouvillian shape {lv.shape} does not match dim^2 = {n}")
    out = lv.tocsr()
    out.sum_duplicates()
    return out


def _degeneracy_check(a: sp.csr_matrix) -> None:
    """Distinguish a degenerate nullspace from other singularity."""
    sv = np.linalg.svd(a.toarray(), compute_uv=False)
    if sv[0] == 0.0 or sv[-2] < DEGENERACY_RTOL * sv[0]:
        raise DegenerateSteadyStateError(
            "generator has more than one steady state "
            f"(second-smallest singular value {sv[-2]:.3e} vs largest "
            f"{sv[0]:.3e})")


def solve_steady(lv: sp.spmatrix, space: FockSpace, *,
                 scale: float | None = None,
                 params_key: str = "") -> DensityMatrix:
    """Unique steady state of a trace-preserving generator.

    Parameters
    ----------
    lv : sparse matrix, shape (dim^2, dim^2)
        Generator acting on column-stacked density matrices, in rad/s.
    space : FockSpace
    scale : float, optional
        Rate used to nondimensionalize before factorization.  Defaults to
        the largest absolute entry of ``lv``.

    Raises
    ------
    DegenerateSteadyStateError
        If the nullspace is more than one-dimensional.
    SteadyStateError
        If the solve fails or the residual exceeds its tolerance.
    """
    lv = _check_liouvillian(lv, space)
    if scale is None:
        scale = float(np.max(np.abs(lv.data))) if lv.nnz else 1.0
    if not scale > 0:
        raise SteadyStateError(f"nondimensionalization scale {scale} <= 0")
    a = (lv / scale).tolil()
    a[0] = model.trace_vector(space)
    a = a.tocsr()
    b = np.zeros(space.dim * space.dim, dtype=np.complex128)
    b[0] = 1.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", spla.MatrixRankWarning)
        try:
            x = spla.spsolve(a, b)
        except (spla.MatrixRankWarning, RuntimeError):
            x = None
    if x is None or not np.all(np.isfinite(x.view(np.float64))):
        _degeneracy_check(a)
        raise SteadyStateError("sparse factorization failed on a "
                               "non-degenerate generator")
    norm_l = spla.norm(lv / scale)
    norm_x = float(np.linalg.norm(x))
    residual = float(np.linalg.norm((lv / scale) @ x))
    if residual > RESIDUAL_RTOL * norm_l * norm_x:
        _degeneracy_check(a)
        raise SteadyStateError(
            f"steady-state residual {residual:.3e} exceeds "
            f"{RESIDUAL_RTOL:.0e} * |L| * |rho| = "
            f"{RESIDUAL_RTOL * norm_l * norm_x:.3e}",
            residual=residual)
    rho = model.unvectorize(x, space.dim)
    return DensityMatrix(rho, space, params_key,
                         residual=residual / (norm_l * norm_x))


def steady_state(d: DerivedParams, space: FockSpace) -> DensityMatrix:
    """Build the Liouvillian for ``d`` and solve it, scaled by gamma."""
    lv = model.liouvillian(d, space)
    return solve_steady(lv, space, scale=d.gamma, params_key=d.key())


def evolve(lv: sp.spmatrix, rho0: DensityMatrix, t_final: float,
           rtol: float = 1e-9, *, atol: float = 1e-14,
           scale: float | None = None,
           max_steps: int = 10_000_000) -> DensityMatrix:
    """Propagate ``rho0`` under ``d rho/dt = L rho`` for ``t_final``.

    ``t_final`` is in the same units as ``1/lv``; pass ``scale`` (e.g. the
    loss rate) to integrate in dimensionless time, which keeps step sizes
    of order one.

    Raises
    ------
    StepSizeUnderflowError
        If the controller drives the step below the resolvable limit.
    EvolutionError
        If Hermiticity or trace drift exceeds 1e-8 at the final time.
    """
    lv = _check_liouvillian(lv, rho0.space)
    if t_final < 0:
        raise EvolutionError(f"t_final must be >= 0, got {t_final}")
    if t_final == 0.0:
        return DensityMatrix(rho0.data.copy(), rho0.space, rho0.params_key)
    if scale is None:
        scale = 1.0
    y0 = model.vectorize(rho0.data)
    y, steps, status = _kernels.integrate(lv / scale, y0, t_final * scale,
                                          rtol, atol, max_steps=max_steps)
    if status == _kernels.STATUS_UNDERFLOW:
        raise StepSizeUnderflowError(
            f"step size underflow after {steps} steps")
    if status == _kernels.STATUS_MAX_STEPS:
        raise EvolutionError(f"step budget exhausted ({steps} steps)")
    rho = model.unvectorize(y, rho0.space.dim)
    out = DensityMatrix(rho, rho0.space, rho0.params_key)
    drift = max(abs(out.trace() - rho0.trace()),
                float(abs(np.trace(rho).imag)),
                out.hermiticity_defect())
    if drift > 1e-8:
        raise EvolutionError(
            f"conservation drift {drift:.3e} exceeds 1e-8 at t_final")
    return out


def evolve_from_vacuum(d: DerivedParams, space: FockSpace,
                       t_final_gammas: float, rtol: float = 1e-9, *,
                       atol: float = 1e-14) -> DensityMatrix:
    """Vacuum evolved for ``t_final_gammas / gamma`` under ``d``."""
    lv = model.liouvillian(d, space)
    rho0 = vacuum_state(space, d.key())
    return evolve(lv, rho0, t_final_gammas / d.gamma, rtol, atol=atol,
                  scale=d.gamma)


_CONVERGENCE_OBSERVABLES = ("n_cw", "n_ccw", "g2_cw", "g2_ccw",
                            "g3_cw", "g3_ccw")


@dataclass(frozen=True)
class ConvergenceRow:
    cutoffs: tuple[int, int]
    rel_change: dict
    undefined: dict


@dataclass(frozen=True)
class ConvergenceReport:
    """Per-cutoff-pair relative changes of the scalar observables."""

    rows: list[ConvergenceRow] = field(default_factory=list)
    tolerance: float = 1e-3

    @property
    def max_rel_change(self) -> float:
        values = [v for row in self.rows
                  for v in row.rel_change.values() if v is not None]
        return max(values) if values else 0.0

    @property
    def passed(self) -> bool:
        if any(row.undefined for row in self.rows):
            return False
        return self.max_rel_change < self.tolerance

    def summary(self) -> str:
        lines = []
        for row in self.rows:
            worst = max((v for v in row.rel_change.values() if v is not None),
                        default=0.0)
            flags = "; ".join(
                f"{name} undefined at cutoff {row.cutoffs[i]}"
                for name, states in sorted(row.undefined.items())
                for i, state in enumerate(states) if state)
            lines.append(f"cutoffs {row.cutoffs}: max rel change {worst:.3e}"
                         + (f" [{flags}]" if flags else ""))
        lines.append(f"pass: {self.passed} (tolerance {self.tolerance:g})")
        return "\n".join(lines)


def _scalar_observables(rho: DensityMatrix, space: FockSpace) -> dict:
    from . import observables as obs
    out = {}
    for mode, tag in ((Mode.CW, "cw"), (Mode.CCW, "ccw")):
        n = obs.mean_photon(rho, mode)
        out[f"n_{tag}"] = n
        for order, name in ((2, f"g2_{tag}"), (3, f"g3_{tag}")):
            if space.cutoff(mode) < order or n < obs.CORRELATION_FLOOR:
                out[name] = None
            else:
                out[name] = obs.correlation(rho, mode, order)
    return out


def _rel_change(a: float, b: float) -> float:
    if a == b:
        return 0.0
    if max(abs(a), abs(b)) < 1e-12:
        return 0.0  # both below solver noise on an empty mode
    return abs(a - b) / max(abs(a), abs(b))


def convergence_check(d: DerivedParams, cutoffs, *,
                      tolerance: float = 1e-3) -> ConvergenceReport:
    """Solve at each photon cutoff and compare consecutive observables.

    An observable that is undefined at one cutoff of a pair but defined at
    the other (e.g. g2 below two retained photons) fails the report and is
    listed in the row's ``undefined`` map.
    """
    cutoffs = [int(c) for c in cutoffs]
    if len(cutoffs) < 2:
        raise SpaceError("convergence check needs at least two cutoffs")
    values = []
    for c in cutoffs:
        space = build_space(c, c)
        rho = steady_state(d, space)
        values.append(_scalar_observables(rho, space))
    rows = []
    for (c0, v0), (c1, v1) in zip(zip(cutoffs, values),
                                  zip(cutoffs[1:], values[1:])):
        rel = {}
        undefined = {}
        for name in _CONVERGENCE_OBSERVABLES:
            a, b = v0[name], v1[name]
            if a is None or b is None:
                rel[name] = None
                if (a is None) != (b is None):
                    undefined[name] = (a is None, b is None)
            else:
                rel[name] = _rel_change(a, b)
        rows.append(ConvergenceRow((c0, c1), rel, undefined))
    return ConvergenceReport(rows, tolerance)
