"""Hamiltonian and Liouvillian assembly for the spinning two-mode Kerr cavity.

In the frame rotating at the drive frequency, with the resonator spinning
counter-clockwise and the Sagnac shift splitting the modes,

    H = (delta0 + dsag) n_cw + (delta0 - dsag) n_ccw
        + J (a_cw^dag a_ccw + h.c.)
        + chi (a_cw^dag^2 a_cw^2 + a_ccw^dag^2 a_ccw^2)
        + 2 chi n_cw n_ccw
        + xi (a_d^dag + a_d),

where ``a_d`` is the driven mode.  Dissipation enters either through the
non-Hermitian ``H_eff = H - i (gamma/2)(n_cw + n_ccw)`` or through the
Lindblad generator with one decay channel per mode at the common rate
``gamma``:

    drho/dt = -i [H, rho]
              + sum_j (gamma/2) (2 a_j rho a_j^dag - a_j^dag a_j rho
                                 - rho a_j^dag a_j).

Density matrices are vectorized column-stacking: ``vec(rho)[i + dim*j] =
rho[i, j]``, i.e. ``numpy.reshape(rho, -1, order="F")``, so that
``vec(A rho B) = kron(B.T, A) vec(rho)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import DimensionError
from .fock import FockSpace, add_scaled, adjoint, annihilation, compose, number_op
from .params import DerivedParams, Mode

__all__ = [
    "hamiltonian", "effective_hamiltonian", "liouvillian", "build",
    "ModelMatrices", "vectorize", "unvectorize", "trace_vector",
]


def _diagonal_rates(d: DerivedParams, space: FockSpace) -> np.ndarray:
    """Diagonal of H: mode detunings, self-Kerr and cross-Kerr terms.

    Built from exact integer occupations so the diagonal is exactly real.
    """
    m = space.occupation_array(Mode.CW).astype(float)
    n = space.occupation_array(Mode.CCW).astype(float)
    return (d.mode_detuning(Mode.CW) * m
            + d.mode_detuning(Mode.CCW) * n
            + d.chi * (m * (m - 1.0) + n * (n - 1.0))
            + 2.0 * d.chi * m * n)


def hamiltonian(d: DerivedParams, space: FockSpace) -> sp.csr_matrix:
    """Hermitian Hamiltonian on the truncated space (rad/s units).

    Exactly Hermitian by construction: the diagonal is real and every
    off-diagonal term is assembled as ``X + adjoint(X)``.
    """
    diag = sp.diags(_diagonal_rates(d, space).astype(np.complex128),
                    format="csr")
    hop = compose(adjoint(annihilation(space, Mode.CW)),
                  annihilation(space, Mode.CCW))
    drive = annihilation(space, d.drive_direction)
    h = add_scaled(diag, d.backscattering, add_scaled(hop, 1.0, adjoint(hop)))
    h = add_scaled(h, d.xi, add_scaled(drive, 1.0, adjoint(drive)))
    h.sum_duplicates()
    return h


def effective_hamiltonian(d: DerivedParams, space: FockSpace) -> sp.csr_matrix:
    """Non-Hermitian H_eff = H - i (gamma/2)(n_cw + n_ccw).

    The decay term only touches the (real) diagonal, so
    ``effective_hamiltonian(...) - hamiltonian(...)`` recovers the decay
    term exactly.
    """
    m = space.occupation_array(Mode.CW)
    n = space.occupation_array(Mode.CCW)
    decay = sp.diags(-0.5j * d.gamma * (m + n).astype(np.complex128),
                     format="csr")
    out = add_scaled(hamiltonian(d, space), 1.0, decay)
    out.sum_duplicates()
    return out


def liouvillian(d: DerivedParams, space: FockSpace) -> sp.csr_matrix:
    """Lindblad generator acting on column-stacked density matrices."""
    h = hamiltonian(d, space)
    eye = sp.identity(space.dim, dtype=np.complex128, format="csr")
    lv = -1j * (sp.kron(eye, h, format="csr")
                - sp.kron(h.T, eye, format="csr"))
    for mode in (Mode.CW, Mode.CCW):
        a = annihilation(space, mode)
        n = number_op(space, mode)
        jump = sp.kron(a.conjugate(), a, format="csr")
        left = sp.kron(eye, n, format="csr")
        right = sp.kron(n.T, eye, format="csr")
        lv = lv + (0.5 * d.gamma) * (2.0 * jump - left - right)
    lv = lv.tocsr()
    lv.sum_duplicates()
    return lv


@dataclass(frozen=True)
class ModelMatrices:
    """All three generators for one parameter point."""

    space: FockSpace
    params: DerivedParams
    hamiltonian: sp.csr_matrix
    effective_hamiltonian: sp.csr_matrix
    liouvillian: sp.csr_matrix


def build(d: DerivedParams, space: FockSpace) -> ModelMatrices:
    return ModelMatrices(
        space=space,
        params=d,
        hamiltonian=hamiltonian(d, space),
        effective_hamiltonian=effective_hamiltonian(d, space),
        liouvillian=liouvillian(d, space),
    )


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Column-stack a density matrix."""
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise DimensionError(f"expected a square matrix, got {rho.shape}")
    return np.asarray(rho, dtype=np.complex128).reshape(-1, order="F")


def unvectorize(x: np.ndarray, dim: int) -> np.ndarray:
    """Inverse of :func:`vectorize`."""
    if x.size != dim * dim:
        raise DimensionError(f"vector of size {x.size} is not {dim}x{dim}")
    return np.asarray(x, dtype=np.complex128).reshape((dim, dim), order="F")


def trace_vector(space: FockSpace) -> np.ndarray:
    """Row vector t with t @ vec(rho) = trace(rho)."""
    t = np.zeros(space.dim * space.dim, dtype=np.complex128)
    t[np.arange(space.dim) * (space.dim + 1)] = 1.0
    return t
