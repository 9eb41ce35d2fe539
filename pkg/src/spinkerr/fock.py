"""Truncated two-mode Fock space and sparse bosonic operator algebra.

States are labelled ``|m, n>`` with ``m`` photons in the CW mode and ``n``
in the CCW mode, truncated at per-mode cutoffs.  Flat indexing is row-major
in ``m`` (CW-major): ``index(m, n) = m * (n_max_ccw + 1) + n``.  This
ordering is fixed so that serialized operators are bit-comparable between
runs.

Operators are scipy CSR matrices with complex128 entries, built in
coordinate form and compressed once.  Construction is symbolic in the
sense that Hermitian combinations are assembled as ``X + adjoint(X)``,
which is exactly Hermitian in IEEE arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .errors import DimensionError, SpaceError
from .params import Mode

__all__ = [
    "FockSpace", "build_space", "annihilation", "creation", "number_op",
    "power_moment_op", "identity", "compose", "adjoint", "add_scaled",
    "dump_operator", "validate_operator",
]

# Liouvillians scale as dim^2 x dim^2; beyond this the sparse direct solver
# is no longer the right tool.
MAX_DIM = 4096


@dataclass(frozen=True)
class FockSpace:
    """Rectangular two-mode truncation with a bijective flat-index map."""

    n_max_cw: int
    n_max_ccw: int

    @property
    def dim(self) -> int:
        return (self.n_max_cw + 1) * (self.n_max_ccw + 1)

    def cutoff(self, mode: Mode) -> int:
        return self.n_max_cw if mode is Mode.CW else self.n_max_ccw

    def index(self, m: int, n: int) -> int:
        """Flat index of ``|m, n>`` (CW-major)."""
        if not (0 <= m <= self.n_max_cw and 0 <= n <= self.n_max_ccw):
            raise SpaceError(f"state |{m},{n}> outside truncation "
                             f"({self.n_max_cw},{self.n_max_ccw})")
        return m * (self.n_max_ccw + 1) + n

    def occupations(self, i: int) -> tuple[int, int]:
        """Inverse of :meth:`index`."""
        if not 0 <= i < self.dim:
            raise SpaceError(f"flat index {i} outside dimension {self.dim}")
        return divmod(i, self.n_max_ccw + 1)

    def occupation_array(self, mode: Mode) -> np.ndarray:
        """Photon number of ``mode`` for every basis state, flat order."""
        m = np.arange(self.n_max_cw + 1)
        n = np.arange(self.n_max_ccw + 1)
        grid = m[:, None] if mode is Mode.CW else n[None, :]
        return np.broadcast_to(grid, (m.size, n.size)).reshape(-1).copy()


def build_space(n_max_cw: int, n_max_ccw: int) -> FockSpace:
    """Create a truncated space; cutoffs are the largest retained photon
    numbers and must be at least 1."""
    for name, value in (("n_max_cw", n_max_cw), ("n_max_ccw", n_max_ccw)):
        if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
            raise SpaceError(f"{name} must be an integer, got {value!r}")
        if value < 1:
            raise SpaceError(f"{name} must be >= 1, got {value}")
    dim = (n_max_cw + 1) * (n_max_ccw + 1)
    if dim > MAX_DIM:
        raise SpaceError(f"dimension {dim} exceeds the supported maximum "
                         f"{MAX_DIM}")
    return FockSpace(int(n_max_cw), int(n_max_ccw))


def _single_mode_lowering(n_max: int) -> sp.csr_matrix:
    amp = np.sqrt(np.arange(1, n_max + 1, dtype=float))
    return sp.diags(amp, offsets=1, format="csr", dtype=np.complex128)


@lru_cache(maxsize=None)
def annihilation(space: FockSpace, mode: Mode) -> sp.csr_matrix:
    """Lowering operator of one mode: ``<m-1,n| a_cw |m,n> = sqrt(m)``."""
    a = _single_mode_lowering(space.cutoff(mode))
    eye = sp.identity(space.cutoff(mode.other()) + 1, dtype=np.complex128,
                      format="csr")
    if mode is Mode.CW:
        out = sp.kron(a, eye, format="csr")
    else:
        out = sp.kron(eye, a, format="csr")
    out.sum_duplicates()
    return out


def creation(space: FockSpace, mode: Mode) -> sp.csr_matrix:
    return adjoint(annihilation(space, mode))


@lru_cache(maxsize=None)
def number_op(space: FockSpace, mode: Mode) -> sp.csr_matrix:
    """Photon-number operator, built as adjoint(a) @ a."""
    a = annihilation(space, mode)
    return compose(adjoint(a), a)


@lru_cache(maxsize=None)
def power_moment_op(space: FockSpace, mode: Mode, k: int) -> sp.csr_matrix:
    """Normal-ordered moment operator ``a^dagger^k a^k``."""
    if k < 1:
        raise SpaceError(f"moment order must be >= 1, got {k}")
    a = annihilation(space, mode)
    ak = a
    for _ in range(k - 1):
        ak = compose(ak, a)
    return compose(adjoint(ak), ak)


def identity(space: FockSpace) -> sp.csr_matrix:
    return sp.identity(space.dim, dtype=np.complex128, format="csr")


def _check_square(op) -> None:
    if op.shape[0] != op.shape[1]:
        raise DimensionError(f"operator is not square: {op.shape}")


def compose(a: sp.spmatrix, b: sp.spmatrix) -> sp.csr_matrix:
    """Matrix product with an explicit dimension check."""
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot compose {a.shape} with {b.shape}")
    out = (a @ b).tocsr()
    out.sum_duplicates()
    return out


def adjoint(a: sp.spmatrix) -> sp.csr_matrix:
    """Conjugate transpose; exact (element negation and transposition only)."""
    out = a.conjugate().T.tocsr()
    out.sum_duplicates()
    return out


def add_scaled(a: sp.spmatrix, alpha: complex, b: sp.spmatrix) -> sp.csr_matrix:
    """``a + alpha * b`` with an explicit dimension check."""
    if a.shape != b.shape:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}")
    out = (a + alpha * b).tocsr()
    out.sum_duplicates()
    return out


def validate_operator(op: sp.spmatrix) -> None:
    """Check storage invariants: canonical CSR, finite entries."""
    csr = op.tocsr()
    csr.sum_duplicates()
    if not np.all(np.isfinite(csr.data.view(np.float64))):
        raise DimensionError("operator contains non-finite entries")


def dump_operator(op: sp.spmatrix, path) -> None:
    """Write a triplet text dump ``row col re im`` (one entry per line,
    sorted row-major) for cross-checking against other implementations."""
    coo = op.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as fh:
        fh.write(f"# shape {op.shape[0]} {op.shape[1]}\n")
        for i in order:
            fh.write(f"{coo.row[i]} {coo.col[i]} "
                     f"{coo.data[i].real:.17g} {coo.data[i].imag:.17g}\n")
