"""Hot numeric kernels: CSR matvec and an adaptive Dormand-Prince 4(5) loop.

Two interchangeable implementations exist:

* a numba ``@njit`` path compiling the whole integration loop, and
* a pure numpy/scipy fallback with identical stepping logic.

Selection is controlled by the ``SPINKERR_BACKEND`` environment variable:
``numba`` (require numba, error if missing), ``numpy`` (force the
fallback), or unset/``auto`` (numba when importable).  Both paths use the
same tableau, the same error norm and the same step-size controller, so
they agree to floating-point roundoff; ``benchmarks/bench_backends.py``
compares their speed.

Integration state is a flat complex128 vector ``y`` with ``dy/dt = A y``
for a sparse ``A`` held in CSR arrays.  No fastmath, no threading: results
must be reproducible bit-for-bit across runs.
"""

from __future__ import annotations

import os

import numpy as np
import scipy.sparse as sp

__all__ = ["backend_name", "integrate", "csr_matvec", "STATUS_OK",
           "STATUS_UNDERFLOW", "STATUS_MAX_STEPS"]

STATUS_OK = 0
STATUS_UNDERFLOW = 1
STATUS_MAX_STEPS = 2

# Dormand-Prince 4(5) tableau.  B5 propagates (local extrapolation), ERR is
# the difference between the 5th- and embedded 4th-order weights.
_A21 = 1.0 / 5.0
_A31, _A32 = 3.0 / 40.0, 9.0 / 40.0
_A41, _A42, _A43 = 44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0
_A51, _A52, _A53, _A54 = (19372.0 / 6561.0, -25360.0 / 2187.0,
                          64448.0 / 6561.0, -212.0 / 729.0)
_A61, _A62, _A63, _A64, _A65 = (9017.0 / 3168.0, -355.0 / 33.0,
                                46732.0 / 5247.0, 49.0 / 176.0,
                                -5103.0 / 18656.0)
_B1, _B3, _B4, _B5, _B6 = (35.0 / 384.0, 500.0 / 1113.0, 125.0 / 192.0,
                           -2187.0 / 6784.0, 11.0 / 84.0)
_E1, _E3, _E4, _E5, _E6, _E7 = (71.0 / 57600.0, -71.0 / 16695.0,
                                71.0 / 1920.0, -17253.0 / 339200.0,
                                22.0 / 525.0, -1.0 / 40.0)

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0


def _resolve_backend() -> str:
    requested = os.environ.get("SPINKERR_BACKEND", "auto").strip().lower()
    if requested not in ("auto", "numba", "numpy"):
        raise ValueError(
            f"SPINKERR_BACKEND must be auto, numba or numpy, got {requested!r}")
    if requested == "numpy":
        return "numpy"
    try:
        import numba  # noqa: F401
    except ImportError:
        if requested == "numba":
            raise ImportError(
                "SPINKERR_BACKEND=numba but numba is not importable")
        return "numpy"
    return "numba"


_BACKEND = _resolve_backend()


def backend_name() -> str:
    """Active kernel backend: ``"numba"`` or ``"numpy"``."""
    return _BACKEND


# ---------------------------------------------------------------------------
# numpy fallback
# ---------------------------------------------------------------------------

def _csr_matvec_numpy(data, indices, indptr, x):
    n = indptr.size - 1
    a = sp.csr_matrix((data, indices, indptr), shape=(n, n))
    return a @ x


def _error_norm(err, y_old, y_new, rtol, atol):
    scale = atol + rtol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))


def _initial_step(matvec, y0, f0, t_final, rtol, atol):
    scale = atol + rtol * np.abs(y0)
    d0 = float(np.sqrt(np.mean(np.abs(y0 / scale) ** 2)))
    d1 = float(np.sqrt(np.mean(np.abs(f0 / scale) ** 2)))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, t_final)
    f1 = matvec(y0 + h0 * f0)
    d2 = float(np.sqrt(np.mean(np.abs((f1 - f0) / scale) ** 2))) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100.0 * h0, h1, t_final)


def _integrate_numpy(data, indices, indptr, y0, t_final, rtol, atol,
                     max_steps):
    matvec = lambda v: _csr_matvec_numpy(data, indices, indptr, v)
    y = y0.copy()
    t = 0.0
    f = matvec(y)
    h = _initial_step(matvec, y, f, t_final, rtol, atol)
    h_min = max(t_final * 1e-14, 1e-300)
    steps = 0
    while t < t_final:
        if steps >= max_steps:
            return y, steps, STATUS_MAX_STEPS
        if h < h_min:
            return y, steps, STATUS_UNDERFLOW
        if t + h > t_final:
            h = t_final - t
        k1 = f
        k2 = matvec(y + h * (_A21 * k1))
        k3 = matvec(y + h * (_A31 * k1 + _A32 * k2))
        k4 = matvec(y + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
        k5 = matvec(y + h * (_A51 * k1 + _A52 * k2 + _A53 * k3 + _A54 * k4))
        k6 = matvec(y + h * (_A61 * k1 + _A62 * k2 + _A63 * k3 + _A64 * k4
                             + _A65 * k5))
        y5 = y + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        k7 = matvec(y5)
        err = h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6
                   + _E7 * k7)
        norm = _error_norm(err, y, y5, rtol, atol)
        steps += 1
        if norm <= 1.0:
            t += h
            y = y5
            f = k7  # first-same-as-last
            factor = _MAX_FACTOR if norm == 0.0 else min(
                _MAX_FACTOR, _SAFETY * norm ** -0.2)
            h *= max(_MIN_FACTOR, factor)
        else:
            h *= max(_MIN_FACTOR, _SAFETY * norm ** -0.2)
    return y, steps, STATUS_OK


# ---------------------------------------------------------------------------
# numba path
# ---------------------------------------------------------------------------

if _BACKEND == "numba":
    import numba

    @numba.njit(cache=True)
    def _csr_matvec_numba(data, indices, indptr, x):  # pragma: no cover
        n = indptr.size - 1
        out = np.zeros(n, dtype=np.complex128)
        for i in range(n):
            acc = 0.0 + 0.0j
            for p in range(indptr[i], indptr[i + 1]):
                acc += data[p] * x[indices[p]]
            out[i] = acc
        return out

    @numba.njit(cache=True)
    def _norm_scaled(err, y_old, y_new, rtol, atol):  # pragma: no cover
        acc = 0.0
        for i in range(err.size):
            mag = max(abs(y_old[i]), abs(y_new[i]))
            q = abs(err[i]) / (atol + rtol * mag)
            acc += q * q
        return np.sqrt(acc / err.size)

    @numba.njit(cache=True)
    def _integrate_numba(data, indices, indptr, y0, t_final, rtol, atol,
                         max_steps):  # pragma: no cover
        y = y0.copy()
        t = 0.0
        f = _csr_matvec_numba(data, indices, indptr, y)
        # starting-step heuristic, same as the numpy path
        d0 = 0.0
        d1 = 0.0
        for i in range(y.size):
            s = atol + rtol * abs(y[i])
            q0 = abs(y[i]) / s
            q1 = abs(f[i]) / s
            d0 += q0 * q0
            d1 += q1 * q1
        d0 = np.sqrt(d0 / y.size)
        d1 = np.sqrt(d1 / y.size)
        h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
        h0 = min(h0, t_final)
        f1 = _csr_matvec_numba(data, indices, indptr, y + h0 * f)
        d2 = 0.0
        for i in range(y.size):
            s = atol + rtol * abs(y[i])
            q = abs(f1[i] - f[i]) / s
            d2 += q * q
        d2 = np.sqrt(d2 / y.size) / h0
        dm = max(d1, d2)
        h1 = max(1e-6, h0 * 1e-3) if dm <= 1e-15 else (0.01 / dm) ** 0.2
        h = min(100.0 * h0, h1, t_final)
        h_min = max(t_final * 1e-14, 1e-300)
        steps = 0
        while t < t_final:
            if steps >= max_steps:
                return y, steps, STATUS_MAX_STEPS
            if h < h_min:
                return y, steps, STATUS_UNDERFLOW
            if t + h > t_final:
                h = t_final - t
            k1 = f
            k2 = _csr_matvec_numba(data, indices, indptr, y + h * (_A21 * k1))
            k3 = _csr_matvec_numba(data, indices, indptr,
                                   y + h * (_A31 * k1 + _A32 * k2))
            k4 = _csr_matvec_numba(data, indices, indptr,
                                   y + h * (_A41 * k1 + _A42 * k2 + _A43 * k3))
            k5 = _csr_matvec_numba(data, indices, indptr,
                                   y + h * (_A51 * k1 + _A52 * k2 + _A53 * k3
                                            + _A54 * k4))
            k6 = _csr_matvec_numba(data, indices, indptr,
                                   y + h * (_A61 * k1 + _A62 * k2 + _A63 * k3
                                            + _A64 * k4 + _A65 * k5))
            y5 = y + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5
                          + _B6 * k6)
            k7 = _csr_matvec_numba(data, indices, indptr, y5)
            err = h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6
                       + _E7 * k7)
            norm = _norm_scaled(err, y, y5, rtol, atol)
            steps += 1
            if norm <= 1.0:
                t += h
                y = y5
                f = k7
                if norm == 0.0:
                    factor = _MAX_FACTOR
                else:
                    factor = min(_MAX_FACTOR, _SAFETY * norm ** -0.2)
                h *= max(_MIN_FACTOR, factor)
            else:
                h *= max(_MIN_FACTOR, _SAFETY * norm ** -0.2)
        return y, steps, STATUS_OK


# ---------------------------------------------------------------------------
# public entry points
# ---------------------------------------------------------------------------

def csr_matvec(a: sp.csr_matrix, x: np.ndarray) -> np.ndarray:
    """Sparse matrix-vector product through the active backend."""
    a = a.tocsr()
    x = np.asarray(x, dtype=np.complex128)
    if _BACKEND == "numba":
        return _csr_matvec_numba(a.data.astype(np.complex128), a.indices,
                                 a.indptr, x)
    return _csr_matvec_numpy(a.data.astype(np.complex128), a.indices,
                             a.indptr, x)


def integrate(a: sp.csr_matrix, y0: np.ndarray, t_final: float,
              rtol: float, atol: float,
              max_steps: int = 10_000_000) -> tuple[np.ndarray, int, int]:
    """Integrate ``dy/dt = A y`` from 0 to ``t_final``.

    Returns ``(y, steps, status)`` with status one of STATUS_OK,
    STATUS_UNDERFLOW, STATUS_MAX_STEPS.
    """
    a = a.tocsr()
    a.sum_duplicates()
    y0 = np.asarray(y0, dtype=np.complex128)
    if t_final == 0.0:
        return y0.copy(), 0, STATUS_OK
    if t_final < 0.0:
        raise ValueError(f"t_final must be >= 0, got {t_final}")
    data = a.data.astype(np.complex128)
    if _BACKEND == "numba":
        return _integrate_numba(data, a.indices, a.indptr, y0,
                                float(t_final), float(rtol), float(atol),
                                int(max_steps))
    return _integrate_numpy(data, a.indices, a.indptr, y0, float(t_final),
                            float(rtol), float(atol), int(max_steps))
