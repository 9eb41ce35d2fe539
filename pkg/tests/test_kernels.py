import os
import subprocess
import sys

import numpy as np
import pytest
import scipy.sparse as sp

from spinkerr import _kernels
from spinkerr.errors import EvolutionError
from spinkerr.model import liouvillian
from spinkerr.steadystate import evolve, vacuum_state
from spinkerr import build_space, paper_derived


def random_generator(rng, n=40, density=0.1):
    a = sp.random(n, n, density=density, random_state=np.random.RandomState(7),
                  format="csr", dtype=float)
    a = a + 1j * sp.random(n, n, density=density,
                           random_state=np.random.RandomState(11),
                           format="csr", dtype=float)
    # shift the spectrum into the stable half-plane
    return (a - 3.0 * sp.identity(n, format="csr")).tocsr()


def test_matvec_matches_scipy(rng):
    a = random_generator(rng)
    x = rng.normal(size=a.shape[0]) + 1j * rng.normal(size=a.shape[0])
    assert np.allclose(_kernels.csr_matvec(a, x), a @ x, rtol=1e-13)


def test_integrator_matches_exponential_decay():
    # dy/dt = -lambda y has the closed form y0 exp(-lambda t)
    lam = 2.7
    a = sp.csr_matrix(np.array([[-lam]], dtype=complex))
    y0 = np.array([1.5 - 0.5j])
    y, steps, status = _kernels.integrate(a, y0, 3.0, 1e-12, 1e-16)
    assert status == _kernels.STATUS_OK
    assert steps > 0
    assert y[0] == pytest.approx(y0[0] * np.exp(-lam * 3.0), rel=1e-10)


def test_integrator_matches_scipy_reference(rng):
    from scipy.integrate import solve_ivp
    a = random_generator(rng)
    y0 = rng.normal(size=a.shape[0]) + 1j * rng.normal(size=a.shape[0])
    mine, _, status = _kernels.integrate(a, y0, 1.5, 1e-11, 1e-14)
    assert status == _kernels.STATUS_OK
    ref = solve_ivp(lambda t, y: a @ y, (0.0, 1.5), y0, rtol=1e-11,
                    atol=1e-14).y[:, -1]
    assert np.allclose(mine, ref, rtol=1e-8, atol=1e-12)


def test_zero_time_is_identity(rng):
    a = random_generator(rng)
    y0 = rng.normal(size=a.shape[0]).astype(complex)
    y, steps, status = _kernels.integrate(a, y0, 0.0, 1e-9, 1e-14)
    assert steps == 0 and status == _kernels.STATUS_OK
    assert np.array_equal(y, y0)


def test_max_steps_guard(rng):
    a = random_generator(rng)
    y0 = rng.normal(size=a.shape[0]).astype(complex)
    _, steps, status = _kernels.integrate(a, y0, 50.0, 1e-12, 1e-16,
                                          max_steps=5)
    assert status == _kernels.STATUS_MAX_STEPS
    assert steps == 5


def test_evolve_surfaces_step_budget(space4):
    d = paper_derived(omega=30e3, delta0=-2.3e6)
    lv = liouvillian(d, space4)
    with pytest.raises(EvolutionError):
        evolve(lv, vacuum_state(space4), 40.0 / d.gamma, rtol=1e-9,
               scale=d.gamma, max_steps=5)


def test_backend_reports_a_known_name():
    assert _kernels.backend_name() in ("numba", "numpy")


_PROBE = r"""
import json
import numpy as np
import scipy.sparse as sp
from spinkerr import _kernels
a = sp.csr_matrix(np.array([[-1.0, 0.3], [0.1, -2.0]], dtype=complex))
y0 = np.array([1.0 + 0.2j, -0.5j])
y, steps, status = _kernels.integrate(a, y0, 2.5, 1e-11, 1e-15)
print(json.dumps({"backend": _kernels.backend_name(),
                  "status": status,
                  "y": [[v.real, v.imag] for v in y]}))
"""


def _run_probe(backend):
    env = dict(os.environ, SPINKERR_BACKEND=backend)
    out = subprocess.run([sys.executable, "-c", _PROBE], env=env,
                         capture_output=True, text=True, check=True)
    import json
    return json.loads(out.stdout.strip().split("\n")[-1])


@pytest.mark.slow
def test_env_flag_selects_backend_and_paths_agree():
    numpy_doc = _run_probe("numpy")
    assert numpy_doc["backend"] == "numpy"
    assert numpy_doc["status"] == _kernels.STATUS_OK
    try:
        import numba  # noqa: F401
    except ImportError:
        pytest.skip("numba unavailable")
    numba_doc = _run_probe("numba")
    assert numba_doc["backend"] == "numba"
    a = np.array(numpy_doc["y"])
    b = np.array(numba_doc["y"])
    assert np.allclose(a, b, rtol=1e-12, atol=1e-15)
