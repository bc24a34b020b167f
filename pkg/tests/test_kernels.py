"""Both kernel backends against each other and against a naive oracle."""

import numpy as np
import pytest

from wga import _backend
from wga._backend import python_kernels

BACKENDS = [pytest.param(python_kernels, id="python")]
if _backend.compiled_kernels is not None:
    BACKENDS.append(pytest.param(_backend.compiled_kernels, id="cython"))


def _naive_dense(cf, af, cg, ag, lo, extent, moduli):
    out = np.zeros(int(np.prod(extent)), dtype=np.complex128)
    for x, a in zip(cf, af):
        for y, b in zip(cg, ag):
            s = x + y
            s = np.where(moduli > 0, np.mod(s, np.where(moduli > 0, moduli, 1)), s) - lo
            out[np.ravel_multi_index(tuple(s), tuple(extent))] += a * b
    return out


def _case(rng, d, torsion, k):
    n = d + len(torsion)
    moduli = np.array([0] * d + list(torsion), dtype=np.int64)

    def side():
        free = rng.integers(-5, 6, size=(k, d))
        tors = np.stack([rng.integers(0, m, size=k) for m in torsion], axis=1) if torsion else np.zeros((k, 0), int)
        c = np.concatenate([free, tors], axis=1).astype(np.int64).reshape(k, n)
        a = rng.normal(size=k) + 1j * rng.normal(size=k)
        return c, a

    cf, af = side()
    cg, ag = side()
    lo = np.concatenate([cf[:, :d].min(0) + cg[:, :d].min(0), np.zeros(len(torsion), int)]).astype(np.int64)
    hi = cf[:, :d].max(0) + cg[:, :d].max(0)
    extent = np.concatenate([hi - lo[:d] + 1, torsion]).astype(np.int64)
    return cf, af, cg, ag, lo, extent, moduli


@pytest.mark.parametrize("kern", BACKENDS)
@pytest.mark.parametrize("d, torsion", [(1, ()), (2, ()), (1, (3,)), (0, (2, 4)), (2, (5,))])
def test_direct_convolve_matches_naive(kern, d, torsion):
    rng = np.random.default_rng(7)
    for _ in range(5):
        args = _case(rng, d, torsion, 7)
        got = np.asarray(kern.direct_convolve(*args))
        assert np.max(np.abs(got - _naive_dense(*args))) < 1e-12


@pytest.mark.parametrize("kern", BACKENDS)
def test_laurent_eval_matches_naive(kern):
    rng = np.random.default_rng(11)
    coords = rng.integers(-6, 7, size=(9, 2)).astype(np.int64)
    amps = rng.normal(size=9) + 1j * rng.normal(size=9)
    pts = (0.5 + rng.uniform(size=(13, 2))) * np.exp(2j * np.pi * rng.uniform(size=(13, 2)))
    got = np.asarray(kern.laurent_eval(coords, amps, pts))
    ref = np.array([sum(a * p[0] ** int(c[0]) * p[1] ** int(c[1]) for c, a in zip(coords, amps)) for p in pts])
    assert np.max(np.abs(got - ref) / (1 + np.abs(ref))) < 1e-12


def test_backends_agree():
    if _backend.compiled_kernels is None:
        pytest.skip("compiled extension not built")
    rng = np.random.default_rng(3)
    args = _case(rng, 2, (3,), 40)
    a = np.asarray(_backend.compiled_kernels.direct_convolve(*args))
    b = np.asarray(python_kernels.direct_convolve(*args))
    assert np.max(np.abs(a - b)) < 1e-12


def test_backend_selection_reported():
    assert _backend.BACKEND in ("cython", "python")
    if _backend.compiled_kernels is not None and _backend.BACKEND == "cython":
        assert _backend.kernels is _backend.compiled_kernels


def test_env_forces_python_fallback():
    import os
    import subprocess
    import sys

    env = dict(os.environ, WGA_BACKEND="python")
    out = subprocess.run(
        [sys.executable, "-c", "import wga; print(wga.BACKEND)"], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "python"
