import itertools
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from wga.algebra import AlgebraElement
from wga.group import GroupSpec

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SPECS = [GroupSpec(1), GroupSpec(2), GroupSpec(1, (4,)), GroupSpec(0, (2, 3)), GroupSpec(2, (3,))]


@st.composite
def elements(draw, spec, window=4, max_terms=6):
    """Random finitely supported element with free coordinates in ``[-window, window]``."""
    k = draw(st.integers(1, max_terms))
    coords = []
    for _ in range(k):
        free = [draw(st.integers(-window, window)) for _ in range(spec.free_rank)]
        tors = [draw(st.integers(0, m - 1)) for m in spec.torsion_orders]
        coords.append(free + tors)
    amps = [
        complex(draw(st.floats(-2, 2, allow_nan=False)), draw(st.floats(-2, 2, allow_nan=False))) for _ in range(k)
    ]
    return AlgebraElement(spec, np.array(coords, dtype=np.int64).reshape(k, spec.n_axes), amps)


def random_element(rng, spec, window=4, terms=6, unit_disk=False):
    k = int(rng.integers(1, terms + 1))
    free = rng.integers(-window, window + 1, size=(k, spec.free_rank))
    tors = [rng.integers(0, m, size=(k, 1)) for m in spec.torsion_orders]
    coords = np.concatenate([free] + tors, axis=1) if tors else free
    if unit_disk:
        amps = np.sqrt(rng.uniform(0, 1, k)) * np.exp(2j * np.pi * rng.uniform(0, 1, k))
    else:
        amps = rng.normal(size=k) + 1j * rng.normal(size=k)
    return AlgebraElement(spec, coords, amps)


def naive_convolve(f, g):
    """Dictionary double loop, independent of the package kernels."""
    spec = f.spec
    mods = [0] * spec.free_rank + list(spec.torsion_orders)
    out = {}
    for (x, a), (y, b) in itertools.product(zip(f.coords.tolist(), f.amps), zip(g.coords.tolist(), g.amps)):
        z = tuple(u + v if not m else (u + v) % m for u, v, m in zip(x, y, mods))
        out[z] = out.get(z, 0) + a * b
    return out


def dict_diff(elem, ref):
    keys = set(ref) | {tuple(c) for c in elem.coords.tolist()}
    return max((abs(elem[k] - ref.get(k, 0)) for k in keys), default=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# filled by the acceptance tests, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
