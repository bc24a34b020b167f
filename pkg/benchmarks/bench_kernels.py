"""Compare the compiled kernels with the numpy fallback.

Run ``python3 benchmarks/bench_kernels.py`` after an editable install.  Each
row reports the best of ``--repeat`` timings and checks that both backends
return the same array.
"""

import argparse
import timeit

import numpy as np

from wga._backend import compiled_kernels, python_kernels
from wga.algebra import AlgebraElement, _output_box
from wga.group import GroupSpec


def _element(rng, spec, terms, window):
    free = rng.integers(-window, window + 1, size=(terms, spec.free_rank))
    tors = [rng.integers(0, m, size=(terms, 1)) for m in spec.torsion_orders]
    amps = rng.normal(size=terms) + 1j * rng.normal(size=terms)
    return AlgebraElement(spec, np.concatenate([free, *tors], axis=1), amps)


def _best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def convolve_cases(rng):
    for spec, terms, window in [
        (GroupSpec(1), 64, 200),
        (GroupSpec(1), 1024, 4000),
        (GroupSpec(2), 256, 32),
        (GroupSpec(2, (4,)), 512, 24),
    ]:
        f, g = _element(rng, spec, terms, window), _element(rng, spec, terms, window)
        lo, extent = _output_box(f, g)
        args = (f.coords, f.amps, g.coords, g.amps, lo, extent, spec.moduli)
        yield f"direct_convolve {spec} {len(f)}x{len(g)}", args


def eval_cases(rng):
    for spec, terms, window, npts in [(GroupSpec(1), 17, 8, 4096), (GroupSpec(2), 64, 8, 4096), (GroupSpec(1), 400, 200, 1024)]:
        f = _element(rng, spec, terms, window)
        pts = np.exp(1j * rng.uniform(0, 2 * np.pi, size=(npts, spec.n_axes)))
        yield f"laurent_eval {spec} {len(f)} terms x {npts} points", (f.coords, f.amps, pts)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    ns = parser.parse_args(argv)
    if compiled_kernels is None:
        raise SystemExit("the compiled extension is not built; run `pip install -e . --no-build-isolation`")
    rng = np.random.default_rng(ns.seed)
    print(f"{'case':<52} {'cython':>10} {'numpy':>10} {'speedup':>8}  max|diff|")
    for name, cases in (("direct_convolve", convolve_cases(rng)), ("laurent_eval", eval_cases(rng))):
        for label, args in cases:
            fast = getattr(compiled_kernels, name)
            slow = getattr(python_kernels, name)
            diff = float(np.max(np.abs(np.asarray(fast(*args)) - np.asarray(slow(*args))), initial=0.0))
            tc = _best(lambda: fast(*args), ns.repeat)
            tp = _best(lambda: slow(*args), ns.repeat)
            print(f"{label:<52} {tc * 1e3:9.2f}ms {tp * 1e3:9.2f}ms {tp / tc:7.1f}x  {diff:.1e}")


if __name__ == "__main__":
    main()
