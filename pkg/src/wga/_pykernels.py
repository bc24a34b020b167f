"""Pure numpy implementations of the hot kernels.

Signatures mirror the compiled ``_kernels`` extension exactly; the backend
is chosen in :mod:`wga._backend`.
"""

import numpy as np

# pair-block size for the direct convolution, bounds temporary memory
_BLOCK = 1 << 20


def direct_convolve(cf, af, cg, ag, lo, extent, moduli):
    """Dense accumulator of ``sum_{i,j} af[i] ag[j]`` at ``cf[i] + cg[j]``.

    Free axes are offset by ``lo`` into ``[0, extent)``; torsion axes
    (``moduli > 0``) are reduced modulo their order.  Returns a flat complex
    array of length ``prod(extent)`` in row-major order.
    """
    cf = np.asarray(cf, dtype=np.int64)
    cg = np.asarray(cg, dtype=np.int64)
    af = np.asarray(af, dtype=np.complex128)
    ag = np.asarray(ag, dtype=np.complex128)
    lo = np.asarray(lo, dtype=np.int64)
    extent = np.asarray(extent, dtype=np.int64)
    moduli = np.asarray(moduli, dtype=np.int64)
    size = int(np.prod(extent)) if extent.size else 1
    out = np.zeros(size, dtype=np.complex128)
    nf, ng = len(af), len(ag)
    if nf == 0 or ng == 0:
        return out
    strides = np.ones(len(extent), dtype=np.int64)
    for a in range(len(extent) - 2, -1, -1):
        strides[a] = strides[a + 1] * extent[a + 1]
    rows = max(1, _BLOCK // ng)
    tors = moduli > 0
    for start in range(0, nf, rows):
        sub = cf[start:start + rows]
        s = sub[:, None, :] + cg[None, :, :] - lo
        if np.any(tors):
            s[..., tors] %= moduli[tors]
        idx = (s * strides).sum(axis=-1).ravel()
        vals = (af[start:start + rows, None] * ag[None, :]).ravel()
        out += np.bincount(idx, weights=vals.real, minlength=size) + 1j * np.bincount(
            idx, weights=vals.imag, minlength=size
        )
    return out


def laurent_eval(coords, amps, points):
    """``out[p] = sum_k amps[k] * prod_a points[p, a] ** coords[k, a]``."""
    coords = np.asarray(coords, dtype=np.int64)
    amps = np.asarray(amps, dtype=np.complex128)
    points = np.asarray(points, dtype=np.complex128)
    npts = points.shape[0]
    out = np.zeros(npts, dtype=np.complex128)
    if len(amps) == 0:
        return out
    if coords.shape[1] == 0:
        out[:] = amps.sum()
        return out
    logs = np.log(points)
    rows = max(1, _BLOCK // len(amps))
    for start in range(0, npts, rows):
        phase = logs[start:start + rows] @ coords.T.astype(np.float64)
        out[start:start + rows] = np.exp(phase) @ amps
    return out
