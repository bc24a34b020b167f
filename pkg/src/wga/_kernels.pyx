# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline void _ipow(double zr, double zi, cnp.int64_t n, double* outr, double* outi) noexcept nogil:
    # binary powering on split real/imaginary parts; avoids the slow
    # inf/nan-aware complex helpers the C compiler would otherwise call
    cdef double rr = 1.0, ri = 0.0, br = zr, bi = zi, t, d
    cdef bint neg = n < 0
    if neg:
        n = -n
    while n:
        if n & 1:
            t = rr * br - ri * bi
            ri = rr * bi + ri * br
            rr = t
        t = br * br - bi * bi
        bi = 2.0 * br * bi
        br = t
        n >>= 1
    if neg:
        d = rr * rr + ri * ri
        rr, ri = rr / d, -ri / d
    outr[0] = rr
    outi[0] = ri


def direct_convolve(const cnp.int64_t[:, :] cf, const double complex[:] af,
                    const cnp.int64_t[:, :] cg, const double complex[:] ag,
                    const cnp.int64_t[:] lo, const cnp.int64_t[:] extent,
                    const cnp.int64_t[:] moduli):
    cdef Py_ssize_t naxes = extent.shape[0]
    cdef Py_ssize_t nf = af.shape[0], ng = ag.shape[0]
    cdef Py_ssize_t i, j, a
    cdef cnp.int64_t size = 1, idx, s, m
    for a in range(naxes):
        size *= extent[a]
    out_arr = np.zeros(size, dtype=np.complex128)
    cdef double complex[:] out = out_arr
    strides_arr = np.ones(max(naxes, 1), dtype=np.int64)
    cdef cnp.int64_t[:] strides = strides_arr
    for a in range(naxes - 2, -1, -1):
        strides[a] = strides[a + 1] * extent[a + 1]
    cdef double complex fi
    with nogil:
        for i in range(nf):
            fi = af[i]
            for j in range(ng):
                idx = 0
                for a in range(naxes):
                    s = cf[i, a] + cg[j, a] - lo[a]
                    m = moduli[a]
                    if m > 0:
                        s = s % m
                        if s < 0:
                            s += m
                    idx += s * strides[a]
                out[idx] += fi * ag[j]
    return out_arr


def laurent_eval(const cnp.int64_t[:, :] coords, const double complex[:] amps,
                 const double complex[:, :] points):
    cdef Py_ssize_t npts = points.shape[0], nk = amps.shape[0]
    cdef Py_ssize_t naxes = coords.shape[1]
    cdef Py_ssize_t p, k, a
    out_arr = np.zeros(npts, dtype=np.complex128)
    cdef double complex[:] out = out_arr
    cdef double accr, acci, tr, ti, pr, pi, t
    with nogil:
        for p in range(npts):
            accr = 0.0
            acci = 0.0
            for k in range(nk):
                tr = amps[k].real
                ti = amps[k].imag
                for a in range(naxes):
                    _ipow(points[p, a].real, points[p, a].imag, coords[k, a], &pr, &pi)
                    t = tr * pr - ti * pi
                    ti = tr * pi + ti * pr
                    tr = t
                accr += tr
                acci += ti
            out[p] = accr + 1j * acci
    return out_arr
