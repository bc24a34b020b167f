"""Finitely supported elements of the weighted group algebra.

An :class:`AlgebraElement` stores its support as a lexicographically sorted
``(k, n_axes)`` int64 coordinate array next to a complex amplitude vector.
Amplitudes with modulus ``<= 1e-30`` are dropped on construction.

Convolution has two independent routes: a direct pair-sum (compiled kernel
or numpy fallback) and a zero-padded FFT route.  ``path="auto"`` picks the
direct one for small products of support sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np
from scipy import fft as sfft

from ._backend import kernels
from .errors import PreconditionError, ResourceLimitError, SpecMismatchError
from .group import GroupElement, GroupSpec, coords_array
from .weight import Weight

CLEANUP = 1e-30
DIRECT_THRESHOLD = 4096
# dense accumulators / FFT grids beyond this many cells are refused
DENSE_CAP = 1 << 24
FFT_CAP = 1 << 24
POWER_SUPPORT_CAP = 1 << 22
# log w beyond this leaves the normalised coefficients in the subnormal range
LOG_RANGE = 650.0
# FFT squaring in the norm ladder only while w varies by less than e**this
FFT_LOG_SPREAD = 20.0
DIRECT_WORK_CAP = 1 << 28


def _lexsort_rows(coords: np.ndarray) -> np.ndarray:
    if coords.shape[1] == 0:
        return np.arange(coords.shape[0])
    return np.lexsort(coords.T[::-1])


def _reduce_torsion(spec: GroupSpec, coords: np.ndarray) -> np.ndarray:
    mod = spec.moduli
    if np.any(mod):
        t = mod > 0
        coords = coords.copy()
        coords[:, t] %= mod[t]
    return coords


class AlgebraElement:
    """Immutable finitely supported function ``G -> C``."""

    __slots__ = ("spec", "coords", "amps", "flags")

    def __init__(
        self, spec: GroupSpec, coords, amps, flags: Iterable[str] = (), *, canonical: bool = False, cleanup: float = None
    ):
        amps = np.asarray(amps, dtype=np.complex128).reshape(-1)
        coords = np.asarray(coords, dtype=np.int64)
        # reshape(-1, 0) is ambiguous, so the trivial group takes its row count from amps
        coords = coords.reshape(len(amps), 0) if spec.n_axes == 0 else coords.reshape(-1, spec.n_axes)
        if len(coords) != len(amps):
            raise ValueError("coordinate and amplitude counts differ")
        if not canonical:
            coords, amps = self._canonicalize(spec, coords, amps, CLEANUP if cleanup is None else cleanup)
        coords.setflags(write=False)
        amps.setflags(write=False)
        self.spec = spec
        self.coords = coords
        self.amps = amps
        self.flags = frozenset(flags)

    @staticmethod
    def _canonicalize(spec, coords, amps, cleanup=CLEANUP):
        coords = _reduce_torsion(spec, coords)
        if len(coords) > 1:
            uniq, inv = np.unique(coords, axis=0, return_inverse=True)
            inv = inv.reshape(-1)
            if len(uniq) < len(coords):
                summed = np.zeros(len(uniq), dtype=np.complex128)
                np.add.at(summed, inv, amps)
                coords, amps = uniq, summed
            else:
                order = _lexsort_rows(coords)
                coords, amps = coords[order], amps[order]
        keep = np.abs(amps) > cleanup
        return np.ascontiguousarray(coords[keep]), np.ascontiguousarray(amps[keep])

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, spec: GroupSpec) -> "AlgebraElement":
        return cls(spec, np.zeros((0, spec.n_axes), dtype=np.int64), np.zeros(0), canonical=True)

    @classmethod
    def delta(cls, spec: GroupSpec, x: GroupElement | tuple | int = None, amp: complex = 1.0) -> "AlgebraElement":
        """Point mass ``amp * delta_x`` (identity when ``x`` is omitted)."""
        if x is None:
            x = spec.identity()
        if isinstance(x, int):
            x = (x,)
        c = x.coords if isinstance(x, GroupElement) else tuple(x)
        return cls(spec, coords_array([c], spec.n_axes), [amp])

    @classmethod
    def from_dict(cls, spec: GroupSpec, data: Mapping) -> "AlgebraElement":
        keys = [k.coords if isinstance(k, GroupElement) else ((k,) if isinstance(k, int) else tuple(k)) for k in data]
        return cls(spec, coords_array(keys, spec.n_axes), list(data.values()))

    @classmethod
    def from_literal(cls, spec: GroupSpec, triples) -> "AlgebraElement":
        """Build from ``[[coords, re, im], ...]``."""
        coords, amps = [], []
        for item in triples:
            c, re, im = item
            coords.append(tuple(c))
            amps.append(complex(re, im))
        return cls(spec, coords_array(coords, spec.n_axes), amps)

    def to_literal(self) -> list:
        return [[list(map(int, c)), float(a.real), float(a.imag)] for c, a in zip(self.coords, self.amps)]

    # views ----------------------------------------------------------------

    @property
    def support(self) -> dict[GroupElement, complex]:
        return {self.spec.element(c): complex(a) for c, a in zip(self.coords, self.amps)}

    def __len__(self) -> int:
        return len(self.amps)

    def is_zero(self) -> bool:
        return len(self.amps) == 0

    def __getitem__(self, x) -> complex:
        c = np.asarray(x.coords if isinstance(x, GroupElement) else ((x,) if isinstance(x, int) else tuple(x)))
        c = _reduce_torsion(self.spec, c.reshape(1, -1))[0]
        hit = np.flatnonzero(np.all(self.coords == c, axis=1))
        return complex(self.amps[hit[0]]) if hit.size else 0j

    def free_box(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-free-axis ``(min, max)`` of the support."""
        d = self.spec.free_rank
        if self.is_zero():
            return np.zeros(d, dtype=np.int64), np.zeros(d, dtype=np.int64)
        return self.coords[:, :d].min(axis=0), self.coords[:, :d].max(axis=0)

    def __repr__(self) -> str:
        terms = " + ".join(f"({complex(a):.4g})d{tuple(int(v) for v in c)}" for c, a in zip(self.coords[:6], self.amps[:6]))
        more = " + ..." if len(self) > 6 else ""
        return f"AlgebraElement[{self.spec}]({terms or '0'}{more})"

    # linear structure -----------------------------------------------------

    def _check(self, other):
        if not isinstance(other, AlgebraElement):
            return False
        if other.spec != self.spec:
            raise SpecMismatchError(f"elements of {self.spec} and {other.spec} cannot be combined")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return AlgebraElement(self.spec, np.vstack([self.coords, other.coords]), np.concatenate([self.amps, other.amps]))

    def __neg__(self):
        return AlgebraElement(self.spec, self.coords.copy(), -self.amps, canonical=True)

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return self + (-other)

    def __mul__(self, scalar):
        if isinstance(scalar, AlgebraElement):
            return NotImplemented
        return AlgebraElement(self.spec, self.coords.copy(), self.amps * complex(scalar))

    __rmul__ = __mul__

    def allclose(self, other: "AlgebraElement", atol: float = 1e-12) -> bool:
        return max_abs_difference(self, other) <= atol


def max_abs_difference(f: AlgebraElement, g: AlgebraElement) -> float:
    """``max_x |f(x) - g(x)|`` over the union of supports."""
    diff = f - g
    return float(np.max(np.abs(diff.amps))) if len(diff) else 0.0


# --------------------------------------------------------------------------
# convolution


def _same_spec(f: AlgebraElement, g: AlgebraElement) -> GroupSpec:
    if f.spec != g.spec:
        raise SpecMismatchError(f"elements of {f.spec} and {g.spec} cannot be convolved")
    return f.spec


def _output_box(f: AlgebraElement, g: AlgebraElement):
    spec = f.spec
    flo, fhi = f.free_box()
    glo, ghi = g.free_box()
    lo = np.concatenate([flo + glo, np.zeros(len(spec.torsion_orders), dtype=np.int64)])
    extent = np.concatenate([(fhi - flo) + (ghi - glo) + 1, np.asarray(spec.torsion_orders, dtype=np.int64)])
    return lo.astype(np.int64), extent.astype(np.int64)


def _from_dense(spec: GroupSpec, dense: np.ndarray, lo: np.ndarray, extent, flags=(), cleanup=CLEANUP) -> AlgebraElement:
    flat = dense.reshape(-1)
    idx = np.flatnonzero(np.abs(flat) > cleanup)
    if spec.n_axes:
        coords = np.stack(np.unravel_index(idx, tuple(int(e) for e in extent)), axis=1).astype(np.int64) + lo
    else:
        coords = np.zeros((len(idx), 0), dtype=np.int64)
    return AlgebraElement(spec, coords, flat[idx], flags, canonical=True)


def _convolve_direct(f: AlgebraElement, g: AlgebraElement, flags=(), cleanup=CLEANUP) -> AlgebraElement:
    spec = f.spec
    lo, extent = _output_box(f, g)
    size = int(np.prod(extent)) if len(extent) else 1
    if size <= max(DENSE_CAP, 0) and size <= 64 * len(f) * len(g) + (1 << 16):
        dense = kernels.direct_convolve(f.coords, f.amps, g.coords, g.amps, lo, extent, spec.moduli)
        return _from_dense(spec, np.asarray(dense), lo, extent, flags, cleanup)
    # sparse supports in a huge box: accumulate pair sums without a dense grid
    sums = (f.coords[:, None, :] + g.coords[None, :, :]).reshape(-1, spec.n_axes)
    vals = (f.amps[:, None] * g.amps[None, :]).reshape(-1)
    return AlgebraElement(spec, sums, vals, flags, cleanup=cleanup)


def _dense_on_box(f: AlgebraElement, lo: np.ndarray, shape) -> np.ndarray:
    arr = np.zeros(shape, dtype=np.complex128)
    if len(f):
        idx = tuple((f.coords - lo).T)
        arr[idx] = f.amps
    return arr


def _convolve_fft(f: AlgebraElement, g: AlgebraElement, cleanup=CLEANUP) -> AlgebraElement:
    spec = f.spec
    d = spec.free_rank
    torsion = tuple(spec.torsion_orders)
    flo, fhi = f.free_box()
    glo, ghi = g.free_box()
    fshape = tuple(int(v) for v in (fhi - flo + 1)) + torsion
    gshape = tuple(int(v) for v in (ghi - glo + 1)) + torsion
    out_free = tuple(a + b - 1 for a, b in zip(fshape[:d], gshape[:d]))
    fft_shape = tuple(sfft.next_fast_len(n) for n in out_free) + torsion
    if math.prod(fft_shape) > FFT_CAP:
        return _convolve_direct(f, g, flags=("fft_fallback",), cleanup=cleanup)
    zt = np.zeros(len(torsion), dtype=np.int64)
    F = _dense_on_box(f, np.concatenate([flo, zt]), fshape)
    Gd = _dense_on_box(g, np.concatenate([glo, zt]), gshape)
    axes = tuple(range(spec.n_axes))
    prod = sfft.ifftn(sfft.fftn(F, fft_shape, axes=axes) * sfft.fftn(Gd, fft_shape, axes=axes), axes=axes)
    # indicator convolution marks the true support (pair counts >= 1)
    count = sfft.irfftn(
        sfft.rfftn((F != 0).astype(float), fft_shape, axes=axes) * sfft.rfftn((Gd != 0).astype(float), fft_shape, axes=axes),
        fft_shape,
        axes=axes,
    )
    crop = tuple(slice(0, n) for n in out_free) + tuple(slice(None) for _ in torsion)
    prod = prod[crop]
    prod[count[crop] < 0.5] = 0
    lo = np.concatenate([flo + glo, zt])
    return _from_dense(spec, prod, lo, out_free + torsion, cleanup=cleanup)


def convolve(f: AlgebraElement, g: AlgebraElement, path: str = "auto", *, cleanup: float = CLEANUP) -> AlgebraElement:
    """``(f * g)(x) = sum_y f(y) g(x - y)``.

    ``path`` is ``"direct"``, ``"fft"`` or ``"auto"`` (direct while
    ``len(f) * len(g) <= DIRECT_THRESHOLD``).  A result that fell back from
    FFT to direct because the transform grid was too large carries the flag
    ``"fft_fallback"``.  Amplitudes of modulus ``<= cleanup`` are dropped.
    """
    spec = _same_spec(f, g)
    if f.is_zero() or g.is_zero():
        return AlgebraElement.zero(spec)
    if path == "auto":
        path = "direct" if len(f) * len(g) <= DIRECT_THRESHOLD else "fft"
    if path == "direct" or spec.n_axes == 0:
        return _convolve_direct(f, g, cleanup=cleanup)
    if path == "fft":
        return _convolve_fft(f, g, cleanup=cleanup)
    raise ValueError(f"unknown convolution path {path!r}")


def involution(f: AlgebraElement) -> AlgebraElement:
    """``f*(x) = conj(f(-x))``."""
    return AlgebraElement(f.spec, -f.coords, np.conj(f.amps))


# --------------------------------------------------------------------------
# powers


def _power_box(f: AlgebraElement, n: int) -> int:
    lo, hi = f.free_box()
    return math.prod(int(n * (h - l) + 1) for l, h in zip(lo, hi)) * math.prod(f.spec.torsion_orders)


def _max_power(f: AlgebraElement, cap: int) -> int:
    lo, hi = 1, 1
    while _power_box(f, hi * 2) <= cap and hi < (1 << 62):
        hi *= 2
    if _power_box(f, hi * 2) <= cap:
        return hi * 2
    lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _power_box(f, mid) <= cap:
            lo = mid
        else:
            hi = mid
    return lo


def power(f: AlgebraElement, n: int, *, cap: int = POWER_SUPPORT_CAP) -> AlgebraElement:
    """``n``-fold convolution power by repeated squaring.

    Raises :class:`ResourceLimitError` (with ``max_n``) when the support box of
    the result would exceed ``cap`` cells.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ValueError("power needs a positive integer exponent")
    if _power_box(f, n) > cap:
        raise ResourceLimitError(
            f"support of f^{n} would exceed {cap} cells", max_n=_max_power(f, cap), cap=cap
        )
    result = None
    base = f
    n = int(n)
    while True:
        if n & 1:
            result = base if result is None else convolve(result, base)
        n >>= 1
        if not n:
            return result
        base = convolve(base, base)


# --------------------------------------------------------------------------
# norms, duality


def norm_l1w(f: AlgebraElement, w: Weight) -> float:
    """``sum_x |f(x)| w(x)``."""
    if w.spec != f.spec:
        raise SpecMismatchError("weight and element live on different groups")
    if f.is_zero():
        return 0.0
    return float(np.sum(np.abs(f.amps) * w.values(f.coords)))


def _log_norm_l1w(f: AlgebraElement, w: Weight) -> float:
    if f.is_zero():
        return -math.inf
    terms = np.log(np.abs(f.amps)) + w.log_values(f.coords)
    top = float(np.max(terms))
    return top + math.log(float(np.sum(np.exp(terms - top))))


@dataclass(frozen=True)
class DualElement:
    """Member of ``l^inf(G, 1/w)`` given on a finite window, zero elsewhere."""

    spec: GroupSpec
    coords: np.ndarray
    values: np.ndarray

    @classmethod
    def from_dict(cls, spec: GroupSpec, data: Mapping) -> "DualElement":
        keys = [k.coords if isinstance(k, GroupElement) else ((k,) if isinstance(k, int) else tuple(k)) for k in data]
        coords = _reduce_torsion(spec, coords_array(keys, spec.n_axes))
        return cls(spec, coords, np.asarray(list(data.values()), dtype=np.complex128))

    def norm(self, w: Weight) -> float:
        """``sup_x |g(x)| / w(x)``."""
        if len(self.values) == 0:
            return 0.0
        return float(np.max(np.abs(self.values) / w.values(self.coords)))


def _index_map(coords: np.ndarray) -> dict:
    return {tuple(int(v) for v in row): i for i, row in enumerate(coords)}


@dataclass(frozen=True)
class DualPairing:
    value: complex
    bound_check: bool
    bound: float


def dual_pair(f: AlgebraElement, g: DualElement, w: Weight) -> DualPairing:
    """``<f, g> = sum_x f(x) g(x)`` together with the duality bound check."""
    if f.spec != g.spec or f.spec != w.spec:
        raise SpecMismatchError("dual pairing needs operands on the same group")
    lookup = _index_map(g.coords)
    value = 0j
    for c, a in zip(f.coords, f.amps):
        k = lookup.get(tuple(int(v) for v in c))
        if k is not None:
            value += a * g.values[k]
    bound = g.norm(w) * norm_l1w(f, w)
    return DualPairing(complex(value), abs(value) <= bound + 1e-12, bound)


def attaining_dual(f: AlgebraElement, w: Weight) -> DualElement:
    """``g = w conj(f) / |f|`` on ``supp f``: unit dual norm, ``<f, g> = ||f||_{1,w}``."""
    phase = np.conj(f.amps) / np.abs(f.amps)
    return DualElement(f.spec, f.coords.copy(), w.values(f.coords) * phase)


# --------------------------------------------------------------------------
# spectral radius from norms


@dataclass(frozen=True)
class NormLimitEstimate:
    """Running minimum of ``||f^n||^(1/n)`` over ``n = 1, 2, 4, ...``; an upper bound on ``r(f)``."""

    estimate: float
    n_reached: int
    ladder: tuple[tuple[int, float], ...] = field(default=())


def _scaled(f: AlgebraElement, c: float) -> AlgebraElement:
    """``c * f`` keeping every stored entry, however small."""
    return AlgebraElement(f.spec, f.coords, f.amps * c, f.flags, canonical=True)


def spectral_radius_normlimit(
    f: AlgebraElement,
    w: Weight,
    max_exponent: int = 2**12,
    *,
    cap: int = POWER_SUPPORT_CAP,
    path: str = "auto",
) -> NormLimitEstimate:
    """Norm-limit spectral radius on the doubling ladder.

    Powers are renormalised after every squaring and their log-norm carried
    separately, so large radii do not overflow.  When the next square would
    exceed ``cap`` cells, :class:`ResourceLimitError` is raised carrying
    ``best_estimate``, ``n_reached`` and ``ladder``.
    """
    if f.is_zero():
        raise PreconditionError("spectral radius ladder needs f != 0")
    if max_exponent < 1:
        raise ValueError("max_exponent must be >= 1")
    log_norm = _log_norm_l1w(f, w)
    h = _scaled(f, math.exp(-log_norm))
    n = 1
    ladder = [(1, math.exp(log_norm))]
    best = ladder[0][1]
    while 2 * n <= max_exponent:
        if _power_box(f, 2 * n) > cap:
            raise ResourceLimitError(
                f"support of f^{2 * n} would exceed {cap} cells",
                best_estimate=best,
                n_reached=n,
                ladder=tuple(ladder),
            )
        # weighted mass may sit in entries far below any absolute threshold,
        # and FFT round-off is absolute, so strongly varying weights go direct
        step_path = path
        if path == "auto" and len(h) * len(h) > DIRECT_THRESHOLD:
            lw = w.log_values(h.coords)
            step_path = "fft" if 2 * float(np.ptp(lw)) < FFT_LOG_SPREAD else "direct"
            if step_path == "direct" and len(h) * len(h) > DIRECT_WORK_CAP:
                raise ResourceLimitError(
                    f"direct squaring towards f^{2 * n} needs {len(h) ** 2} products",
                    best_estimate=best,
                    n_reached=n,
                    ladder=tuple(ladder),
                )
        sq = convolve(h, h, step_path, cleanup=0.0)
        if sq.is_zero():
            ladder.append((2 * n, 0.0))
            return NormLimitEstimate(0.0, 2 * n, tuple(ladder))
        if float(np.max(w.log_values(sq.coords))) > LOG_RANGE:
            raise ResourceLimitError(
                f"weights on the support of f^{2 * n} exceed the double-precision range",
                best_estimate=best,
                n_reached=n,
                ladder=tuple(ladder),
            )
        step = _log_norm_l1w(sq, w)
        log_norm = 2 * log_norm + step
        h = _scaled(sq, math.exp(-step))
        n *= 2
        val = math.exp(log_norm / n)
        ladder.append((n, val))
        best = min(best, val)
    return NormLimitEstimate(best, n, tuple(ladder))


@dataclass(frozen=True)
class RadiiComparison:
    r_unweighted: float
    r_weighted: float
    M: float
    sandwich_ok: bool


def compare_radii(f: AlgebraElement, w: Weight, max_exponent: int = 2**12, *, rel_tol: float = 1e-6) -> RadiiComparison:
    """Check ``r_1(f) / M <= r_w(f) <= M r_1(f)`` with ``M = sup w`` on ``K u -K``, ``K = supp f``."""
    if f.is_zero():
        raise PreconditionError("compare_radii needs f != 0")
    both = np.vstack([f.coords, _reduce_torsion(f.spec, -f.coords)])
    M = float(np.max(w.values(both)))
    r_u = spectral_radius_normlimit(f, Weight.unweighted(f.spec), max_exponent).estimate
    r_w = spectral_radius_normlimit(f, w, max_exponent).estimate
    ok = r_u / M * (1 - rel_tol) <= r_w <= M * r_u * (1 + rel_tol)
    return RadiiComparison(r_u, r_w, M, ok)
