"""Character space of the weighted algebra and the Gelfand transform.

For a product weight on ``Z^d x prod Z_m`` the characters are the points
``(z_1, ..., z_d; k_1, ..., k_r)`` with ``R_-j <= |z_j| <= R_+j`` and
``k_i`` indexing an ``m_i``-th root of unity.  The transform convention is

    f^(chi) = sum_x f(x) * prod_j z_j**x_j * prod_i exp(2 pi i k_i t_i / m_i)

with no complex conjugation.  The conjugated convention differs only by
relabelling ``z -> conj(z)`` on the torus.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import optimize

from ._backend import kernels
from .algebra import AlgebraElement, norm_l1w
from .errors import (
    AliasingError,
    ConditioningError,
    PreconditionError,
    ResourceLimitError,
    SamplingError,
    SpecMismatchError,
    UnsupportedError,
)
from .group import GroupElement, GroupSpec, ball_array, shell_key
from .weight import DEFAULT_MAX_EXPONENT, Weight, weight_radius

VALIDATION_EPS = 1e-9
CONDITION_CAP = 1e8
SEPARATION_CAP = 64
GRID_CAP = 1 << 22
FINITE_CAP = 4096
# |x log|z|| beyond this overflows double precision
_EXP_LIMIT = 700.0


def _complex_literal(z) -> complex:
    if isinstance(z, dict):
        return complex(z.get("re", 0.0), z.get("im", 0.0))
    if isinstance(z, (list, tuple)):
        re, im = z
        return complex(re, im)
    return complex(z)


@dataclass(frozen=True)
class Character:
    spec: GroupSpec
    free: tuple[complex, ...] = ()
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.free) != self.spec.free_rank or len(self.torsion) != len(self.spec.torsion_orders):
            raise SpecMismatchError(f"character coordinates do not fit {self.spec}")
        free = tuple(complex(z) for z in self.free)
        if any(z == 0 for z in free):
            raise ValueError("free character coordinates must be nonzero")
        object.__setattr__(self, "free", free)
        # off-cycle (non-integral) torsion entries are kept so validation can reject them
        torsion = tuple(int(k) if float(k).is_integer() else float(k) for k in self.torsion)
        object.__setattr__(self, "torsion", torsion)

    @classmethod
    def trivial(cls, spec: GroupSpec) -> "Character":
        return cls(spec, (1.0,) * spec.free_rank, (0,) * len(spec.torsion_orders))

    @classmethod
    def from_literal(cls, spec: GroupSpec, data: dict) -> "Character":
        """``{"free": [z, ...], "torsion": [k, ...]}``.

        Each ``z`` is ``{"re": .., "im": ..}``, a ``[re, im]`` pair or a real number.
        """
        free = [_complex_literal(z) for z in data.get("free", [])]
        return cls(spec, tuple(free), tuple(data.get("torsion", [])))

    def to_literal(self) -> dict:
        return {
            "free": [{"re": z.real, "im": z.imag} for z in self.free],
            "torsion": list(self.torsion),
        }

    def point(self) -> np.ndarray:
        """Per-axis complex numbers, torsion axes as roots of unity."""
        roots = [np.exp(2j * np.pi * (k % m) / m) for k, m in zip(self.torsion, self.spec.torsion_orders)]
        return np.array(list(self.free) + roots, dtype=np.complex128)

    @property
    def is_unimodular(self) -> bool:
        return all(abs(abs(z) - 1.0) <= 1e-12 for z in self.free)

    def __call__(self, x: GroupElement) -> complex:
        f = AlgebraElement.delta(self.spec, x)
        return gelfand_eval(f, self)

    def __mul__(self, other: "Character") -> "Character":
        if other.spec != self.spec:
            raise SpecMismatchError("characters of different groups")
        return Character(
            self.spec,
            tuple(a * b for a, b in zip(self.free, other.free)),
            tuple((a + b) % m for a, b, m in zip(self.torsion, other.torsion, self.spec.torsion_orders)),
        )


@dataclass(frozen=True)
class Annulus:
    r_minus: float
    r_plus: float
    exact: bool
    # width of the certified bracket around the true radii; 0 when exact
    width: float = 0.0

    @property
    def is_circle(self) -> bool:
        return abs(self.r_minus - 1.0) <= VALIDATION_EPS and abs(self.r_plus - 1.0) <= VALIDATION_EPS


@dataclass(frozen=True)
class CharacterSpace:
    spec: GroupSpec
    annuli: tuple[Annulus, ...] = ()

    @property
    def is_torus(self) -> bool:
        return all(a.is_circle for a in self.annuli)

    def describe(self) -> str:
        parts = []
        for a in self.annuli:
            parts.append("T" if a.is_circle else f"{{{a.r_minus:.6g} <= |z| <= {a.r_plus:.6g}}}")
        parts.extend(f"mu_{m}" for m in self.spec.torsion_orders)
        return " x ".join(parts) if parts else "{point}"

    def to_dict(self) -> dict:
        return {
            "group": str(self.spec),
            "annuli": [
                {"r_minus": a.r_minus, "r_plus": a.r_plus, "exact": a.exact, "width": a.width} for a in self.annuli
            ],
            "torsion_cycles": list(self.spec.torsion_orders),
            "description": self.describe(),
        }


def character_space(w: Weight, max_exponent: int = DEFAULT_MAX_EXPONENT) -> CharacterSpace:
    """Product of annuli ``[R_-j, R_+j]`` and root-of-unity cycles.

    ``R_+j = r_w(e_j)`` and ``R_-j = 1 / r_w(-e_j)``.  Without closed forms the
    ladder upper bounds give a certified *outer* annulus; ``width`` is the
    size of the bracket ``[1 / U(-e_j), U(e_j)]`` known to contain both radii.
    """
    if not w.is_product:
        raise UnsupportedError("character space is only computed for product weights")
    annuli = []
    for axis in range(w.spec.free_rank):
        coords = [0] * w.spec.n_axes
        coords[axis] = 1
        e = w.spec.element(coords)
        up = weight_radius(w, e, max_exponent)
        down = weight_radius(w, -e, max_exponent)
        exact = up.exact and down.exact
        if exact:
            annuli.append(Annulus(1.0 / down.exact_value, up.exact_value, True, 0.0))
        else:
            r_plus = up.exact_value if up.exact else up.estimate
            r_minus = 1.0 / (down.exact_value if down.exact else down.estimate)
            annuli.append(Annulus(r_minus, r_plus, False, r_plus - r_minus))
    return CharacterSpace(w.spec, tuple(annuli))


@dataclass(frozen=True)
class CharacterCheck:
    ok: bool
    axis: int | None = None
    value: float | None = None
    bounds: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def validate_character(cs: CharacterSpace, chi: Character, eps: float = VALIDATION_EPS) -> CharacterCheck:
    """Membership test ``R_-j - eps <= |z_j| <= R_+j + eps``, torsion indices reduced."""
    if chi.spec != cs.spec:
        return CharacterCheck(False, reason="spec mismatch")
    for j, (z, ann) in enumerate(zip(chi.free, cs.annuli)):
        mod = abs(z)
        if not ann.r_minus - eps <= mod <= ann.r_plus + eps:
            return CharacterCheck(False, j, mod, (ann.r_minus, ann.r_plus), "modulus outside annulus")
    d = cs.spec.free_rank
    for i, (k, m) in enumerate(zip(chi.torsion, cs.spec.torsion_orders)):
        if not isinstance(k, int) or not 0 <= k < m:
            return CharacterCheck(False, d + i, float(k), (0, m - 1), "torsion index off the reduced cycle")
    return CharacterCheck(True)


# --------------------------------------------------------------------------
# evaluation


def _check_overflow(f: AlgebraElement, points: np.ndarray) -> None:
    d = f.spec.free_rank
    if d == 0 or f.is_zero():
        return
    logmod = np.log(np.abs(points[:, :d]))
    for j in range(d):
        col = f.coords[:, j]
        worst = np.max(np.abs(col)[:, None] * np.abs(logmod[:, j])[None, :])
        if worst > _EXP_LIMIT:
            k = int(np.argmax(np.abs(col)))
            raise OverflowError(f"|z|**{int(col[k])} on axis {j} overflows double precision")


def transform_at_points(f: AlgebraElement, points: np.ndarray) -> np.ndarray:
    """Vectorised ``f^`` at rows of per-axis complex points."""
    points = np.ascontiguousarray(np.asarray(points, dtype=np.complex128).reshape(-1, f.spec.n_axes))
    if f.is_zero():
        return np.zeros(len(points), dtype=np.complex128)
    _check_overflow(f, points)
    return np.asarray(kernels.laurent_eval(f.coords, f.amps, points))


def gelfand_eval(f: AlgebraElement, chi: Character) -> complex:
    """``f^(chi) = sum_x f(x) chi(x)``."""
    if f.spec != chi.spec:
        raise SpecMismatchError("element and character live on different groups")
    return complex(transform_at_points(f, chi.point()[None, :])[0])


def character_dual_norm(chi: Character, w: Weight, support: np.ndarray) -> float:
    """``sup |chi(x)| / w(x)`` over the given coordinates."""
    mods = np.ones(len(support))
    for j, z in enumerate(chi.free):
        mods = mods * np.abs(z) ** support[:, j].astype(float)
    return float(np.max(mods / w.values(support))) if len(support) else 0.0


# --------------------------------------------------------------------------
# spectral radius oracle


@dataclass(frozen=True)
class OracleResult:
    """``max |f^|`` over the distinguished boundary of the character space.

    The true value lies in ``[value, value + sampling_bound]``.
    """

    value: float
    sampling_bound: float
    sampled_max: float
    argmax: Character | None = None
    samples: int = 0


def _boundary_radii(cs: CharacterSpace):
    per_axis = []
    for a in cs.annuli:
        per_axis.append(sorted({a.r_minus, a.r_plus}))
    return list(itertools.product(*per_axis))


def _torsion_roots(spec: GroupSpec):
    ks = list(itertools.product(*[range(m) for m in spec.torsion_orders]))
    roots = np.array(
        [[np.exp(2j * np.pi * k / m) for k, m in zip(combo, spec.torsion_orders)] for combo in ks],
        dtype=np.complex128,
    ).reshape(len(ks), len(spec.torsion_orders))
    return ks, roots


def spectral_radius_oracle(
    f: AlgebraElement,
    cs: CharacterSpace,
    samples_per_circle: int = 256,
    *,
    max_error: float | None = None,
    refine: bool = True,
) -> OracleResult:
    """Spectral radius as ``max |f^|`` over the boundary circles.

    The transform is a Laurent polynomial in each free variable, so by the
    maximum-modulus principle its maximum over the product of annuli sits on
    the product of boundary circles.  Each circle is sampled at
    ``samples_per_circle`` equispaced angles; the gap to the true maximum is
    bounded by ``(pi / M) * sum_j sum_x |f(x)| |x_j| rho^x``.  Sampled maxima
    are then polished by a bounded local search, which can only raise the
    reported value.
    """
    if f.spec != cs.spec:
        raise SpecMismatchError("element and character space live on different groups")
    if f.is_zero():
        return OracleResult(0.0, 0.0, 0.0, None, samples_per_circle)
    spec = f.spec
    d = spec.free_rank
    M = int(samples_per_circle)
    if d:
        diam = int(np.max(f.coords[:, :d].max(axis=0) - f.coords[:, :d].min(axis=0)))
        required = max(4 * diam, 1)
        if M < required:
            raise SamplingError(f"need at least {required} samples per circle, got {M}", required)
    ks, roots = _torsion_roots(spec)
    n_points = M**d * len(ks)
    if n_points > GRID_CAP:
        raise ResourceLimitError(f"boundary grid of {n_points} points exceeds {GRID_CAP}", points=n_points)

    angles = 2 * np.pi * np.arange(M) / M
    free_angles = (
        np.stack([g.ravel() for g in np.meshgrid(*([angles] * d), indexing="ij")], axis=1)
        if d
        else np.zeros((1, 0))
    )
    absf = np.abs(f.amps)
    best = (-1.0, None, None, None)
    worst_bound = 0.0
    for radii in _boundary_radii(cs):
        rho = np.asarray(radii, dtype=float)
        scale = np.prod(rho[None, :] ** f.coords[:, :d].astype(float), axis=1) if d else np.ones(len(f))
        lip = sum(float(np.sum(absf * np.abs(f.coords[:, j]) * scale)) for j in range(d))
        bound = lip * np.pi / M
        worst_bound = max(worst_bound, bound)
        zs = rho[None, :] * np.exp(1j * free_angles)
        pts = np.concatenate(
            [np.repeat(zs, len(ks), axis=0), np.tile(roots, (len(zs), 1))], axis=1
        )
        vals = np.abs(transform_at_points(f, pts))
        k = int(np.argmax(vals))
        if vals[k] > best[0]:
            best = (float(vals[k]), rho, free_angles[k // len(ks)], ks[k % len(ks)], bound, vals, len(ks))
    sampled_max, rho, theta, kcombo = best[0], best[1], best[2], best[3]
    bound_at_best = worst_bound
    if max_error is not None and bound_at_best > max_error:
        lip_total = bound_at_best * M / np.pi
        raise SamplingError(
            f"sampling bound {bound_at_best:.3g} exceeds {max_error:.3g}",
            int(math.ceil(np.pi * lip_total / max_error)),
        )

    value, arg_theta = sampled_max, theta
    if refine and d:
        value, arg_theta = _refine(f, cs, rho, theta, kcombo, M, sampled_max)
    chi = Character(
        spec,
        tuple(complex(r * np.exp(1j * t)) for r, t in zip(rho, arg_theta)) if d else (),
        tuple(kcombo),
    )
    slack = max(0.0, sampled_max + bound_at_best - value)
    return OracleResult(value, slack, sampled_max, chi, M)


def _refine(f, cs, rho, theta, kcombo, M, start_value):
    spec = f.spec
    roots = np.array([np.exp(2j * np.pi * k / m) for k, m in zip(kcombo, spec.torsion_orders)], dtype=np.complex128)
    h = 2 * np.pi / M

    def neg_mod(t):
        z = rho * np.exp(1j * np.atleast_1d(t))
        return -abs(transform_at_points(f, np.concatenate([z, roots])[None, :])[0])

    if len(theta) == 1:
        res = optimize.minimize_scalar(
            neg_mod, bounds=(theta[0] - h, theta[0] + h), method="bounded", options={"xatol": 1e-12}
        )
        t_best, v_best = np.array([res.x]), -res.fun
    else:
        res = optimize.minimize(
            neg_mod, theta, method="L-BFGS-B", bounds=[(t - h, t + h) for t in theta], options={"ftol": 1e-15}
        )
        t_best, v_best = res.x, -res.fun
    if v_best > start_value:
        return float(v_best), t_best
    return float(start_value), np.asarray(theta)


# --------------------------------------------------------------------------
# sampling grids and the inverse transform


def grid_points(cs: CharacterSpace, sizes: Sequence[int], radii: Sequence[float]) -> np.ndarray:
    """Tensor grid of characters in C-order over ``(free axes..., torsion axes...)``.

    Free axis ``j`` carries ``sizes[j]`` angles ``2 pi k / sizes[j]`` on the
    circle of radius ``radii[j]``; torsion axes are fully enumerated.
    """
    spec = cs.spec
    d = spec.free_rank
    if len(sizes) != d or len(radii) != d:
        raise ValueError("one size and one radius per free axis")
    for r, a in zip(radii, cs.annuli):
        if not a.r_minus - VALIDATION_EPS <= r <= a.r_plus + VALIDATION_EPS:
            raise PreconditionError(f"radius {r} lies outside the annulus [{a.r_minus}, {a.r_plus}]")
    axes = [r * np.exp(2j * np.pi * np.arange(n) / n) for n, r in zip(sizes, radii)]
    axes += [np.exp(2j * np.pi * np.arange(m) / m) for m in spec.torsion_orders]
    if not axes:
        return np.zeros((1, 0), dtype=np.complex128)
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def gelfand_grid(f: AlgebraElement, cs: CharacterSpace, sizes: Sequence[int], radii: Sequence[float]) -> np.ndarray:
    """Transform values on :func:`grid_points`, shaped ``(*sizes, *torsion_orders)``."""
    pts = grid_points(cs, sizes, radii)
    shape = tuple(sizes) + tuple(cs.spec.torsion_orders)
    return transform_at_points(f, pts).reshape(shape)


def inverse_gelfand(
    samples: np.ndarray,
    cs: CharacterSpace,
    radii: Sequence[float],
    spans: Sequence[tuple[int, int]] | None = None,
    *,
    alias_tol: float = 1e-8,
    noise_floor: float = 1e-14,
) -> AlgebraElement:
    """Recover ``f`` from transform samples on a :func:`grid_points` grid.

    ``spans[j] = (lo, hi)`` declares the coefficient window on free axis ``j``;
    it must be shorter than the grid.  Energy outside the declared window
    above ``alias_tol`` (as a fraction of the total) raises
    :class:`AliasingError`.  Coefficients below ``noise_floor`` times the
    largest one are treated as transform round-off and dropped.
    """
    spec = cs.spec
    d = spec.free_rank
    samples = np.asarray(samples, dtype=np.complex128)
    sizes = samples.shape[:d]
    if samples.shape[d:] != tuple(spec.torsion_orders) or len(sizes) != d:
        raise ValueError(f"sample grid shape {samples.shape} does not match {spec}")
    if spans is None:
        spans = [(-((n - 1) // 2), -((n - 1) // 2) + n - 2) for n in sizes]
    for (lo, hi), n in zip(spans, sizes):
        if hi < lo or hi - lo + 1 >= n:
            raise PreconditionError(f"grid of {n} points must exceed the declared span [{lo}, {hi}]")
    for r, a in zip(radii, cs.annuli):
        if not a.r_minus - VALIDATION_EPS <= r <= a.r_plus + VALIDATION_EPS:
            raise PreconditionError(f"radius {r} lies outside the annulus [{a.r_minus}, {a.r_plus}]")
    if samples.size == 0:
        return AlgebraElement.zero(spec)
    coeffs = np.fft.fftn(samples, axes=tuple(range(samples.ndim))) / samples.size if samples.ndim else samples

    inside = np.ones(samples.shape, dtype=bool)
    for j, ((lo, hi), n) in enumerate(zip(spans, sizes)):
        mask = np.zeros(n, dtype=bool)
        mask[np.arange(lo, hi + 1) % n] = True
        shape = [1] * samples.ndim
        shape[j] = n
        inside &= mask.reshape(shape)
    energy = np.abs(coeffs) ** 2
    total = float(energy.sum())
    outside = float(energy[~inside].sum())
    if total > 0 and outside / total > alias_tol:
        raise AliasingError(
            f"{outside / total:.3g} of the coefficient energy lies outside the declared window", outside / total
        )

    ranges = [np.arange(lo, hi + 1) for lo, hi in spans] + [np.arange(m) for m in spec.torsion_orders]
    if not ranges:
        return AlgebraElement(spec, np.zeros((1, 0), dtype=np.int64), [coeffs.reshape(-1)[0]])
    mesh = np.meshgrid(*ranges, indexing="ij")
    coords = np.stack([g.ravel() for g in mesh], axis=1).astype(np.int64)
    idx = tuple(coords[:, j] % samples.shape[j] for j in range(samples.ndim))
    vals = coeffs[idx]
    for j, r in enumerate(radii):
        vals = vals * float(r) ** (-coords[:, j].astype(float))
    top = float(np.max(np.abs(vals))) if len(vals) else 0.0
    keep = np.abs(vals) > noise_floor * top
    return AlgebraElement(spec, coords[keep], vals[keep])


# --------------------------------------------------------------------------
# w-pointwise product of characters


@dataclass(frozen=True)
class PointwiseProductCheck:
    table: dict
    multiplicative: bool
    witness: tuple | None


def w_pointwise_product(
    chi: Character, chi2: Character, w: Weight, probe_ball: int, rel_tol: float = 1e-9
) -> PointwiseProductCheck:
    """Tabulate ``h(x) = chi(x) chi2(x) / w(x)`` and test ``h(x+y) = h(x) h(y)``.

    Probe elements are scanned in shell order (small max-norm first, ``+k``
    before ``-k``) over the half-ball, so the witness is a shortest violation.
    """
    spec = w.spec
    if chi.spec != spec or chi2.spec != spec:
        raise SpecMismatchError("characters and weight live on different groups")
    ball = ball_array(spec, probe_ball)
    # chi(x) chi2(x) = (chi chi2)(x)
    h = _point_values(ball, (chi * chi2).point()) / w.values(ball)
    table = {spec.element(c): complex(v) for c, v in zip(ball, h)}

    half = probe_ball // 2
    half_elems = sorted(
        (spec.element(c) for c in ball_array(spec, half)), key=lambda e: shell_key(e.coords, spec.free_rank)
    )
    for x in half_elems:
        for y in half_elems:
            lhs = table[x + y]
            rhs = table[x] * table[y]
            if abs(lhs - rhs) > rel_tol * max(abs(lhs), abs(rhs)):
                return PointwiseProductCheck(table, False, (x, y))
    return PointwiseProductCheck(table, True, None)


def _point_values(coords: np.ndarray, point: np.ndarray) -> np.ndarray:
    """``chi(x)`` for every row ``x`` of ``coords``."""
    out = np.ones(len(coords), dtype=np.complex128)
    for j, z in enumerate(point):
        out = out * np.power(z, coords[:, j].astype(float))
    return out


# --------------------------------------------------------------------------
# regularity witnesses


def _search_directions(spec: GroupSpec, limit: int = 256):
    radius = 16 if spec.free_rank <= 1 else (4 if spec.free_rank == 2 else 2)
    ball = ball_array(spec, radius)
    elems = sorted((tuple(int(v) for v in c) for c in ball), key=lambda c: shell_key(c, spec.free_rank))
    return [c for c in elems if any(c)][:limit]


def separating_element(
    cs: CharacterSpace,
    avoid: Sequence[Character],
    target: Character,
    *,
    cap: int = SEPARATION_CAP,
    tol: float = 1e-9,
) -> AlgebraElement:
    """Finitely supported ``f`` with ``f^(target) = 1`` and ``f^ = 0`` on ``avoid``.

    Works on torus character spaces only.  A direction ``x0`` is chosen so the
    values ``chi(x0)`` are pairwise distinct and best conditioned, then ``f`` is
    the Lagrange interpolant built from the monomials ``delta_{n x0}``,
    ``n = 0..len(avoid)``.  The defining contract is re-checked before return.
    """
    if not cs.is_torus:
        raise UnsupportedError("separating elements are only built when the character space is a torus")
    avoid = list(avoid)
    if len(avoid) > cap:
        raise ResourceLimitError(f"{len(avoid)} avoided characters exceed the cap {cap}", cap=cap)
    points = avoid + [target]
    for chi in points:
        check = validate_character(cs, chi)
        if not check:
            raise PreconditionError(f"character {chi} rejected: {check.reason}")
    P = np.stack([chi.point() for chi in points]) if points else np.zeros((0, cs.spec.n_axes))
    for a in range(len(points)):
        for b in range(a + 1, len(points)):
            if np.max(np.abs(P[a] - P[b])) <= 1e-15:
                raise PreconditionError(f"characters {a} and {b} coincide")
    spec = cs.spec
    if not avoid:
        return AlgebraElement.delta(spec)

    n = len(points)
    best = None
    for x0 in _search_directions(spec):
        u = np.prod(P ** np.asarray(x0, dtype=float)[None, :], axis=1)
        gaps = np.abs(u[:, None] - u[None, :]) + np.eye(n) * 10
        if np.min(gaps) < 1e-12:
            continue
        V = u[:, None] ** np.arange(n)[None, :]
        cond = float(np.linalg.cond(V))
        if best is None or cond < best[0]:
            best = (cond, x0, V, gaps)
    if best is None:
        raise ConditioningError("no direction separates the given characters", None, math.inf)
    cond, x0, V, gaps = best
    if cond > CONDITION_CAP:
        a, b = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
        raise ConditioningError(
            f"interpolation condition number {cond:.3g} exceeds {CONDITION_CAP:.0e}",
            (points[a], points[b]),
            cond,
        )
    rhs = np.zeros(n, dtype=np.complex128)
    rhs[-1] = 1.0
    c = np.linalg.solve(V, rhs)
    c = c + np.linalg.solve(V, rhs - V @ c)
    coords = np.arange(n)[:, None] * np.asarray(x0, dtype=np.int64)[None, :]
    f = AlgebraElement(spec, coords, c)
    err_target = abs(gelfand_eval(f, target) - 1.0)
    err_avoid = max(abs(gelfand_eval(f, e)) for e in avoid)
    if err_target > tol or err_avoid > tol:
        raise ConditioningError(
            f"interpolant misses its contract (target error {err_target:.2e}, avoid error {err_avoid:.2e})",
            None,
            cond,
        )
    return f


# --------------------------------------------------------------------------
# finite groups


@dataclass(frozen=True)
class FiniteProbe:
    rank: int
    order: int
    surjective: bool
    isometry_defect: float
    witness: AlgebraElement | None = field(default=None, compare=False)


def _default_probes(spec: GroupSpec) -> list[AlgebraElement]:
    elems = [tuple(int(v) for v in c) for c in ball_array(spec, 0)]
    probes = [AlgebraElement.delta(spec, c) for c in elems]
    phases = (1, 1j, -1, -1j)
    for b in elems[1:64]:
        for c in phases:
            probes.append(AlgebraElement.from_dict(spec, {elems[0]: 1.0, b: c}))
    return probes


def character_table(spec: GroupSpec) -> np.ndarray:
    """``T[chi, x] = chi(x)`` for all characters and elements of a finite group."""
    elems = ball_array(spec, 0)
    ks, roots = _torsion_roots(spec)
    kk = np.asarray(ks, dtype=float).reshape(len(ks), -1)
    orders = np.asarray(spec.torsion_orders, dtype=float)
    phase = (kk / orders[None, :]) @ elems.T.astype(float) if len(orders) else np.zeros((1, 1))
    return np.exp(2j * np.pi * phase)


def finite_gelfand_probe(spec: GroupSpec, w: Weight, probes: Sequence[AlgebraElement] | None = None) -> FiniteProbe:
    """Rank of the Gelfand map and its isometry defect on a finite group.

    ``isometry_defect = max ||f||_{1,w} / ||f^||_inf - 1`` over the probes.
    """
    if not spec.is_finite:
        raise PreconditionError("finite_gelfand_probe needs a finite group (free rank 0)")
    order = spec.order
    if order > FINITE_CAP:
        raise ResourceLimitError(f"|G| = {order} exceeds the cap {FINITE_CAP}", cap=FINITE_CAP)
    T = character_table(spec)
    if order <= 512:
        rank = int(np.linalg.matrix_rank(T))
    else:
        # the table is a Kronecker product of per-axis DFT matrices
        rank = math.prod(int(np.linalg.matrix_rank(np.exp(2j * np.pi * np.outer(np.arange(m), np.arange(m)) / m)))
                         for m in spec.torsion_orders)
    elems = ball_array(spec, 0)
    lookup = {tuple(int(v) for v in c): i for i, c in enumerate(elems)}
    worst, witness = -math.inf, None
    for f in probes if probes is not None else _default_probes(spec):
        if f.is_zero():
            continue
        vec = np.zeros(order, dtype=np.complex128)
        for c, a in zip(f.coords, f.amps):
            vec[lookup[tuple(int(v) for v in c)]] = a
        sup = float(np.max(np.abs(T @ vec)))
        ratio = norm_l1w(f, w) / sup if sup > 0 else math.inf
        if ratio - 1.0 > worst:
            worst, witness = ratio - 1.0, f
    return FiniteProbe(rank, order, rank == order, float(worst), witness)
