"""Submultiplicative weights on ``Z^d x prod Z_m`` and their asymptotics.

A :class:`Weight` is a product of one factor per group axis.  Factors on
torsion axes see the cyclic absolute value ``min(t, m - t)``, which keeps
every built-in family submultiplicative there too.  Non-product weights can
be wrapped with :meth:`Weight.from_function`; they evaluate and classify
heuristically but have no closed-form asymptotics.

Everything asymptotic is computed in log space, ``log w(n x) / n``, so
``exp(a |n|)`` at ``n = 2**20`` never overflows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import DomainError, SubmultiplicativityError, WeightNormalizationError
from .group import (
    INT64_SAFE,
    GroupElement,
    GroupSpec,
    ball_array,
    coords_array,
)

REL_EPS = 1e-12
DEFAULT_TOLERANCE = 1e-3
DEFAULT_MAX_EXPONENT = 2**20
DEFAULT_DOMAR_LADDER = (10, 100, 1000, 10000)

VERDICTS = ("regular_nonquasianalytic", "not_regular", "inconclusive")


def _cyclic_abs(n: np.ndarray, modulus: int) -> np.ndarray:
    n = np.abs(np.asarray(n, dtype=np.int64))
    if modulus:
        r = n % modulus
        return np.minimum(r, modulus - r)
    return n


# --------------------------------------------------------------------------
# axis factors



def fmt_real(v: float) -> str:
    """Shortest text that parses back to exactly ``v``."""
    v = float(v)
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)

@dataclass(frozen=True)
class Constant:
    c: float = 1.0

    def __post_init__(self):
        if not self.c > 0:
            raise ValueError(f"constant weight must be positive, got {self.c}")

    def value(self, n, modulus=0):
        return np.full(np.shape(n), float(self.c))

    def log_value(self, n, modulus=0):
        return np.full(np.shape(n), math.log(self.c))

    def exact_log_radius(self, step, modulus=0):
        return 0.0

    def dsl(self):
        return f"const:{fmt_real(self.c)}"


@dataclass(frozen=True)
class Poly:
    """``(1 + |n|)**alpha``."""

    alpha: float

    def __post_init__(self):
        if self.alpha < 0:
            raise ValueError("poly exponent must be >= 0")

    def value(self, n, modulus=0):
        return (1.0 + _cyclic_abs(n, modulus)) ** self.alpha

    def log_value(self, n, modulus=0):
        return self.alpha * np.log1p(_cyclic_abs(n, modulus).astype(float))

    def exact_log_radius(self, step, modulus=0):
        return 0.0

    def dsl(self):
        return f"poly:{fmt_real(self.alpha)}"


@dataclass(frozen=True)
class Exp:
    """``exp(a |n|)``."""

    a: float

    def __post_init__(self):
        if self.a < 0:
            raise ValueError("exp rate must be >= 0")

    def value(self, n, modulus=0):
        return np.exp(self.a * _cyclic_abs(n, modulus))

    def log_value(self, n, modulus=0):
        return self.a * _cyclic_abs(n, modulus).astype(float)

    def exact_log_radius(self, step, modulus=0):
        # bounded on a cycle
        return 0.0 if modulus else self.a * abs(int(step))

    def dsl(self):
        return f"exp:{fmt_real(self.a)}"


@dataclass(frozen=True)
class SubExp:
    """``exp(a |n|**beta)`` with ``0 < beta < 1``."""

    a: float
    beta: float

    def __post_init__(self):
        if self.a < 0 or not 0 < self.beta < 1:
            raise ValueError("subexp needs a >= 0 and 0 < beta < 1")

    def value(self, n, modulus=0):
        return np.exp(self.log_value(n, modulus))

    def log_value(self, n, modulus=0):
        return self.a * _cyclic_abs(n, modulus).astype(float) ** self.beta

    def exact_log_radius(self, step, modulus=0):
        return 0.0

    def dsl(self):
        return f"subexp:{fmt_real(self.a)},{fmt_real(self.beta)}"


@dataclass(frozen=True)
class Table:
    """Explicit positive values.

    On a torsion axis ``values[t]`` is the weight at residue ``t`` and the
    length must equal the axis order.  On a free axis ``values[k]`` is the
    weight at ``offset + k``; outside that window ``extension`` decides:
    ``"strict"`` raises :class:`DomainError`, ``"clamp"`` repeats the edge value.
    """

    values: tuple[float, ...]
    offset: int = 0
    extension: str = "strict"

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        if not vals or min(vals) <= 0:
            raise ValueError("table weights need at least one value, all positive")
        if self.extension not in ("strict", "clamp"):
            raise ValueError(f"unknown extension rule {self.extension!r}")
        object.__setattr__(self, "values", vals)

    @property
    def window(self) -> tuple[int, int]:
        return self.offset, self.offset + len(self.values) - 1

    def _index(self, n, modulus):
        n = np.asarray(n, dtype=np.int64)
        if modulus:
            if len(self.values) != modulus:
                raise ValueError(f"table on Z_{modulus} needs {modulus} values, got {len(self.values)}")
            return n % modulus
        idx = n - self.offset
        if self.extension == "strict":
            bad = (idx < 0) | (idx >= len(self.values))
            if np.any(bad):
                first = int(np.asarray(n).ravel()[np.argmax(np.asarray(bad).ravel())])
                raise DomainError(f"table weight queried at {first}, outside window {self.window}")
            return idx
        return np.clip(idx, 0, len(self.values) - 1)

    def in_domain(self, n, modulus=0):
        n = np.asarray(n, dtype=np.int64)
        if modulus or self.extension == "clamp":
            return np.ones(n.shape, dtype=bool)
        lo, hi = self.window
        return (n >= lo) & (n <= hi)

    def value(self, n, modulus=0):
        return np.asarray(self.values)[self._index(n, modulus)]

    def log_value(self, n, modulus=0):
        return np.log(np.asarray(self.values))[self._index(n, modulus)]

    def exact_log_radius(self, step, modulus=0):
        return None

    def dsl(self):
        body = "table:[" + ",".join(fmt_real(v) for v in self.values) + "]"
        if self.offset or self.extension != "strict":
            body += f"@{self.offset}"
            if self.extension != "strict":
                body += f":{self.extension}"
        return body


FACTOR_TYPES = (Constant, Poly, Exp, SubExp, Table)


# --------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class Weight:
    spec: GroupSpec
    factors: tuple = ()
    scale: float = 1.0
    function: Callable[[tuple[int, ...]], float] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.function is None:
            if len(self.factors) != self.spec.n_axes:
                raise ValueError(
                    f"{self.spec} has {self.spec.n_axes} axes but {len(self.factors)} weight factors were given"
                )
            for f, m in zip(self.factors, self.spec.moduli):
                if not isinstance(f, FACTOR_TYPES):
                    raise TypeError(f"not a weight factor: {f!r}")
                if isinstance(f, Table) and m and len(f.values) != m:
                    raise ValueError(f"table on Z_{m} needs {m} values")
        object.__setattr__(self, "factors", tuple(self.factors))
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    # constructors ---------------------------------------------------------

    @classmethod
    def product(cls, spec: GroupSpec, *factors) -> "Weight":
        return cls(spec, tuple(factors))

    @classmethod
    def uniform(cls, spec: GroupSpec, factor) -> "Weight":
        """Same factor on every free axis, constant 1 on torsion axes."""
        return cls(spec, tuple([factor] * spec.free_rank + [Constant(1.0)] * len(spec.torsion_orders)))

    @classmethod
    def unweighted(cls, spec: GroupSpec) -> "Weight":
        return cls(spec, tuple(Constant(1.0) for _ in range(spec.n_axes)))

    @classmethod
    def from_function(cls, spec: GroupSpec, fn: Callable[[tuple[int, ...]], float]) -> "Weight":
        """Arbitrary (possibly non-product) weight given pointwise on coordinates."""
        return cls(spec, (), 1.0, fn)

    # properties -----------------------------------------------------------

    @property
    def is_product(self) -> bool:
        return self.function is None

    @property
    def has_tables(self) -> bool:
        return any(isinstance(f, Table) for f in self.factors)

    def free_factors(self):
        return self.factors[: self.spec.free_rank]

    def dsl(self) -> str:
        if not self.is_product:
            return "<function>"
        return "*".join(f.dsl() for f in self.factors)

    # evaluation -----------------------------------------------------------

    def _as_coords(self, coords) -> np.ndarray:
        if isinstance(coords, GroupElement):
            coords = coords_array([coords], self.spec.n_axes)
        coords = np.asarray(coords, dtype=np.int64)
        if coords.ndim == 1:
            coords = coords.reshape(1, -1)
        return coords

    def log_values(self, coords) -> np.ndarray:
        """``log w`` at each row of an ``(N, n_axes)`` coordinate array."""
        coords = self._as_coords(coords)
        if not self.is_product:
            vals = np.array([float(self.function(tuple(int(c) for c in row))) for row in coords])
            if np.any(~np.isfinite(vals)) or np.any(vals <= 0):
                raise ValueError("weight function returned a non-finite or nonpositive value")
            return np.log(vals) - math.log(self.scale)
        out = np.full(coords.shape[0], -math.log(self.scale))
        for axis, (f, m) in enumerate(zip(self.factors, self.spec.moduli)):
            out = out + f.log_value(coords[:, axis], int(m))
        return out

    def values(self, coords) -> np.ndarray:
        coords = self._as_coords(coords)
        if not self.is_product:
            return np.exp(self.log_values(coords))
        out = np.full(coords.shape[0], 1.0 / self.scale)
        for axis, (f, m) in enumerate(zip(self.factors, self.spec.moduli)):
            out = out * f.value(coords[:, axis], int(m))
        return out

    def in_domain(self, coords) -> np.ndarray:
        coords = self._as_coords(coords)
        ok = np.ones(coords.shape[0], dtype=bool)
        if not self.is_product:
            return ok
        for axis, (f, m) in enumerate(zip(self.factors, self.spec.moduli)):
            if isinstance(f, Table):
                ok &= f.in_domain(coords[:, axis], int(m))
        return ok

    def __call__(self, x: GroupElement) -> float:
        return evaluate_weight(self, x)

    def rescaled(self) -> "Weight":
        """Equivalent weight normalised to ``w(0) = 1``."""
        w0 = float(self.values(np.zeros((1, self.spec.n_axes), dtype=np.int64))[0])
        return Weight(self.spec, self.factors, self.scale * w0, self.function)

    def exact_log_radius(self, x: GroupElement) -> float | None:
        """Closed form of ``log r_w(x)`` when every involved factor has one."""
        if x.is_identity():
            return 0.0
        if not self.is_product:
            return None
        total = 0.0
        for axis, (f, m) in enumerate(zip(self.factors, self.spec.moduli)):
            step = x.coords[axis]
            if step == 0 or m:
                # bounded orbit: (positive bounded value)**(1/n) -> 1
                continue
            lr = f.exact_log_radius(step, 0)
            if lr is None:
                return None
            total += lr
        return total

    def max_multiple(self, x: GroupElement) -> int | None:
        """Largest ``n`` with ``+-k x`` inside every strict table window for ``k <= n``."""
        if not self.is_product:
            return None
        reach = None
        for axis, f in enumerate(self.free_factors()):
            step = x.coords[axis]
            if isinstance(f, Table) and f.extension == "strict":
                lo, hi = f.window
                if not lo <= 0 <= hi:
                    return 0
                if step == 0:
                    continue
                s = abs(step)
                r = min(hi // s, (-lo) // s)
                reach = r if reach is None else min(reach, r)
        return reach


def evaluate_weight(w: Weight, x: GroupElement) -> float:
    """``w(x)`` as the product of the per-axis factor values."""
    if x.spec != w.spec:
        from .errors import SpecMismatchError

        raise SpecMismatchError(f"element of {x.spec} given to weight on {w.spec}")
    if not w.is_product:
        return float(w.function(x.coords)) / w.scale
    val = 1.0
    for f, m, c in zip(w.factors, w.spec.moduli, x.coords):
        val *= float(f.value(np.array([c]), int(m))[0])
    return val / w.scale


def wstar(w: Weight, x: GroupElement) -> float:
    """``w(x) w(-x)``."""
    return evaluate_weight(w, x) * evaluate_weight(w, -x)


def omega(w: Weight, x: GroupElement, y: GroupElement) -> float:
    """``w(x+y) / (w(x) w(y))``."""
    return evaluate_weight(w, x + y) / (evaluate_weight(w, x) * evaluate_weight(w, y))


# --------------------------------------------------------------------------
# submultiplicativity and diagnostics


@dataclass(frozen=True)
class SubmultiplicativityCheck:
    passed: bool
    x: GroupElement | None = None
    y: GroupElement | None = None
    ratio: float | None = None

    def __bool__(self):
        return self.passed


def _add_coords(spec: GroupSpec, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    s = a + b
    mod = spec.moduli
    if np.any(mod):
        t = mod > 0
        s[..., t] %= mod[t]
    return s


_PAIR_BLOCK = 1 << 18


def _pair_log_omega(w: Weight, ball: np.ndarray, logw: np.ndarray, rows: slice) -> np.ndarray:
    """``log Omega(ball[i], ball[j])`` for ``i`` in ``rows`` and all ``j``; NaN where undefined."""
    sums = _add_coords(w.spec, ball[rows][:, None, :], ball[None, :, :]).reshape(-1, ball.shape[1])
    out = np.full(len(sums), np.nan)
    ok = w.in_domain(sums)
    if np.any(ok):
        out[ok] = w.log_values(sums[ok])
    out = out.reshape(-1, len(ball)) - logw[rows][:, None] - logw[None, :]
    return out


def _row_blocks(n: int):
    step = max(1, _PAIR_BLOCK // max(n, 1))
    for start in range(0, n, step):
        yield slice(start, min(n, start + step))


def check_submultiplicative(w: Weight, radius: int) -> SubmultiplicativityCheck:
    """Exhaustive ``w(x+y) <= w(x) w(y) (1 + 1e-12)`` scan over a ball.

    Pairs whose sum leaves a strict table window are skipped.  Returns the
    first violating pair in enumeration order.
    """
    ball = ball_array(w.spec, radius)
    ok = w.in_domain(ball)
    logw = np.full(len(ball), np.nan)
    logw[ok] = w.log_values(ball[ok])
    limit = math.log1p(REL_EPS)
    for rows in _row_blocks(len(ball)):
        lo = _pair_log_omega(w, ball, logw, rows)
        bad = np.flatnonzero(lo.ravel() > limit)
        if bad.size:
            i, j = divmod(int(bad[0]), len(ball))
            i += rows.start
            x, y = w.spec.element(ball[i]), w.spec.element(ball[j])
            return SubmultiplicativityCheck(False, x, y, omega(w, x, y))
    return SubmultiplicativityCheck(True)


@dataclass(frozen=True)
class WeightDiagnostics:
    sup_wstar: float
    wstar_argmax: list
    inf_omega: float
    omega_argmin: tuple


def weight_diagnostics(w: Weight, radius: int) -> WeightDiagnostics:
    """Sup of ``w*(x) = w(x)w(-x)`` and inf of ``Omega`` over a ball, with witnesses.

    Purely descriptive; no Arens-regularity or amenability verdict is drawn.
    """
    ball = ball_array(w.spec, radius)
    ok = w.in_domain(ball) & w.in_domain(_add_coords(w.spec, -ball, np.zeros_like(ball)))
    logw = np.full(len(ball), np.nan)
    logw[ok] = w.log_values(ball[ok])
    neg = _add_coords(w.spec, -ball, np.zeros_like(ball))
    log_star = np.full(len(ball), np.nan)
    log_star[ok] = logw[ok] + w.log_values(neg[ok])
    best = np.nanmax(log_star)
    arg = np.flatnonzero(log_star >= best - REL_EPS * max(1.0, abs(best)))
    best_omega, where = np.inf, None
    for rows in _row_blocks(len(ball)):
        lo = _pair_log_omega(w, ball, logw, rows)
        lo[:, ~ok] = np.nan
        if np.all(np.isnan(lo)):
            continue
        k = int(np.nanargmin(lo))
        i, j = divmod(k, len(ball))
        if lo[i, j] < best_omega:
            best_omega, where = lo[i, j], (i + rows.start, j)
    # report the extremes as exact products at the witnesses, not exp(log)
    argmax = [w.spec.element(ball[k]) for k in arg]
    x, y = w.spec.element(ball[where[0]]), w.spec.element(ball[where[1]])
    return WeightDiagnostics(
        sup_wstar=wstar(w, argmax[0]),
        wstar_argmax=argmax,
        inf_omega=omega(w, x, y),
        omega_argmin=(x, y),
    )


# --------------------------------------------------------------------------
# weight spectral radius


@dataclass(frozen=True)
class RadiusEstimate:
    """Ladder estimate of ``r_w(x) = lim w(n x)**(1/n)``.

    ``estimate`` is the running minimum of ``w(n x)**(1/n)`` over
    ``n = 1, 2, 4, ...``; by subadditivity of ``n -> log w(n x)`` it is an
    upper bound on ``r_w(x)``.  ``exact_value`` is the closed form when known.
    """

    estimate: float
    n_reached: int
    exact: bool
    exact_value: float | None
    ladder: tuple[tuple[int, float], ...]
    top_log_weight: float = 0.0


def _doubling(max_exponent: int):
    n = 1
    while n <= max_exponent:
        yield n
        n *= 2


def _multiple_coords(x: GroupElement, ns: Sequence[int]) -> np.ndarray:
    ns = np.asarray(list(ns), dtype=np.int64)
    if ns.size == 0:
        return np.zeros((0, x.spec.n_axes), dtype=np.int64)
    top = int(np.max(np.abs(ns)))
    if any(abs(top * v) >= INT64_SAFE for v in x.free_part):
        raise OverflowError(f"{top} * {x} leaves the int64 range")
    out = ns[:, None] * np.asarray(x.coords, dtype=np.int64)[None, :]
    return _add_coords(x.spec, out, np.zeros_like(out))


def weight_radius(w: Weight, x: GroupElement, max_exponent: int = DEFAULT_MAX_EXPONENT) -> RadiusEstimate:
    if max_exponent < 1:
        raise ValueError("max_exponent must be >= 1")
    ns = list(_doubling(max_exponent))
    reach = w.max_multiple(x)
    if reach is not None:
        ns = [n for n in ns if n <= reach]
        if not ns:
            raise DomainError(f"{x} already leaves the strict table window of the weight")
    logs = w.log_values(_multiple_coords(x, ns))
    if not np.all(np.isfinite(logs)):
        raise ValueError(f"non-finite weight value along the orbit of {x}")
    vals = np.exp(logs / np.asarray(ns, dtype=float))
    running = np.minimum.accumulate(vals)
    exact_log = w.exact_log_radius(x)
    return RadiusEstimate(
        estimate=float(running[-1]),
        n_reached=ns[-1],
        exact=exact_log is not None,
        exact_value=None if exact_log is None else math.exp(exact_log),
        ladder=tuple((n, float(v)) for n, v in zip(ns, vals)),
        top_log_weight=float(logs[-1]),
    )


# --------------------------------------------------------------------------
# Beurling-Domar sums


def bd_partial_sums(w: Weight, x: GroupElement, n_ladder: Sequence[int]) -> list[tuple[int, float]]:
    """Two-sided partial sums ``S_N = sum_{n=1}^N [log w(n x) + log w(-n x)] / (1 + n^2)``.

    Requires ``w >= 1`` along the orbit; otherwise raises
    :class:`WeightNormalizationError` naming the first offending multiple.
    """
    ladder = [int(n) for n in n_ladder]
    if not ladder or ladder[0] < 1 or any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("N ladder must be nonempty, >= 1 and strictly ascending")
    top = ladder[-1]
    ns = np.arange(1, top + 1)
    plus = _multiple_coords(x, range(1, top + 1))
    minus = _add_coords(x.spec, -plus, np.zeros_like(plus))
    lp = w.log_values(plus)
    lm = w.log_values(minus)
    for arr, coords in ((lp, plus), (lm, minus)):
        bad = np.flatnonzero(arr < -REL_EPS)
        if bad.size:
            k = int(bad[0])
            elem = w.spec.element(coords[k])
            raise WeightNormalizationError(
                f"w({elem}) = {math.exp(arr[k]):.6g} < 1; the nonquasianalyticity test assumes w >= 1",
                element=elem,
                value=math.exp(arr[k]),
            )
    terms = (lp + lm) / (1.0 + ns.astype(float) ** 2)
    sums = np.cumsum(terms)
    return [(n, float(sums[n - 1])) for n in ladder]


# --------------------------------------------------------------------------
# classification


@dataclass
class ClassificationReport:
    verdict: str
    family_exact: bool
    radius_evidence: list = field(default_factory=list)
    domar_evidence: list = field(default_factory=list)
    rescaled: bool = False
    scale: float = 1.0
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "family_exact": self.family_exact,
            "rescaled": self.rescaled,
            "scale": self.scale,
            "radius_evidence": self.radius_evidence,
            "domar_evidence": self.domar_evidence,
            "notes": list(self.notes),
        }


def default_check_radius(spec: GroupSpec, budget: int = 512) -> int:
    """Largest radius whose ball has at most ``budget`` elements (at least 1)."""
    if spec.free_rank == 0:
        return 0
    per_axis = max(budget // max(1, math.prod(spec.torsion_orders)), 1) ** (1.0 / spec.free_rank)
    return max(1, int((per_axis - 1) // 2))


def _family_verdict(w: Weight) -> str | None:
    """Closed-form verdict, or None when some free axis is not a built-in family."""
    if not w.is_product:
        return None
    divergent = False
    for f in w.free_factors():
        if isinstance(f, Table):
            return None
        if isinstance(f, Exp) and f.a > 0:
            divergent = True
    return "not_regular" if divergent else "regular_nonquasianalytic"


def classify_weight(
    w: Weight,
    tolerance: float = DEFAULT_TOLERANCE,
    *,
    max_exponent: int = DEFAULT_MAX_EXPONENT,
    domar_ladder: Sequence[int] = DEFAULT_DOMAR_LADDER,
    check_radius: int | None = None,
) -> ClassificationReport:
    """Decide regular+nonquasianalytic / not regular / inconclusive.

    Built-in families are decided in closed form (``family_exact``): the
    Beurling-Domar series converges for every family except ``exp(a)`` with
    ``a > 0`` on a free axis, where ``r_w = e^a > 1``.  Tables and function
    weights only get a heuristic verdict from the numerical evidence, with an
    explicit ``inconclusive`` outcome.
    """
    if check_radius is None:
        check_radius = default_check_radius(w.spec)
    check = check_submultiplicative(w, check_radius)
    if not check:
        raise SubmultiplicativityError(check)

    report = ClassificationReport(verdict="inconclusive", family_exact=False)
    ball = ball_array(w.spec, check_radius)
    inside = w.in_domain(ball)
    if np.min(w.log_values(ball[inside])) < -REL_EPS:
        w = w.rescaled()
        report.rescaled = True
        report.scale = w.scale
        report.notes.append(f"weight rescaled by 1/{w.scale:.6g} so that w(0) = 1")

    gens = w.spec.generators() or [w.spec.identity()]
    probes = []
    for g in gens:
        probes.append(g)
        if any(g.free_part):
            probes.append(-g)

    radii = {}
    for g in probes:
        est = weight_radius(w, g, max_exponent)
        radii[g] = est
        report.radius_evidence.append(
            {
                "generator": list(g.coords),
                "estimate": est.estimate,
                "n_reached": est.n_reached,
                "exact_value": est.exact_value,
                "ladder": [list(p) for p in est.ladder],
            }
        )
        # r_w(x) -> 1 need not force w(n x) -> 1; both limits are reported
        if abs(est.estimate - 1.0) <= tolerance and abs(est.top_log_weight) > math.log1p(tolerance):
            report.notes.append(
                f"at {g}: w(n x)^(1/n) -> 1 but log w(n x) = {est.top_log_weight:.6g} at n = {est.n_reached}; "
                "the two candidate limit conditions disagree"
            )

    domar_ok = normalised = True
    for g in gens:
        ladder = list(domar_ladder) + [2 * domar_ladder[-1]]
        reach = w.max_multiple(g)
        if reach is not None:
            ladder = [n for n in ladder if n <= reach]
        if not ladder:
            domar_ok = False
            report.notes.append(f"at {g}: strict table window too small for Domar sums")
            continue
        try:
            sums = bd_partial_sums(w, g, ladder)
        except WeightNormalizationError as exc:
            domar_ok = normalised = False
            report.notes.append(f"at {g}: {exc}")
            continue
        report.domar_evidence.append({"generator": list(g.coords), "sums": [list(p) for p in sums]})
        if len(sums) < 2 or abs(sums[-1][1] - sums[-2][1]) >= tolerance or sums[-1][0] != 2 * sums[-2][0]:
            domar_ok = False

    family = _family_verdict(w)
    if family is not None:
        report.family_exact = True
        report.verdict = family
        return report

    if not normalised:
        # r_w > 1 only signals irregularity for weights bounded below by 1
        report.notes.append("weight dips below 1 on a probed orbit; no heuristic verdict")
        return report
    rw_ok = all(est.estimate <= 1.0 + tolerance for est in radii.values())
    if rw_ok and domar_ok:
        report.verdict = "regular_nonquasianalytic"
        return report
    for g, est in radii.items():
        tail = [v for _, v in est.ladder[-3:]]
        if tail and min(tail) >= 1.0 + 10 * tolerance:
            report.verdict = "not_regular"
            report.notes.append(f"at {g}: w(n x)^(1/n) >= {min(tail):.6g} on the last ladder rungs")
            return report
    report.verdict = "inconclusive"
    return report
