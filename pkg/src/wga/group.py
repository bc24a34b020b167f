"""Finitely generated discrete Abelian groups ``Z^d x Z_m1 x ... x Z_mr``.

Everything is written additively: the product ``xy`` of the multiplicative
literature becomes ``x + y``, the inverse ``x^-1`` becomes ``-x`` and the
power ``x^n`` becomes ``n * x``.

Elements carry Python integers on the free axes, so they never wrap around.
Code that packs coordinates into ``int64`` arrays goes through
:func:`coords_array`, which refuses values it cannot represent.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ResourceLimitError, SpecMismatchError

DEFAULT_ELEMENT_CAP = 10**7
# largest free coordinate that survives a few additions inside int64
INT64_SAFE = 2**62


def element_cap() -> int:
    """Enumeration cap, overridable through ``WGA_CAP_ELEMENTS``."""
    raw = os.environ.get("WGA_CAP_ELEMENTS")
    return int(raw) if raw else DEFAULT_ELEMENT_CAP


@dataclass(frozen=True)
class GroupSpec:
    free_rank: int = 0
    torsion_orders: tuple[int, ...] = ()

    def __post_init__(self):
        if not isinstance(self.free_rank, (int, np.integer)) or self.free_rank < 0:
            raise ValueError(f"free rank must be a nonnegative integer, got {self.free_rank!r}")
        orders = tuple(int(m) for m in self.torsion_orders)
        for m in orders:
            if m < 2:
                raise ValueError(f"torsion orders must be >= 2, got {m}")
        object.__setattr__(self, "free_rank", int(self.free_rank))
        object.__setattr__(self, "torsion_orders", orders)

    @property
    def n_axes(self) -> int:
        return self.free_rank + len(self.torsion_orders)

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion_orders

    @property
    def order(self) -> int:
        if not self.is_finite:
            raise ValueError("infinite group has no finite order")
        return math.prod(self.torsion_orders)

    @property
    def moduli(self) -> np.ndarray:
        """Per-axis modulus, 0 on free axes."""
        return np.array([0] * self.free_rank + list(self.torsion_orders), dtype=np.int64)

    def identity(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.free_rank, (0,) * len(self.torsion_orders))

    def element(self, *coords: int) -> "GroupElement":
        """Build an element from flat coordinates, free axes first."""
        if len(coords) == 1 and isinstance(coords[0], (tuple, list, np.ndarray)):
            coords = tuple(coords[0])
        if len(coords) != self.n_axes:
            raise SpecMismatchError(f"{self} needs {self.n_axes} coordinates, got {len(coords)}")
        d = self.free_rank
        return GroupElement(self, tuple(coords[:d]), tuple(coords[d:]))

    def generators(self) -> list["GroupElement"]:
        """Standard generators: unit vectors on every axis."""
        gens = []
        for axis in range(self.n_axes):
            coords = [0] * self.n_axes
            coords[axis] = 1
            gens.append(self.element(coords))
        return gens

    def __str__(self) -> str:
        parts = []
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank > 1:
            parts.append(f"Z^{self.free_rank}")
        parts.extend(f"Z_{m}" for m in self.torsion_orders)
        return "x".join(parts) if parts else "1"


@dataclass(frozen=True)
class GroupElement:
    spec: GroupSpec
    free_part: tuple[int, ...]
    torsion_part: tuple[int, ...]

    def __post_init__(self):
        spec = self.spec
        if len(self.free_part) != spec.free_rank or len(self.torsion_part) != len(spec.torsion_orders):
            raise SpecMismatchError(
                f"element ({self.free_part}, {self.torsion_part}) does not fit {spec}"
            )
        object.__setattr__(self, "free_part", tuple(int(v) for v in self.free_part))
        object.__setattr__(
            self,
            "torsion_part",
            tuple(int(t) % m for t, m in zip(self.torsion_part, spec.torsion_orders)),
        )

    @property
    def coords(self) -> tuple[int, ...]:
        return self.free_part + self.torsion_part

    def is_identity(self) -> bool:
        return not any(self.free_part) and not any(self.torsion_part)

    def _check(self, other: "GroupElement"):
        if not isinstance(other, GroupElement):
            return NotImplemented
        if other.spec != self.spec:
            raise SpecMismatchError(f"cannot combine elements of {self.spec} and {other.spec}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        if self._check(other) is NotImplemented:
            return NotImplemented
        return GroupElement(
            self.spec,
            tuple(a + b for a, b in zip(self.free_part, other.free_part)),
            tuple(a + b for a, b in zip(self.torsion_part, other.torsion_part)),
        )

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.spec, tuple(-a for a in self.free_part), tuple(-a for a in self.torsion_part))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, n: int) -> "GroupElement":
        if not isinstance(n, (int, np.integer)):
            return NotImplemented
        n = int(n)
        return GroupElement(self.spec, tuple(n * a for a in self.free_part), tuple(n * a for a in self.torsion_part))

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return "(" + ",".join(str(c) for c in self.coords) + ")"


def make_group_spec(d: int, torsion: Iterable[int] = ()) -> GroupSpec:
    """Validated constructor for ``Z^d x Z_m1 x ...``."""
    return GroupSpec(d, tuple(torsion))


def op_elements(a: GroupElement, b: GroupElement | None, action: str, n: int | None = None) -> GroupElement:
    """Apply ``add``, ``inverse`` or ``multiple`` (with ``n``) to group elements.

    ``b`` is ignored for ``inverse`` and ``multiple``.
    """
    if action == "add":
        if b is None:
            raise ValueError("add needs two elements")
        return a + b
    if action == "inverse":
        return -a
    if action == "multiple":
        if n is None:
            raise ValueError("multiple needs an integer n")
        return a * n
    raise ValueError(f"unknown action {action!r}")


def ball_size(spec: GroupSpec, radius: int) -> int:
    return (2 * radius + 1) ** spec.free_rank * math.prod(spec.torsion_orders)


def _check_ball(spec: GroupSpec, radius: int) -> None:
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    size = ball_size(spec, radius)
    cap = element_cap()
    if size > cap:
        raise ResourceLimitError(
            f"ball of radius {radius} in {spec} has {size} elements, cap is {cap}",
            size=size,
            cap=cap,
        )


def ball_array(spec: GroupSpec, radius: int) -> np.ndarray:
    """Coordinates of :func:`enumerate_ball` as an ``(N, n_axes)`` int64 array."""
    _check_ball(spec, radius)
    ranges = [np.arange(-radius, radius + 1)] * spec.free_rank + [np.arange(m) for m in spec.torsion_orders]
    if not ranges:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.meshgrid(*ranges, indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)


def enumerate_ball(spec: GroupSpec, radius: int) -> list[GroupElement]:
    """All elements whose free part has max-norm ``<= radius``, in lexicographic order."""
    _check_ball(spec, radius)
    ranges = [range(-radius, radius + 1)] * spec.free_rank + [range(m) for m in spec.torsion_orders]
    return [spec.element(c) for c in itertools.product(*ranges)]


def shell_key(coords: Sequence[int], free_rank: int):
    """Sort key listing small elements first and ``+k`` before ``-k``."""
    free = coords[:free_rank]
    norm = max((abs(c) for c in free), default=0)
    return (norm, tuple((abs(c), c < 0) for c in free), tuple(coords[free_rank:]))


def coords_array(elements: Sequence[GroupElement] | Iterable[Sequence[int]], n_axes: int) -> np.ndarray:
    """Pack coordinates into int64, refusing anything that could overflow."""
    rows = [e.coords if isinstance(e, GroupElement) else tuple(e) for e in elements]
    for row in rows:
        for c in row:
            if abs(c) >= INT64_SAFE:
                raise OverflowError(f"coordinate {c} does not fit the int64 kernels")
    if not rows:
        return np.zeros((0, n_axes), dtype=np.int64)
    return np.array(rows, dtype=np.int64).reshape(len(rows), n_axes)
