"""Functionals built from finitely atomic measures on the character space.

A measure ``mu = sum_i c_i * [chi_i]`` acts on the algebra by
``phi(f) = sum_i c_i f^(chi_i)``.  Positive-definiteness of ``phi`` is tested
through the Gram matrix ``G_jk = phi(f_j * f_k^*)`` over a probe family.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import AlgebraElement, convolve, involution, norm_l1w
from .errors import PreconditionError, SpecMismatchError
from .group import ball_array, shell_key
from .spectrum import (
    Character,
    CharacterSpace,
    character_dual_norm,
    transform_at_points,
    validate_character,
)
from .weight import Weight

GRAM_PROBE_CAP = 64
PSD_TOL = 1e-9
MODULATE_SLACK = 1e-12


@dataclass(frozen=True)
class SpectralMeasure:
    """Finite list of ``(character, mass)`` atoms, merged by character."""

    cs: CharacterSpace
    atoms: tuple[tuple[Character, float], ...] = ()

    def __post_init__(self):
        merged: dict[Character, float] = {}
        for chi, mass in self.atoms:
            check = validate_character(self.cs, chi)
            if not check:
                raise PreconditionError(f"atom {chi.to_literal()} rejected: {check.reason}")
            merged[chi] = merged.get(chi, 0.0) + float(mass)
        object.__setattr__(self, "atoms", tuple(merged.items()))

    @classmethod
    def from_literal(cls, cs: CharacterSpace, data: Sequence[dict]) -> "SpectralMeasure":
        """``[{"character": {...}, "mass": m}, ...]``."""
        return cls(cs, tuple((Character.from_literal(cs.spec, a["character"]), float(a["mass"])) for a in data))

    def to_literal(self) -> list:
        return [{"character": chi.to_literal(), "mass": m} for chi, m in self.atoms]

    def __add__(self, other: "SpectralMeasure") -> "SpectralMeasure":
        if other.cs != self.cs:
            raise SpecMismatchError("measures on different character spaces")
        return SpectralMeasure(self.cs, self.atoms + other.atoms)

    @property
    def on_torus(self) -> bool:
        return all(chi.is_unimodular for chi, _ in self.atoms)

    @property
    def nonnegative(self) -> bool:
        return all(m >= 0 for _, m in self.atoms)


@dataclass(frozen=True)
class Functional:
    """``phi(f) = sum_i c_i f^(chi_i)``."""

    measure: SpectralMeasure

    def __call__(self, f: AlgebraElement) -> complex:
        atoms = self.measure.atoms
        if not atoms:
            return 0j
        if f.spec != self.measure.cs.spec:
            raise SpecMismatchError("functional and element live on different groups")
        pts = np.stack([chi.point() for chi, _ in atoms])
        masses = np.array([m for _, m in atoms])
        return complex(np.dot(masses, transform_at_points(f, pts)))

    def bound(self, w: Weight, support: np.ndarray) -> float:
        """``sum |c_i| * sup_x |chi_i(x)| / w(x)`` over ``support``; ``|phi(f)| <= bound * ||f||_{1,w}``."""
        return float(sum(abs(m) * character_dual_norm(chi, w, support) for chi, m in self.measure.atoms))


def synthesize_functional(mu: SpectralMeasure) -> Functional:
    return Functional(mu)


@dataclass(frozen=True)
class GramCheck:
    min_eigenvalue: float
    psd: bool
    eigenvalues: tuple[float, ...]
    # PSD is only guaranteed for nonnegative masses on the unit torus
    guaranteed: bool


def gram_matrix(phi: Functional, probes: Sequence[AlgebraElement]) -> np.ndarray:
    n = len(probes)
    stars = [involution(p) for p in probes]
    G = np.empty((n, n), dtype=np.complex128)
    for j in range(n):
        for k in range(j, n):
            G[j, k] = phi(convolve(probes[j], stars[k]))
            G[k, j] = np.conj(G[j, k]) if k != j else G[j, k]
    return G


def gram_positivity_check(phi: Functional, probes: Sequence[AlgebraElement]) -> GramCheck:
    """Minimum eigenvalue of the Hermitian part of ``G_jk = phi(f_j * f_k^*)``.

    ``psd`` holds when that eigenvalue is at least ``-1e-9 * ||G||_2``.
    """
    if not probes:
        raise PreconditionError("gram_positivity_check needs at least one probe")
    if len(probes) > GRAM_PROBE_CAP:
        raise PreconditionError(f"at most {GRAM_PROBE_CAP} probes, got {len(probes)}")
    G = gram_matrix(phi, probes)
    H = 0.5 * (G + G.conj().T)
    eig = np.linalg.eigvalsh(H)
    scale = float(np.max(np.abs(eig))) if len(eig) else 0.0
    lo = float(eig[0])
    m = phi.measure
    return GramCheck(lo, lo >= -PSD_TOL * scale, tuple(float(e) for e in eig), m.on_torus and m.nonnegative)


@dataclass(frozen=True)
class Modulation:
    g: AlgebraElement
    norm_bound_ok: bool
    l1_norm: float
    weighted_norm: float


def modulate(f: AlgebraElement, chi: Character, w: Weight) -> Modulation:
    """``g(x) = chi(x) f(x)`` with the check ``||g||_1 <= ||f||_{1,w}``."""
    if chi.spec != f.spec or w.spec != f.spec:
        raise SpecMismatchError("element, character and weight must share a group")
    vals = np.ones(len(f), dtype=np.complex128)
    for j, z in enumerate(chi.point()):
        vals = vals * np.power(z, f.coords[:, j].astype(float))
    g = AlgebraElement(f.spec, f.coords, f.amps * vals, canonical=True)
    l1 = float(np.sum(np.abs(g.amps)))
    wn = norm_l1w(f, w)
    ok = l1 <= wn + MODULATE_SLACK * (1.0 + wn)
    return Modulation(g, ok, l1, wn)


def translate_character(gamma: Character, chi: Character, cs: CharacterSpace) -> Character:
    """Pointwise product of a unimodular character with a character of ``cs``."""
    if not gamma.is_unimodular:
        raise PreconditionError("translating character must have |z_j| = 1 on every free axis")
    check = validate_character(cs, chi)
    if not check:
        raise PreconditionError(f"character rejected: {check.reason}")
    return gamma * chi


def distinguishing_monomial(phi: Functional, psi: Functional, window: int = 32, tol: float = 1e-9):
    """First ``delta_x`` (shell order, max-norm ``<= window``) with ``phi != psi``, else ``None``."""
    spec = phi.measure.cs.spec
    coords = sorted(
        (tuple(int(v) for v in c) for c in ball_array(spec, window)), key=lambda c: shell_key(c, spec.free_rank)
    )
    for c in coords:
        d = AlgebraElement.delta(spec, c)
        a, b = phi(d), psi(d)
        if abs(a - b) > tol * max(1.0, abs(a), abs(b)):
            return spec.element(c)
    return None

