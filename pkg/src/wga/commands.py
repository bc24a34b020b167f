"""Experiment drivers behind the command-line front end."""

from __future__ import annotations

import math
import time

import numpy as np

from . import __version__
from .algebra import AlgebraElement, norm_l1w, spectral_radius_normlimit
from .errors import PreconditionError, ResourceLimitError
from .group import GroupSpec
from .parsing import parse_character, parse_characters, parse_element, parse_group, parse_measure, parse_weight
from .report import ExperimentConfig, Report
from .representation import gram_positivity_check, synthesize_functional
from .spectrum import (
    character_space,
    finite_gelfand_probe,
    gelfand_eval,
    gelfand_grid,
    separating_element,
    spectral_radius_oracle,
)
from .weight import DEFAULT_MAX_EXPONENT, Weight, bd_partial_sums, classify_weight, weight_radius

EXAMPLE_DOMAR_LADDER = (100, 1000, 10000, 100000)
EXAMPLE_TOL = 1e-3


def domar_tail_bound(n: int) -> float:
    """Upper bound on ``sum_{k>n} 2 log(1+k) / (1+k^2)``.

    The summand is below ``log(1+t)/t^2``, which decreases for ``t >= 2``, so
    the tail is at most ``2 * integral_n^inf log(1+t)/t^2 dt``
    ``= 2 * (log(1+n)/n + log(1+1/n))``.
    """
    return 2.0 * (math.log1p(n) / n + math.log1p(1.0 / n))


def _weight(cfg: ExperimentConfig, spec: GroupSpec) -> Weight:
    return Weight.unweighted(spec) if cfg.weight is None else parse_weight(cfg.weight, spec)


def _inputs(cfg: ExperimentConfig) -> dict:
    d = cfg.to_dict()
    for k in ("out", "format", "force"):
        d.pop(k)
    return d


def run_command(cfg: ExperimentConfig) -> Report:
    report = Report(cfg.command, _inputs(cfg), version=__version__)
    start = time.perf_counter()
    _DISPATCH[cfg.command](cfg, report)
    report.timing = {"wall_seconds": round(time.perf_counter() - start, 6)}
    return report


def _classify(cfg, report):
    spec = parse_group(cfg.group)
    w = _weight(cfg, spec)
    res = classify_weight(w, cfg.tolerance, max_exponent=cfg.max_exponent or DEFAULT_MAX_EXPONENT)
    out = res.to_dict()
    for ev in out["radius_evidence"]:
        report.add_curve(f"rw_ladder{tuple(ev['generator'])}".replace(" ", ""), ev["ladder"])
    for ev in out["domar_evidence"]:
        report.add_curve(f"domar_sums{tuple(ev['generator'])}".replace(" ", ""), ev["sums"])
    report.results = {k: out[k] for k in ("verdict", "family_exact", "rescaled", "scale", "notes")}
    report.results["radius_estimates"] = [
        {k: ev[k] for k in ("generator", "estimate", "exact_value", "n_reached")}
        for ev in out["radius_evidence"]
    ]
    if res.rescaled:
        report.flag("rescaled_weight")


def _radius(cfg, report):
    spec = parse_group(cfg.group)
    w = _weight(cfg, spec)
    if cfg.element is None:
        raise PreconditionError("radius needs --element")
    f = parse_element(cfg.element, spec)
    max_n = cfg.max_exponent or 2**12
    try:
        est = spectral_radius_normlimit(f, w, max_n)
        ladder, value, n_reached = est.ladder, est.estimate, est.n_reached
    except ResourceLimitError as exc:
        ladder, value, n_reached = exc.ladder, exc.best_estimate, exc.n_reached
        report.flag("partial_certificate")
    report.add_curve("normlimit_ladder", ladder)
    report.results = {"normlimit": value, "n_reached": n_reached, "norm": norm_l1w(f, w)}
    if w.is_product:
        cs = character_space(w)
        o = spectral_radius_oracle(f, cs, max(cfg.samples, _min_samples(f)))
        report.results["oracle"] = o.value
        report.results["sampling_bound"] = o.sampling_bound


def _min_samples(f: AlgebraElement) -> int:
    d = f.spec.free_rank
    if not d or f.is_zero():
        return 1
    return 4 * int(np.max(f.coords[:, :d].max(axis=0) - f.coords[:, :d].min(axis=0)))


def _spectrum(cfg, report):
    spec = parse_group(cfg.group)
    w = _weight(cfg, spec)
    cs = character_space(w, cfg.max_exponent or DEFAULT_MAX_EXPONENT)
    report.results = {"character_space": cs.to_dict()}
    if not all(a.exact for a in cs.annuli):
        report.flag("certified_bracket")
    if cfg.element is None:
        return
    f = parse_element(cfg.element, spec)
    o = spectral_radius_oracle(f, cs, max(cfg.samples, _min_samples(f)))
    report.results["oracle"] = o.value
    report.results["sampling_bound"] = o.sampling_bound
    if spec.free_rank == 1 and not spec.torsion_orders:
        ann = cs.annuli[0]
        angles = 2 * np.pi * np.arange(cfg.samples) / cfg.samples
        for label, r in (("transform_inner", ann.r_minus), ("transform_outer", ann.r_plus)):
            vals = gelfand_grid(f, cs, [cfg.samples], [r])
            report.add_curve(label, zip(angles.tolist(), vals.tolist()))


def _example_paper(cfg, report):
    spec = GroupSpec(1)
    w = parse_weight("poly:1", spec)
    e = spec.element(1)
    max_n = cfg.max_exponent or 2**20
    rad = weight_radius(w, e, max_n)
    report.add_curve("rw_ladder", rad.ladder)
    sums = bd_partial_sums(w, e, EXAMPLE_DOMAR_LADDER)
    report.add_curve("domar_sums", sums)
    cs = character_space(w, max_n)
    ann = cs.annuli[0]
    verdict = classify_weight(w, cfg.tolerance)
    (n_lo, s_lo), (n_hi, s_hi) = sums[-2], sums[-1]
    gap = s_hi - s_lo
    bound = domar_tail_bound(n_lo)
    report.results = {
        "weight": w.dsl(),
        "rw_top": rad.ladder[-1][1],
        "rw_top_n": rad.ladder[-1][0],
        "rw_closed_form": (1.0 + rad.ladder[-1][0]) ** (1.0 / rad.ladder[-1][0]),
        "rw_within_tolerance": abs(rad.ladder[-1][1] - 1.0) <= EXAMPLE_TOL,
        "domar_gap": gap,
        "domar_tail_bound": bound,
        "domar_within_bound": 0 <= gap <= bound,
        "domar_monotone": all(b[1] >= a[1] for a, b in zip(sums, sums[1:])),
        "r_plus": ann.r_plus,
        "r_minus": ann.r_minus,
        "annulus_within_tolerance": abs(ann.r_plus - 1) <= EXAMPLE_TOL and abs(ann.r_minus - 1) <= EXAMPLE_TOL,
        "verdict": verdict.verdict,
        "family_exact": verdict.family_exact,
        "character_space": "Delta = T" if cs.is_torus else f"Delta = {cs.describe()}",
    }


def _probe_finite(cfg, report):
    spec = parse_group(cfg.group)
    w = _weight(cfg, spec)
    probes = [parse_element(cfg.element, spec)] if cfg.element else None
    res = finite_gelfand_probe(spec, w, probes)
    report.results = {
        "order": res.order,
        "rank": res.rank,
        "surjective": res.surjective,
        "isometry_defect": res.isometry_defect,
        "witness": res.witness.to_literal() if res.witness is not None else None,
    }


def _separate(cfg, report):
    spec = parse_group(cfg.group)
    w = _weight(cfg, spec)
    if cfg.phi is None:
        raise PreconditionError("separate needs --phi")
    cs = character_space(w)
    phi = parse_character(cfg.phi, spec)
    avoid = parse_characters(cfg.avoid, spec) if cfg.avoid else []
    f = separating_element(cs, avoid, phi)
    report.results = {
        "element": f.to_literal(),
        "value_at_phi": gelfand_eval(f, phi),
        "max_on_avoid": max((abs(gelfand_eval(f, c)) for c in avoid), default=0.0),
        "norm": norm_l1w(f, w),
    }


def random_probes(spec: GroupSpec, rng: np.random.Generator, count: int = 8, window: int = 4, terms: int = 3):
    probes = []
    for _ in range(count):
        k = int(rng.integers(1, terms + 1))
        free = rng.integers(-window, window + 1, size=(k, spec.free_rank))
        tors = np.zeros((k, 0), dtype=np.int64)
        if spec.torsion_orders:
            tors = np.stack([rng.integers(0, m, size=k) for m in spec.torsion_orders], axis=1)
        amps = rng.normal(size=k) + 1j * rng.normal(size=k)
        probes.append(AlgebraElement(spec, np.concatenate([free, tors], axis=1), amps))
    return [p for p in probes if not p.is_zero()]


def _bochner(cfg, report):
    spec = parse_group(cfg.group)
    w = _weight(cfg, spec)
    if cfg.measure is None:
        raise PreconditionError("bochner needs --measure")
    cs = character_space(w)
    mu = parse_measure(cfg.measure, cs)
    rng = np.random.default_rng(cfg.seed)
    probes = ([parse_element(cfg.element, spec)] if cfg.element else []) + random_probes(spec, rng)
    res = gram_positivity_check(synthesize_functional(mu), probes)
    report.results = {
        "min_eigenvalue": res.min_eigenvalue,
        "psd": res.psd,
        "guaranteed": res.guaranteed,
        "eigenvalues": list(res.eigenvalues),
        "probes": len(probes),
    }
    if not res.guaranteed:
        report.flag("off_torus_or_signed_measure")


_DISPATCH = {
    "classify": _classify,
    "radius": _radius,
    "spectrum": _spectrum,
    "example-paper": _example_paper,
    "probe-finite": _probe_finite,
    "separate": _separate,
    "bochner": _bochner,
}
