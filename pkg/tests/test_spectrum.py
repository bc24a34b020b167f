import cmath
import math

import numpy as np
import pytest
from conftest import elements, random_element
from hypothesis import given, settings
from hypothesis import strategies as st

from wga.algebra import AlgebraElement, convolve, norm_l1w, spectral_radius_normlimit
from wga.errors import (
    AliasingError,
    ConditioningError,
    PreconditionError,
    ResourceLimitError,
    SamplingError,
    UnsupportedError,
)
from wga.group import GroupSpec
from wga.spectrum import (
    Character,
    character_dual_norm,
    character_space,
    character_table,
    finite_gelfand_probe,
    gelfand_eval,
    gelfand_grid,
    grid_points,
    inverse_gelfand,
    separating_element,
    spectral_radius_oracle,
    validate_character,
    w_pointwise_product,
)
from wga.weight import Constant, Exp, Poly, Table, Weight

Z = GroupSpec(1)
Z4 = GroupSpec(0, (4,))
ZxZ4 = GroupSpec(1, (4,))
POLY1 = Weight.product(Z, Poly(1))
EXP_LN2 = Weight.product(Z, Exp(math.log(2)))
ONE = Weight.unweighted(Z)


def chi(spec, *free, torsion=()):
    return Character(spec, tuple(free), tuple(torsion))


def d(spec, *coords, amp=1.0):
    return AlgebraElement.delta(spec, coords, amp)


def test_character_space_examples():
    cs = character_space(POLY1)
    assert cs.is_torus and cs.describe() == "T"
    cs = character_space(EXP_LN2)
    a = cs.annuli[0]
    assert a.r_minus == pytest.approx(0.5) and a.r_plus == pytest.approx(2.0) and a.exact
    cs = character_space(Weight.product(Z4, Table((1, 2, 3, 2))))
    assert cs.annuli == () and cs.spec.torsion_orders == (4,)
    assert cs.describe() == "mu_4"


def test_character_space_table_gives_certified_bracket():
    w = Weight.product(Z, Table(tuple(1.0 + abs(n) for n in range(-8, 9)), offset=-8, extension="clamp"))
    a = character_space(w, 2**10).annuli[0]
    assert not a.exact
    assert a.r_minus <= 1.0 <= a.r_plus and a.width == pytest.approx(a.r_plus - a.r_minus)


def test_character_space_rejects_non_product():
    with pytest.raises(UnsupportedError):
        character_space(Weight.from_function(Z, lambda c: 1 + abs(c[0])))


def test_validate_examples():
    assert validate_character(character_space(POLY1), chi(Z, 1))
    bad = validate_character(character_space(POLY1), chi(Z, 1.5))
    assert not bad and bad.axis == 0 and bad.value == 1.5
    assert validate_character(character_space(EXP_LN2), chi(Z, 0.6))


def test_validate_rejects_off_cycle_torsion():
    cs = character_space(Weight.product(ZxZ4, Poly(1), Constant(1)))
    assert validate_character(cs, chi(ZxZ4, 1j, torsion=(3,)))
    assert not validate_character(cs, chi(ZxZ4, 1j, torsion=(4,)))
    assert not validate_character(cs, chi(ZxZ4, 1j, torsion=(-1,)))
    assert not validate_character(cs, chi(ZxZ4, 1j, torsion=(1.5,)))


def test_gelfand_eval_examples():
    z = 0.7 * cmath.exp(0.3j)
    assert gelfand_eval(d(Z, 5), chi(Z, z)) == pytest.approx(z**5, rel=1e-14)
    assert gelfand_eval(d(ZxZ4, 0, 0), chi(ZxZ4, 1.3, torsion=(1,))) == 1
    # torsion coordinate t contributes exp(2 pi i k t / m)
    assert gelfand_eval(d(ZxZ4, 0, 3), chi(ZxZ4, 1, torsion=(1,))) == pytest.approx(-1j, abs=1e-15)


def test_gelfand_eval_overflow_reports_exponent():
    with pytest.raises(OverflowError, match="2000"):
        gelfand_eval(d(Z, 2000), chi(Z, 2.0))


def test_oracle_examples():
    o = spectral_radius_oracle(d(Z, -1) + d(Z, 1), character_space(ONE), 64)
    assert o.value == pytest.approx(2.0, abs=1e-12)
    assert spectral_radius_oracle(d(Z, 0), character_space(POLY1), 8).value == 1
    o = spectral_radius_oracle(d(Z, 1), character_space(EXP_LN2), 16)
    assert o.value == pytest.approx(2.0, abs=1e-12)


def test_oracle_refuses_coarse_sampling():
    with pytest.raises(SamplingError) as err:
        spectral_radius_oracle(d(Z, -5) + d(Z, 5), character_space(ONE), 16)
    assert err.value.required == 40


def test_oracle_with_torsion_and_two_free_axes():
    spec = GroupSpec(2, (3,))
    w = Weight.product(spec, Poly(1), Exp(0.3), Constant(1))
    cs = character_space(w)
    f = AlgebraElement.from_dict(spec, {(1, 0, 1): 1.0, (0, -1, 2): 2.0, (0, 0, 0): -1.0})
    o = spectral_radius_oracle(f, cs, 32)
    # dense brute force on the boundary torus pieces
    best = 0.0
    th = np.linspace(0, 2 * np.pi, 721)
    for r2 in (math.exp(-0.3), math.exp(0.3)):
        for k in range(3):
            u = np.exp(2j * np.pi * k / 3)
            z1 = np.exp(1j * th)[:, None]
            z2 = r2 * np.exp(1j * th)[None, :]
            vals = np.abs(z1 * u - 1 + 2 * u**2 / z2)
            best = max(best, vals.max())
    assert o.value >= best - 1e-9
    assert o.value <= best + o.sampling_bound + 1e-9
    assert o.value == pytest.approx(1 + 2 * math.exp(0.3) + 1, rel=1e-9)


def test_grid_points_refuse_radius_outside_annulus():
    with pytest.raises(PreconditionError):
        grid_points(character_space(POLY1), [8], [1.2])


def test_inverse_examples(rng):
    cs = character_space(POLY1)
    for _ in range(20):
        k = int(rng.integers(1, 10))
        coords = rng.integers(-20, 21, size=(k, 1))
        f = AlgebraElement(Z, coords, rng.normal(size=k) + 1j * rng.normal(size=k))
        back = inverse_gelfand(gelfand_grid(f, cs, [64], [1.0]), cs, [1.0], [(-20, 20)])
        assert back.allclose(f, 1e-9)
    delta = inverse_gelfand(gelfand_grid(d(Z, 0), cs, [16], [1.0]), cs, [1.0], [(-4, 4)])
    assert delta.support.keys() == {Z.element(0)} and abs(delta[0] - 1) < 1e-15
    assert inverse_gelfand(np.zeros(16, dtype=complex), cs, [1.0], [(-4, 4)]).is_zero()


def test_inverse_on_annulus_and_torsion(rng):
    w = Weight.product(ZxZ4, Exp(0.2), Constant(1))
    cs = character_space(w)
    for rho in (math.exp(-0.2), 1.0, math.exp(0.2)):
        f = random_element(rng, ZxZ4, window=8, terms=10)
        back = inverse_gelfand(gelfand_grid(f, cs, [24], [rho]), cs, [rho], [(-8, 8)])
        assert back.allclose(f, 1e-9)


def test_inverse_detects_aliasing():
    cs = character_space(POLY1)
    f = d(Z, -9) + d(Z, 9)
    samples = gelfand_grid(f, cs, [32], [1.0])
    with pytest.raises(AliasingError):
        inverse_gelfand(samples, cs, [1.0], [(-5, 5)])
    with pytest.raises(PreconditionError):
        inverse_gelfand(samples, cs, [1.0], [(-20, 20)])


def test_pointwise_product_examples(rng):
    for _ in range(10):
        a, b = (chi(Z, cmath.exp(2j * math.pi * rng.uniform())) for _ in range(2))
        assert w_pointwise_product(a, b, ONE, 6).multiplicative
    res = w_pointwise_product(chi(Z, 1), chi(Z, 1), POLY1, 6)
    assert not res.multiplicative
    x, y = res.witness
    assert x.coords == (1,) and y.coords == (1,)
    assert res.table[Z.element(2)] == pytest.approx(1 / 3)
    res = w_pointwise_product(chi(Z, 1), chi(Z, 1), Weight.product(Z, Exp(0.5)), 6)
    x, y = res.witness
    assert x.coords[0] * y.coords[0] < 0


def test_separating_examples():
    cs = character_space(POLY1)
    f = separating_element(cs, [chi(Z, 1), chi(Z, 1j)], chi(Z, -1))
    assert len(f) == 3
    assert abs(gelfand_eval(f, chi(Z, -1)) - 1) < 1e-12
    assert abs(gelfand_eval(f, chi(Z, 1))) < 1e-12 and abs(gelfand_eval(f, chi(Z, 1j))) < 1e-12
    assert separating_element(cs, [], chi(Z, 1j)).allclose(d(Z, 0))
    half = separating_element(cs, [chi(Z, -1)], chi(Z, 1))
    assert half.allclose(d(Z, 0, amp=0.5) + d(Z, 1, amp=0.5), 1e-14)


def test_separating_errors():
    cs = character_space(POLY1)
    with pytest.raises(UnsupportedError):
        separating_element(character_space(EXP_LN2), [chi(Z, 1)], chi(Z, -1))
    with pytest.raises(PreconditionError):
        separating_element(cs, [chi(Z, 1)], chi(Z, 1))
    with pytest.raises(ConditioningError) as err:
        separating_element(cs, [chi(Z, cmath.exp(1e-11j)), chi(Z, 1)], chi(Z, -1))
    assert err.value.condition > 1e8
    with pytest.raises(ResourceLimitError):
        separating_element(cs, [chi(Z, cmath.exp(0.01j * k)) for k in range(70)], chi(Z, -1))


def test_separating_on_torsion_product():
    spec = GroupSpec(1, (3,))
    cs = character_space(Weight.product(spec, Poly(1), Constant(1)))
    avoid = [chi(spec, 1, torsion=(0,)), chi(spec, 1, torsion=(1,)), chi(spec, -1, torsion=(2,))]
    target = chi(spec, 1j, torsion=(1,))
    f = separating_element(cs, avoid, target)
    assert abs(gelfand_eval(f, target) - 1) < 1e-9
    assert max(abs(gelfand_eval(f, e)) for e in avoid) < 1e-9


def test_finite_probe_examples():
    triv = GroupSpec(0)
    res = finite_gelfand_probe(triv, Weight.product(triv))
    assert res.rank == 1 and res.surjective and abs(res.isometry_defect) < 1e-12
    Z2 = GroupSpec(0, (2,))
    res = finite_gelfand_probe(Z2, Weight.unweighted(Z2), [AlgebraElement.from_dict(Z2, {(0,): 1, (1,): 1j})])
    assert res.isometry_defect == pytest.approx(math.sqrt(2) - 1, abs=1e-12)
    for spec in (Z4, GroupSpec(0, (2, 3))):
        res = finite_gelfand_probe(spec, Weight.unweighted(spec))
        assert res.rank == spec.order and res.surjective
    with pytest.raises(PreconditionError):
        finite_gelfand_probe(Z, ONE)
    big = GroupSpec(0, (64, 65))
    with pytest.raises(ResourceLimitError):
        finite_gelfand_probe(big, Weight.unweighted(big))


def test_character_table_is_scaled_unitary():
    spec = GroupSpec(0, (2, 6))
    T = character_table(spec)
    assert np.allclose(T @ T.conj().T, spec.order * np.eye(spec.order), atol=1e-12)


torus = st.floats(0, 2 * math.pi).map(lambda t: cmath.exp(1j * t))


@settings(max_examples=200)
@given(elements(Z), elements(Z), st.floats(0.5, 2.0), st.floats(0, 2 * math.pi))
def test_transform_is_multiplicative(f, g, r, t):
    c = chi(Z, r * cmath.exp(1j * t))
    lhs = gelfand_eval(convolve(f, g), c)
    rhs = gelfand_eval(f, c) * gelfand_eval(g, c)
    scale = norm_l1w(f, EXP_LN2) * norm_l1w(g, EXP_LN2)
    assert abs(lhs - rhs) <= 1e-10 * max(scale, 1.0)


@given(elements(ZxZ4), st.floats(math.exp(-0.2), math.exp(0.2)), st.floats(0, 2 * math.pi), st.integers(0, 3))
def test_transform_bounded_by_dual_norm(f, r, t, k):
    w = Weight.product(ZxZ4, Exp(0.2), Poly(1))
    c = chi(ZxZ4, r * cmath.exp(1j * t), torsion=(k,))
    bound = character_dual_norm(c, w, f.coords) * norm_l1w(f, w)
    assert abs(gelfand_eval(f, c)) <= bound * (1 + 1e-12)


@settings(max_examples=40)
@given(elements(Z, window=3, max_terms=5))
def test_oracle_dominance(f):
    if f.is_zero():
        return
    cs = character_space(POLY1)
    o = spectral_radius_oracle(f, cs, 64)
    assert o.value <= norm_l1w(f, POLY1) + 1e-9
    est = spectral_radius_normlimit(f, POLY1, 2**8)
    assert est.estimate >= o.value - o.sampling_bound - 1e-9


@given(elements(ZxZ4, window=6), st.sampled_from([0.9, 1.0, 1.1]))
def test_round_trip_identity(f, rho):
    w = Weight.product(ZxZ4, Exp(0.2), Constant(1))
    cs = character_space(w)
    back = inverse_gelfand(gelfand_grid(f, cs, [16], [rho]), cs, [rho], [(-6, 6)])
    assert back.allclose(f, 1e-9 * max(1.0, float(np.max(np.abs(f.amps), initial=0))))
