import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wga.errors import ResourceLimitError, SpecMismatchError
from wga.group import (
    GroupSpec,
    ball_array,
    ball_size,
    coords_array,
    enumerate_ball,
    make_group_spec,
    op_elements,
    shell_key,
)

Z = GroupSpec(1)
ZxZ3 = GroupSpec(1, (3,))


def test_make_group_spec_cases():
    assert str(make_group_spec(1, [])) == "Z"
    assert make_group_spec(0, []).is_trivial
    assert str(make_group_spec(2, [4])) == "Z^2xZ_4"


@pytest.mark.parametrize("d, torsion", [(-1, []), (1, [1]), (0, [0])])
def test_make_group_spec_rejects(d, torsion):
    with pytest.raises(ValueError):
        make_group_spec(d, torsion)


def test_op_elements_examples():
    assert op_elements(Z.element(3), Z.element(-5), "add").coords == (-2,)
    Z4 = GroupSpec(0, (4,))
    assert op_elements(Z4.element(1), None, "multiple", 4).is_identity()
    assert op_elements(ZxZ3.element(2, 1), None, "inverse").coords == (-2, 2)


def test_op_elements_mismatch():
    with pytest.raises(SpecMismatchError):
        Z.element(1) + ZxZ3.element(1, 0)
    with pytest.raises(ValueError):
        op_elements(Z.element(1), None, "add")


def test_torsion_reduced_on_construction():
    assert ZxZ3.element(0, 7).torsion_part == (1,)
    assert ZxZ3.element(0, -1).torsion_part == (2,)


def test_enumerate_ball_examples():
    assert [e.coords for e in enumerate_ball(Z, 1)] == [(-1,), (0,), (1,)]
    assert [e.coords for e in enumerate_ball(GroupSpec(0), 5)] == [()]
    assert [e.coords for e in enumerate_ball(GroupSpec(1, (2,)), 0)] == [(0, 0), (0, 1)]


def test_ball_array_matches_enumeration():
    spec = GroupSpec(2, (3,))
    arr = ball_array(spec, 2)
    assert arr.tolist() == [list(e.coords) for e in enumerate_ball(spec, 2)]
    assert len(arr) == ball_size(spec, 2)


def test_enumeration_cap(monkeypatch):
    monkeypatch.setenv("WGA_CAP_ELEMENTS", "100")
    with pytest.raises(ResourceLimitError) as err:
        enumerate_ball(GroupSpec(2), 5)
    assert err.value.size == 121 and err.value.cap == 100
    assert len(enumerate_ball(GroupSpec(2), 4)) == 81


def test_large_multiples_do_not_wrap():
    x = Z.element(2**40)
    big = x * 2**30
    assert big.coords == (2**70,)
    with pytest.raises(OverflowError):
        coords_array([big], 1)


def test_shell_key_orders_plus_before_minus():
    coords = sorted([(-1,), (1,), (0,), (2,), (-2,)], key=lambda c: shell_key(c, 1))
    assert coords == [(0,), (1,), (-1,), (2,), (-2,)]


specs = st.sampled_from([Z, ZxZ3, GroupSpec(2, (2, 4)), GroupSpec(0, (5,))])


@st.composite
def triples(draw):
    spec = draw(specs)
    def one():
        return spec.element(
            [draw(st.integers(-50, 50)) for _ in range(spec.free_rank)]
            + [draw(st.integers(-20, 20)) for _ in spec.torsion_orders]
        )
    return spec, one(), one(), one()


@given(triples())
def test_group_laws(t):
    spec, a, b, c = t
    e = spec.identity()
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    assert a + e == a
    assert (a + (-a)).is_identity()


@given(triples(), st.integers(0, 16))
def test_multiple_is_repeated_addition(t, n):
    spec, a, _, _ = t
    acc = spec.identity()
    for _ in range(n):
        acc = acc + a
    assert op_elements(a, None, "multiple", n) == acc


@given(specs, st.integers(0, 3))
def test_balls_are_nested(spec, r):
    small = {e.coords for e in enumerate_ball(spec, r)}
    big = {e.coords for e in enumerate_ball(spec, r + 1)}
    assert small <= big
    assert len(small) == ball_size(spec, r)
