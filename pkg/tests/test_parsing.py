import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from wga.algebra import AlgebraElement
from wga.errors import ParseError
from wga.group import GroupSpec
from wga.parsing import parse_character, parse_element, parse_group, parse_measure, parse_weight
from wga.report import ExperimentConfig
from wga.spectrum import character_space
from wga.weight import Weight


@pytest.mark.parametrize(
    "text, free, torsion",
    [("Z", 1, ()), ("Z^2xZ_4", 2, (4,)), ("ZxZ_2xZ_3", 1, (2, 3)), ("Z_5", 0, (5,)), ("1", 0, ())],
)
def test_parse_group(text, free, torsion):
    spec = parse_group(text)
    assert spec == GroupSpec(free, torsion)
    if text != "1":
        assert parse_group(str(spec)) == spec


@pytest.mark.parametrize(
    "text, position",
    [("Z_3xZ", 4), ("ZxQ", 2), ("Z_1", 2), ("Z+Z", 1), ("", 0)],
)
def test_parse_group_error_positions(text, position):
    with pytest.raises(ParseError) as err:
        parse_group(text)
    assert err.value.position == position


@pytest.mark.parametrize(
    "text, group",
    [
        ("poly:1", "Z"),
        ("exp:0.5", "Z"),
        ("subexp:1,0.5", "Z"),
        ("const:1", "Z"),
        ("table:[1,2,4]@-1:clamp", "Z"),
        ("poly:1*exp:0.5*const:1", "Z^2xZ_4"),
    ],
)
def test_weight_dsl_round_trip(text, group):
    spec = parse_group(group)
    w = parse_weight(text, spec)
    assert w.dsl() == text
    assert parse_weight(w.dsl(), spec).dsl() == text


def test_single_factor_broadcasts():
    spec = parse_group("Z^2")
    assert parse_weight("poly:1", spec).dsl() == "poly:1*poly:1"


@pytest.mark.parametrize(
    "text, position",
    [("poly:x", 5), ("poly:1*exp:q", 11), ("gauss:1", 0), ("poly", 0), ("subexp:1", 7)],
)
def test_weight_error_positions(text, position):
    with pytest.raises(ParseError) as err:
        parse_weight(text, GroupSpec(1) if "*" not in text else GroupSpec(2))
    assert err.value.position == position


def test_weight_factor_count_mismatch():
    with pytest.raises(ParseError, match="3 axes"):
        parse_weight("poly:1*poly:1", parse_group("Z^2xZ_4"))


def test_trivial_group_weight():
    spec = GroupSpec(0)
    assert parse_weight("", spec) == Weight.product(spec)
    with pytest.raises(ParseError):
        parse_weight("poly:1", spec)


def test_element_literal_round_trip():
    spec = parse_group("ZxZ_4")
    f = parse_element("[[[0,1],1,0],[[-2,3],0,2.5]]", spec)
    assert f[(-2, 3)] == 2.5j
    assert parse_element(json.dumps(f.to_literal()), spec).allclose(f, 0)


def test_element_literal_errors():
    spec = GroupSpec(1)
    with pytest.raises(ParseError) as err:
        parse_element("[[[0],1,0],[[1,2],1,0]]", spec)
    assert err.value.position == 11
    with pytest.raises(ParseError) as err:
        parse_element("[[[0],1,0]", spec)
    assert err.value.position == 10


def test_character_and_measure_literals():
    spec = GroupSpec(1, (4,))
    c = parse_character('{"free": [[0, 1]], "torsion": [3]}', spec)
    assert c.free == (1j,) and c.torsion == (3,)
    assert parse_character(json.dumps(c.to_literal()), spec) == c
    cs = character_space(parse_weight("poly:1*const:1", spec))
    mu = parse_measure(json.dumps([{"character": c.to_literal(), "mass": 2.0}]), cs)
    assert mu.atoms == ((c, 2.0),)
    with pytest.raises(ParseError):
        parse_measure('[{"character": {}, "weight": 1}]', cs)


def test_config_round_trip_and_unknown_keys():
    cfg = ExperimentConfig("classify", weight="exp:0.7", seed=3)
    assert ExperimentConfig.from_text(cfg.to_text()) == cfg
    with pytest.raises(ParseError, match="colour"):
        ExperimentConfig.from_dict({"command": "classify", "colour": "red"})
    with pytest.raises(ParseError):
        ExperimentConfig.from_dict({"command": "plot"})
    with pytest.raises(ParseError) as err:
        ExperimentConfig.from_text('{"command": ')
    assert err.value.position == 12


@given(st.integers(0, 3), st.lists(st.integers(2, 9), max_size=3))
def test_group_text_round_trip(free, torsion):
    spec = GroupSpec(free, tuple(torsion))
    assert parse_group(str(spec)) == spec


@given(st.lists(st.tuples(st.integers(-9, 9), st.floats(-5, 5), st.floats(-5, 5)), max_size=6))
def test_element_text_round_trip(triples):
    spec = GroupSpec(1)
    f = AlgebraElement.from_literal(spec, [[[n], re, im] for n, re, im in triples])
    assert parse_element(json.dumps(f.to_literal()), spec).allclose(f, 0)
