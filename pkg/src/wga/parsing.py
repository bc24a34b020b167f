"""Text formats: group specs, the weight DSL and JSON literals.

Group text is ``"Z"``, ``"Z^2xZ_4"``, ``"ZxZ_2xZ_3"`` or ``"1"`` for the
trivial group.  Weights are per-axis factors joined by ``*``::

    poly:1   exp:0.7   subexp:1,0.5   const:1   table:[1,2,4]@-1:clamp

A single factor on a group with several axes applies to every free axis
and leaves the torsion axes unweighted.
"""

from __future__ import annotations

import json
import re

from .algebra import AlgebraElement
from .errors import ParseError
from .group import GroupSpec
from .representation import SpectralMeasure
from .spectrum import Character, CharacterSpace
from .weight import Constant, Exp, Poly, SubExp, Table, Weight

_NUMBER = r"[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?"
_GROUP_TOKEN = re.compile(r"Z(?:\^(\d+)|_(\d+))?")


def parse_group(text: str) -> GroupSpec:
    s = text.replace(" ", "")
    if s in ("1", "0", "{0}"):
        return GroupSpec(0)
    if not s:
        raise ParseError("empty group", text, 0)
    free, torsion = 0, []
    pos = 0
    while True:
        m = _GROUP_TOKEN.match(s, pos)
        if not m:
            raise ParseError("expected Z, Z^d or Z_m", text, pos)
        if m.group(2) is not None:
            order = int(m.group(2))
            if order < 2:
                raise ParseError("torsion order must be at least 2", text, m.start(2))
            torsion.append(order)
        else:
            if torsion:
                raise ParseError("free factors must precede torsion factors", text, pos)
            free += int(m.group(1)) if m.group(1) is not None else 1
        pos = m.end()
        if pos == len(s):
            break
        if s[pos] not in "xX":
            raise ParseError("expected 'x' between factors", text, pos)
        pos += 1
    return GroupSpec(free, tuple(torsion))


def _numbers(body: str, text: str, start: int, count: int | None = None) -> list[float]:
    parts = body.split(",") if body else []
    out, pos = [], start
    for p in parts:
        if not re.fullmatch(_NUMBER, p.strip()):
            raise ParseError(f"expected a number, got {p!r}", text, pos)
        out.append(float(p))
        pos += len(p) + 1
    if count is not None and len(out) != count:
        raise ParseError(f"expected {count} parameter(s), got {len(out)}", text, start)
    return out


def _parse_factor(chunk: str, text: str, start: int):
    name, sep, body = chunk.partition(":")
    if not sep:
        raise ParseError("expected 'family:parameters'", text, start)
    arg = start + len(name) + 1
    try:
        if name == "poly":
            return Poly(*_numbers(body, text, arg, 1))
        if name == "exp":
            return Exp(*_numbers(body, text, arg, 1))
        if name == "subexp":
            return SubExp(*_numbers(body, text, arg, 2))
        if name in ("const", "constant"):
            return Constant(*_numbers(body, text, arg, 1))
        if name == "table":
            m = re.fullmatch(r"\[([^\]]*)\](?:@([+-]?\d+)(?::(strict|clamp))?)?", body)
            if not m:
                raise ParseError("expected table:[v,...] with optional @offset[:strict|clamp]", text, arg)
            vals = _numbers(m.group(1), text, arg + 1)
            return Table(tuple(vals), int(m.group(2) or 0), m.group(3) or "strict")
    except ParseError:
        raise
    except ValueError as exc:
        raise ParseError(str(exc), text, arg) from exc
    raise ParseError(f"unknown weight family {name!r}", text, start)


def parse_weight(text: str, spec: GroupSpec) -> Weight:
    s = text.strip()
    if spec.n_axes == 0:
        if s not in ("", "1", "const:1"):
            raise ParseError("the trivial group carries no weight factors", text, 0)
        return Weight.product(spec)
    factors, pos = [], 0
    for chunk in s.split("*"):
        factors.append(_parse_factor(chunk.strip(), text, pos))
        pos += len(chunk) + 1
    if len(factors) == 1 and spec.n_axes > 1:
        return Weight.uniform(spec, factors[0])
    if len(factors) != spec.n_axes:
        raise ParseError(f"{spec} has {spec.n_axes} axes but {len(factors)} factors were given", text, len(text))
    try:
        return Weight.product(spec, *factors)
    except ValueError as exc:
        raise ParseError(str(exc), text, 0) from exc


def _json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, text, exc.pos) from exc


def parse_element(text: str, spec: GroupSpec) -> AlgebraElement:
    """``[[coords, re, im], ...]``, e.g. ``[[[0],1,0],[[1],0,1]]``."""
    data = _json(text)
    if not isinstance(data, list):
        raise ParseError("element literal must be a JSON list of [coords, re, im]", text, 0)
    for i, t in enumerate(data):
        if not (isinstance(t, list) and len(t) == 3 and isinstance(t[0], list) and len(t[0]) == spec.n_axes):
            raise ParseError(f"entry {i} is not [coords({spec.n_axes}), re, im]", text, _locate(text, i))
    try:
        return AlgebraElement.from_literal(spec, data)
    except (TypeError, ValueError) as exc:
        raise ParseError(str(exc), text, 0) from exc


def parse_character(text: str | dict, spec: GroupSpec) -> Character:
    data = _json(text) if isinstance(text, str) else text
    try:
        return Character.from_literal(spec, data)
    except Exception as exc:
        raise ParseError(f"bad character literal: {exc}", str(text), 0) from exc


def parse_characters(text: str, spec: GroupSpec) -> list[Character]:
    data = _json(text)
    if isinstance(data, dict):
        data = [data]
    return [parse_character(d, spec) for d in data]


def parse_measure(text: str, cs: CharacterSpace) -> SpectralMeasure:
    """``[{"character": {...}, "mass": m}, ...]``."""
    data = _json(text)
    if not isinstance(data, list):
        raise ParseError("measure literal must be a JSON list", text, 0)
    for i, a in enumerate(data):
        if not (isinstance(a, dict) and set(a) == {"character", "mass"}):
            raise ParseError(f"atom {i} needs exactly the keys 'character' and 'mass'", text, _locate(text, i))
    try:
        return SpectralMeasure.from_literal(cs, data)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(str(exc), text, 0) from exc


def _locate(text: str, index: int) -> int:
    """Character offset of the ``index``-th top-level list entry (best effort)."""
    depth, count = 0, 0
    for pos, ch in enumerate(text):
        if ch in "[{":
            depth += 1
            if depth == 2:
                if count == index:
                    return pos
                count += 1
        elif ch in "]}":
            depth -= 1
    return 0
