"""Experiment configuration, report schema and report writers."""

from __future__ import annotations

import csv
import io
import json
import math
import os
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from .errors import ParseError
from .group import GroupElement

SCHEMA_VERSION = 1
COMMANDS = ("classify", "radius", "spectrum", "example-paper", "probe-finite", "separate", "bochner")
FORMATS = ("json", "csv")


@dataclass(frozen=True)
class ExperimentConfig:
    command: str
    group: str = "Z"
    weight: str | None = None
    element: str | None = None
    measure: str | None = None
    phi: str | None = None
    avoid: str | None = None
    max_exponent: int | None = None
    samples: int = 256
    tolerance: float = 1e-3
    seed: int = 0
    out: str | None = None
    format: str = "json"
    force: bool = False

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ParseError(f"unknown command {self.command!r}; expected one of {', '.join(COMMANDS)}", self.command, 0)
        if self.format not in FORMATS:
            raise ParseError(f"unknown format {self.format!r}", self.format, 0)
        if self.samples < 1:
            raise ValueError("samples must be positive")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.max_exponent is not None and self.max_exponent < 1:
            raise ValueError("max_exponent must be >= 1")

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentConfig":
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ParseError(f"unknown config key(s): {', '.join(unknown)}", json.dumps(data, sort_keys=True), 0)
        if "command" not in data:
            raise ParseError("config needs a command", json.dumps(data, sort_keys=True), 0)
        return cls(**data)

    @classmethod
    def from_text(cls, text: str) -> "ExperimentConfig":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, text, exc.pos) from exc
        if not isinstance(data, dict):
            raise ParseError("config must be a JSON object", text, 0)
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


@dataclass
class Report:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    # name -> rows of (x, re, im)
    curves: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)
    version: str = ""
    flags: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def add_curve(self, name: str, points) -> None:
        rows = []
        for x, v in points:
            v = complex(v)
            rows.append((_plain(x), v.real, v.imag))
        self.curves[name] = rows

    def flag(self, name: str) -> None:
        if name not in self.flags:
            self.flags.append(name)

    def to_dict(self) -> dict:
        return _plain(
            {
                "schema_version": self.schema_version,
                "command": self.command,
                "inputs": self.inputs,
                "results": self.results,
                "curves": {k: [list(r) for r in v] for k, v in self.curves.items()},
                "timing": self.timing,
                "version": self.version,
                "flags": sorted(self.flags),
            }
        )


def _plain(obj):
    """JSON-ready copy: numpy scalars unwrapped, complex split, non-finite floats as strings."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, GroupElement):
        return list(obj.coords)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _plain(obj.real), "im": _plain(obj.imag)}
    return obj


def render_report(r: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(r.to_dict(), sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["series", "x", "re", "im"])
        for name in sorted(r.curves):
            for x, re, im in r.curves[name]:
                writer.writerow([name, x, repr(float(re)), repr(float(im))])
        return buf.getvalue()
    raise ValueError(f"unknown format {fmt!r}")


def write_report(r: Report, path: str | None, fmt: str = "json", *, force: bool = False) -> str:
    """Write ``r`` to ``path`` (stdout when ``None``); refuses to overwrite unless ``force``."""
    text = render_report(r, fmt)
    if path is None or path == "-":
        print(text, end="")
        return text
    if os.path.exists(path) and not force:
        raise FileExistsError(f"{path} exists; pass --force to overwrite")
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return text


def grid_csv(angles: np.ndarray, radius: float, values: np.ndarray) -> str:
    """Transform samples on one circle as ``angle,radius,re,im`` rows."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["angle", "radius", "re", "im"])
    for t, v in zip(angles, values):
        writer.writerow([repr(float(t)), repr(float(radius)), repr(float(v.real)), repr(float(v.imag))])
    return buf.getvalue()


def compare_reports(a, b, rel: float = 1e-9, skip=("timing", "version")) -> list[str]:
    """Paths where two report dicts differ beyond ``rel`` (numbers) or at all (other values)."""
    diffs: list[str] = []

    def walk(x, y, path):
        if isinstance(x, dict) and isinstance(y, dict):
            for k in sorted(set(x) | set(y)):
                if path == "" and k in skip:
                    continue
                if k not in x or k not in y:
                    diffs.append(f"{path}/{k}: missing")
                else:
                    walk(x[k], y[k], f"{path}/{k}")
        elif isinstance(x, list) and isinstance(y, list):
            if len(x) != len(y):
                diffs.append(f"{path}: length {len(x)} != {len(y)}")
            else:
                for i, (u, v) in enumerate(zip(x, y)):
                    walk(u, v, f"{path}[{i}]")
        elif isinstance(x, (int, float)) and isinstance(y, (int, float)) and not isinstance(x, bool):
            if abs(x - y) > rel * max(1.0, abs(x), abs(y)):
                diffs.append(f"{path}: {x} != {y}")
        elif x != y:
            diffs.append(f"{path}: {x!r} != {y!r}")

    walk(a, b, "")
    return diffs
