"""Scenario files: loading, validation and canonical serialization.

A scenario is a TOML document whose first key is the format header.  See
``docs/scenario-format.md`` for the full schema.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path
from typing import Any, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .evidence import (
    COVERAGE,
    LOCATION1,
    LOCATION2,
    MOVEMENT,
    SEPARATION,
    Argument,
    BadTable,
    build_coverage_bel,
    build_location_bel,
    build_movement_bel,
    build_separation_bel,
    rows,
)
from .resolver import DEFAULT_THRESHOLD, DiscreditingFactor, PresenceBelief, PresenceTest
from .routes import DangerModel, Route

FORMAT = "threatcorr-scenario/1"
BUNDLED = ("figure2", "variant-close", "variant-lowcoverage")

_META = ("grounds", "warrant", "backing")
_ALLOWED = {
    "": {"format", "name", "description", "parameters", *[LOCATION1, LOCATION2, MOVEMENT, COVERAGE, SEPARATION], "factor", "route"},
    "parameters": {"threshold", "min_benefit_cost_ratio", "lethal_radius", "sample_step"},
    LOCATION1: {"center", "radius", "mass", *_META},
    LOCATION2: {"center", "radius", "mass", *_META},
    MOVEMENT: {"diagonal_mass", "lower", "upper", "mass", *_META},
    COVERAGE: {"same_mass", *_META},
    SEPARATION: {"lower", "mass", *_META},
    "factor": {"id", "target", "description", "present", "absent", "test"},
    "test": {"id", "cost", "outcome_present", "outcome_absent", "scripted"},
    "route": {"id", "waypoints"},
}


class ParseError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class ValidationError(ValueError):
    def __init__(self, field: str, rule: str):
        self.field, self.rule = field, rule
        super().__init__(f"{field}: {rule}")


@dataclass(frozen=True)
class Scenario:
    name: str
    arguments: tuple[Argument, ...]
    factors: tuple[DiscreditingFactor, ...] = ()
    threshold: float = DEFAULT_THRESHOLD
    min_ratio: float = 0.0
    danger: DangerModel = field(default_factory=DangerModel)
    routes: tuple[Route, ...] = ()
    description: str = ""

    def argument(self, role: str) -> Argument:
        for a in self.arguments:
            if a.role == role:
                return a
        raise KeyError(role)


def _num(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(where, f"expected a number, got {value!r}")
    return float(value)


def _nums(value: Any, where: str) -> list[float]:
    if not isinstance(value, list):
        raise ValidationError(where, "expected an array of numbers")
    return [_num(v, f"{where}[{i}]") for i, v in enumerate(value)]


def _text(value: Any, where: str) -> str:
    if not isinstance(value, str):
        raise ValidationError(where, f"expected a string, got {value!r}")
    return value


def _table(doc: dict, key: str, where: str) -> dict:
    if key not in doc:
        raise ValidationError(where, "missing table")
    value = doc[key]
    if not isinstance(value, dict):
        raise ValidationError(where, "expected a table")
    return value


def _check_keys(table: dict, kind: str, where: str):
    for k in table:
        if k not in _ALLOWED[kind]:
            raise ValidationError(f"{where}.{k}" if where else k, "unknown key")


def _require(table: dict, key: str, where: str):
    if key not in table:
        raise ValidationError(f"{where}.{key}", "missing required key")
    return table[key]


def _meta(table: dict, where: str) -> dict:
    return {k: _text(table[k], f"{where}.{k}") for k in _META if k in table}


def _point(value: Any, where: str) -> tuple[float, float]:
    xs = _nums(value, where)
    if len(xs) != 2 or not all(math.isfinite(x) for x in xs):
        raise ValidationError(where, "expected a finite [x, y] pair")
    return xs[0], xs[1]


def _build(fn, where: str, *args, **kw):
    try:
        return fn(*args, **kw)
    except (BadTable, ValueError) as exc:
        raise ValidationError(where, str(exc)) from None


def _presence(present: float, absent: float, where: str) -> PresenceBelief:
    try:
        return PresenceBelief(present, absent)
    except ValueError:
        raise ValidationError(where, f"presence {present!r} + absence {absent!r} must be non-negative and at most 1") from None


def from_document(doc: dict) -> Scenario:
    """Validate a parsed TOML document and build the scenario."""
    _check_keys(doc, "", "")
    if doc.get("format") != FORMAT:
        raise ValidationError("format", f"expected {FORMAT!r}, got {doc.get('format')!r}")
    name = _text(_require(doc, "name", "scenario"), "name")
    description = _text(doc.get("description", ""), "description")

    params = doc.get("parameters", {})
    if not isinstance(params, dict):
        raise ValidationError("parameters", "expected a table")
    _check_keys(params, "parameters", "parameters")
    threshold = _num(params.get("threshold", DEFAULT_THRESHOLD), "parameters.threshold")
    if not 0.0 <= threshold < 1.0:
        raise ValidationError("parameters.threshold", "must lie in [0, 1)")
    min_ratio = _num(params.get("min_benefit_cost_ratio", 0.0), "parameters.min_benefit_cost_ratio")
    danger = _build(
        DangerModel,
        "parameters",
        _num(params.get("lethal_radius", 10.0), "parameters.lethal_radius"),
        _num(params.get("sample_step", 1.0), "parameters.sample_step"),
    )

    arguments = []
    for coord, role in ((1, LOCATION1), (2, LOCATION2)):
        t = _table(doc, role, role)
        _check_keys(t, role, role)
        center = _point(_require(t, "center", role), f"{role}.center")
        radius = _nums(_require(t, "radius", role), f"{role}.radius")
        mass = _nums(_require(t, "mass", role), f"{role}.mass")
        table_rows = _build(rows, role, radius, mass)
        arguments.append(_build(build_location_bel, role, coord, center, table_rows, **_meta(t, role)))

    t = _table(doc, MOVEMENT, MOVEMENT)
    _check_keys(t, MOVEMENT, MOVEMENT)
    diag = _num(_require(t, "diagonal_mass", MOVEMENT), f"{MOVEMENT}.diagonal_mass")
    lower = _nums(t.get("lower", []), f"{MOVEMENT}.lower")
    upper = _nums(t.get("upper", []), f"{MOVEMENT}.upper")
    mass = _nums(t.get("mass", []), f"{MOVEMENT}.mass")
    table_rows = _build(rows, MOVEMENT, lower, mass, upper)
    arguments.append(_build(build_movement_bel, MOVEMENT, diag, table_rows, **_meta(t, MOVEMENT)))

    t = _table(doc, COVERAGE, COVERAGE)
    _check_keys(t, COVERAGE, COVERAGE)
    same = _num(_require(t, "same_mass", COVERAGE), f"{COVERAGE}.same_mass")
    arguments.append(_build(build_coverage_bel, COVERAGE, same, **_meta(t, COVERAGE)))

    t = _table(doc, SEPARATION, SEPARATION)
    _check_keys(t, SEPARATION, SEPARATION)
    lower = _nums(_require(t, "lower", SEPARATION), f"{SEPARATION}.lower")
    mass = _nums(_require(t, "mass", SEPARATION), f"{SEPARATION}.mass")
    table_rows = _build(rows, SEPARATION, lower, mass)
    arguments.append(_build(build_separation_bel, SEPARATION, table_rows, **_meta(t, SEPARATION)))

    ids = {a.id for a in arguments}
    factors = []
    seen = set()
    for i, f in enumerate(doc.get("factor", [])):
        where = f"factor[{i}]"
        if not isinstance(f, dict):
            raise ValidationError(where, "expected a table")
        _check_keys(f, "factor", where)
        fid = _text(_require(f, "id", where), f"{where}.id")
        if fid in seen:
            raise ValidationError(f"{where}.id", f"duplicate factor id {fid!r}")
        seen.add(fid)
        target = _text(_require(f, "target", where), f"{where}.target")
        if target not in ids:
            raise ValidationError(f"{where}.target", f"unknown argument {target!r}; expected one of {sorted(ids)}")
        prior = _presence(_num(f.get("present", 0.0), f"{where}.present"), _num(f.get("absent", 0.0), f"{where}.absent"), where)
        tests = []
        for j, t in enumerate(f.get("test", [])):
            tw = f"{where}.test[{j}]"
            if not isinstance(t, dict):
                raise ValidationError(tw, "expected a table")
            _check_keys(t, "test", tw)
            tid = _text(_require(t, "id", tw), f"{tw}.id")
            cost = _num(_require(t, "cost", tw), f"{tw}.cost")
            if not cost > 0:
                raise ValidationError(f"{tw}.cost", "must be positive")
            pres = _nums(_require(t, "outcome_present", tw), f"{tw}.outcome_present")
            absn = _nums(_require(t, "outcome_absent", tw), f"{tw}.outcome_absent")
            if len(pres) != len(absn) or not pres:
                raise ValidationError(tw, "outcome_present and outcome_absent must be non-empty and equally long")
            outcomes = tuple(_presence(p, a, f"{tw}.outcome[{k}]") for k, (p, a) in enumerate(zip(pres, absn)))
            scripted = _require(t, "scripted", tw)
            if isinstance(scripted, bool) or not isinstance(scripted, int) or not 0 <= scripted < len(outcomes):
                raise ValidationError(f"{tw}.scripted", f"expected an outcome index in [0, {len(outcomes)})")
            tests.append(PresenceTest(tid, cost, outcomes, outcomes[scripted]))
        if len({t.id for t in tests}) != len(tests):
            raise ValidationError(f"{where}.test", "duplicate test id")
        factors.append(
            DiscreditingFactor(fid, target, prior, tuple(tests), description=_text(f.get("description", ""), f"{where}.description"))
        )

    rebuttals = {a.id: tuple(f.id for f in factors if f.target == a.id) for a in arguments}
    arguments = [replace(a, rebuttals=rebuttals[a.id]) for a in arguments]

    routes = []
    for i, r in enumerate(doc.get("route", [])):
        where = f"route[{i}]"
        if not isinstance(r, dict):
            raise ValidationError(where, "expected a table")
        _check_keys(r, "route", where)
        rid = _text(_require(r, "id", where), f"{where}.id")
        wps = _require(r, "waypoints", where)
        if not isinstance(wps, list):
            raise ValidationError(f"{where}.waypoints", "expected an array of [x, y] pairs")
        pts = [_point(p, f"{where}.waypoints[{k}]") for k, p in enumerate(wps)]
        routes.append(_build(Route, where, rid, tuple(pts)))
    if len({r.id for r in routes}) != len(routes):
        raise ValidationError("route", "duplicate route id")

    return Scenario(name, tuple(arguments), tuple(factors), threshold, min_ratio, danger, tuple(routes), description)


def loads(text: str) -> Scenario:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ParseError(str(exc), getattr(exc, "lineno", None), getattr(exc, "colno", None)) from None
    return from_document(doc)


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("threatcorr") / "scenarios" / f"{name}.scenario"))


def resolve_path(path_or_name: str) -> Path:
    """A filesystem path, or the name of a bundled scenario."""
    p = Path(path_or_name)
    if p.exists():
        return p
    stem = p.name[: -len(".scenario")] if p.name.endswith(".scenario") else p.name
    if stem in BUNDLED:
        return bundled_path(stem)
    return p


def load_scenario(path: str | Path) -> Scenario:
    p = resolve_path(str(path))
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {p}: {exc.strerror}") from None
    return loads(text)


# ---------------------------------------------------------------------------
# serialization


def _fmt(x: Any) -> str:
    if isinstance(x, str):
        return '"' + x.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return repr(x)
    if isinstance(x, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in x) + "]"
    raise TypeError(type(x))


def _emit(lines: list[str], pairs: list[tuple[str, Any]]):
    for k, v in pairs:
        lines.append(f"{k} = {_fmt(v)}")


def dumps(s: Scenario) -> str:
    """Canonical text for a scenario; :func:`loads` inverts it exactly."""
    lines = [f"format = {_fmt(FORMAT)}", f"name = {_fmt(s.name)}"]
    if s.description:
        lines.append(f"description = {_fmt(s.description)}")
    lines += ["", "[parameters]"]
    _emit(
        lines,
        [
            ("threshold", s.threshold),
            ("min_benefit_cost_ratio", s.min_ratio),
            ("lethal_radius", s.danger.lethal_radius),
            ("sample_step", s.danger.sample_step),
        ],
    )
    for a in s.arguments:
        lines += ["", f"[{a.role}]"]
        t = a.table
        if a.role in (LOCATION1, LOCATION2):
            pairs = [("center", list(t["center"])), ("radius", t["radius"]), ("mass", t["mass"])]
        elif a.role == MOVEMENT:
            pairs = [("diagonal_mass", t["diagonal_mass"]), ("lower", t["lower"]), ("upper", t["upper"]), ("mass", t["mass"])]
        elif a.role == COVERAGE:
            pairs = [("same_mass", t["same_mass"])]
        else:
            pairs = [("lower", t["lower"]), ("mass", t["mass"])]
        pairs += [(k, getattr(a, k)) for k in _META if getattr(a, k)]
        _emit(lines, pairs)
    for f in s.factors:
        lines += ["", "[[factor]]"]
        pairs = [("id", f.id), ("target", f.target)]
        if f.description:
            pairs.append(("description", f.description))
        pairs += [("present", f.belief.present), ("absent", f.belief.absent)]
        _emit(lines, pairs)
        for t in f.tests:
            lines += ["", "[[factor.test]]"]
            _emit(
                lines,
                [
                    ("id", t.id),
                    ("cost", t.cost),
                    ("outcome_present", [o.present for o in t.outcomes]),
                    ("outcome_absent", [o.absent for o in t.outcomes]),
                    ("scripted", t.outcomes.index(t.scripted)),
                ],
            )
    for r in s.routes:
        lines += ["", "[[route]]"]
        _emit(lines, [("id", r.id), ("waypoints", [list(p) for p in r.waypoints])])
    return "\n".join(lines) + "\n"
