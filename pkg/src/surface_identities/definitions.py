"""Loading surface and field definitions from JSON files.

Example::

    {
      "surface": {
        "x": "u", "y": "v", "z": "0",
        "domain": {"type": "disk", "bounds": [0, 0, 1]},
        "periodic": [false, false],
        "closed": false,
        "chi": 1
      },
      "fields": [{"name": "rot", "vx": "-y", "vy": "x", "vz": "0", "tangent": true}],
      "scalars": [{"name": "q", "f": "x*y"}],
      "singularities": [{"field": "rot", "u": 0, "v": 0}]
    }

Rectangle bounds are ``[u_min, u_max, v_min, v_max]``; disk bounds are
``[u_center, v_center, radius]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import jsonschema

from .catalog import host_chart
from .expr import ExprError, parse
from .fields import AMBIENT_VARS, CHART_VARS, AmbientField, ScalarField, SingularitySpec, TangentField
from .geometry import Chart, Disk, Rectangle


class DefinitionError(ValueError):
    def __init__(self, message: str, path: str = "$"):
        self.path = path
        super().__init__(f"{path}: {message}")


_EXPR = {"type": "string", "minLength": 1}

SCHEMA = {
    "type": "object",
    "required": ["surface"],
    "additionalProperties": False,
    "properties": {
        "surface": {
            "type": "object",
            "required": ["x", "y", "z", "domain"],
            "additionalProperties": False,
            "properties": {
                "x": _EXPR,
                "y": _EXPR,
                "z": _EXPR,
                "domain": {
                    "type": "object",
                    "required": ["type", "bounds"],
                    "additionalProperties": False,
                    "properties": {
                        "type": {"enum": ["rectangle", "disk"]},
                        "bounds": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 4},
                    },
                },
                "periodic": {"type": "array", "items": {"type": "boolean"}, "minItems": 2, "maxItems": 2},
                "closed": {"type": "boolean"},
                "chi": {"type": "integer"},
                "name": {"type": "string"},
            },
        },
        "fields": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string", "minLength": 1},
                    "vx": _EXPR,
                    "vy": _EXPR,
                    "vz": _EXPR,
                    "tangent": {"type": "boolean"},
                    "projected": {"type": "boolean"},
                    "components": {"type": "array", "items": _EXPR, "minItems": 2, "maxItems": 2},
                },
            },
        },
        "scalars": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "f"],
                "additionalProperties": False,
                "properties": {"name": {"type": "string", "minLength": 1}, "f": _EXPR},
            },
        },
        "singularities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["field", "u", "v"],
                "additionalProperties": False,
                "properties": {
                    "field": {"type": "string"},
                    "u": {"type": "number"},
                    "v": {"type": "number"},
                    "index": {"type": "integer"},
                    "chart": {"type": "string"},
                },
            },
        },
        "directions": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3},
        },
    },
}


@dataclass
class Definition:
    chart: Chart
    fields: dict[str, AmbientField] = field(default_factory=dict)
    tangent_fields: dict[str, TangentField] = field(default_factory=dict)
    scalars: dict[str, ScalarField] = field(default_factory=dict)
    singularities: dict[str, list[SingularitySpec]] = field(default_factory=dict)
    directions: list[tuple[float, float, float]] = field(default_factory=list)


def _expr(src: str, variables, path: str):
    try:
        return parse(src, variables)
    except ExprError as exc:
        raise DefinitionError(str(exc), path) from None


def _domain(d: dict, path: str):
    b = d["bounds"]
    if d["type"] == "rectangle":
        if len(b) != 4:
            raise DefinitionError("rectangle bounds need [u_min, u_max, v_min, v_max]", f"{path}.bounds")
        if not (b[0] < b[1] and b[2] < b[3]):
            raise DefinitionError("rectangle bounds must be increasing", f"{path}.bounds")
        return Rectangle(*map(float, b))
    if len(b) != 3:
        raise DefinitionError("disk bounds need [u_center, v_center, radius]", f"{path}.bounds")
    if not b[2] > 0:
        raise DefinitionError("disk radius must be positive", f"{path}.bounds")
    return Disk((float(b[0]), float(b[1])), float(b[2]))


def parse_definition(doc: dict, name: str = "") -> Definition:
    try:
        jsonschema.validate(doc, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise DefinitionError(exc.message, exc.json_path) from None

    s = doc["surface"]
    chart = Chart(
        _expr(s["x"], CHART_VARS, "$.surface.x"),
        _expr(s["y"], CHART_VARS, "$.surface.y"),
        _expr(s["z"], CHART_VARS, "$.surface.z"),
        _domain(s["domain"], "$.surface.domain"),
        periodic=tuple(s.get("periodic", (False, False))),
        closed=s.get("closed", False),
        euler_characteristic=s.get("chi"),
        name=s.get("name", name),
    )
    out = Definition(chart)

    for i, f in enumerate(doc.get("fields", [])):
        p = f"$.fields[{i}]"
        fname = f["name"]
        if fname in out.fields or fname in out.tangent_fields:
            raise DefinitionError(f"duplicate field name {fname!r}", f"{p}.name")
        if "components" in f:
            a, b = (_expr(c, CHART_VARS, f"{p}.components[{k}]") for k, c in enumerate(f["components"]))
            out.tangent_fields[fname] = TangentField("pushforward", chart_components=(a, b), name=fname)
            continue
        missing = [k for k in ("vx", "vy", "vz") if k not in f]
        if missing:
            raise DefinitionError(f"missing {', '.join(missing)}", p)
        amb = AmbientField(tuple(_expr(f[k], AMBIENT_VARS, f"{p}.{k}") for k in ("vx", "vy", "vz")), fname)
        out.fields[fname] = amb
        if f.get("tangent", False):
            out.tangent_fields[fname] = TangentField.from_ambient(amb, projected=f.get("projected", False), name=fname)

    for i, sc in enumerate(doc.get("scalars", [])):
        out.scalars[sc["name"]] = ScalarField(_expr(sc["f"], AMBIENT_VARS, f"$.scalars[{i}].f"), sc["name"])

    for i, sg in enumerate(doc.get("singularities", [])):
        p = f"$.singularities[{i}]"
        if sg["field"] not in out.tangent_fields:
            raise DefinitionError(f"unknown tangent field {sg['field']!r}", f"{p}.field")
        host = None
        if "chart" in sg:
            try:
                host = host_chart(sg["chart"])
            except KeyError:
                raise DefinitionError(f"unknown chart {sg['chart']!r}", f"{p}.chart") from None
        spec = SingularitySpec((float(sg["u"]), float(sg["v"])), sg.get("index"), host)
        if not (host or chart).domain.contains(spec.uv, strict=True):
            raise DefinitionError("singularity must lie strictly inside the domain", p)
        out.singularities.setdefault(sg["field"], []).append(spec)

    out.directions = [tuple(map(float, d)) for d in doc.get("directions", [])]
    return out


def load_definition(path: str | Path) -> Definition:
    path = Path(path)
    try:
        text = path.read_text()
    except FileNotFoundError:
        raise FileNotFoundError(f"definition file not found: {path}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DefinitionError(f"invalid JSON: {exc.msg} (line {exc.lineno})") from None
    return parse_definition(doc, name=path.stem)
