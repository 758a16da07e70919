import json

import pytest

from surface_identities.definitions import DefinitionError, load_definition, parse_definition
from surface_identities.geometry import Disk, Rectangle

FLAT = {
    "surface": {
        "x": "u",
        "y": "v",
        "z": "0",
        "domain": {"type": "disk", "bounds": [0, 0, 1]},
        "periodic": [False, False],
        "closed": False,
        "chi": 1,
    }
}

SPHERE = {
    "surface": {
        "x": "sin(u)*cos(v)",
        "y": "sin(u)*sin(v)",
        "z": "cos(u)",
        "domain": {"type": "rectangle", "bounds": [0, 3.141592653589793, 0, 6.283185307179586]},
        "periodic": [False, True],
        "closed": True,
        "chi": 2,
    },
    "fields": [{"name": "rot", "vx": "-y", "vy": "x", "vz": "0", "tangent": True}],
    "scalars": [{"name": "q", "f": "x*y"}],
    "singularities": [
        {"field": "rot", "u": 0, "v": 0, "index": 1, "chart": "pole-north"},
        {"field": "rot", "u": 0, "v": 0, "index": 1, "chart": "pole-south"},
    ],
}


def write(tmp_path, doc, name="surf.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return p


def test_minimal_flat_disk(tmp_path):
    d = load_definition(write(tmp_path, FLAT))
    assert isinstance(d.chart.domain, Disk) and d.chart.domain.radius == 1
    assert d.chart.euler_characteristic == 1 and not d.chart.closed


def test_sphere_file(tmp_path):
    d = load_definition(write(tmp_path, SPHERE))
    assert d.chart.closed and isinstance(d.chart.domain, Rectangle)
    assert "rot" in d.fields and "rot" in d.tangent_fields
    assert len(d.singularities["rot"]) == 2
    assert d.scalars["q"].name == "q"


def test_missing_z(tmp_path):
    doc = json.loads(json.dumps(FLAT))
    del doc["surface"]["z"]
    with pytest.raises(DefinitionError) as info:
        load_definition(write(tmp_path, doc))
    assert "z" in str(info.value)


def test_expression_error_has_json_path():
    doc = json.loads(json.dumps(SPHERE))
    doc["fields"][0]["vy"] = "x +"
    with pytest.raises(DefinitionError) as info:
        parse_definition(doc)
    assert info.value.path == "$.fields[0].vy"


def test_chart_expression_uses_chart_variables():
    doc = json.loads(json.dumps(FLAT))
    doc["surface"]["z"] = "x"
    with pytest.raises(DefinitionError) as info:
        parse_definition(doc)
    assert info.value.path == "$.surface.z"


@pytest.mark.parametrize(
    "mutate",
    [
        lambda d: d["surface"]["domain"].update(bounds=[0, 0]),
        lambda d: d["surface"]["domain"].update(bounds=[0, 0, -1]),
        lambda d: d["surface"]["domain"].update(type="annulus"),
        lambda d: d["surface"].update(chi=1.5),
        lambda d: d.update(extra=1),
        lambda d: d.update(singularities=[{"field": "nope", "u": 0, "v": 0}]),
    ],
)
def test_schema_violations(mutate):
    doc = json.loads(json.dumps(FLAT))
    mutate(doc)
    with pytest.raises(DefinitionError):
        parse_definition(doc)


def test_singularity_must_be_interior():
    doc = json.loads(json.dumps(FLAT))
    doc["fields"] = [{"name": "r", "components": ["u", "v"]}]
    doc["singularities"] = [{"field": "r", "u": 1.0, "v": 0.0}]
    with pytest.raises(DefinitionError, match="strictly inside"):
        parse_definition(doc)


def test_inconsistent_chi_is_accepted():
    doc = {
        "surface": {
            "x": "sin(u)*cos(v)",
            "y": "sin(u)*sin(v)",
            "z": "cos(u)",
            "domain": {"type": "rectangle", "bounds": [0.7853981633974483, 1.5707963267948966, 0, 6.283185307179586]},
            "periodic": [False, True],
            "closed": False,
            "chi": 1,
        }
    }
    assert parse_definition(doc).chart.euler_characteristic == 1


def test_bad_json_and_missing_file(tmp_path):
    with pytest.raises(DefinitionError, match="invalid JSON"):
        load_definition(write(tmp_path, "{not json"))
    with pytest.raises(FileNotFoundError):
        load_definition(tmp_path / "absent.json")
