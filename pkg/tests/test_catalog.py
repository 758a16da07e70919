import math

import numpy as np
import pytest

from surface_identities.catalog import (
    AMBIENT_PRESETS,
    CATALOG,
    SCALAR_PRESETS,
    TANGENT_PRESETS,
    ambient_field,
    catalog_list,
    host_chart,
    lookup,
    scalar_field,
    tangent_field,
)
from surface_identities.geometry import frame_at
from surface_identities.quadrature import boundary_integral, surface_integral

REQUIRED = [
    "unit-sphere",
    "sphere-r2",
    "torus",
    "cap-pi6",
    "cap-pi3",
    "cap-2pi5",
    "flat-disk",
    "band",
    "monkey-saddle",
    "torus-quarter",
]


def test_required_entries_present():
    names = [e.name for e in catalog_list()]
    for n in REQUIRED:
        assert n in names


def test_presets_present():
    assert {"E1", "E2", "E3", "X", "E3xX"} <= AMBIENT_PRESETS.keys()
    assert {"radial", "conjugate-square"} <= TANGENT_PRESETS.keys()
    assert {"half-norm2", "x1x2", "x3sq", "exp-x1"} <= SCALAR_PRESETS.keys()
    for n in AMBIENT_PRESETS:
        ambient_field(n)
    for n in TANGENT_PRESETS:
        tangent_field(n)
    for n in SCALAR_PRESETS:
        scalar_field(n)


def test_unit_sphere_entry():
    e = lookup("unit-sphere")
    assert e.chart.closed and e.chart.euler_characteristic == 2
    assert e.expected["total_K"].value == pytest.approx(4 * math.pi)


def test_cap_entry():
    e = lookup("cap-pi3")
    assert e.chart.euler_characteristic == 1
    assert e.expected["total_kappa_g"].value == pytest.approx(math.pi)
    assert e.expected["total_K"].value == pytest.approx(math.pi)


def test_monkey_saddle_entry():
    e = lookup("monkey-saddle")
    assert e.expected["K_origin"].value == 0
    assert frame_at(e.chart, (0.0, 0.0)).K == 0
    ring = 0.1 * np.stack([np.cos(np.linspace(0, 6, 12)), np.sin(np.linspace(0, 6, 12))], -1)
    assert np.all(frame_at(e.chart, ring).K < 0)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_expectations_have_provenance(name):
    for key, exp in CATALOG[name].expected.items():
        assert exp.provenance.split(":")[0] in ("TRIVIAL", "DERIVED"), key


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_expectations_hold(name):
    e = CATALOG[name]
    if "chi" in e.expected:
        assert e.chart.euler_characteristic == e.expected["chi"].value
    if "area" in e.expected:
        area = surface_integral(e.chart, lambda fp: np.ones(len(fp.K))).value
        assert area == pytest.approx(e.expected["area"].value, abs=1e-10)
    if "total_K" in e.expected:
        assert surface_integral(e.chart, lambda fp: fp.K).value == pytest.approx(e.expected["total_K"].value, abs=1e-10)


@pytest.mark.parametrize("name", [n for n in sorted(CATALOG) if CATALOG[n].chart.closed])
def test_closed_entries_have_zero_boundary(name):
    chart = CATALOG[name].chart
    assert boundary_integral(chart, lambda bp: bp.kappa_g).value == 0
    assert np.array_equal(boundary_integral(chart, lambda bp: bp.X_s, dim=3).value, np.zeros(3))


def test_unknown_lookup():
    with pytest.raises(KeyError):
        lookup("klein-bottle")
    with pytest.raises(KeyError):
        host_chart("nowhere")


def test_pole_charts_hosted():
    north = host_chart("pole-north")
    assert frame_at(north, (0.0, 0.0)).X == pytest.approx([0, 0, 1])
    assert host_chart("pole-south").domain.radius == pytest.approx(math.tan(math.pi / 8))
