import math

import numpy as np
import pytest

from conftest import sample_uv
from surface_identities.catalog import flat_disk, lookup, pole_chart, tangent_field, torus
from surface_identities.fields import (
    AmbientField,
    FieldIndexError,
    ScalarField,
    SingularitySpec,
    TangentField,
    field_index,
    total_index,
    winding_number,
)
from surface_identities.geometry import surface_jet

ROT = tangent_field("E3xX")
RADIAL = tangent_field("radial")
SQUARE = tangent_field("conjugate-square")


def brute_force_index(chart, field, uv0, radius=0.05, samples=10_000):
    """Angle summation at many samples against the fixed frame {E1, E2}; planar charts only."""
    phi = np.linspace(0, 2 * math.pi, samples, endpoint=False)
    uv = np.stack([uv0[0] + radius * np.cos(phi), uv0[1] + radius * np.sin(phi)], -1)
    V = field.values(chart, uv)
    ang = np.unwrap(np.arctan2(V[:, 1], V[:, 0]))
    step = (ang[0] - ang[-1]) % (2 * math.pi)
    return (ang[-1] - ang[0] + (step if step < math.pi else step - 2 * math.pi)) / (2 * math.pi)


def test_ambient_jacobian_vs_fd(rng):
    V = AmbientField.from_strings("x*y^2", "sin(z)*x", "exp(x - y)")
    pts = rng.uniform(-1, 1, (10, 3))
    _, J = V.evaluate(pts)
    h = 1e-4
    for j in range(3):
        e = np.zeros(3)
        e[j] = h
        fd = (V.evaluate(pts + e)[0] - V.evaluate(pts - e)[0]) / (2 * h)
        np.testing.assert_allclose(J[:, :, j], fd, rtol=1e-6, atol=1e-7)


def test_scalar_hessian_symmetric(rng):
    F = ScalarField.from_string("exp(x)*sin(y*z) + x^2*y")
    _, _, H = F.evaluate(rng.uniform(-1, 1, (30, 3)))
    assert np.array_equal(H, np.swapaxes(H, 1, 2))


@pytest.mark.parametrize("name", ["cap-pi3", "torus", "monkey-saddle"])
def test_projected_field_is_tangent(name, rng):
    chart = lookup(name).chart
    V = TangentField.from_ambient(AmbientField.from_strings("1", "x", "z^2"), projected=True)
    sj = surface_jet(chart, sample_uv(chart, 100, rng))
    val = V.evaluate_on(sj)[0]
    assert np.max(np.abs(np.einsum("mi,mi->m", val, sj.N))) <= 1e-12


def test_projected_field_derivatives_vs_fd(rng):
    chart = lookup("monkey-saddle").chart
    V = tangent_field("E1-projected")
    uv = sample_uv(chart, 5, rng, margin=0.01)
    _, Vu, Vv = V.evaluate_on(surface_jet(chart, uv))
    h = 1e-5
    fd_u = (V.values(chart, uv + [h, 0]) - V.values(chart, uv - [h, 0])) / (2 * h)
    fd_v = (V.values(chart, uv + [0, h]) - V.values(chart, uv - [0, h])) / (2 * h)
    np.testing.assert_allclose(Vu, fd_u, atol=1e-8)
    np.testing.assert_allclose(Vv, fd_v, atol=1e-8)


def test_rotation_field_at_poles():
    north = SingularitySpec((0.0, 0.0), chart=pole_chart())
    south = SingularitySpec((0.0, 0.0), chart=pole_chart(south=True))
    sphere = lookup("unit-sphere").chart
    assert field_index(sphere, ROT, north) == 1
    assert field_index(sphere, ROT, south) == 1
    assert total_index(sphere, ROT, [north, south]) == 2


def test_constant_projected_field_has_index_zero():
    V = tangent_field("E1-projected")
    for uv in [(0.0, 0.0), (0.3, -0.4)]:
        assert field_index(flat_disk(), V, SingularitySpec(uv)) == 0


def test_radial_and_conjugate_square():
    d = flat_disk()
    assert field_index(d, RADIAL, SingularitySpec((0.0, 0.0))) == 1
    assert field_index(d, SQUARE, SingularitySpec((0.0, 0.0))) == -2
    assert brute_force_index(d, RADIAL, (0.0, 0.0)) == pytest.approx(1, abs=1e-9)
    assert brute_force_index(d, SQUARE, (0.0, 0.0)) == pytest.approx(-2, abs=1e-9)


@pytest.mark.parametrize("field, expected", [(RADIAL, 1), (SQUARE, -2)])
def test_index_radius_and_sampling_invariance(field, expected):
    d = flat_disk()
    s = SingularitySpec((0.0, 0.0))
    assert field_index(d, field, s, radius=0.025) == expected
    assert field_index(d, field, s, samples=1440) == expected
    assert field_index(d, field, s, radius=0.2, samples=2880) == expected


def test_index_invariant_under_positive_scaling():
    scaled = TangentField.pushforward("(2 + sin(u*v))*(u^2 - v^2)", "(2 + sin(u*v))*(-2*u*v)")
    assert field_index(flat_disk(), scaled, SingularitySpec((0.0, 0.0))) == -2


def test_index_on_curved_surface():
    # pushforward of the radial field onto a stereographic cap keeps its index
    cap = lookup("cap-pi3").chart
    assert field_index(cap, RADIAL, SingularitySpec((0.0, 0.0))) == 1
    assert field_index(cap, ROT, SingularitySpec((0.0, 0.0))) == 1


def test_vanishing_on_circle():
    V = TangentField.pushforward("u^2 + v^2 - 0.0025", "0")
    with pytest.raises(FieldIndexError, match="vanishes"):
        field_index(flat_disk(), V, SingularitySpec((0.0, 0.0)))


def test_coarse_sampling_aliases():
    # wrapped increments of a closed sample always sum to whole turns, so
    # undersampling shows up as a wrong integer rather than a fraction
    s = SingularitySpec((0.0, 0.0))
    assert field_index(flat_disk(), SQUARE, s, samples=3) == 1
    assert field_index(flat_disk(), SQUARE, s) == -2


def test_exterior_singularity_rejected():
    with pytest.raises(FieldIndexError):
        field_index(flat_disk(), RADIAL, SingularitySpec((1.0, 0.0)))


def test_winding_number():
    a = np.linspace(0, 6 * math.pi, 300, endpoint=False)
    assert winding_number(a) == pytest.approx(3)
    assert winding_number(-a) == pytest.approx(-3)


def test_pushforward_derivatives_on_torus(rng):
    T = torus()
    V = tangent_field("Xu")
    uv = sample_uv(T, 5, rng)
    _, Vu, Vv = V.evaluate_on(surface_jet(T, uv))
    sj = surface_jet(T, uv)
    np.testing.assert_array_equal(Vu, sj.Xuu)
    np.testing.assert_array_equal(Vv, sj.Xuv)
