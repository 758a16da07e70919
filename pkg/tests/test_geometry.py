import math

import numpy as np
import pytest

from conftest import sample_uv
from surface_identities.catalog import CATALOG, flat_disk, lookup, stereographic_cap, torus
from surface_identities.fields import AmbientField
from surface_identities.geometry import (
    NORMAL,
    BoundaryError,
    Chart,
    DegenerateChartError,
    Rectangle,
    boundary_point,
    corner_angles,
    directional_derivative,
    frame_at,
    shape_operator,
    surface_jet,
)
from surface_identities.quadrature import boundary_integral

SPHERE = lookup("unit-sphere").chart


def chart_position(chart, uv):
    """Plain position evaluation, no derivatives."""
    return frame_at(chart, np.atleast_2d(uv)).X


def fd_curvature(chart, uv, h=1e-4):
    """K and H from finite-difference first and second fundamental forms."""
    uv = np.asarray(uv, dtype=float)
    X = lambda du, dv: chart_position(chart, uv + [du, dv])[0]
    Xu = (X(h, 0) - X(-h, 0)) / (2 * h)
    Xv = (X(0, h) - X(0, -h)) / (2 * h)
    Xuu = (X(h, 0) - 2 * X(0, 0) + X(-h, 0)) / h**2
    Xvv = (X(0, h) - 2 * X(0, 0) + X(0, -h)) / h**2
    Xuv = (X(h, h) - X(h, -h) - X(-h, h) + X(-h, -h)) / (4 * h * h)
    n = np.cross(Xu, Xv)
    n /= np.linalg.norm(n)
    E, F, G = Xu @ Xu, Xu @ Xv, Xv @ Xv
    L, M, Nn = Xuu @ n, Xuv @ n, Xvv @ n
    K = (L * Nn - M * M) / (E * G - F * F)
    # with N_p = -kappa P the second-form eigenvalues are the curvatures
    H = (E * Nn - 2 * F * M + G * L) / (2 * (E * G - F * F))
    return K, H


def test_unit_sphere_equator():
    fp = frame_at(SPHERE, (math.pi / 2, 0.0))
    np.testing.assert_allclose(fp.X, [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(fp.N, [1, 0, 0], atol=1e-15)
    assert fp.kappa1 == pytest.approx(-1, abs=1e-12)
    assert fp.kappa2 == pytest.approx(-1, abs=1e-12)
    assert fp.K == pytest.approx(1, abs=1e-12)
    assert fp.H == pytest.approx(-1, abs=1e-12)


def test_plane():
    fp = frame_at(flat_disk(), np.array([[0.1, 0.2], [-0.5, 0.3]]))
    np.testing.assert_array_equal(fp.N, [[0, 0, 1], [0, 0, 1]])
    assert np.all(fp.kappa1 == 0) and np.all(fp.kappa2 == 0)
    assert np.all(fp.K == 0) and np.all(fp.H == 0)


def test_torus_gaussian_curvature(rng):
    T = torus()
    uv = sample_uv(T, 20, rng)
    fp = frame_at(T, uv)
    np.testing.assert_allclose(fp.K, np.cos(uv[:, 0]) / (2 + np.cos(uv[:, 0])), atol=1e-12)
    for k in range(5):
        K_fd, H_fd = fd_curvature(T, uv[k])
        assert fp.K[k] == pytest.approx(K_fd, abs=1e-6)
        assert fp.H[k] == pytest.approx(H_fd, abs=1e-6)


def test_monkey_saddle_origin():
    ch = lookup("monkey-saddle").chart
    fp = frame_at(ch, (0.0, 0.0))
    assert fp.K == 0 and fp.umbilic
    # graph formula K = (f_uu f_vv - f_uv^2) / (1 + f_u^2 + f_v^2)^2 for f = u^3 - 3 u v^2
    for u, v in [(0.1, 0.0), (0.05, -0.07), (0.0, 0.2)]:
        fu, fv = 3 * u * u - 3 * v * v, -6 * u * v
        K = (6 * u * (-6 * u) - 36 * v * v) / (1 + fu * fu + fv * fv) ** 2
        got = frame_at(ch, (u, v)).K
        assert got < 0
        assert got == pytest.approx(K, rel=1e-12)
        assert got == pytest.approx(fd_curvature(ch, (u, v))[0], rel=1e-5)


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_frame_invariants(name, rng):
    chart = CATALOG[name].chart
    uv = sample_uv(chart, 200, rng)
    fp = frame_at(chart, uv)
    for vec in (fp.N, fp.P, fp.Q):
        np.testing.assert_allclose(np.linalg.norm(vec, axis=-1), 1.0, atol=1e-12)
    dot = lambda a, b: np.einsum("mi,mi->m", a, b)
    for a, b in ((fp.P, fp.Q), (fp.P, fp.N), (fp.Q, fp.N)):
        assert np.max(np.abs(dot(a, b))) <= 1e-10
    np.testing.assert_allclose(np.cross(fp.P, fp.Q), fp.N, atol=1e-10)
    assert np.all(fp.kappa1 <= fp.kappa2)
    assert np.array_equal(fp.H, 0.5 * (fp.kappa1 + fp.kappa2))
    assert np.array_equal(fp.K, fp.kappa1 * fp.kappa2)
    # Rodrigues relations against the jet-computed dN
    scale = 1 + np.abs(fp.kappa1) + np.abs(fp.kappa2)
    Np = fp.jet.dN(fp.P)
    Nq = fp.jet.dN(fp.Q)
    assert np.max(np.linalg.norm(Np + fp.kappa1[:, None] * fp.P, axis=-1) / scale) <= 1e-8
    assert np.max(np.linalg.norm(Nq + fp.kappa2[:, None] * fp.Q, axis=-1) / scale) <= 1e-8


@pytest.mark.parametrize("name", sorted(CATALOG))
def test_shape_operator_symmetric(name, rng):
    chart = CATALOG[name].chart
    S, _, _ = shape_operator(surface_jet(chart, sample_uv(chart, 200, rng)))
    assert np.max(np.abs(S[:, 0, 1] - S[:, 1, 0])) <= 1e-8


@pytest.mark.parametrize("name", ["unit-sphere", "torus", "cap-pi3", "monkey-saddle", "band"])
def test_swapping_parameters_flips_normal(name, rng):
    chart = CATALOG[name].chart
    flipped = chart.swapped()
    uv = sample_uv(chart, 50, rng)
    a = frame_at(chart, uv)
    b = frame_at(flipped, uv[:, ::-1])
    np.testing.assert_allclose(b.X, a.X, atol=1e-14)
    np.testing.assert_allclose(b.N, -a.N, atol=1e-12)
    np.testing.assert_allclose(b.kappa1, -a.kappa2, atol=1e-8)
    np.testing.assert_allclose(b.kappa2, -a.kappa1, atol=1e-8)
    np.testing.assert_allclose(b.H, -a.H, atol=1e-8)
    np.testing.assert_allclose(b.K, a.K, atol=1e-8)


def test_degenerate_chart():
    cone = Chart.from_strings("u*cos(v)", "u*sin(v)", "0*u", Rectangle(0, 1, 0, 1))
    with pytest.raises(DegenerateChartError):
        frame_at(cone, (0.0, 0.5))


# boundary


def test_flat_disk_boundary():
    bp = boundary_point(flat_disk(), np.linspace(0, 1, 37, endpoint=False))
    np.testing.assert_allclose(bp.kappa_g, 1.0, atol=1e-13)
    total = boundary_integral(flat_disk(), lambda b: b.kappa_g)
    assert total.value == pytest.approx(2 * math.pi, abs=1e-13)


@pytest.mark.parametrize("theta0", [math.pi / 6, math.pi / 3, 2 * math.pi / 5])
def test_cap_geodesic_curvature(theta0):
    cap = stereographic_cap(theta0)
    bp = boundary_point(cap, np.linspace(0, 1, 16, endpoint=False))
    np.testing.assert_allclose(bp.kappa_g, 1 / math.tan(theta0), rtol=1e-12)
    assert boundary_integral(cap, lambda b: b.kappa_g).value == pytest.approx(
        2 * math.pi * math.cos(theta0), abs=1e-12
    )


def test_straight_boundary_is_geodesic():
    square = Chart.from_strings("u", "v", "0", Rectangle(0, 1, 0, 2))
    bp = boundary_point(square, np.array([0.3, 1.5, 2.2, 3.9]))
    np.testing.assert_allclose(bp.X_ss, 0.0, atol=1e-14)
    np.testing.assert_allclose(bp.kappa_g, 0.0, atol=1e-14)
    np.testing.assert_allclose(corner_angles(square), [math.pi / 2] * 4, atol=1e-14)
    # counterclockwise: bottom edge runs in +x, right edge in +y
    np.testing.assert_allclose(bp.X_s[0], [1, 0, 0], atol=1e-15)
    np.testing.assert_allclose(bp.X_s[1], [0, 1, 0], atol=1e-15)


@pytest.mark.parametrize("name", ["cap-pi3", "band", "monkey-saddle", "torus-quarter", "flat-disk"])
def test_boundary_point_invariants(name, rng):
    chart = CATALOG[name].chart
    n = len(chart.boundary_segments())
    bp = boundary_point(chart, rng.uniform(0, n, 100))
    dot = lambda a, b: np.einsum("mi,mi->m", a, b)
    np.testing.assert_allclose(np.linalg.norm(bp.X_s, axis=-1), 1.0, atol=1e-10)
    assert np.max(np.abs(dot(bp.X_s, bp.X_ss))) <= 1e-8
    assert np.max(np.abs(dot(bp.N_s, bp.N))) <= 1e-8
    assert np.max(np.abs(dot(bp.X_s, bp.N))) <= 1e-12
    np.testing.assert_allclose(bp.kappa_g, dot(np.cross(bp.X_s, bp.X_ss), bp.N), atol=0)


def test_band_has_two_boundary_circles():
    band = lookup("band").chart
    segs = band.boundary_segments()
    assert len(segs) == 2
    # the band's two latitude circles are traversed in opposite senses
    lo = boundary_point(band, 0.25)
    hi = boundary_point(band, 1.25)
    along = lambda bp: bp.X_s @ np.array([-math.sin(bp.uv[1]), math.cos(bp.uv[1]), 0.0])
    assert along(lo) == pytest.approx(1.0) and along(hi) == pytest.approx(-1.0)


def test_closed_chart_has_no_boundary():
    with pytest.raises(BoundaryError):
        boundary_point(SPHERE, 0.0)


# directional derivatives


def test_identity_field_derivative_is_direction(rng):
    T = torus()
    X = AmbientField.from_strings("x", "y", "z")
    uv = sample_uv(T, 10, rng)
    fp = frame_at(T, uv)
    np.testing.assert_allclose(directional_derivative(T, uv, X, fp.P), fp.P, atol=1e-15)


def test_normal_derivative_on_sphere():
    uv = np.array([0.7, 1.1])
    fp = frame_at(SPHERE, uv)
    np.testing.assert_allclose(directional_derivative(SPHERE, uv, NORMAL, fp.P), fp.P, atol=1e-12)
    np.testing.assert_allclose(directional_derivative(SPHERE, uv, NORMAL, fp.Q), fp.Q, atol=1e-12)


def test_directional_derivative_vs_finite_difference(rng):
    T = torus()
    V = AmbientField.from_strings("y*z", "0", "0")
    h = 1e-4
    for uv in sample_uv(T, 10, rng):
        fp = frame_at(T, uv)
        # step along the surface in parameter space so the chord follows P
        duv = surface_jet(T, np.atleast_2d(uv)).param_direction(np.atleast_2d(fp.P))[0]
        plus = V.evaluate(frame_at(T, uv + h * duv).X)[0][0]
        minus = V.evaluate(frame_at(T, uv - h * duv).X)[0][0]
        fd = (plus - minus) / (2 * h)
        got = directional_derivative(T, uv, V, fp.P)
        np.testing.assert_allclose(got, fd, atol=1e-6 * (1 + np.linalg.norm(got)))
