"""Built-in charts, fields and scalar functions with closed-form expectations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .fields import AmbientField, ScalarField, SingularitySpec, TangentField
from .geometry import Chart, Disk, Rectangle

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Expectation:
    value: float
    provenance: str


@dataclass(frozen=True)
class TangentPreset:
    field: str
    singularities: tuple[SingularitySpec, ...] = ()


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    chart: Chart
    expected: dict[str, Expectation] = field(default_factory=dict)
    fields: tuple[str, ...] = ("E3", "X")
    scalars: tuple[str, ...] = ("x1x2", "half-norm2")
    tangent: tuple[TangentPreset, ...] = ()
    directions: tuple[tuple[float, float, float], ...] = ()
    description: str = ""


# --------------------------------------------------------------------------
# charts


def latitude_sphere(radius: float = 1.0, u_range=(0.0, math.pi), closed=True, chi=2, name="") -> Chart:
    r = repr(float(radius))
    return Chart.from_strings(
        f"{r}*sin(u)*cos(v)", f"{r}*sin(u)*sin(v)", f"{r}*cos(u)",
        Rectangle(u_range[0], u_range[1], 0.0, TWO_PI),
        periodic=(False, True), closed=closed, euler_characteristic=chi, name=name,
    )


def stereographic_cap(theta0: float, radius: float = 1.0, south: bool = False, name: str = "") -> Chart:
    """Spherical cap of colatitude theta0 about a pole, regular at the pole.

    Inverse stereographic projection from the opposite pole, restricted to a
    parameter disk of radius tan(theta0 / 2). The normal points outward.
    """
    r = repr(float(radius))
    d = "(1 + u^2 + v^2)"
    x = f"{r}*2*u/{d}"
    y = f"{r}*2*v/{d}"
    z = f"{r}*(1 - u^2 - v^2)/{d}"
    if south:
        y = f"-{r}*2*v/{d}"
        z = f"-{r}*(1 - u^2 - v^2)/{d}"
    return Chart.from_strings(
        x, y, z, Disk((0.0, 0.0), math.tan(theta0 / 2.0)), euler_characteristic=1, name=name
    )


def torus(R: float = 2.0, r: float = 1.0, rect=(0.0, TWO_PI, 0.0, TWO_PI), closed=True, chi=0, name="") -> Chart:
    Rs, rs = repr(float(R)), repr(float(r))
    return Chart.from_strings(
        f"({Rs} + {rs}*cos(u))*cos(v)", f"({Rs} + {rs}*cos(u))*sin(v)", f"{rs}*sin(u)",
        Rectangle(*rect), periodic=(closed, closed), closed=closed, euler_characteristic=chi, name=name,
    )


def flat_disk(radius: float = 1.0, name: str = "flat-disk") -> Chart:
    return Chart.from_strings("u", "v", "0", Disk((0.0, 0.0), radius), euler_characteristic=1, name=name)


# local charts at the sphere poles, used to host pole singularities
def pole_chart(radius: float = 1.0, south: bool = False) -> Chart:
    return stereographic_cap(math.pi / 4, radius, south=south, name="pole-south" if south else "pole-north")


# --------------------------------------------------------------------------
# fields and scalars

AMBIENT_PRESETS = {
    "E1": ("1", "0", "0"),
    "E2": ("0", "1", "0"),
    "E3": ("0", "0", "1"),
    "X": ("x", "y", "z"),
    "E3xX": ("-y", "x", "0"),
}

# name -> (mode, components); pushforward components are in u, v
TANGENT_PRESETS = {
    "E3xX": ("raw", AMBIENT_PRESETS["E3xX"]),
    "E1-projected": ("projected", AMBIENT_PRESETS["E1"]),
    "radial": ("pushforward", ("u", "v")),
    "conjugate-square": ("pushforward", ("u^2 - v^2", "-2*u*v")),
    "Xu": ("pushforward", ("1", "0")),
    "Xv": ("pushforward", ("0", "1")),
}

SCALAR_PRESETS = {
    "half-norm2": "(x^2 + y^2 + z^2)/2",
    "x1x2": "x*y",
    "x3sq": "z^2",
    "exp-x1": "exp(x)",
}


def ambient_field(name: str) -> AmbientField:
    try:
        return AmbientField.from_strings(*AMBIENT_PRESETS[name], name=name)
    except KeyError:
        raise KeyError(f"unknown field preset {name!r}") from None


def tangent_field(name: str) -> TangentField:
    try:
        mode, comps = TANGENT_PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown tangent field preset {name!r}") from None
    if mode == "pushforward":
        return TangentField.pushforward(*comps, name=name)
    return TangentField.from_ambient(AmbientField.from_strings(*comps, name=name), projected=mode == "projected")


def scalar_field(name: str) -> ScalarField:
    try:
        return ScalarField.from_string(SCALAR_PRESETS[name], name=name)
    except KeyError:
        raise KeyError(f"unknown scalar preset {name!r}") from None


# --------------------------------------------------------------------------
# entries


def _cap_entry(name: str, theta0: float, label: str, tilt: float = 0.3) -> CatalogEntry:
    c = math.cos(theta0)
    return CatalogEntry(
        name,
        stereographic_cap(theta0, name=name),
        expected={
            "chi": Expectation(1, "TRIVIAL: a cap is a disk"),
            "area": Expectation(TWO_PI * (1 - c), "DERIVED: 2 pi (1 - cos theta0)"),
            "total_K": Expectation(TWO_PI * (1 - c), "DERIVED: 2 pi (1 - cos theta0), K = 1"),
            "total_kappa_g": Expectation(TWO_PI * c, "DERIVED: latitude circle, 2 pi sin theta0 * cot theta0"),
        },
        tangent=(TangentPreset("E3xX", (SingularitySpec((0.0, 0.0), 1),)),),
        directions=((0.0, 0.0, 1.0), (math.sin(tilt), 0.0, math.cos(tilt))),
        description=f"unit sphere cap of colatitude {label}, stereographic chart",
    )


def _build() -> dict[str, CatalogEntry]:
    pole_sings = lambda R: (
        SingularitySpec((0.0, 0.0), 1, pole_chart(R)),
        SingularitySpec((0.0, 0.0), 1, pole_chart(R, south=True)),
    )
    entries = [
        CatalogEntry(
            "unit-sphere",
            latitude_sphere(name="unit-sphere"),
            expected={
                "chi": Expectation(2, "TRIVIAL"),
                "area": Expectation(4 * math.pi, "TRIVIAL: known area"),
                "total_K": Expectation(4 * math.pi, "TRIVIAL: Gauss-Bonnet with chi = 2"),
                "total_kappa_g": Expectation(0.0, "TRIVIAL: closed"),
            },
            tangent=(TangentPreset("E3xX", pole_sings(1.0)),),
            description="unit sphere, latitude-longitude chart, outward normal",
        ),
        CatalogEntry(
            "sphere-r2",
            latitude_sphere(2.0, name="sphere-r2"),
            expected={
                "chi": Expectation(2, "TRIVIAL"),
                "area": Expectation(16 * math.pi, "TRIVIAL: 4 pi R^2"),
                "total_K": Expectation(4 * math.pi, "TRIVIAL: Gauss-Bonnet with chi = 2"),
                "total_kappa_g": Expectation(0.0, "TRIVIAL: closed"),
            },
            tangent=(TangentPreset("E3xX", pole_sings(2.0)),),
            description="sphere of radius 2",
        ),
        CatalogEntry(
            "torus",
            torus(name="torus"),
            expected={
                "chi": Expectation(0, "TRIVIAL"),
                "area": Expectation(8 * math.pi**2, "TRIVIAL: 4 pi^2 R r"),
                "total_K": Expectation(0.0, "TRIVIAL: Gauss-Bonnet with chi = 0"),
                "total_kappa_g": Expectation(0.0, "TRIVIAL: closed"),
            },
            tangent=(TangentPreset("E3xX"),),
            description="torus R = 2, r = 1",
        ),
        # a 0.3 rad tilt comes within 13 degrees of the pi/6 boundary, where the
        # fixed finite-difference step in the Liouville check is too coarse
        _cap_entry("cap-pi6", math.pi / 6, "pi/6", tilt=0.1),
        _cap_entry("cap-pi3", math.pi / 3, "pi/3"),
        _cap_entry("cap-2pi5", 2 * math.pi / 5, "2 pi/5"),
        CatalogEntry(
            "flat-disk",
            flat_disk(),
            expected={
                "chi": Expectation(1, "TRIVIAL"),
                "area": Expectation(math.pi, "TRIVIAL"),
                "total_K": Expectation(0.0, "TRIVIAL: flat"),
                "total_kappa_g": Expectation(TWO_PI, "TRIVIAL: unit circle"),
            },
            tangent=(TangentPreset("radial", (SingularitySpec((0.0, 0.0), 1),)), TangentPreset("E1-projected")),
            directions=((1.0, 0.0, 0.0),),
            description="unit disk in the xy-plane",
        ),
        CatalogEntry(
            "band",
            latitude_sphere(u_range=(math.pi / 4, math.pi / 2), closed=False, chi=0, name="band"),
            expected={
                "chi": Expectation(0, "TRIVIAL: annulus"),
                "area": Expectation(TWO_PI * math.cos(math.pi / 4), "DERIVED: 2 pi (cos pi/4 - cos pi/2)"),
                "total_K": Expectation(math.pi * math.sqrt(2), "DERIVED: 2 pi (cos pi/4 - cos pi/2)"),
                "total_kappa_g": Expectation(-math.pi * math.sqrt(2), "DERIVED: Gauss-Bonnet with chi = 0"),
            },
            tangent=(TangentPreset("E3xX"),),
            directions=((0.0, 0.0, 1.0),),
            description="spherical band between colatitudes pi/4 and pi/2",
        ),
        CatalogEntry(
            "monkey-saddle",
            Chart.from_strings("u", "v", "u^3 - 3*u*v^2", Disk((0.0, 0.0), 1.0), euler_characteristic=1, name="monkey-saddle"),
            expected={
                "chi": Expectation(1, "TRIVIAL"),
                "K_origin": Expectation(0.0, "DERIVED: graph curvature formula, all second derivatives vanish at 0"),
            },
            tangent=(TangentPreset("E1-projected"),),
            # no default Liouville direction: the boundary is long and wiggly, so
            # the fixed finite-difference step leaves residuals near 1e-3
            description="graph of u^3 - 3 u v^2 over the unit disk",
        ),
        CatalogEntry(
            "torus-quarter",
            torus(rect=(0.0, math.pi / 2, 0.0, math.pi / 2), closed=False, chi=1, name="torus-quarter"),
            expected={"chi": Expectation(1, "TRIVIAL: rectangle")},
            tangent=(TangentPreset("Xu"),),
            directions=((1 / math.sqrt(2), -1 / math.sqrt(2), 0.0),),
            description="torus patch u, v in [0, pi/2]",
        ),
    ]
    return {e.name: e for e in entries}


CATALOG = _build()


LOCAL_CHARTS = {"pole-north": pole_chart(), "pole-south": pole_chart(south=True)}


def host_chart(name: str) -> Chart:
    """A chart usable to host a singularity: a catalog surface or a pole chart."""
    if name in LOCAL_CHARTS:
        return LOCAL_CHARTS[name]
    return lookup(name).chart


def catalog_list() -> list[CatalogEntry]:
    return list(CATALOG.values())


def lookup(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise KeyError(f"unknown surface {name!r}; known: {', '.join(CATALOG)}") from None
