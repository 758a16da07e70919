"""Ambient vector fields, scalar functions and tangent fields, plus singularity indices."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .expr import Expression, eval_jet2_batch, parse
from .geometry import Chart, SurfaceJet, surface_jet, tangent_basis

AMBIENT_VARS = ("x", "y", "z")
CHART_VARS = ("u", "v")

DEFAULT_INDEX_RADIUS = 0.05
DEFAULT_INDEX_SAMPLES = 720
INDEX_SNAP_TOL = 0.05


class FieldIndexError(ValueError):
    pass


@dataclass(frozen=True)
class AmbientField:
    """A vector field V on R^3 given by three expressions in x, y, z."""

    components: tuple[Expression, Expression, Expression]
    name: str = ""

    @classmethod
    def from_strings(cls, vx: str, vy: str, vz: str, name: str = "") -> "AmbientField":
        return cls(tuple(parse(s, AMBIENT_VARS) for s in (vx, vy, vz)), name)

    def evaluate(self, points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Values ``(M, 3)`` and Jacobians ``(M, 3, 3)`` with ``J[m, i, j] = dV_i/dx_j``."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        jets = [eval_jet2_batch(e, pts) for e in self.components]
        V = np.stack([j.value for j in jets], axis=1)
        J = np.stack([j.grad for j in jets], axis=1)
        return V, J


@dataclass(frozen=True)
class ScalarField:
    """A twice differentiable function F on R^3."""

    expr: Expression
    name: str = ""

    @classmethod
    def from_string(cls, f: str, name: str = "") -> "ScalarField":
        return cls(parse(f, AMBIENT_VARS), name)

    def evaluate(self, points: np.ndarray):
        """``F (M,)``, ``grad F (M, 3)`` and ``hess F (M, 3, 3)``."""
        jet = eval_jet2_batch(self.expr, np.atleast_2d(np.asarray(points, dtype=float)))
        return jet.value, jet.grad, jet.hess

    def as_gradient_field(self) -> "_GradientField":
        return _GradientField(self)


@dataclass(frozen=True)
class _GradientField:
    """grad F viewed as an ambient vector field; its Jacobian is the Hessian."""

    scalar: ScalarField

    def evaluate(self, points):
        _, g, h = self.scalar.evaluate(points)
        return g, h


@dataclass(frozen=True)
class TangentField:
    """A vector field on the surface.

    Built either from an ambient field, used as is (``mode="raw"``) or with
    its normal part removed (``mode="projected"``), or from chart components
    ``a X_u + b X_v`` with ``a, b`` expressions in u, v (``mode="pushforward"``).
    """

    mode: str
    ambient: AmbientField | None = None
    chart_components: tuple[Expression, Expression] | None = None
    name: str = ""

    def __post_init__(self):
        if self.mode in ("raw", "projected"):
            if self.ambient is None:
                raise ValueError(f"mode {self.mode!r} needs an ambient field")
        elif self.mode == "pushforward":
            if self.chart_components is None:
                raise ValueError("pushforward mode needs chart components")
        else:
            raise ValueError(f"unknown tangent field mode {self.mode!r}")

    @classmethod
    def from_ambient(cls, field: AmbientField, projected: bool = False, name: str = "") -> "TangentField":
        return cls("projected" if projected else "raw", ambient=field, name=name or field.name)

    @classmethod
    def pushforward(cls, a: str, b: str, name: str = "") -> "TangentField":
        return cls("pushforward", chart_components=(parse(a, CHART_VARS), parse(b, CHART_VARS)), name=name)

    def evaluate_on(self, sj: SurfaceJet) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Field and its u, v derivatives at the points of a surface jet."""
        if self.mode == "pushforward":
            ja, jb = (eval_jet2_batch(e, sj.uv) for e in self.chart_components)
            a, b = ja.value[:, None], jb.value[:, None]
            V = a * sj.Xu + b * sj.Xv
            Vu = ja.grad[:, 0:1] * sj.Xu + a * sj.Xuu + jb.grad[:, 0:1] * sj.Xv + b * sj.Xuv
            Vv = ja.grad[:, 1:2] * sj.Xu + a * sj.Xuv + jb.grad[:, 1:2] * sj.Xv + b * sj.Xvv
            return V, Vu, Vv
        V, J = self.ambient.evaluate(sj.X)
        Vu = np.einsum("mij,mj->mi", J, sj.Xu)
        Vv = np.einsum("mij,mj->mi", J, sj.Xv)
        if self.mode == "raw":
            return V, Vu, Vv
        N = sj.N
        vn = np.einsum("mi,mi->m", V, N)[:, None]
        out = []
        for Vd, Nd in ((Vu, sj.Nu), (Vv, sj.Nv)):
            vn_d = (np.einsum("mi,mi->m", Vd, N) + np.einsum("mi,mi->m", V, Nd))[:, None]
            out.append(Vd - vn_d * N - vn * Nd)
        return V - vn * N, out[0], out[1]

    def values(self, chart: Chart, uv) -> np.ndarray:
        return self.evaluate_on(surface_jet(chart, uv))[0]


@dataclass(frozen=True)
class SingularitySpec:
    """A declared isolated zero of a tangent field.

    ``chart`` optionally names a local chart hosting the zero, for points
    such as the poles of a latitude-longitude sphere where the main chart
    degenerates.
    """

    uv: tuple[float, float]
    declared: int | None = None
    chart: Chart | None = None


def _wrap(a: np.ndarray) -> np.ndarray:
    """Map angles into (-pi, pi]."""
    return math.pi - np.mod(math.pi - a, 2.0 * math.pi)


def winding_number(angles: np.ndarray) -> float:
    """Total turning of a closed sequence of angles, in full turns."""
    inc = _wrap(np.diff(np.append(angles, angles[0])))
    return float(np.sum(inc)) / (2.0 * math.pi)


def field_index(
    chart: Chart,
    field: TangentField,
    sing: SingularitySpec,
    radius: float = DEFAULT_INDEX_RADIUS,
    samples: int = DEFAULT_INDEX_SAMPLES,
) -> int:
    """Index of ``field`` at a singularity, as a winding number in the local frame.

    The angle of (V.e1, V.e2) is tracked around the parameter circle of the
    given radius, where e1 is the unit tangential part of X_u and e2 = N x e1.
    """
    host = sing.chart or chart
    u0, v0 = sing.uv
    if not host.domain.contains((u0, v0), strict=True):
        raise FieldIndexError(f"singularity at {sing.uv} is not interior to the chart domain")
    phi = 2.0 * math.pi * np.arange(samples) / samples
    uv = np.stack([u0 + radius * np.cos(phi), v0 + radius * np.sin(phi)], axis=-1)
    sj = surface_jet(host, uv)
    V = field.evaluate_on(sj)[0]
    e1, e2 = tangent_basis(sj)
    a = np.einsum("mi,mi->m", V, e1)
    b = np.einsum("mi,mi->m", V, e2)
    mag = np.hypot(a, b)
    scale = float(np.max(np.linalg.norm(V, axis=-1)))
    if not scale > 0 or np.min(mag) <= 1e-12 * scale:
        raise FieldIndexError(f"field vanishes on the index circle around {sing.uv}")
    w = winding_number(np.arctan2(b, a))
    k = round(w)
    if abs(w - k) > INDEX_SNAP_TOL:
        raise FieldIndexError(
            f"winding {w:.4f} around {sing.uv} is not near an integer; "
            "increase samples or shrink the radius"
        )
    return int(k)


def total_index(chart: Chart, field: TangentField, sings: Sequence[SingularitySpec], **kwargs) -> int:
    return sum(field_index(chart, field, s, **kwargs) for s in sings)
