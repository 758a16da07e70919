"""Pointwise surface geometry from a parametric chart.

Curvature sign convention: the principal curvatures are the eigenvalues of
``T -> -dN(T)`` on the tangent plane, so ``N_p = -kappa1 P`` and
``N_q = -kappa2 Q``. With the outward normal the unit sphere has
kappa1 = kappa2 = -1, H = -1, K = 1.

All functions accept a single parameter point or a stacked batch; the
returned dataclasses carry arrays with the matching leading shape.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .expr import BinOp, Call, Expression, Neg, Pow, Var, eval_jet2_batch, parse

IMMERSION_EPS = 1e-12
UMBILIC_REL = 1e-9


class GeometryError(ValueError):
    pass


class DegenerateChartError(GeometryError):
    def __init__(self, uv):
        self.uv = tuple(np.atleast_1d(uv).tolist())
        super().__init__(f"chart is not an immersion at uv={self.uv}")


class BoundaryError(GeometryError):
    pass


# --------------------------------------------------------------------------
# Domains and boundary segments


@dataclass(frozen=True)
class Rectangle:
    u_min: float
    u_max: float
    v_min: float
    v_max: float

    def contains(self, uv, strict: bool = False) -> bool:
        u, v = uv
        if strict:
            return self.u_min < u < self.u_max and self.v_min < v < self.v_max
        return self.u_min <= u <= self.u_max and self.v_min <= v <= self.v_max


@dataclass(frozen=True)
class Disk:
    center: tuple[float, float]
    radius: float

    def contains(self, uv, strict: bool = False) -> bool:
        d = math.hypot(uv[0] - self.center[0], uv[1] - self.center[1])
        return d < self.radius if strict else d <= self.radius


Domain = Union[Rectangle, Disk]


@dataclass(frozen=True)
class Segment:
    """One piece of the parameter-domain boundary, traversed for t in [0, 1].

    ``loop`` is true when the segment closes on itself (a full circle), so
    parameters outside [0, 1] wrap around.
    """

    kind: str  # "line" or "circle"
    start: tuple[float, float]
    end: tuple[float, float] = (0.0, 0.0)
    radius: float = 0.0

    @property
    def loop(self) -> bool:
        return self.kind == "circle"

    def eval(self, t: np.ndarray):
        """Return (uv, d uv/dt, d2 uv/dt2), each of shape (M, 2)."""
        t = np.asarray(t, dtype=float)
        if self.kind == "line":
            a = np.asarray(self.start)
            b = np.asarray(self.end)
            uv = a + t[:, None] * (b - a)
            d1 = np.broadcast_to(b - a, uv.shape).copy()
            return uv, d1, np.zeros_like(uv)
        c = np.asarray(self.start)
        w = 2.0 * math.pi
        phi = w * t
        cs, sn = np.cos(phi), np.sin(phi)
        uv = c + self.radius * np.stack([cs, sn], axis=-1)
        d1 = self.radius * w * np.stack([-sn, cs], axis=-1)
        d2 = -self.radius * w * w * np.stack([cs, sn], axis=-1)
        return uv, d1, d2


# --------------------------------------------------------------------------
# Chart


@dataclass(frozen=True)
class Chart:
    """A parametric surface patch (u, v) -> (x, y, z).

    The normal is X_u x X_v normalized. ``closed`` marks charts whose image
    has no boundary; their boundary integrals are zero by definition.
    """

    x_expr: Expression
    y_expr: Expression
    z_expr: Expression
    domain: Domain
    periodic: tuple[bool, bool] = (False, False)
    closed: bool = False
    euler_characteristic: int | None = None
    name: str = ""

    @classmethod
    def from_strings(cls, x: str, y: str, z: str, domain: Domain, **kwargs) -> "Chart":
        exprs = [parse(s, ("u", "v")) for s in (x, y, z)]
        return cls(*exprs, domain=domain, **kwargs)

    def swapped(self) -> "Chart":
        """Same surface with u and v exchanged; reverses the orientation."""
        swap = {"u": "v", "v": "u"}

        def sw(e: Expression) -> Expression:
            return _rename(e, swap)

        d = self.domain
        if isinstance(d, Rectangle):
            dom: Domain = Rectangle(d.v_min, d.v_max, d.u_min, d.u_max)
        else:
            dom = Disk((d.center[1], d.center[0]), d.radius)
        return Chart(
            sw(self.x_expr), sw(self.y_expr), sw(self.z_expr), dom,
            (self.periodic[1], self.periodic[0]), self.closed,
            self.euler_characteristic, self.name + "-swapped" if self.name else "",
        )

    def jets(self, uv: np.ndarray):
        """Position and its first and second parameter derivatives.

        Returns ``X (M,3)``, ``dX (M,3,2)``, ``ddX (M,3,2,2)``.
        """
        jets = [eval_jet2_batch(e, uv) for e in (self.x_expr, self.y_expr, self.z_expr)]
        X = np.stack([j.value for j in jets], axis=1)
        dX = np.stack([j.grad for j in jets], axis=1)
        ddX = np.stack([j.hess for j in jets], axis=1)
        return X, dX, ddX

    def boundary_segments(self) -> list[Segment]:
        """Parameter-domain boundary, counterclockwise, without identified edges."""
        if self.closed:
            return []
        d = self.domain
        if isinstance(d, Disk):
            return [Segment("circle", tuple(d.center), radius=d.radius)]
        pu, pv = self.periodic
        corners = [(d.u_min, d.v_min), (d.u_max, d.v_min), (d.u_max, d.v_max), (d.u_min, d.v_max)]
        # bottom, right, top, left
        edges = [Segment("line", corners[i], corners[(i + 1) % 4]) for i in range(4)]
        keep = [not pv, not pu, not pv, not pu]
        return [e for e, k in zip(edges, keep) if k]

    def has_corners(self) -> bool:
        return (not self.closed) and isinstance(self.domain, Rectangle) and not any(self.periodic)


def _rename(e: Expression, mapping: dict[str, str]) -> Expression:
    def go(n):
        if isinstance(n, Var):
            return Var(mapping.get(n.name, n.name))
        if isinstance(n, Neg):
            return Neg(go(n.arg))
        if isinstance(n, Call):
            return Call(n.func, go(n.arg))
        if isinstance(n, Pow):
            return Pow(go(n.base), n.exponent)
        if isinstance(n, BinOp):
            return BinOp(n.op, go(n.left), go(n.right))
        return n

    return Expression(e.source, go(e.ast), e.variables)


# --------------------------------------------------------------------------
# Surface jets: everything downstream is built from these


@dataclass
class SurfaceJet:
    uv: np.ndarray
    X: np.ndarray
    Xu: np.ndarray
    Xv: np.ndarray
    Xuu: np.ndarray
    Xuv: np.ndarray
    Xvv: np.ndarray
    N: np.ndarray
    Nu: np.ndarray
    Nv: np.ndarray
    area_density: np.ndarray

    def param_direction(self, T: np.ndarray) -> np.ndarray:
        """Parameter velocity (du, dv) whose push-forward is the tangent vector T."""
        g11 = _dot(self.Xu, self.Xu)
        g12 = _dot(self.Xu, self.Xv)
        g22 = _dot(self.Xv, self.Xv)
        b1 = _dot(self.Xu, T)
        b2 = _dot(self.Xv, T)
        det = g11 * g22 - g12 * g12
        return np.stack([(g22 * b1 - g12 * b2) / det, (g11 * b2 - g12 * b1) / det], axis=-1)

    def dN(self, T: np.ndarray) -> np.ndarray:
        """Derivative of the unit normal along the tangent vector T."""
        a = self.param_direction(T)
        return a[..., 0:1] * self.Nu + a[..., 1:2] * self.Nv


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def _unit(a):
    return a / np.linalg.norm(a, axis=-1, keepdims=True)


def surface_jet(chart: Chart, uv) -> SurfaceJet:
    uv = np.atleast_2d(np.asarray(uv, dtype=float))
    X, dX, ddX = chart.jets(uv)
    Xu, Xv = dX[..., 0], dX[..., 1]
    Xuu, Xuv, Xvv = ddX[..., 0, 0], ddX[..., 0, 1], ddX[..., 1, 1]
    n = np.cross(Xu, Xv)
    norm = np.linalg.norm(n, axis=-1)
    bad = ~(norm > IMMERSION_EPS)
    if np.any(bad):
        raise DegenerateChartError(uv[np.argmax(bad)])
    N = n / norm[:, None]
    nu = np.cross(Xuu, Xv) + np.cross(Xu, Xuv)
    nv = np.cross(Xuv, Xv) + np.cross(Xu, Xvv)
    Nu = (nu - N * _dot(N, nu)[:, None]) / norm[:, None]
    Nv = (nv - N * _dot(N, nv)[:, None]) / norm[:, None]
    return SurfaceJet(uv, X, Xu, Xv, Xuu, Xuv, Xvv, N, Nu, Nv, norm)


# --------------------------------------------------------------------------
# Framed points


@dataclass
class FramedPoint:
    uv: np.ndarray
    X: np.ndarray
    N: np.ndarray
    P: np.ndarray
    Q: np.ndarray
    kappa1: np.ndarray
    kappa2: np.ndarray
    H: np.ndarray
    K: np.ndarray
    area_density: np.ndarray
    jet: SurfaceJet = field(repr=False)
    umbilic: np.ndarray = field(default=None, repr=False)

    def swap_frame(self) -> "FramedPoint":
        """The rotated principal frame {Q, -P} with curvatures exchanged."""
        return FramedPoint(
            self.uv, self.X, self.N, self.Q, -self.P, self.kappa2, self.kappa1,
            self.H, self.K, self.area_density, self.jet, self.umbilic,
        )

    def __getitem__(self, idx) -> "FramedPoint":
        j = self.jet
        sub = SurfaceJet(*(getattr(j, f)[idx] for f in j.__dataclass_fields__))
        vals = {f: getattr(self, f)[idx] for f in self.__dataclass_fields__ if f != "jet"}
        return FramedPoint(jet=sub, **vals)


def tangent_basis(sj: SurfaceJet):
    """The continuous frame e1 = unit tangential X_u, e2 = N x e1 (X_v if X_u degenerates)."""
    t = sj.Xu - sj.N * _dot(sj.N, sj.Xu)[..., None]
    tn = np.linalg.norm(t, axis=-1)
    fallback = sj.Xv - sj.N * _dot(sj.N, sj.Xv)[..., None]
    bad = tn <= 1e-12 * (1.0 + np.linalg.norm(sj.Xu, axis=-1))
    t = np.where(bad[..., None], fallback, t)
    e1 = _unit(t)
    e2 = np.cross(sj.N, e1)
    return e1, e2


def shape_operator(sj: SurfaceJet):
    """Matrix of T -> -dN(T) in the orthonormal tangent basis, unsymmetrized.

    Returns ``(S, e1, e2)`` with ``S`` of shape (M, 2, 2).
    """
    e1, e2 = tangent_basis(sj)
    d1 = sj.dN(e1)
    d2 = sj.dN(e2)
    S = -np.stack(
        [np.stack([_dot(e1, d1), _dot(e1, d2)], -1), np.stack([_dot(e2, d1), _dot(e2, d2)], -1)],
        axis=-2,
    )
    return S, e1, e2


def frames_from_jet(sj: SurfaceJet) -> FramedPoint:
    S, e1, e2 = shape_operator(sj)
    a = S[:, 0, 0]
    d = S[:, 1, 1]
    b = 0.5 * (S[:, 0, 1] + S[:, 1, 0])
    mean = 0.5 * (a + d)
    disc = np.hypot(0.5 * (a - d), b)
    k1 = mean - disc
    k2 = mean + disc
    # eigenvector of the larger eigenvalue sits at angle phi; kappa1's is perpendicular
    phi = 0.5 * np.arctan2(2.0 * b, a - d)
    c, s = np.cos(phi), np.sin(phi)
    P = -s[:, None] * e1 + c[:, None] * e2
    umb = np.abs(k1 - k2) <= UMBILIC_REL * (1.0 + np.abs(k1) + np.abs(k2))
    P = np.where(umb[:, None], e1, P)
    Q = np.cross(sj.N, P)
    return FramedPoint(
        uv=sj.uv, X=sj.X, N=sj.N, P=P, Q=Q, kappa1=k1, kappa2=k2,
        H=0.5 * (k1 + k2), K=k1 * k2, area_density=sj.area_density, jet=sj, umbilic=umb,
    )


def frame_at(chart: Chart, uv) -> FramedPoint:
    """Position, normal, principal frame and curvatures at one or many parameter points."""
    uv = np.asarray(uv, dtype=float)
    fp = frames_from_jet(surface_jet(chart, uv))
    return fp[0] if uv.ndim == 1 else fp


# --------------------------------------------------------------------------
# Boundary points


@dataclass
class BoundaryPoint:
    uv: np.ndarray
    uv_s: np.ndarray  # parameter velocity per unit arc length
    speed: np.ndarray  # ds/dt
    X: np.ndarray
    N: np.ndarray
    X_s: np.ndarray
    X_ss: np.ndarray
    N_s: np.ndarray
    kappa_g: np.ndarray
    jet: SurfaceJet = field(repr=False)

    def __getitem__(self, idx) -> "BoundaryPoint":
        j = self.jet
        sub = SurfaceJet(*(getattr(j, f)[idx] for f in j.__dataclass_fields__))
        vals = {f: getattr(self, f)[idx] for f in self.__dataclass_fields__ if f != "jet"}
        return BoundaryPoint(jet=sub, **vals)


def boundary_points_on(chart: Chart, seg: Segment, t) -> BoundaryPoint:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    uv, d1, d2 = seg.eval(t)
    sj = surface_jet(chart, uv)
    du, dv = d1[:, 0:1], d1[:, 1:2]
    Xt = sj.Xu * du + sj.Xv * dv
    Xtt = sj.Xuu * du**2 + 2.0 * sj.Xuv * du * dv + sj.Xvv * dv**2 + sj.Xu * d2[:, 0:1] + sj.Xv * d2[:, 1:2]
    speed = np.linalg.norm(Xt, axis=-1)
    if np.any(~(speed > 1e-14)):
        raise BoundaryError(f"zero-speed boundary parametrization at uv={uv[np.argmin(speed)].tolist()}")
    X_s = Xt / speed[:, None]
    X_ss = (Xtt - X_s * _dot(X_s, Xtt)[:, None]) / speed[:, None] ** 2
    uv_s = d1 / speed[:, None]
    N_s = sj.Nu * uv_s[:, 0:1] + sj.Nv * uv_s[:, 1:2]
    kappa_g = _dot(np.cross(X_s, X_ss), sj.N)
    return BoundaryPoint(uv, uv_s, speed, sj.X, sj.N, X_s, X_ss, N_s, kappa_g, sj)


def boundary_point(chart: Chart, t) -> BoundaryPoint:
    """Arc-length data on the positively oriented boundary.

    ``t`` runs over [0, n) for a boundary with n segments: the integer part
    picks the segment and the fractional part the position along it.
    """
    segs = chart.boundary_segments()
    if not segs:
        raise BoundaryError("chart has no boundary")
    t_arr = np.atleast_1d(np.asarray(t, dtype=float))
    idx = np.clip(np.floor(t_arr).astype(int), 0, len(segs) - 1)
    out = None
    for k, seg in enumerate(segs):
        mask = idx == k
        if not np.any(mask):
            continue
        bp = boundary_points_on(chart, seg, t_arr[mask] - k)
        if out is None:
            out = {f: np.zeros((len(t_arr),) + getattr(bp, f).shape[1:]) for f in bp.__dataclass_fields__ if f != "jet"}
            jets = {f: np.zeros((len(t_arr),) + getattr(bp.jet, f).shape[1:]) for f in bp.jet.__dataclass_fields__}
        for f in out:
            out[f][mask] = getattr(bp, f)
        for f in jets:
            jets[f][mask] = getattr(bp.jet, f)
    result = BoundaryPoint(jet=SurfaceJet(**jets), **out)
    return result[0] if np.ndim(t) == 0 else result


def corner_angles(chart: Chart) -> list[float]:
    """Signed turning angles at the corners of a rectangular patch boundary."""
    if not chart.has_corners():
        return []
    segs = chart.boundary_segments()
    ends = [boundary_points_on(chart, s, [0.0, 1.0]) for s in segs]
    angles = []
    for k in range(len(segs)):
        incoming = ends[k - 1][1]
        outgoing = ends[k][0]
        n = outgoing.N
        angles.append(
            math.atan2(float(_dot(n, np.cross(incoming.X_s, outgoing.X_s))), float(_dot(incoming.X_s, outgoing.X_s)))
        )
    return angles


# --------------------------------------------------------------------------
# Directional derivatives

NORMAL = "N"


def directional_derivative(chart: Chart, uv, field, direction) -> np.ndarray:
    """Derivative of an ambient field (or the chart normal) along a tangent direction.

    ``field`` is either :data:`NORMAL` or an object with an ``evaluate(points)``
    method returning the value and the ambient Jacobian.
    """
    uv = np.asarray(uv, dtype=float)
    direction = np.asarray(direction, dtype=float)
    sj = surface_jet(chart, np.atleast_2d(uv))
    T = np.atleast_2d(direction)
    if isinstance(field, str) and field == NORMAL:
        out = sj.dN(T)
    else:
        _, J = field.evaluate(sj.X)
        out = np.einsum("mij,mj->mi", J, T)
    return out[0] if uv.ndim == 1 else out
