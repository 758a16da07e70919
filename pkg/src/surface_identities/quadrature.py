"""Composite Gauss-Legendre rules over chart domains and their boundaries.

Every integral is also computed with doubled panel counts; the difference
between the two is reported as the error estimate. Sums use ``math.fsum``
so results do not depend on summation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, Union

import numpy as np

from .expr import ExprDomainError
from .geometry import (
    BoundaryPoint,
    Chart,
    Disk,
    FramedPoint,
    GeometryError,
    Rectangle,
    boundary_points_on,
    frames_from_jet,
    surface_jet,
)

Value = Union[float, np.ndarray]


class QuadratureError(RuntimeError):
    def __init__(self, message: str, node=None):
        self.node = None if node is None else tuple(np.asarray(node).tolist())
        where = "" if node is None else f" at node uv={self.node}"
        super().__init__(f"{message}{where}")


@dataclass(frozen=True)
class QuadratureSpec:
    panels_u: int = 8
    panels_v: int = 8
    nodes_per_panel: int = 12
    boundary_panels: int = 32

    def __post_init__(self):
        if min(self.panels_u, self.panels_v, self.boundary_panels) < 1:
            raise ValueError("panel counts must be positive")
        if not 2 <= self.nodes_per_panel <= 32:
            raise ValueError("nodes_per_panel must lie in [2, 32]")

    def refined(self) -> "QuadratureSpec":
        return replace(
            self,
            panels_u=2 * self.panels_u,
            panels_v=2 * self.panels_v,
            boundary_panels=2 * self.boundary_panels,
        )

    def total_nodes(self) -> int:
        return self.panels_u * self.panels_v * self.nodes_per_panel**2


DEFAULT_SPEC = QuadratureSpec()


@dataclass(frozen=True)
class IntegralResult:
    """An integral at a base and a refined resolution.

    Results combine linearly, so a checker can assemble ``lhs - rhs`` from
    several integrals and keep a consistent error estimate.
    """

    value: Value
    refined_value: Value

    @property
    def est_error(self) -> float:
        return float(np.linalg.norm(np.atleast_1d(np.subtract(self.value, self.refined_value))))

    @classmethod
    def exact(cls, c: Value) -> "IntegralResult":
        return cls(c, c)

    def _coerce(self, other) -> "IntegralResult":
        return other if isinstance(other, IntegralResult) else IntegralResult.exact(other)

    def __add__(self, other):
        o = self._coerce(other)
        return IntegralResult(np.add(self.value, o.value), np.add(self.refined_value, o.refined_value))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return IntegralResult(np.subtract(self.value, o.value), np.subtract(self.refined_value, o.refined_value))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __neg__(self):
        return IntegralResult(np.negative(self.value), np.negative(self.refined_value))

    def __mul__(self, c: float):
        return IntegralResult(np.multiply(self.value, c), np.multiply(self.refined_value, c))

    __rmul__ = __mul__

    def __truediv__(self, c: float):
        return self * (1.0 / c)


@lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    x.flags.writeable = False
    w.flags.writeable = False
    return x, w


def composite_rule(a: float, b: float, panels: int, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the composite n-point rule on [a, b]; no node hits a panel end."""
    x, w = gauss_legendre(n)
    edges = np.linspace(a, b, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return nodes, weights


def domain_rule(domain, spec: QuadratureSpec) -> tuple[np.ndarray, np.ndarray]:
    """Parameter nodes ``(M, 2)`` and weights ``(M,)`` for the chart's domain.

    Disks use polar coordinates: ``panels_u`` radial and ``panels_v``
    angular panels.
    """
    n = spec.nodes_per_panel
    if isinstance(domain, Rectangle):
        u, wu = composite_rule(domain.u_min, domain.u_max, spec.panels_u, n)
        v, wv = composite_rule(domain.v_min, domain.v_max, spec.panels_v, n)
        uu, vv = np.meshgrid(u, v, indexing="ij")
        ww = np.outer(wu, wv)
        return np.stack([uu.ravel(), vv.ravel()], axis=-1), ww.ravel()
    if isinstance(domain, Disk):
        r, wr = composite_rule(0.0, domain.radius, spec.panels_u, n)
        phi, wp = composite_rule(0.0, 2.0 * math.pi, spec.panels_v, n)
        rr, pp = np.meshgrid(r, phi, indexing="ij")
        ww = np.outer(wr * r, wp)
        cu, cv = domain.center
        uv = np.stack([cu + rr.ravel() * np.cos(pp.ravel()), cv + rr.ravel() * np.sin(pp.ravel())], axis=-1)
        return uv, ww.ravel()
    raise TypeError(f"unsupported domain {domain!r}")


def weighted_sum(weights: np.ndarray, values: np.ndarray) -> Value:
    """Exactly rounded sum of weights * values; vector values are summed per component."""
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        return math.fsum((weights * values).tolist())
    return np.array([math.fsum((weights * values[:, k]).tolist()) for k in range(values.shape[1])])


def _check_finite(values: np.ndarray, uv: np.ndarray) -> None:
    finite = np.isfinite(values)
    if finite.ndim > 1:
        finite = finite.all(axis=tuple(range(1, finite.ndim)))
    if not finite.all():
        raise QuadratureError("integrand is not finite", uv[np.argmin(finite)])


def surface_frames(chart: Chart, spec: QuadratureSpec) -> tuple[FramedPoint, np.ndarray]:
    uv, w = domain_rule(chart.domain, spec)
    try:
        fp = frames_from_jet(surface_jet(chart, uv))
    except GeometryError as exc:
        raise QuadratureError(str(exc)) from exc
    return fp, w


def _surface_sum(chart, integrand, spec) -> Value:
    fp, w = surface_frames(chart, spec)
    try:
        vals = np.asarray(integrand(fp), dtype=float)
    except ExprDomainError as exc:
        raise QuadratureError(f"integrand evaluation failed: {exc}") from exc
    if vals.ndim == 0:
        vals = np.full(len(w), float(vals))
    _check_finite(vals, fp.uv)
    dens = fp.area_density if vals.ndim == 1 else fp.area_density[:, None]
    return weighted_sum(w, vals * dens)


def surface_integral(
    chart: Chart, integrand: Callable[[FramedPoint], np.ndarray], spec: QuadratureSpec = DEFAULT_SPEC
) -> IntegralResult:
    """Integral of ``integrand`` against the area element dA."""
    return IntegralResult(_surface_sum(chart, integrand, spec), _surface_sum(chart, integrand, spec.refined()))


def boundary_rule(chart: Chart, spec: QuadratureSpec):
    """Yield ``(BoundaryPoint, weights)`` per boundary segment, weights in the segment parameter."""
    for seg in chart.boundary_segments():
        t, w = composite_rule(0.0, 1.0, spec.boundary_panels, spec.nodes_per_panel)
        try:
            bp = boundary_points_on(chart, seg, t)
        except GeometryError as exc:
            raise QuadratureError(str(exc)) from exc
        yield bp, w


def _boundary_sum(chart, integrand, spec, dim) -> Value:
    total = 0.0 if dim is None else np.zeros(dim)
    parts = []
    for bp, w in boundary_rule(chart, spec):
        try:
            vals = np.asarray(integrand(bp), dtype=float)
        except ExprDomainError as exc:
            raise QuadratureError(f"integrand evaluation failed: {exc}") from exc
        if vals.ndim == 0:
            vals = np.full(len(w), float(vals))
        _check_finite(vals, bp.uv)
        sp = bp.speed if vals.ndim == 1 else bp.speed[:, None]
        parts.append(weighted_sum(w, vals * sp))
    if not parts:
        return total
    if np.ndim(parts[0]) == 0:
        return math.fsum(parts)
    return np.array([math.fsum(p[k] for p in parts) for k in range(len(parts[0]))])


def boundary_integral(
    chart: Chart,
    integrand: Callable[[BoundaryPoint], np.ndarray],
    spec: QuadratureSpec = DEFAULT_SPEC,
    dim: int | None = None,
) -> IntegralResult:
    """Line integral over the positively oriented boundary against ds.

    Closed charts give exactly zero, shaped by ``dim`` (scalar when None).
    """
    return IntegralResult(
        _boundary_sum(chart, integrand, spec, dim),
        _boundary_sum(chart, integrand, spec.refined(), dim),
    )
