"""Checkers pairing boundary integrals with surface integrals (or topology).

Each ``check_*`` function returns an :class:`IdentityReport`. Boundary sides
are integrated over the counterclockwise boundary of the parameter domain,
which is the Stokes orientation for the normal X_u x X_v.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize_scalar

from .fields import (
    DEFAULT_INDEX_RADIUS,
    DEFAULT_INDEX_SAMPLES,
    ScalarField,
    SingularitySpec,
    TangentField,
    field_index,
)
from .geometry import (
    NORMAL,
    BoundaryPoint,
    Chart,
    FramedPoint,
    UMBILIC_REL,
    boundary_points_on,
    corner_angles,
    frame_at,
)
from .quadrature import (
    DEFAULT_SPEC,
    IntegralResult,
    QuadratureSpec,
    boundary_integral,
    surface_integral,
)

DEFAULT_TOL = 1e-8
LIOUVILLE_TOL = 1e-6
LIOUVILLE_SAMPLES = 512
LIOUVILLE_STEP = 1e-4  # finite-difference step as a fraction of boundary length
HYPOTHESIS_MARGIN = 1e-6
INTEGRAND_DEGENERACY = 1e-8

PASS = "pass"
FAIL = "fail"
HYPOTHESIS_VIOLATED = "hypothesis-violated"


class HypothesisViolation(ValueError):
    """A precondition of the identity itself does not hold for this input."""


class FieldVanishesError(ValueError):
    pass


@dataclass
class IdentityReport:
    identity: str
    lhs: float | np.ndarray | None
    rhs: float | np.ndarray | None
    residual: float | None
    tolerance: float
    est_error: float | None
    spec: QuadratureSpec | None
    status: str
    trace: list[dict] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == PASS

    def to_record(self) -> dict:
        def conv(x):
            if x is None:
                return None
            if np.ndim(x) == 0:
                return float(x)
            return [float(c) for c in np.asarray(x)]

        rec = {
            "identity": self.identity,
            "lhs": conv(self.lhs),
            "rhs": conv(self.rhs),
            "residual": conv(self.residual),
            "est_error": conv(self.est_error),
            "tolerance": self.tolerance,
            "status": self.status,
            "pass": self.passed,
        }
        if self.spec is not None:
            rec["quadrature"] = {
                "panels_u": self.spec.panels_u,
                "panels_v": self.spec.panels_v,
                "nodes_per_panel": self.spec.nodes_per_panel,
                "boundary_panels": self.spec.boundary_panels,
            }
        if self.trace:
            rec["trace"] = self.trace
        if self.details:
            rec["details"] = self.details
        return rec


def _norm(x) -> float:
    return float(np.linalg.norm(np.atleast_1d(x)))


def passes(residual: float, lhs, rhs, tol: float) -> bool:
    return residual <= tol * (1.0 + _norm(lhs) + _norm(rhs))


def make_report(
    name: str,
    lhs: IntegralResult,
    rhs: IntegralResult,
    spec: QuadratureSpec | None,
    tol: float = DEFAULT_TOL,
    details: dict | None = None,
) -> IdentityReport:
    residual = _norm(np.subtract(lhs.value, rhs.value))
    refined = _norm(np.subtract(lhs.refined_value, rhs.refined_value))
    trace = []
    if spec is not None:
        r = spec.refined()
        trace = [
            {"panels": [spec.panels_u, spec.panels_v], "boundary_panels": spec.boundary_panels, "residual": residual},
            {"panels": [r.panels_u, r.panels_v], "boundary_panels": r.boundary_panels, "residual": refined},
        ]
    ok = passes(residual, lhs.value, rhs.value, tol)
    return IdentityReport(
        identity=name,
        lhs=lhs.value,
        rhs=rhs.value,
        residual=residual,
        tolerance=tol,
        est_error=lhs.est_error + rhs.est_error,
        spec=spec,
        status=PASS if ok else FAIL,
        trace=trace,
        details=details or {},
    )


def violated_report(name: str, reason: str, tol: float, spec: QuadratureSpec | None = None) -> IdentityReport:
    return IdentityReport(name, None, None, None, tol, None, spec, HYPOTHESIS_VIOLATED, details={"reason": reason})


# --------------------------------------------------------------------------
# small vector helpers


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def _matvec(J, v):
    return np.einsum("mij,mj->mi", J, v)


def _frame(fp: FramedPoint, swap: bool) -> FramedPoint:
    return fp.swap_frame() if swap else fp


def _surface_derivs(f, fp: FramedPoint):
    """Value and derivatives along P and Q of an ambient field or of N."""
    if isinstance(f, str) and f == NORMAL:
        return fp.N, fp.jet.dN(fp.P), fp.jet.dN(fp.Q)
    V, J = f.evaluate(fp.X)
    return V, _matvec(J, fp.P), _matvec(J, fp.Q)


def _boundary_derivs(f, bp: BoundaryPoint):
    """Value and arc-length derivative along the boundary."""
    if isinstance(f, str) and f == NORMAL:
        return bp.N, bp.N_s
    V, J = f.evaluate(bp.X)
    return V, _matvec(J, bp.X_s)


def _surf(chart, spec, swap, fn) -> IntegralResult:
    return surface_integral(chart, lambda fp: fn(_frame(fp, swap)), spec)


# --------------------------------------------------------------------------
# Stokes variants


def check_stokes_scalar(
    chart: Chart,
    f: ScalarField,
    g: ScalarField,
    spec: QuadratureSpec = DEFAULT_SPEC,
    tol: float = DEFAULT_TOL,
    swap_frame: bool = False,
) -> IdentityReport:
    """Boundary integral of f dg against the surface integral of the P/Q cross term."""

    def line(bp):
        fv = f.evaluate(bp.X)[0]
        gg = g.evaluate(bp.X)[1]
        return fv * _dot(gg, bp.X_s)

    def area(fp):
        gf = f.evaluate(fp.X)[1]
        gg = g.evaluate(fp.X)[1]
        return _dot(gf, fp.P) * _dot(gg, fp.Q) - _dot(gf, fp.Q) * _dot(gg, fp.P)

    lhs = boundary_integral(chart, line, spec)
    rhs = _surf(chart, spec, swap_frame, area)
    return make_report("stokes-scalar", lhs, rhs, spec, tol)


def check_stokes_vector(
    chart: Chart,
    V,
    W,
    spec: QuadratureSpec = DEFAULT_SPEC,
    tol: float = DEFAULT_TOL,
    swap_frame: bool = False,
) -> IdentityReport:
    """Boundary integral of V . dW against the integral of V_p . W_q - V_q . W_p.

    Either field may be :data:`~surface_identities.geometry.NORMAL`.
    """

    def line(bp):
        v = _boundary_derivs(V, bp)[0]
        ws = _boundary_derivs(W, bp)[1]
        return _dot(v, ws)

    def area(fp):
        _, vp, vq = _surface_derivs(V, fp)
        _, wp, wq = _surface_derivs(W, fp)
        return _dot(vp, wq) - _dot(vq, wp)

    lhs = boundary_integral(chart, line, spec)
    rhs = _surf(chart, spec, swap_frame, area)
    return make_report("eq1", lhs, rhs, spec, tol)


def check_divergence_identity(
    chart: Chart, V, spec: QuadratureSpec = DEFAULT_SPEC, tol: float = DEFAULT_TOL, swap_frame: bool = False
) -> IdentityReport:
    """(V x N) . dX around the boundary against -(V_p.P + V_q.Q + 2H V.N) over the patch."""

    def line(bp):
        v = _boundary_derivs(V, bp)[0]
        return _dot(np.cross(v, bp.N), bp.X_s)

    def area(fp):
        v, vp, vq = _surface_derivs(V, fp)
        return -(_dot(vp, fp.P) + _dot(vq, fp.Q) + 2.0 * fp.H * _dot(v, fp.N))

    return make_report("eq3", boundary_integral(chart, line, spec), _surf(chart, spec, swap_frame, area), spec, tol)


def check_curvature_identity(
    chart: Chart, V, spec: QuadratureSpec = DEFAULT_SPEC, tol: float = DEFAULT_TOL, swap_frame: bool = False
) -> IdentityReport:
    """(V x N) . dN around the boundary against kappa2 V_p.P + kappa1 V_q.Q + 2K V.N."""

    def line(bp):
        v = _boundary_derivs(V, bp)[0]
        return _dot(np.cross(v, bp.N), bp.N_s)

    def area(fp):
        v, vp, vq = _surface_derivs(V, fp)
        return fp.kappa2 * _dot(vp, fp.P) + fp.kappa1 * _dot(vq, fp.Q) + 2.0 * fp.K * _dot(v, fp.N)

    return make_report("eq4", boundary_integral(chart, line, spec), _surf(chart, spec, swap_frame, area), spec, tol)


def check_moment_identities(
    chart: Chart, spec: QuadratureSpec = DEFAULT_SPEC, tol: float = DEFAULT_TOL
) -> list[IdentityReport]:
    """The four vector identities from constant and rotational test fields."""
    cases = [
        ("moment-n-dx", lambda bp: np.cross(bp.N, bp.X_s), lambda fp: -2.0 * fp.H[:, None] * fp.N),
        ("moment-n-dn", lambda bp: np.cross(bp.N, bp.N_s), lambda fp: 2.0 * fp.K[:, None] * fp.N),
        (
            "moment-x-n-dx",
            lambda bp: np.cross(bp.X, np.cross(bp.N, bp.X_s)),
            lambda fp: -2.0 * fp.H[:, None] * np.cross(fp.X, fp.N),
        ),
        (
            "moment-x-n-dn",
            lambda bp: np.cross(bp.X, np.cross(bp.N, bp.N_s)),
            lambda fp: 2.0 * fp.K[:, None] * np.cross(fp.X, fp.N),
        ),
    ]
    return [
        make_report(name, boundary_integral(chart, line, spec, dim=3), surface_integral(chart, area, spec), spec, tol)
        for name, line, area in cases
    ]


def check_minkowski(
    chart: Chart, spec: QuadratureSpec = DEFAULT_SPEC, tol: float = DEFAULT_TOL
) -> list[IdentityReport]:
    """Both Minkowski formulas, from the position field V = X."""

    def line1(bp):
        return _dot(np.cross(bp.X, bp.N), bp.X_s)

    def line2(bp):
        return _dot(np.cross(bp.X, bp.N), bp.N_s)

    def area1(fp):
        return -2.0 * (1.0 + fp.H * _dot(fp.X, fp.N))

    def area2(fp):
        return 2.0 * (fp.H + fp.K * _dot(fp.X, fp.N))

    return [
        make_report("minkowski1", boundary_integral(chart, line1, spec), surface_integral(chart, area1, spec), spec, tol),
        make_report("minkowski2", boundary_integral(chart, line2, spec), surface_integral(chart, area2, spec), spec, tol),
    ]


# --------------------------------------------------------------------------
# Liouville's formula on the boundary


def _unit_vector(C) -> np.ndarray:
    C = np.asarray(C, dtype=float)
    n = np.linalg.norm(C)
    if not abs(n - 1.0) <= 1e-9:
        raise ValueError(f"C must be a unit vector, got norm {n}")
    return C / n


def _turning_angle(bp: BoundaryPoint, C: np.ndarray) -> np.ndarray:
    """Angle from the unit tangent C x N / |C x N| to X_s, measured about N."""
    c = np.cross(C, bp.N)
    c = c / np.linalg.norm(c, axis=-1, keepdims=True)
    d = np.cross(bp.N, c)
    return np.arctan2(_dot(bp.X_s, d), _dot(bp.X_s, c))


def liouville_rhs(bp: BoundaryPoint, C: np.ndarray) -> np.ndarray:
    cn = _dot(C, bp.N)
    return bp.kappa_g - cn / (1.0 - cn**2) * _dot(np.cross(C, bp.N), bp.N_s)


def check_boundary_hypothesis(chart: Chart, C, margin: float = HYPOTHESIS_MARGIN, grid: int = 4096) -> float:
    """Largest |C . N| on the boundary; raises HypothesisViolation if it reaches 1 - margin."""
    C = _unit_vector(C)
    worst = 0.0
    for seg in chart.boundary_segments():
        t = np.arange(grid + 1) / grid
        cn = np.abs(_dot(C, boundary_points_on(chart, seg, t).N))
        k = int(np.argmax(cn))
        lo, hi = t[max(k - 1, 0)], t[min(k + 1, grid)]
        res = minimize_scalar(
            lambda s: -abs(float(_dot(C, boundary_points_on(chart, seg, [s]).N[0]))),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-12},
        )
        worst = max(worst, float(cn[k]), -float(res.fun))
    if worst > 1.0 - margin:
        raise HypothesisViolation(f"|C.N| reaches {worst:.12f} on the boundary; C x N is undefined there")
    return worst


def _arclength_shift(chart, seg, t: np.ndarray, ds: float, iters: int = 6) -> np.ndarray:
    """Segment parameters at signed arc-length distance ds from t (Newton on a local Gauss rule)."""
    x, w = np.polynomial.legendre.leggauss(16)
    speed0 = boundary_points_on(chart, seg, t).speed
    dt = ds / speed0
    for _ in range(iters):
        nodes = t[:, None] + 0.5 * dt[:, None] * (x[None, :] + 1.0)
        sp = boundary_points_on(chart, seg, nodes.ravel()).speed.reshape(nodes.shape)
        length = 0.5 * dt * (sp @ w)
        end_speed = boundary_points_on(chart, seg, t + dt).speed
        dt = dt - (length - ds) / end_speed
    return t + dt


def boundary_length(chart: Chart, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    return float(boundary_integral(chart, lambda bp: np.ones(len(bp.speed)), spec).value)


def _segment_residuals(chart, seg, t: np.ndarray, C: np.ndarray, h: float) -> np.ndarray:
    """Central-difference theta_s against the closed-form rhs at segment parameters t."""
    bp = boundary_points_on(chart, seg, t)
    fwd = boundary_points_on(chart, seg, _arclength_shift(chart, seg, t, h))
    bwd = boundary_points_on(chart, seg, _arclength_shift(chart, seg, t, -h))
    th0 = _turning_angle(bp, C)
    # wrap each one-sided increment so a branch cut of atan2 cannot leak in
    dplus = np.angle(np.exp(1j * (_turning_angle(fwd, C) - th0)))
    dminus = np.angle(np.exp(1j * (th0 - _turning_angle(bwd, C))))
    return np.abs((dplus + dminus) / (2.0 * h) - liouville_rhs(bp, C))


def liouville_residuals(
    chart: Chart, C, samples: int = LIOUVILLE_SAMPLES, step: float = LIOUVILLE_STEP
) -> tuple[np.ndarray, np.ndarray]:
    """Pointwise |theta_s - rhs| over a sweep of boundary points.

    theta_s is a central difference in arc length with step ``step`` times
    the boundary length. Returns ``(t, residual)`` with ``t`` the global
    boundary parameter of each sample.
    """
    C = _unit_vector(C)
    check_boundary_hypothesis(chart, C)
    segs = chart.boundary_segments()
    h = step * boundary_length(chart)
    ts, res = [], []
    counts = [samples // len(segs)] * len(segs)
    counts[0] += samples - sum(counts)
    for k, (seg, n) in enumerate(zip(segs, counts)):
        t = (np.arange(n) + 0.5) / n
        ts.append(k + t)
        res.append(_segment_residuals(chart, seg, t, C, h))
    return np.concatenate(ts), np.concatenate(res)


def liouville_residual(chart: Chart, C, t: float, step: float = LIOUVILLE_STEP) -> float:
    """|theta_s - rhs| at one global boundary parameter t."""
    C = _unit_vector(C)
    check_boundary_hypothesis(chart, C)
    segs = chart.boundary_segments()
    k = min(int(math.floor(t)), len(segs) - 1)
    h = step * boundary_length(chart)
    return float(_segment_residuals(chart, segs[k], np.array([t - k]), C, h)[0])


def check_liouville(
    chart: Chart, C, samples: int = LIOUVILLE_SAMPLES, tol: float = LIOUVILLE_TOL
) -> IdentityReport:
    """Max pointwise Liouville residual over the boundary sweep, compared with zero."""
    if chart.closed:
        return violated_report("liouville", "closed surface has no boundary", tol)
    try:
        t, res = liouville_residuals(chart, C, samples)
    except HypothesisViolation as exc:
        return violated_report("liouville", str(exc), tol)
    worst = float(np.max(res))
    status = PASS if worst <= tol else FAIL
    return IdentityReport(
        "liouville", worst, 0.0, worst, tol, None, None, status,
        details={"samples": int(len(res)), "worst_t": float(t[int(np.argmax(res))]), "C": [float(c) for c in C]},
    )


# --------------------------------------------------------------------------
# Gauss-Bonnet


def gauss_bonnet_integrand(chart: Chart, C, uv) -> tuple[np.ndarray, np.ndarray]:
    """Curvature-identity integrand for V = (C.N)/(1-(C.N)^2) C, and K.

    V depends on the point only through N, so its derivatives follow from
    the jet-computed dN. Returns ``(integrand, K)``; the integrand equals -K.
    """
    C = _unit_vector(C)
    fp = frame_at(chart, np.atleast_2d(np.asarray(uv, dtype=float)))
    cn = _dot(C, fp.N)
    one_minus = 1.0 - cn**2
    if np.any(one_minus < INTEGRAND_DEGENERACY):
        raise HypothesisViolation("1 - (C.N)^2 is numerically zero at a requested point")
    phi = cn / one_minus
    dphi = (1.0 + cn**2) / one_minus**2
    Np = fp.jet.dN(fp.P)
    Nq = fp.jet.dN(fp.Q)
    # V_p . P = phi'(C.N) (C . N_p) (C . P)
    vpP = dphi * _dot(C, Np) * _dot(C, fp.P)
    vqQ = dphi * _dot(C, Nq) * _dot(C, fp.Q)
    vN = phi * cn
    integrand = fp.kappa2 * vpP + fp.kappa1 * vqQ + 2.0 * fp.K * vN
    return integrand, fp.K


def gauss_bonnet_surface_term(chart: Chart, C, uv) -> np.ndarray:
    """Closed-form surface term for the same V, after the Liouville correction's sign."""
    C = _unit_vector(C)
    fp = frame_at(chart, np.atleast_2d(np.asarray(uv, dtype=float)))
    cn = _dot(C, fp.N)
    one_minus = 1.0 - cn**2
    tangential = _dot(C, fp.P) ** 2 + _dot(C, fp.Q) ** 2
    return (1.0 + cn**2) / one_minus**2 * tangential * fp.K - 2.0 * cn**2 / one_minus * fp.K


def gauss_bonnet_integrand_identity(chart: Chart, C, uv) -> float | np.ndarray:
    """|surface term - K| where the surface term is minus the curvature-identity integrand.

    The correction term of Liouville's formula enters the boundary sum with a
    minus sign, so the surface integrand it produces is the negated
    integrand of the curvature identity.
    """
    integrand, K = gauss_bonnet_integrand(chart, C, uv)
    diff = np.abs(-integrand - K)
    return float(diff[0]) if np.ndim(uv) == 1 else diff


def total_geodesic_curvature(chart: Chart, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegralResult:
    """Integral of kappa_g ds plus the turning angles at any corners."""
    return boundary_integral(chart, lambda bp: bp.kappa_g, spec) + sum(corner_angles(chart))


def check_gauss_bonnet(
    chart: Chart, spec: QuadratureSpec = DEFAULT_SPEC, tol: float = DEFAULT_TOL
) -> IdentityReport:
    if chart.euler_characteristic is None:
        raise ValueError("chart has no declared Euler characteristic")
    kg = total_geodesic_curvature(chart, spec)
    K = surface_integral(chart, lambda fp: fp.K, spec)
    rhs = IntegralResult.exact(2.0 * math.pi * chart.euler_characteristic)
    details = {"boundary": float(kg.value), "curvature": float(K.value), "corners": len(corner_angles(chart))}
    return make_report("gauss-bonnet", kg + K, rhs, spec, tol, details)


# --------------------------------------------------------------------------
# Tangent fields


def _require_nonvanishing(V: np.ndarray, where: np.ndarray, what: str) -> None:
    mag = np.linalg.norm(V, axis=-1)
    scale = float(np.max(mag)) if len(mag) else 0.0
    bad = ~(mag > 1e-10 * max(scale, 1e-300))
    if np.any(bad):
        raise FieldVanishesError(f"tangent field vanishes {what} at uv={where[np.argmax(bad)].tolist()}")


def _field_on_boundary(V: TangentField, bp: BoundaryPoint):
    val, vu, vv = V.evaluate_on(bp.jet)
    vs = vu * bp.uv_s[:, 0:1] + vv * bp.uv_s[:, 1:2]
    return val, vs


def _index_term(V: TangentField):
    def line(bp):
        val, vs = _field_on_boundary(V, bp)
        _require_nonvanishing(val, bp.uv, "on the boundary")
        return _dot(np.cross(val, bp.N), vs) / _dot(val, val)

    return line


def check_unit_tangent_identity(
    chart: Chart, V: TangentField, spec: QuadratureSpec = DEFAULT_SPEC, tol: float = DEFAULT_TOL
) -> IdentityReport:
    """(U x N) . dU around the boundary against total curvature, for U = V/|V|."""

    def line(bp):
        val, vs = _field_on_boundary(V, bp)
        _require_nonvanishing(val, bp.uv, "on the boundary")
        mag = np.linalg.norm(val, axis=-1, keepdims=True)
        U = val / mag
        Us = vs / mag - U * _dot(U, vs)[:, None] / mag
        return _dot(np.cross(U, bp.N), Us)

    def area(fp):
        _require_nonvanishing(V.evaluate_on(fp.jet)[0], fp.uv, "on the patch")
        return fp.K

    return make_report(
        "unit-tangent", boundary_integral(chart, line, spec), surface_integral(chart, area, spec), spec, tol
    )


def _indices(chart, V, sings, radius, samples) -> tuple[int, dict]:
    found = []
    for s in sings:
        k = field_index(chart, V, s, radius=radius, samples=samples)
        if s.declared is not None and s.declared != k:
            raise ValueError(f"declared index {s.declared} at {s.uv} but computed {k}")
        found.append(k)
    return sum(found), {"indices": found}


def check_index_identity(
    chart: Chart,
    V: TangentField,
    sings: Sequence[SingularitySpec],
    spec: QuadratureSpec = DEFAULT_SPEC,
    tol: float = DEFAULT_TOL,
    radius: float = DEFAULT_INDEX_RADIUS,
    samples: int = DEFAULT_INDEX_SAMPLES,
) -> IdentityReport:
    """Boundary integral of (V x N) . dV / |V|^2 against total curvature minus 2 pi times the index sum."""
    total, details = _indices(chart, V, sings, radius, samples)
    lhs = boundary_integral(chart, _index_term(V), spec)
    rhs = surface_integral(chart, lambda fp: fp.K, spec) - 2.0 * math.pi * total
    return make_report("index", lhs, rhs, spec, tol, details)


def check_poincare_hopf(
    chart: Chart,
    V: TangentField,
    sings: Sequence[SingularitySpec],
    spec: QuadratureSpec = DEFAULT_SPEC,
    tol: float = DEFAULT_TOL,
    radius: float = DEFAULT_INDEX_RADIUS,
    samples: int = DEFAULT_INDEX_SAMPLES,
) -> IdentityReport:
    """chi minus the index sum against the boundary terms over 2 pi."""
    if chart.euler_characteristic is None:
        raise ValueError("chart has no declared Euler characteristic")
    total, details = _indices(chart, V, sings, radius, samples)
    lhs = IntegralResult.exact(float(chart.euler_characteristic - total))
    boundary = boundary_integral(chart, _index_term(V), spec) + total_geodesic_curvature(chart, spec)
    return make_report("poincare-hopf", lhs, boundary / (2.0 * math.pi), spec, tol, details)


# --------------------------------------------------------------------------
# Difference-of-curvature identities


def _hessian_pq(hess: np.ndarray, fp: FramedPoint) -> np.ndarray:
    gap = fp.kappa2 - fp.kappa1
    umb = np.abs(gap) <= UMBILIC_REL * (1.0 + np.abs(fp.kappa1) + np.abs(fp.kappa2))
    val = gap * _dot(_matvec(hess, fp.P), fp.Q)
    return np.where(umb, 0.0, val)


def check_hessian_identities(
    chart: Chart, F: ScalarField, spec: QuadratureSpec = DEFAULT_SPEC, tol: float = DEFAULT_TOL
) -> list[IdentityReport]:
    """grad F(X) . dN and grad F(N) . dX against the curvature-gap Hessian terms."""

    def line1(bp):
        return _dot(F.evaluate(bp.X)[1], bp.N_s)

    def area1(fp):
        return -_hessian_pq(F.evaluate(fp.X)[2], fp)

    def line2(bp):
        return _dot(F.evaluate(bp.N)[1], bp.X_s)

    def area2(fp):
        return _hessian_pq(F.evaluate(fp.N)[2], fp)

    return [
        make_report("hessian1", boundary_integral(chart, line1, spec), surface_integral(chart, area1, spec), spec, tol),
        make_report("hessian2", boundary_integral(chart, line2, spec), surface_integral(chart, area2, spec), spec, tol),
    ]
