"""``verify``: run identity checkers on a catalog surface or a definition file.

Exit codes: 0 when every selected check passes (a violated hypothesis is
not a failure), 1 when some identity fails, 2 for usage or schema errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import catalog
from .definitions import Definition, DefinitionError, load_definition
from .expr import ExprError, parse
from .fields import AMBIENT_VARS, AmbientField, FieldIndexError, ScalarField, TangentField
from .geometry import NORMAL, Chart, Disk, GeometryError, frame_at
from .identities import (
    DEFAULT_TOL,
    FAIL,
    HYPOTHESIS_VIOLATED,
    LIOUVILLE_TOL,
    PASS,
    FieldVanishesError,
    HypothesisViolation,
    IdentityReport,
    check_curvature_identity,
    check_divergence_identity,
    check_gauss_bonnet,
    check_hessian_identities,
    check_index_identity,
    check_liouville,
    check_minkowski,
    check_moment_identities,
    check_poincare_hopf,
    check_stokes_scalar,
    check_stokes_vector,
    check_unit_tangent_identity,
    gauss_bonnet_integrand_identity,
    violated_report,
)
from .quadrature import DEFAULT_SPEC, QuadratureError, QuadratureSpec

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CHECKER_IDS = (
    "stokes-scalar",
    "eq1",
    "eq3",
    "eq4",
    "moment-n-dx",
    "moment-n-dn",
    "moment-x-n-dx",
    "moment-x-n-dn",
    "minkowski1",
    "minkowski2",
    "liouville",
    "gb-integrand",
    "gauss-bonnet",
    "unit-tangent",
    "index",
    "poincare-hopf",
    "hessian1",
    "hessian2",
)
GROUPS = {
    "all": CHECKER_IDS,
    "moments": CHECKER_IDS[4:8],
    "minkowski": ("minkowski1", "minkowski2"),
    "hessian": ("hessian1", "hessian2"),
}
GB_INTEGRAND_POINTS = 50
GB_INTEGRAND_MAX_CN = 0.9
ERROR = "error"


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    surface: str
    fields: list[str] = field(default_factory=list)
    scalars: list[str] = field(default_factory=list)
    identities: list[str] = field(default_factory=lambda: ["all"])
    spec: QuadratureSpec = DEFAULT_SPEC
    tol: float | None = None
    directions: list[tuple[float, float, float]] = field(default_factory=list)
    format: str = "text"
    out: str | None = None
    seed: int = 0


def resolve_identities(names: list[str]) -> list[str]:
    selected: list[str] = []
    for name in names or ["all"]:
        ids = GROUPS.get(name, (name,) if name in CHECKER_IDS else None)
        if ids is None:
            raise UsageError(f"unknown identity {name!r}; choose from {', '.join(CHECKER_IDS + tuple(GROUPS))}")
        selected.extend(i for i in ids if i not in selected)
    # keep the canonical order so output does not depend on flag order
    return [i for i in CHECKER_IDS if i in selected]


def _split_top(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts]


@dataclass
class Inputs:
    chart: Chart
    fields: list[AmbientField]
    tangent: list[tuple[TangentField, list]]
    scalars: list[ScalarField]
    directions: list[tuple[float, float, float]]


def _field_from_token(tok: str, definition: Definition | None) -> tuple[AmbientField | None, TangentField | None]:
    if definition is not None and (tok in definition.fields or tok in definition.tangent_fields):
        return definition.fields.get(tok), definition.tangent_fields.get(tok)
    amb = catalog.ambient_field(tok) if tok in catalog.AMBIENT_PRESETS else None
    tan = catalog.tangent_field(tok) if tok in catalog.TANGENT_PRESETS else None
    if amb or tan:
        return amb, tan
    parts = _split_top(tok)
    if len(parts) != 3:
        raise UsageError(f"field {tok!r} is neither a preset nor three comma-separated expressions")
    try:
        return AmbientField(tuple(parse(p, AMBIENT_VARS) for p in parts), tok), None
    except ExprError as exc:
        raise UsageError(f"field {tok!r}: {exc}") from None


def _scalar_from_token(tok: str, definition: Definition | None) -> ScalarField:
    if definition is not None and tok in definition.scalars:
        return definition.scalars[tok]
    if tok in catalog.SCALAR_PRESETS:
        return catalog.scalar_field(tok)
    try:
        return ScalarField(parse(tok, AMBIENT_VARS), tok)
    except ExprError as exc:
        raise UsageError(f"scalar {tok!r}: {exc}") from None


def gather_inputs(config: RunConfig) -> Inputs:
    definition = None
    fields: list[AmbientField] = []
    tangent: list[tuple[TangentField, list]] = []
    if config.surface in catalog.CATALOG:
        entry = catalog.lookup(config.surface)
        chart = entry.chart
        scalar_names = config.scalars or list(entry.scalars)
        directions = config.directions or list(entry.directions)
        sings = {t.field: list(t.singularities) for t in entry.tangent}
        if config.fields:
            field_names = config.fields
        else:
            # entry defaults: ambient test fields and tangent fields are listed separately
            fields = [catalog.ambient_field(n) for n in entry.fields]
            tangent = [(catalog.tangent_field(t.field), list(t.singularities)) for t in entry.tangent]
            field_names = []
    else:
        path = Path(config.surface)
        if not path.suffix and not path.exists():
            raise UsageError(f"unknown surface {config.surface!r}; known: {', '.join(catalog.CATALOG)}")
        definition = load_definition(path)
        chart = definition.chart
        field_names = config.fields or list(dict.fromkeys([*definition.fields, *definition.tangent_fields]))
        scalar_names = config.scalars or list(definition.scalars)
        directions = config.directions or definition.directions
        sings = definition.singularities

    for tok in field_names:
        amb, tan = _field_from_token(tok, definition)
        if amb is not None:
            fields.append(amb)
        if tan is not None:
            tangent.append((tan, sings.get(tok, [])))
    scalars = [_scalar_from_token(s, definition) for s in scalar_names]
    return Inputs(chart, fields, tangent, scalars, [tuple(map(float, d)) for d in directions])


def _random_sweep(chart: Chart, rng: np.random.Generator, n: int):
    d = chart.domain
    if isinstance(d, Disk):
        r = d.radius * np.sqrt(rng.uniform(0.0, 1.0, n))
        a = rng.uniform(0.0, 2 * math.pi, n)
        return np.stack([d.center[0] + r * np.cos(a), d.center[1] + r * np.sin(a)], axis=-1)
    return np.stack([rng.uniform(d.u_min, d.u_max, n), rng.uniform(d.v_min, d.v_max, n)], axis=-1)


def _gb_integrand_report(chart: Chart, seed: int, tol: float) -> IdentityReport:
    rng = np.random.default_rng(seed)
    uv = _random_sweep(chart, rng, GB_INTEGRAND_POINTS)
    N = frame_at(chart, uv).N
    worst = 0.0
    for k in range(len(uv)):
        while True:
            C = rng.normal(size=3)
            C /= np.linalg.norm(C)
            if abs(C @ N[k]) < GB_INTEGRAND_MAX_CN:
                break
        worst = max(worst, gauss_bonnet_integrand_identity(chart, C, uv[k]))
    return IdentityReport(
        "gb-integrand", worst, 0.0, worst, tol, None, None, PASS if worst <= tol else FAIL,
        details={"points": GB_INTEGRAND_POINTS, "seed": seed},
    )


def _label(report: IdentityReport, **inputs) -> IdentityReport:
    report.details = {"inputs": {k: v for k, v in inputs.items()}, **report.details}
    return report


def _error_report(name: str, exc: Exception, tol: float, **inputs) -> IdentityReport:
    rep = IdentityReport(name, None, None, None, tol, None, None, ERROR, details={"reason": str(exc)})
    return _label(rep, **inputs)


def execute(config: RunConfig) -> tuple[list[IdentityReport], Inputs]:
    ids = resolve_identities(config.identities)
    inputs = gather_inputs(config)
    chart, spec = inputs.chart, config.spec
    tol = config.tol if config.tol is not None else DEFAULT_TOL
    explicit = set(config.identities) - {"all"}
    reports: list[IdentityReport] = []

    def need(cond: bool, ident: str, what: str) -> bool:
        if not cond and ident in explicit:
            raise UsageError(f"identity {ident!r} needs {what}")
        return cond

    def run(name, fn, **labels):
        try:
            out = fn()
        except HypothesisViolation as exc:
            out = _label(violated_report(name, str(exc), tol, spec), **labels)
        except (FieldVanishesError, FieldIndexError, QuadratureError, GeometryError, ExprError, ValueError) as exc:
            out = _error_report(name, exc, tol, **labels)
        for r in out if isinstance(out, list) else [out]:
            if r.identity in ids:
                reports.append(_label(r, **labels) if labels and "inputs" not in r.details else r)

    if "stokes-scalar" in ids and need(bool(inputs.scalars), "stokes-scalar", "a scalar"):
        sc = inputs.scalars
        pairs = [(sc[i], sc[j]) for i in range(len(sc)) for j in range(i + 1, len(sc))] or [(sc[0], sc[0])]
        for f, g in pairs:
            run("stokes-scalar", lambda: check_stokes_scalar(chart, f, g, spec, tol), f=f.name, g=g.name)
    for ident, fn in (("eq1", None), ("eq3", check_divergence_identity), ("eq4", check_curvature_identity)):
        if ident in ids and need(bool(inputs.fields), ident, "an ambient field"):
            for V in inputs.fields:
                if ident == "eq1":
                    run(ident, lambda: check_stokes_vector(chart, V, NORMAL, spec, tol), V=V.name, W="N")
                else:
                    run(ident, lambda: fn(chart, V, spec, tol), V=V.name)
    if any(i.startswith("moment") for i in ids):
        run("moments", lambda: check_moment_identities(chart, spec, tol))
    if "minkowski1" in ids or "minkowski2" in ids:
        run("minkowski", lambda: check_minkowski(chart, spec, tol))
    if "liouville" in ids and need(bool(inputs.directions) and not chart.closed, "liouville", "a direction and a boundary"):
        for C in inputs.directions:
            run("liouville", lambda: check_liouville(chart, C, tol=config.tol or LIOUVILLE_TOL), C=list(C))
    if "gb-integrand" in ids:
        run("gb-integrand", lambda: _gb_integrand_report(chart, config.seed, tol))
    if "gauss-bonnet" in ids and need(chart.euler_characteristic is not None, "gauss-bonnet", "a declared chi"):
        run("gauss-bonnet", lambda: check_gauss_bonnet(chart, spec, tol))
    if "unit-tangent" in ids and need(bool(inputs.tangent), "unit-tangent", "a tangent field"):
        for V, sings in inputs.tangent:
            if not sings:
                run("unit-tangent", lambda: check_unit_tangent_identity(chart, V, spec, tol), V=V.name)
    if "index" in ids and need(bool(inputs.tangent), "index", "a tangent field"):
        for V, sings in inputs.tangent:
            run("index", lambda: check_index_identity(chart, V, sings, spec, tol), V=V.name)
    if "poincare-hopf" in ids and need(bool(inputs.tangent) and chart.euler_characteristic is not None,
                                       "poincare-hopf", "a tangent field and a declared chi"):
        for V, sings in inputs.tangent:
            run("poincare-hopf", lambda: check_poincare_hopf(chart, V, sings, spec, tol), V=V.name)
    if ("hessian1" in ids or "hessian2" in ids) and need(bool(inputs.scalars), "hessian", "a scalar"):
        for F in inputs.scalars:
            run("hessian", lambda: check_hessian_identities(chart, F, spec, tol), F=F.name)
    return reports, inputs


# --------------------------------------------------------------------------
# output


def _fmt(x) -> str:
    if x is None:
        return "-"
    if np.ndim(x) == 0:
        return f"{float(x):.12g}"
    return "(" + ", ".join(f"{float(c):.12g}" for c in np.asarray(x)) + ")"


def render(reports: list[IdentityReport], fmt: str, surface: str) -> str:
    if fmt == "json":
        doc = {"surface": surface, "reports": [r.to_record() for r in reports]}
        return json.dumps(doc, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["identity", "inputs", "status", "lhs", "rhs", "residual", "est_error", "tolerance"])
        for r in reports:
            rec = r.to_record()
            inputs = json.dumps(r.details.get("inputs", {}), sort_keys=True)
            vec = lambda v: ";".join(map(repr, v)) if isinstance(v, list) else ("" if v is None else repr(v))
            w.writerow([rec["identity"], inputs, rec["status"], vec(rec["lhs"]), vec(rec["rhs"]),
                        vec(rec["residual"]), vec(rec["est_error"]), rec["tolerance"]])
        return buf.getvalue()
    lines = [f"surface: {surface}"]
    for r in reports:
        inputs = r.details.get("inputs")
        tag = "" if not inputs else " [" + ", ".join(f"{k}={v}" for k, v in inputs.items()) + "]"
        lines.append(
            f"{r.status.upper():<20} {r.identity}{tag}: lhs={_fmt(r.lhs)} rhs={_fmt(r.rhs)} "
            f"residual={_fmt(r.residual)} est_error={_fmt(r.est_error)}"
        )
        if r.status in (ERROR, HYPOTHESIS_VIOLATED):
            lines.append(f"{'':<20} {r.details.get('reason', '')}")
    return "\n".join(lines) + "\n"


def summarize(reports: list[IdentityReport]) -> str:
    counts = {s: sum(r.status == s for r in reports) for s in (PASS, FAIL, ERROR, HYPOTHESIS_VIOLATED)}
    text = ", ".join(f"{n} {s}" for s, n in counts.items() if n)
    bad = [r for r in reports if r.status in (FAIL, ERROR)]
    lines = [f"{len(reports)} checks: {text or 'none'}"]
    for r in bad:
        lines.append(f"  {r.status}: {r.identity} residual={_fmt(r.residual)} {r.details.get('reason', '')}".rstrip())
    return "\n".join(lines)


def run(config: RunConfig) -> int:
    """Execute the configured checks, write the report, return the exit code."""
    try:
        reports, _ = execute(config)
    except (UsageError, DefinitionError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(reports, config.format, config.surface)
    if config.out:
        Path(config.out).write_text(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()
    failed = any(r.status in (FAIL, ERROR) for r in reports)
    if failed or config.format == "text" or config.out:
        print(summarize(reports), file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def _direction(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"direction must be x,y,z, got {text!r}")
    v = np.array([float(p) for p in parts])
    n = np.linalg.norm(v)
    if n == 0:
        raise argparse.ArgumentTypeError("direction must be nonzero")
    return tuple((v / n).tolist())


def _panels(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) == 1:
        return int(parts[0]), int(parts[0])
    if len(parts) == 2:
        return int(parts[0]), int(parts[1])
    raise argparse.ArgumentTypeError("panels must be N or NU,NV")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="verify", description=__doc__.splitlines()[0])
    p.add_argument("--surface", required=True, help="catalog name or path to a JSON definition file")
    p.add_argument("--field", action="append", default=[], help="field preset, file field name, or 'vx,vy,vz'")
    p.add_argument("--scalar", action="append", default=[], help="scalar preset, file scalar name, or expression")
    p.add_argument("--identity", action="append", default=[], help="checker id or group (default: all)")
    p.add_argument("--direction", action="append", default=[], type=_direction, help="unit vector C as x,y,z")
    p.add_argument("--panels", type=_panels, help="surface panels, N or NU,NV")
    p.add_argument("--nodes", type=int, help="Gauss nodes per panel (2-32)")
    p.add_argument("--boundary-panels", type=int, help="panels per boundary segment")
    p.add_argument("--tol", type=float, help="relative tolerance")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized sweeps")
    p.add_argument("--list", action="store_true", help="list catalog surfaces and exit")
    return p


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if "--list" in argv:
        for e in catalog.catalog_list():
            print(f"{e.name:<16} chi={e.chart.euler_characteristic}  {e.description}")
        return EXIT_OK
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        d = DEFAULT_SPEC
        pu, pv = args.panels or (d.panels_u, d.panels_v)
        spec = QuadratureSpec(pu, pv, args.nodes or d.nodes_per_panel, args.boundary_panels or d.boundary_panels)
        config = RunConfig(
            surface=args.surface,
            fields=args.field,
            scalars=args.scalar,
            identities=args.identity or ["all"],
            spec=spec,
            tol=args.tol,
            directions=args.direction,
            format=args.format,
            out=args.out,
            seed=args.seed,
        )
        resolve_identities(config.identities)
    except (ValueError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
