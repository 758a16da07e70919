"""Numerical checks of integral and pointwise identities on parametric surfaces."""

from .catalog import catalog_list, lookup
from .expr import Expression, Jet2, eval_jet2, parse
from .fields import AmbientField, ScalarField, SingularitySpec, TangentField, field_index
from .geometry import Chart, Disk, Rectangle, boundary_point, frame_at
from .identities import IdentityReport
from .quadrature import QuadratureSpec, boundary_integral, surface_integral

__all__ = [
    "AmbientField",
    "Chart",
    "Disk",
    "Expression",
    "IdentityReport",
    "Jet2",
    "QuadratureSpec",
    "Rectangle",
    "ScalarField",
    "SingularitySpec",
    "TangentField",
    "boundary_integral",
    "boundary_point",
    "catalog_list",
    "eval_jet2",
    "field_index",
    "frame_at",
    "lookup",
    "parse",
    "surface_integral",
]
__version__ = "0.1.0"
