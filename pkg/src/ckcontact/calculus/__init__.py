"""Differential calculus on coordinate charts."""
from . import ad
from .expr import CoefficientExpr, parse_coeff
from .fields import (
    Metric,
    OneForm,
    ScalarField,
    StructureTable,
    TwoForm,
    TwoTensor,
    VectorField,
    combine,
    components,
)
from .integrate import TimeDependentField, Trajectory, autonomous, integrate
from .linalg import solve
from .ops import (
    bracket_field,
    exterior_d,
    interior,
    lie_bracket,
    lie_derivative,
    lie_derivative_field,
    pullback_oneform,
    pullback_twotensor,
    verify_structure,
)

__all__ = [
    "ad", "CoefficientExpr", "parse_coeff", "Metric", "OneForm", "ScalarField",
    "StructureTable", "TwoForm", "TwoTensor", "VectorField", "combine", "components",
    "TimeDependentField", "Trajectory", "autonomous", "integrate", "solve",
    "bracket_field", "exterior_d", "interior", "lie_bracket", "lie_derivative",
    "lie_derivative_field", "pullback_oneform", "pullback_twotensor", "verify_structure",
]
