"""g2forge: exterior calculus, torsion and Laplacian-flow tooling for
left-invariant G2-structures on 7-dimensional Lie algebras."""

__version__ = "0.1.0"

from .errors import (
    DegreeError,
    ExactnessLost,
    G2ForgeError,
    NotALieAlgebra,
    NotClosed,
    NotPositive,
    NumericalBlowup,
    ParseError,
    PositivityLoss,
    SingularMatrix,
    ToleranceExceeded,
)
from .exterior import KForm, Vector, format_form, inner_product, interior, parse_form, wedge
from .g2core import (
    G2Structure,
    Metric,
    StructureClass,
    TorsionData,
    classify_structure,
    coderivative,
    erp_residual,
    hodge_laplacian,
    hodge_star,
    metric_from_phi,
    torsion,
)
from .liealg import (
    AlgebraReport,
    LieAlgebra,
    StructureEquationSet,
    brackets_from_differential,
    ce_differential,
    classify,
    differential_from_brackets,
    format_salamon,
    load_lie,
    parse_salamon,
)
from .scalars import EXACT, FLOAT, FloatBackend, get_backend

__all__ = [
    "DegreeError",
    "ExactnessLost",
    "G2ForgeError",
    "NotALieAlgebra",
    "NotClosed",
    "NotPositive",
    "NumericalBlowup",
    "ParseError",
    "PositivityLoss",
    "SingularMatrix",
    "ToleranceExceeded",
    "KForm",
    "Vector",
    "format_form",
    "inner_product",
    "interior",
    "parse_form",
    "wedge",
    "G2Structure",
    "Metric",
    "StructureClass",
    "TorsionData",
    "classify_structure",
    "coderivative",
    "erp_residual",
    "hodge_laplacian",
    "hodge_star",
    "metric_from_phi",
    "torsion",
    "AlgebraReport",
    "LieAlgebra",
    "StructureEquationSet",
    "brackets_from_differential",
    "ce_differential",
    "classify",
    "differential_from_brackets",
    "format_salamon",
    "load_lie",
    "parse_salamon",
    "EXACT",
    "FLOAT",
    "FloatBackend",
    "get_backend",
    "__version__",
]
