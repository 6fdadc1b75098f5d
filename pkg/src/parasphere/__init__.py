"""Clifford and division-algebra tools for sphere-valued local-realistic correlation models."""

from .clifford import (
    BladeIndex,
    HiddenState,
    Multivector,
    bivector_of,
    geometric_product,
    grade_project,
    handed_product,
    norm,
    pseudoscalar,
    reverse,
)
from .division import Octonion, Quaternion, cross7_xi, structure_functions
from .parallel import CurvatureReport, TangentFrame, TorsionReport, curvature_check, s3_frame, s7_frame
from .quantum import GhzAngles, Ket, ghz4_expectation, hardy_find_directions
from .models import (
    CorrelationEstimate,
    EnsembleSpec,
    MeasurementFunction,
    epr_correlation,
    ghz_correlation,
    linear_model_correlation,
)
from .chsh import (
    CHSHReport,
    DirectionQuadruple,
    ScanConfig,
    bound_s3,
    chsh_string,
    maximize_chsh,
    scan_inequality,
)

__version__ = "0.1.0"

__all__ = [
    "BladeIndex", "HiddenState", "Multivector", "bivector_of", "geometric_product", "grade_project",
    "handed_product", "norm", "pseudoscalar", "reverse",
    "Octonion", "Quaternion", "cross7_xi", "structure_functions",
    "CurvatureReport", "TangentFrame", "TorsionReport", "curvature_check", "s3_frame", "s7_frame",
    "GhzAngles", "Ket", "ghz4_expectation", "hardy_find_directions",
    "CorrelationEstimate", "EnsembleSpec", "MeasurementFunction", "epr_correlation", "ghz_correlation",
    "linear_model_correlation",
    "CHSHReport", "DirectionQuadruple", "ScanConfig", "bound_s3", "chsh_string", "maximize_chsh",
    "scan_inequality",
    "__version__",
]
