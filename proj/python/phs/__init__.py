"""Port-Hamiltonian structure checks, mimetic builders and midpoint simulation."""

import json as _json

from ._core import (
    CoefficientField,
    DimensionMismatch,
    ElasticStiffness,
    GridSpec,
    InvalidArgument,
    NumericalError,
    StructuralError,
    assemble_extended,
    build_beam_1d,
    build_constitutive,
    build_elasticity_2d,
    build_maxwell_3d,
    build_wave,
    check_skew_symmetric_like,
    convergence_order,
    graph_subspace,
    green_residual,
    green_scale,
    hamiltonian,
    is_dirac,
    simulate,
)
from ._core import verify as _verify


def verify(target, n=0, corrupt=""):
    """Structural verification report for a physics id or config path, as a dict."""
    return _json.loads(_verify(target, n, corrupt))


__all__ = [
    "CoefficientField",
    "DimensionMismatch",
    "ElasticStiffness",
    "GridSpec",
    "InvalidArgument",
    "NumericalError",
    "StructuralError",
    "assemble_extended",
    "build_beam_1d",
    "build_constitutive",
    "build_elasticity_2d",
    "build_maxwell_3d",
    "build_wave",
    "check_skew_symmetric_like",
    "convergence_order",
    "graph_subspace",
    "green_residual",
    "green_scale",
    "hamiltonian",
    "is_dirac",
    "simulate",
    "verify",
]
