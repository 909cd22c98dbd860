"""Exact verification of splitting criteria for parabolic gradations of simple Lie algebras."""
from .chevalley import constants_for
from .grading import grade_type
from .quadric import classify_tangent_candidates, jet_kernel_dim, kernel_dim_bracket
from .rootsys import build_root_system
from .splitcheck import solve_splitting_equation, verify_case

__version__ = "0.1.0"

__all__ = [
    "build_root_system",
    "grade_type",
    "constants_for",
    "verify_case",
    "solve_splitting_equation",
    "jet_kernel_dim",
    "kernel_dim_bracket",
    "classify_tangent_candidates",
]
