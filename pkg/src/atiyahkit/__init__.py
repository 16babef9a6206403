"""Exact Atiyah-class computations for Lie algebra triads."""

from .linalg import Matrix, Subspace, QuotientChart, AffineSolutionSet, solve_affine, quotient_chart
from .lie import LieAlgebra, Representation, LiePair, make_lie_pair, bott_connection, eth
from .atiyah import Connection, Triad, curvature, extend_connection, atiyah_cocycle, is_a_compatible
from .cohomology import ce_complex, atiyah_class, compatible_connection_solve
from .report import Report

__version__ = "0.1.0"

__all__ = [
    "Matrix", "Subspace", "QuotientChart", "AffineSolutionSet", "solve_affine", "quotient_chart",
    "LieAlgebra", "Representation", "LiePair", "make_lie_pair", "bott_connection", "eth",
    "Connection", "Triad", "curvature", "extend_connection", "atiyah_cocycle", "is_a_compatible",
    "ce_complex", "atiyah_class", "compatible_connection_solve", "Report",
]
