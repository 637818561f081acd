"""wedgesurf: exact wedge products of polytopes and the surfaces inside them.

The package builds inequality systems for wedge products P wedge Q and their
deformed relatives, enumerates their vertices exactly over the rationals,
extracts the regular surfaces sitting in the 2-skeleton of C_p wedge a
simplex, certifies which faces survive projection to R^4 / R^3, and derives
dual surface realizations and moduli dimension bounds.  All geometric
decisions are made in exact rational arithmetic.
"""

from __future__ import annotations

__version__ = "0.1.0"

from .exactkernel import (
    SingularMatrixError,
    SpanCertificate,
    SpanResult,
    affine_rank,
    nonneg_combination,
    positively_spans,
    solve_square,
)

__all__ = [
    "SingularMatrixError",
    "SpanCertificate",
    "SpanResult",
    "affine_rank",
    "nonneg_combination",
    "positively_spans",
    "solve_square",
]
