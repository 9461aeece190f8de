"""Digital sequences over F2, exact Haar coefficients and discrepancy norms."""

from fractions import Fraction

from ._hodisc import (
    GeneratingMatrices,
    HaarTable,
    PointSet,
    ValidationError,
    build_table,
    generating_matrices,
    lift_check,
    minimal_sequence_t,
    minimal_t,
    norm,
    points,
    sequence_check,
    set_threads,
    study,
)

__all__ = [
    "GeneratingMatrices",
    "HaarTable",
    "PointSet",
    "ValidationError",
    "build_table",
    "coefficient",
    "generating_matrices",
    "lift_check",
    "minimal_sequence_t",
    "minimal_t",
    "norm",
    "points",
    "sequence_check",
    "set_threads",
    "study",
]


def coefficient(table, j, m):
    """Haar coefficient <D, h_{j,m}> as (counting, volume, value) fractions."""
    return tuple(Fraction(x) for x in table.coefficient(list(j), list(m)))
