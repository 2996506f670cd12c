"""Differentials of the curve fibrations and the degree of their product map.

For a curve E with vertex record v, the differential of the fibration onto E
is ``N_E = -(Id + sigma*_E) = R_E - Id``, which in closed form is
``x -> -2 phi(x) p_E``.  Summing five of them gives the differential of the
composite map from the Albanese variety to itself, whose degree is the norm
of its determinant.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .geometry import VertexRecord
from .linalg import Matrix


@dataclass(frozen=True)
class IsogenyMatrix:
    matrix: Matrix
    source_curve: str


def n_matrix(v: VertexRecord, label: str = "") -> IsogenyMatrix:
    return IsogenyMatrix(linalg.mat_sub(v.reflection, linalg.identity(len(v.reflection))), label)


def differential_sum(curves: Sequence[IsogenyMatrix]) -> Matrix:
    if len(curves) != 5:
        raise ValueError(f"the differential needs exactly 5 curve matrices, got {len(curves)}")
    total = linalg.zeros(5, 5)
    for c in curves:
        total = linalg.mat_add(total, c.matrix)
    return total


def degree_norm(m: Matrix) -> Fraction:
    """``|det M|^2``, the field norm of the determinant."""
    return linalg.det(m).norm()
