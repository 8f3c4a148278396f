"""Supersingular module of prime level via a maximal order in the definite quaternion algebra."""

from .ideals import IdealClassSet, LeftIdeal, MassOverflow, ideal_classes, neighbours, right_order
from .module import (
    BrandtModule,
    BrandtProjection,
    EigenvalueMismatch,
    GrossVector,
    NotCoprime,
    ZeroVector,
    brandt_index,
    brandt_matrix,
    build_brandt,
    embedding_numbers,
    gross_vector,
    match_factor,
    winding_numerator,
)
from .quaternion import Algebra, NotPrime, QuaternionData, build_quaternion, short_vectors, theta_counts

__all__ = [
    "Algebra", "BrandtModule", "BrandtProjection", "EigenvalueMismatch", "GrossVector",
    "IdealClassSet", "LeftIdeal", "MassOverflow", "NotCoprime", "NotPrime", "QuaternionData",
    "ZeroVector", "brandt_index", "brandt_matrix", "build_brandt", "build_quaternion",
    "embedding_numbers", "gross_vector", "ideal_classes", "match_factor", "neighbours",
    "right_order", "short_vectors", "theta_counts", "winding_numerator",
]
