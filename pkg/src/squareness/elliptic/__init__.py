"""Elliptic curves over Q: models, twists, local data, torsion, periods, L-values."""

from .curve import (
    BadReduction,
    EllipticCurve,
    SingularCurve,
    hypothesis_star_star,
    minimal_model,
    quadratic_twist,
    short_model,
    short_models,
    transform,
)
from .lseries import RankPositive, RoundingAmbiguous, numeric_L1, root_number_and_L1, sha_an, twist_an
from .periods import PrecisionLoss, RealPeriodData, real_period_quad, real_periods
from .points import an_list, ap, ap_any, count_points, torsion_bound, torsion_order
from .tate import LocalData, tate_local

__all__ = [
    "BadReduction", "EllipticCurve", "LocalData", "PrecisionLoss", "RankPositive",
    "RealPeriodData", "RoundingAmbiguous", "SingularCurve", "an_list", "ap", "ap_any",
    "count_points", "hypothesis_star_star", "minimal_model", "numeric_L1",
    "quadratic_twist", "real_period_quad", "real_periods", "root_number_and_L1",
    "sha_an", "short_model", "short_models", "tate_local", "torsion_bound",
    "torsion_order", "transform", "twist_an",
]
