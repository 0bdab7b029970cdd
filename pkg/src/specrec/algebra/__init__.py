"""Exact arithmetic foundation: scalars, polynomials, rational functions,
truncated Laurent/eps series and pole-sum multidifferentials."""

from .scalars import ExactScalar, LogScalar, QQ, is_zero
from .poly import Poly, gcd, rational_roots
from .ratfun import RationalFunction
from .series import (EpsSeries, LaurentSeries, TruncationError, exp_series,
                     log1p_series, series_arith, series_reverse)
from .multidiff import MultiDifferential, TensorSeries
from . import linalg

__all__ = [
    "ExactScalar", "LogScalar", "QQ", "is_zero",
    "Poly", "gcd", "rational_roots",
    "RationalFunction",
    "EpsSeries", "LaurentSeries", "TruncationError",
    "exp_series", "log1p_series", "series_arith", "series_reverse",
    "MultiDifferential", "TensorSeries",
    "linalg",
]
