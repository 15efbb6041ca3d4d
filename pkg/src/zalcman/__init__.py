"""Numerical checks of sharp bounds for lam*a_m*a_n - a_{m+n-1} on classes of analytic functions."""

__version__ = "0.1.0"

from .classes import (  # noqa: E402
    HULL_CONVEX,
    HULL_STARLIKE,
    HURWITZ,
    KOEBE_FAMILY,
    NW,
    ClassSpec,
    ClassTag,
    coefficient_A,
    extremal,
    hull_convex_alpha,
    membership_residual,
    sample,
)
from .functional import (  # noqa: E402
    EquivalenceInstance,
    FunctionalSpec,
    caratheodory_checks,
    lemma_equivalence,
    sharp_bound,
    sum_form_check,
    zalcman,
)
from .herglotz import HerglotzMeasure, caratheodory_coefficients, sample_measure  # noqa: E402
from .series import PowerSeries, TruncatedSeries, differentiate, evaluate, multiply, rotate  # noqa: E402

__all__ = [
    "ClassSpec",
    "ClassTag",
    "EquivalenceInstance",
    "FunctionalSpec",
    "HULL_CONVEX",
    "HULL_STARLIKE",
    "HURWITZ",
    "HerglotzMeasure",
    "KOEBE_FAMILY",
    "NW",
    "PowerSeries",
    "TruncatedSeries",
    "caratheodory_checks",
    "caratheodory_coefficients",
    "coefficient_A",
    "differentiate",
    "evaluate",
    "extremal",
    "hull_convex_alpha",
    "lemma_equivalence",
    "membership_residual",
    "multiply",
    "rotate",
    "sample",
    "sample_measure",
    "sharp_bound",
    "sum_form_check",
    "zalcman",
]
