"""The generalized Zalcman functional lam*a_m*a_n - a_{m+n-1} and its sharp bounds.

Each class carries two equivalent statements: a bound on |Phi| valid for every
complex lam (the "max form"), and one lam-free coefficient inequality (the
"sum form").  Both are coded literally here so that they can be checked
against each other.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .classes import ClassSpec, ClassTag, coefficient_A
from .errors import InsufficientTruncation, InvalidArgument, Unsupported
from .series import TruncatedSeries

EQUALITY_TOL = 1e-12
SAMPLE_TOL = 1e-9


@dataclass(frozen=True)
class FunctionalSpec:
    lam: complex
    m: int
    n: int

    def __post_init__(self):
        object.__setattr__(self, "lam", complex(self.lam))
        if int(self.m) != self.m or int(self.n) != self.n or self.m < 2 or self.n < 2:
            raise InvalidArgument(f"need integers m, n >= 2, got ({self.m}, {self.n})")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "n", int(self.n))

    @property
    def top(self) -> int:
        """Index m+n-1 of the subtracted coefficient."""
        return self.m + self.n - 1


@dataclass(frozen=True)
class EquivalenceInstance:
    a: complex
    b: complex
    C: float
    M: float

    def __post_init__(self):
        if not (self.C > 0 and self.M > 0):
            raise InvalidArgument("C and M must be positive")


@dataclass(frozen=True)
class BoundReport:
    value: float
    bound: float
    slack: float
    residual: float


def _check_order(order: int, m: int, n: int):
    if order < m + n - 1:
        raise InsufficientTruncation(f"order {order} < m+n-1 = {m + n - 1}")


def zalcman(f: TruncatedSeries, spec: FunctionalSpec) -> complex:
    _check_order(f.order, spec.m, spec.n)
    return spec.lam * f[spec.m] * f[spec.n] - f[spec.top]


def zalcman_values(coeffs: np.ndarray, lams, m: int, n: int) -> np.ndarray:
    """|Phi| for every row of ``coeffs`` against every lam; shape (rows, lams)."""
    a = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    _check_order(a.shape[1], m, n)
    lams = np.asarray(lams, dtype=complex).ravel()
    prod = a[:, m - 1] * a[:, n - 1]
    return np.abs(lams[None, :] * prod[:, None] - a[:, m + n - 2][:, None])


# --- sharp bounds -----------------------------------------------------------


def _supported(spec: ClassSpec):
    if spec.tag is ClassTag.KOEBE:
        raise Unsupported("no sharp bound is defined for the Koebe family; use hull_starlike")


def sharp_bound(spec: ClassSpec, fspec: FunctionalSpec) -> float:
    """Right-hand side of the max-form inequality for ``spec``."""
    return float(sharp_bounds(spec, [fspec.lam], fspec.m, fspec.n)[0])


def sharp_bounds(spec: ClassSpec, lams, m: int, n: int) -> np.ndarray:
    _supported(spec)
    lam = np.asarray(lams, dtype=complex).ravel()
    s = m + n - 1
    tag = spec.tag
    if tag is ClassTag.HURWITZ:
        if m == n:
            return np.maximum(np.abs(lam) / n**2, 1.0 / (2 * n - 1))
        return np.maximum(np.abs(lam) / (4 * m * n), 1.0 / s)
    if tag is ClassTag.NOSHIRO_WARSCHAWSKI:
        return 2.0 / s * np.maximum(1.0, np.abs(1 - 2 * lam * s / (m * n)))
    if tag is ClassTag.HULL_CONVEX:
        return np.maximum(1.0, np.abs(1 - lam))
    if tag is ClassTag.HULL_CONVEX_ALPHA:
        Am, An, As = (coefficient_A(k, spec.alpha) for k in (m, n, s))
        return np.maximum(As, np.abs(lam * Am * An - As))
    if tag is ClassTag.HULL_STARLIKE:
        return s * np.maximum(1.0, np.abs(1 - m * n / s * lam))
    raise Unsupported(spec.name)  # pragma: no cover


def sum_form_slacks(spec: ClassSpec, coeffs: np.ndarray, m: int, n: int) -> np.ndarray:
    """RHS - LHS of the lam-free inequality, one value per row of ``coeffs``."""
    _supported(spec)
    a = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    _check_order(a.shape[1], m, n)
    am, an, at = a[:, m - 1], a[:, n - 1], a[:, m + n - 2]
    s = m + n - 1
    tag = spec.tag
    if tag is ClassTag.HURWITZ:
        if m == n:
            return 1.0 - (n**2 * np.abs(an**2) + (2 * n - 1) * np.abs(at))
        return 1.0 - (4 * m * n * np.abs(am * an) + s * np.abs(at))
    if tag is ClassTag.NOSHIRO_WARSCHAWSKI:
        c = m * n / (2 * s)
        return 2.0 / s - (np.abs(c * am * an - at) + c * np.abs(am * an))
    if tag is ClassTag.HULL_CONVEX:
        return 1.0 - (np.abs(am * an - at) + np.abs(am * an))
    if tag is ClassTag.HULL_CONVEX_ALPHA:
        Am, An, As = (coefficient_A(k, spec.alpha) for k in (m, n, s))
        return 1.0 - (np.abs(am * an / (Am * An) - at / As) + np.abs(am * an) / (Am * An))
    if tag is ClassTag.HULL_STARLIKE:
        return 1.0 - (np.abs(am * an / (m * n) - at / s) + np.abs(am * an) / (m * n))
    raise Unsupported(spec.name)  # pragma: no cover


def sum_form_check(spec: ClassSpec, f: TruncatedSeries, m: int, n: int) -> float:
    return float(sum_form_slacks(spec, f.coeffs, m, n)[0])


def bound_report(spec: ClassSpec, f: TruncatedSeries, fspec: FunctionalSpec, residual: float = 0.0) -> BoundReport:
    value = abs(zalcman(f, fspec))
    bound = sharp_bound(spec, fspec)
    return BoundReport(value=value, bound=bound, slack=bound - value, residual=residual)


# --- regimes and critical parameters ----------------------------------------


def _affine_form(spec: ClassSpec, m: int, n: int) -> tuple[float, float]:
    """(K, s) with bound(lam) = K max{1, |1 - s lam|} for the non-Hurwitz classes."""
    t = m + n - 1
    tag = spec.tag
    if tag is ClassTag.NOSHIRO_WARSCHAWSKI:
        return 2.0 / t, 2.0 * t / (m * n)
    if tag is ClassTag.HULL_CONVEX:
        return 1.0, 1.0
    if tag is ClassTag.HULL_CONVEX_ALPHA:
        Am, An, At = (coefficient_A(k, spec.alpha) for k in (m, n, t))
        return At, Am * An / At
    if tag is ClassTag.HULL_STARLIKE:
        return float(t), m * n / t
    raise Unsupported(spec.name)


def hurwitz_threshold(m: int, n: int) -> float:
    """|lam| at which both Hurwitz extremals attain the bound."""
    return n**2 / (2 * n - 1) if m == n else 4 * m * n / (m + n - 1)


def regime_measure(spec: ClassSpec, fspec: FunctionalSpec) -> float:
    """Quantity whose comparison with 1 selects the extremal.

    > 1: generic extremal only; < 1: resonant only; == 1: both.
    """
    _supported(spec)
    m, n, lam = fspec.m, fspec.n, fspec.lam
    if spec.tag is ClassTag.HURWITZ:
        return abs(lam) / hurwitz_threshold(m, n)
    _, s = _affine_form(spec, m, n)
    return abs(1 - s * lam)


def extremal_branches(spec: ClassSpec, fspec: FunctionalSpec, tol: float = 1e-12) -> list[str]:
    """Branches whose extremal attains the bound at ``fspec.lam``."""
    r = regime_measure(spec, fspec)
    if abs(r - 1.0) <= tol:
        return ["generic", "resonant"]
    return ["generic"] if r > 1 else ["resonant"]


def critical_circle(spec: ClassSpec, m: int, n: int, angles: int = 16, scale: float = 1.0) -> np.ndarray:
    """lam on the boundary between the two regimes (or a scaled copy about its centre)."""
    theta = 2 * np.pi * np.arange(angles) / angles
    u = np.exp(1j * theta)
    if spec.tag is ClassTag.HURWITZ:
        return scale * hurwitz_threshold(m, n) * u
    _, s = _affine_form(spec, m, n)
    return (1.0 - scale * u) / s


def lambda_grid(
    spec: ClassSpec,
    m: int,
    n: int,
    radii: Sequence[float] = (0.0, 0.5, 1.0, 4.0 / 3.0, 2.0, 10.0),
    angles: int = 16,
    critical_angles: int = 16,
) -> np.ndarray:
    """Polar grid plus 0, 1 and points on, inside and outside the critical circle."""
    theta = 2 * np.pi * np.arange(angles) / angles
    pts = [np.asarray(radii, dtype=float)[:, None] * np.exp(1j * theta)[None, :]]
    pts.append(np.array([0.0, 1.0], dtype=complex))
    if spec.tag is not ClassTag.KOEBE:
        for scale in (1.0, 0.99, 1.01):
            pts.append(critical_circle(spec, m, n, critical_angles, scale))
    grid = np.concatenate([p.ravel() for p in pts])
    # drop exact duplicates (e.g. repeated radius 0) keeping first occurrence
    _, first = np.unique(np.round(grid, 15), return_index=True)
    return grid[np.sort(first)]


def parse_lambda_grid(text: str) -> tuple[list[float], int]:
    """Parse ``"0,0.5,1 x 16"`` into (radii, angles).  Radii may be fractions such as 4/3."""
    try:
        radii_part, angles_part = text.lower().split("x")
        radii = [float(Fraction(r.strip())) for r in radii_part.split(",") if r.strip()]
        angles = int(angles_part)
    except (ValueError, ZeroDivisionError):
        raise InvalidArgument(f"bad lambda grid {text!r}; expected 'r1,r2,... x angles'") from None
    if not radii or angles < 1 or any(r < 0 for r in radii):
        raise InvalidArgument(f"bad lambda grid {text!r}")
    return radii, angles


def critical_lambda(spec: ClassSpec, f: TruncatedSeries, m: int, n: int) -> Optional[complex]:
    """lam at which the max form is tightest for ``f`` (the lemma's equality direction).

    Returns None when a_m a_n = 0 or when the lemma's free term vanishes, in
    which case any lam on the critical circle is equally tight.
    """
    _check_order(f.order, m, n)
    P, Q = f[m] * f[n], f[m + n - 1]
    if spec.tag is ClassTag.HURWITZ:
        a, b = -Q, P
        C = hurwitz_threshold(m, n)
        if b == 0 or a == 0:
            return None
        return C * cmath.exp(1j * (cmath.phase(a) - cmath.phase(b)))
    _, s = _affine_form(spec, m, n)
    a, b = P / s - Q, -P / s
    if a == 0 or b == 0:
        return None
    mu = cmath.exp(1j * (cmath.phase(a) - cmath.phase(b)))
    return (1 - mu) / s


# --- lemma: max form <=> sum form -------------------------------------------


@dataclass(frozen=True)
class EquivalenceResult:
    sum_holds: bool
    max_holds_on_grid: bool
    worst_lambda: complex
    worst_ratio: float = field(default=float("nan"))


def lemma_critical_lambda(inst: EquivalenceInstance) -> Optional[complex]:
    if inst.b == 0:
        return None
    return inst.C * cmath.exp(1j * (cmath.phase(inst.a) - cmath.phase(inst.b)))


def lemma_equivalence(inst: EquivalenceInstance, tol: float = 1e-12, angles: int = 72) -> EquivalenceResult:
    """Test |a + lam b| <= M max{C, |lam|} on a grid against |a| + |b| C <= M C."""
    a, b, C, M = complex(inst.a), complex(inst.b), float(inst.C), float(inst.M)
    sum_holds = abs(a) + abs(b) * C <= M * C + tol
    radii = np.array([0.0, C / 2, C, 2 * C, 10 * C])
    theta = 2 * np.pi * np.arange(angles) / angles
    lam = (radii[:, None] * np.exp(1j * theta)[None, :]).ravel()
    crit = lemma_critical_lambda(inst)
    if crit is not None:
        lam = np.concatenate(([crit], lam))
    cap = np.maximum(C, np.abs(lam))
    lhs = np.abs(a + lam * b)
    max_holds = bool(np.all(lhs <= M * cap + tol))
    ratio = lhs / cap
    k = int(np.argmax(ratio))
    return EquivalenceResult(bool(sum_holds), max_holds, complex(lam[k]), float(ratio[k]))


# --- Caratheodory-coefficient inequalities ----------------------------------


def caratheodory_checks(p: TruncatedSeries, n: int, k: int, w: complex) -> tuple[float, float]:
    """Slacks of |p_n - w p_k p_{n-k}| <= 2 max{1,|1-2w|} and the w-free form."""
    if not 1 <= k <= n - 1:
        raise InvalidArgument(f"need 1 <= k <= n-1, got k={k}, n={n}")
    if p.order < n:
        raise InvalidArgument(f"p has order {p.order} < n = {n}")
    pn, prod = p[n], p[k] * p[n - k]
    first = 2 * max(1.0, abs(1 - 2 * w)) - abs(pn - w * prod)
    second = 2 - abs(pn - 0.5 * prod) - 0.5 * abs(prod)
    return first, second


def caratheodory_slacks(p: np.ndarray, n: int, k: int, ws) -> tuple[np.ndarray, np.ndarray]:
    """Batch :func:`caratheodory_checks`: rows of p (p_1..p_N) against every w.

    Returns ``(first, second)`` with shapes (rows, len(ws)) and (rows,).
    """
    p = np.atleast_2d(np.asarray(p, dtype=complex))
    ws = np.asarray(ws, dtype=complex).ravel()
    pn = p[:, n - 1]
    prod = p[:, k - 1] * p[:, n - k - 1]
    first = 2 * np.maximum(1.0, np.abs(1 - 2 * ws))[None, :] - np.abs(pn[:, None] - ws[None, :] * prod[:, None])
    second = 2 - np.abs(pn - 0.5 * prod) - 0.5 * np.abs(prod)
    return first, second


def w_grid(radii=(0.0, 0.25, 0.5, 1.0, 2.0, 5.0), angles: int = 16) -> np.ndarray:
    theta = 2 * np.pi * np.arange(angles) / angles
    return (np.asarray(radii, dtype=float)[:, None] * np.exp(1j * theta)[None, :]).ravel()


def is_close_to_bound(value: float, bound: float, tol: float = EQUALITY_TOL) -> bool:
    return math.isclose(value, bound, rel_tol=0.0, abs_tol=tol)
