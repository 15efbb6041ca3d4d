"""Hayman index, ratio limits, the Zalcman reformulations and the weak conjectures.

Closed-form handles are used near the boundary; a truncated series loses all
accuracy once (1-r)^{-2} amplifies its tail.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

import numpy as np

from .errors import DomainError, ExcludedPair, HypothesisViolated, InvalidArgument
from .series import TruncatedSeries, evaluate

GOLDEN = (math.sqrt(5) - 1) / 2

Handle = Callable[[np.ndarray], np.ndarray]


# --- closed-form handles -----------------------------------------------------


def koebe_handle(z):
    return z / (1 - z) ** 2


def half_plane_handle(z):
    return z / (1 - z)


def odd_geometric_handle(z):
    """z/(1 - z^2): a_odd = 1, a_even = 0."""
    return z / (1 - z * z)


def identity_handle(z):
    return np.asarray(z, dtype=complex)


def rotated(handle: Handle, c: complex) -> Handle:
    if abs(abs(c) - 1) > 1e-12:
        raise InvalidArgument("rotation constant must be unimodular")
    return lambda z: np.conj(c) * handle(c * np.asarray(z))


HANDLES: dict[str, Handle] = {
    "koebe": koebe_handle,
    "half_plane": half_plane_handle,
    "odd_geometric": odd_geometric_handle,
    "identity": identity_handle,
}


def koebe_coefficient(k: int) -> float:
    return float(k)


def odd_geometric_coefficient(k: int) -> float:
    return 1.0 if k % 2 == 1 else 0.0


def identity_coefficient(k: int) -> float:
    return 1.0 if k == 1 else 0.0


def half_plane_coefficient(k: int) -> float:
    return 1.0


COEFFICIENTS: dict[str, Callable[[int], complex]] = {
    "koebe": koebe_coefficient,
    "half_plane": half_plane_coefficient,
    "odd_geometric": odd_geometric_coefficient,
    "identity": identity_coefficient,
}


# --- maximum modulus and the Hayman index ----------------------------------------


def _as_handle(f: Union[Handle, TruncatedSeries]) -> Handle:
    if isinstance(f, TruncatedSeries):
        return lambda z: evaluate(f, z)
    return f


def max_modulus(f: Union[Handle, TruncatedSeries], r: float, K: int = 1024, refine_iters: int = 60) -> float:
    """max |f| on |z| = r from K samples plus a golden-section pass at the argmax."""
    if not 0 < r < 1:
        raise DomainError(f"radius must lie in (0, 1), got {r!r}")
    h = _as_handle(f)
    theta = 2 * np.pi * np.arange(K) / K
    vals = np.abs(h(r * np.exp(1j * theta)))
    i = int(np.argmax(vals))
    best = float(vals[i])

    def g(t):
        return float(abs(h(np.asarray(r * cmath.exp(1j * t)))))

    lo, hi = theta[i] - 2 * np.pi / K, theta[i] + 2 * np.pi / K
    x1, x2 = hi - GOLDEN * (hi - lo), lo + GOLDEN * (hi - lo)
    f1, f2 = g(x1), g(x2)
    for _ in range(refine_iters):
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = g(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = g(x2)
    return max(best, f1, f2)


@dataclass(frozen=True)
class HaymanEstimate:
    alpha_hat: float
    radii: tuple
    values: tuple


def hayman_index(f: Handle, J: int = 20, K: int = 1024) -> HaymanEstimate:
    """(1 - r_j)^2 M(r_j) at r_j = 1 - 2^-j, j = 1..J; the last value estimates the index."""
    if J < 1:
        raise InvalidArgument("need at least one radius")
    radii = tuple(1.0 - 2.0**-j for j in range(1, J + 1))
    values = tuple((1 - r) ** 2 * max_modulus(f, r, K) for r in radii)
    return HaymanEstimate(alpha_hat=values[-1], radii=radii, values=values)


# --- ratio limits --------------------------------------------------------------

Coefficients = Union[Callable[[int], complex], TruncatedSeries]


def _coef(source: Coefficients) -> Callable[[int], complex]:
    if isinstance(source, TruncatedSeries):
        return source.__getitem__
    return source


def scan_paths(start: int, stop: int) -> dict[str, list[tuple[int, int]]]:
    """Three routes to (inf, inf): m = n, m = 2n and m = n + 5."""
    ns = range(start, stop + 1)
    return {
        "diagonal": [(n, n) for n in ns],
        "double": [(2 * n, n) for n in ns],
        "offset": [(n + 5, n) for n in ns],
    }


def ratio_convergence(f: Coefficients, lam: complex, pairs: Iterable[tuple[int, int]]) -> list[float]:
    """|lam a_m a_n - a_{m+n-1}| / |lam m n - m - n + 1| along ``pairs``."""
    a = _coef(f)
    lam = complex(lam)
    out = []
    for m, n in pairs:
        denom = lam * m * n - (m + n - 1)
        if denom == 0:
            raise ExcludedPair(m, n)
        num = lam * a(m) * a(n) - a(m + n - 1)
        out.append(abs(num) / abs(denom))
    return out


def corollary_witness(
    f: Coefficients,
    lam: complex,
    alpha_hat: float,
    delta: float,
    pairs: Sequence[tuple[int, int]],
) -> Optional[tuple[int, int]]:
    """First pair on ``pairs`` beyond which |Phi| <= (1 - delta)|lam mn - m - n + 1| holds.

    ``delta`` must lie in (0, 1 - alpha_hat^2).  Returns None if the tail of
    the path never settles below the threshold.
    """
    if not 0 < delta < 1 - alpha_hat**2:
        raise InvalidArgument(f"delta must lie in (0, {1 - alpha_hat ** 2}), got {delta!r}")
    ratios = ratio_convergence(f, lam, pairs)
    ok = [r <= 1 - delta for r in ratios]
    for i in range(len(pairs)):
        if all(ok[i:]):
            return pairs[i]
    return None


# --- equivalent forms of the Zalcman inequality -------------------------------


@dataclass(frozen=True)
class AuditResult:
    a: bool
    b: bool
    c: bool
    d: bool
    equality_a: bool

    @property
    def agree(self) -> bool:
        return self.a == self.b == self.c == self.d


T_GRID = tuple(np.linspace(0.0, 1.0, 11))
R_GRID = (0.0, 0.25, 0.5, 1.0, 2.0, 5.0)
W_RADII = (0.0, 0.5, 1.0)
W_NEGATIVE = (-1.0, -5.0)


def w_candidates(an: complex, a2n1: complex, radii=W_RADII, angles: int = 16, extra=W_NEGATIVE) -> np.ndarray:
    """Circles |w - 1| = r, the listed negative reals, and the critical w on each circle."""
    theta = 2 * np.pi * np.arange(angles) / angles
    pts = [1.0 + np.asarray(radii, dtype=float)[:, None] * np.exp(1j * theta)[None, :]]
    pts.append(np.asarray(extra, dtype=complex))
    diff = an * an - a2n1
    if diff != 0 and a2n1 != 0:
        phase = cmath.exp(1j * (cmath.phase(diff) - cmath.phase(a2n1)))
        pts.append(np.array([1.0 + r * phase for r in radii if r > 0], dtype=complex))
    return np.concatenate([p.ravel() for p in pts])


def zalcman_equivalence_audit(
    an: complex,
    a2n1: complex,
    n: int,
    t_grid: Sequence[float] = T_GRID,
    r_grid: Sequence[float] = R_GRID,
    w_grid: Optional[np.ndarray] = None,
    tol: float = 1e-9,
) -> AuditResult:
    """Evaluate statements (a)-(d) for one coefficient pair on finite grids."""
    if n < 2:
        raise InvalidArgument("n must be >= 2")
    an, a2n1 = complex(an), complex(a2n1)
    if abs(a2n1) > 2 * n - 1 + tol:
        raise HypothesisViolated(f"|a_(2n-1)| = {abs(a2n1):.6g} exceeds 2n-1 = {2 * n - 1}")
    if 1.0 not in t_grid:
        raise InvalidArgument("t grid must contain 1")
    if 0.0 not in r_grid:
        raise InvalidArgument("r grid must contain 0")
    sq = an * an
    zc = (n - 1) ** 2
    lhs_a = abs(sq - a2n1)
    a_ok = lhs_a <= zc + tol
    t = np.asarray(t_grid, dtype=float)
    b_ok = bool(np.all(np.abs(sq - t * a2n1) <= n * n - t * (2 * n - 1) + tol))
    r = np.asarray(r_grid, dtype=float)
    c_ok = bool(np.all(lhs_a + r * abs(a2n1) <= zc + r * (2 * n - 1) + tol))
    w = w_candidates(an, a2n1) if w_grid is None else np.asarray(w_grid, dtype=complex)
    d_ok = bool(np.all(np.abs(sq - w * a2n1) <= zc + np.abs(w - 1) * (2 * n - 1) + tol))
    return AuditResult(bool(a_ok), b_ok, c_ok, d_ok, abs(lhs_a - zc) <= 1e-12 * max(1, zc))


def random_admissible_pair(n: int, rng: np.random.Generator) -> tuple[complex, complex]:
    """a_n in the disk of radius 1.5 n, a_{2n-1} in the disk of radius 2n - 1."""
    r1 = 1.5 * n * np.sqrt(rng.uniform())
    r2 = (2 * n - 1) * np.sqrt(rng.uniform())
    t1, t2 = rng.uniform(0, 2 * np.pi, size=2)
    return complex(r1 * np.exp(1j * t1)), complex(r2 * np.exp(1j * t2))


# --- weak conjectures ------------------------------------------------------------

PREDICATES = ("B", "C", "D")


def predicate_slack(predicate: str, param: float, an: complex, a2n1: complex, n: int, angles: int = 64) -> float:
    """Slack (RHS - LHS, minimized over w for D) of (B_t), (C_r) or (D_r)."""
    sq = an * an
    if predicate == "B":
        t = param
        if not 0 <= t <= 1:
            raise InvalidArgument("t must lie in [0, 1]")
        return n * n - t * (2 * n - 1) - abs(sq - t * a2n1)
    if predicate == "C":
        r = param
        if r < 0:
            raise InvalidArgument("r must be nonnegative")
        return (n - 1) ** 2 + r * (2 * n - 1) - abs(sq - a2n1) - r * abs(a2n1)
    if predicate == "D":
        r = param
        if r < 0:
            raise InvalidArgument("r must be nonnegative")
        w = w_candidates(an, a2n1, radii=(r,), angles=angles, extra=())
        return float(np.min((n - 1) ** 2 + r * (2 * n - 1) - np.abs(sq - w * a2n1)))
    raise InvalidArgument(f"unknown predicate {predicate!r}; expected one of {PREDICATES}")


@dataclass(frozen=True)
class ScanRow:
    predicate: str
    param: float
    n: int
    sample_index: int
    slack: float
    violated: bool


@dataclass(frozen=True)
class ScanReport:
    rows: tuple
    min_slack: float
    witness: Optional[ScanRow]

    @property
    def violations(self) -> int:
        return sum(r.violated for r in self.rows)


def conjecture_scan(
    samples: Iterable[TruncatedSeries],
    predicate: str,
    param: float,
    n_range: Iterable[int],
    tol: float = 1e-9,
) -> ScanReport:
    """Evaluate one predicate on every sample and every n; rows ordered by sample index."""
    ns = list(n_range)
    if any(n < 2 for n in ns):
        raise InvalidArgument("n must be >= 2")
    rows = []
    for idx, f in enumerate(samples):
        for n in ns:
            if f.order < 2 * n - 1:
                raise InvalidArgument(f"sample {idx} has order {f.order} < 2n-1 = {2 * n - 1}")
            s = predicate_slack(predicate, param, f[n], f[2 * n - 1], n)
            rows.append(ScanRow(predicate, param, n, idx, s, s < -tol))
    min_slack = min((r.slack for r in rows), default=math.inf)
    witness = next((r for r in rows if r.violated), None)
    return ScanReport(tuple(rows), min_slack, witness)


# --- iteration toward the Bieberbach bound -----------------------------------------


def bieberbach_iterate(C0: float, k: int) -> list[float]:
    """C0^(2^-j) for j = 0..k."""
    if C0 <= 1:
        raise InvalidArgument("C0 must exceed 1")
    if k < 0:
        raise InvalidArgument("k must be nonnegative")
    return [C0 ** (2.0**-j) for j in range(k + 1)]


def iteration_step_holds(n: int, t: float, C: float) -> bool:
    """n^2 + t (C - 1)(2n - 1) <= C n^2, the step that turns |a_n| <= C n into sqrt(C) n."""
    if n < 2:
        raise InvalidArgument("n must be >= 2")
    if not 0 <= t <= 1:
        raise InvalidArgument("t must lie in [0, 1]")
    return n * n + t * (C - 1) * (2 * n - 1) <= C * n * n


def first_below(sequence: Sequence[float], level: float) -> Optional[int]:
    return next((j for j, c in enumerate(sequence) if c < level), None)
