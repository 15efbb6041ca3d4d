"""Function classes: samplers, membership residuals and closed-form extremals.

Every class except Hurwitz is reached through a Caratheodory function
``g = 1 + sum p_k z^k`` and a fixed coefficient relation:

==================  ===============================
class               relation
==================  ===============================
NoshiroWarschawski  a_n = p_{n-1} / n
HullConvex          a_n = p_{n-1} / 2
HullConvexOrderAlpha a_n = A_n p_{n-1} / 2
HullStarlike        a_n = n p_{n-1} / 2
KoebeFamily         rotations of z/(1-z)^2 (treated as HullStarlike)
==================  ===============================
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidArgument, Unsupported
from .herglotz import HerglotzMeasure, p_coefficients, polar_grid, sample_measure
from .series import TruncatedSeries, koebe, rotate_angle

RESIDUAL_RADII = (0.5, 0.9, 0.99)
RESIDUAL_ANGLES = 256


class ClassTag(enum.Enum):
    HURWITZ = "hurwitz"
    NOSHIRO_WARSCHAWSKI = "nw"
    HULL_CONVEX = "hull_convex"
    HULL_CONVEX_ALPHA = "hull_convex_alpha"
    HULL_STARLIKE = "hull_starlike"
    KOEBE = "koebe"


@dataclass(frozen=True)
class ClassSpec:
    tag: ClassTag
    alpha: Optional[float] = None

    def __post_init__(self):
        tag = self.tag if isinstance(self.tag, ClassTag) else _parse_tag(self.tag)
        object.__setattr__(self, "tag", tag)
        if tag is ClassTag.HULL_CONVEX_ALPHA:
            if self.alpha is None:
                raise InvalidArgument("hull_convex_alpha requires alpha")
            alpha = float(self.alpha)
            if not np.isfinite(alpha) or alpha >= 1:
                raise InvalidArgument(f"alpha must be < 1, got {self.alpha!r}")
            object.__setattr__(self, "alpha", alpha)
        elif self.alpha is not None:
            raise InvalidArgument(f"alpha is only meaningful for hull_convex_alpha, not {tag.value}")

    @property
    def name(self) -> str:
        return self.tag.value if self.alpha is None else f"{self.tag.value}({self.alpha:g})"

    @property
    def uses_measure(self) -> bool:
        return self.tag not in (ClassTag.HURWITZ, ClassTag.KOEBE)

    def to_json(self) -> dict:
        out: dict = {"class": self.tag.value}
        if self.alpha is not None:
            out["alpha"] = self.alpha
        return out

    @classmethod
    def from_json(cls, data: dict) -> "ClassSpec":
        return cls(_parse_tag(data["class"]), data.get("alpha"))


def _parse_tag(value) -> ClassTag:
    try:
        return ClassTag(value)
    except ValueError:
        raise InvalidArgument(f"unknown class {value!r}") from None


HURWITZ = ClassSpec(ClassTag.HURWITZ)
NW = ClassSpec(ClassTag.NOSHIRO_WARSCHAWSKI)
HULL_CONVEX = ClassSpec(ClassTag.HULL_CONVEX)
HULL_STARLIKE = ClassSpec(ClassTag.HULL_STARLIKE)
KOEBE_FAMILY = ClassSpec(ClassTag.KOEBE)


def hull_convex_alpha(alpha: float) -> ClassSpec:
    return ClassSpec(ClassTag.HULL_CONVEX_ALPHA, alpha)


def coefficient_A(n: int, alpha: float) -> float:
    """(1/n!) prod_{k=2}^{n} (k - 2 alpha), the coefficients of the C(alpha) extremal."""
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    if alpha >= 1:
        raise InvalidArgument(f"alpha must be < 1, got {alpha!r}")
    value = 1.0
    for k in range(2, n + 1):
        value *= (k - 2 * alpha) / k
    return value


def coefficients_A(order: int, alpha: float) -> np.ndarray:
    """A_1..A_order as an array."""
    if alpha >= 1:
        raise InvalidArgument(f"alpha must be < 1, got {alpha!r}")
    k = np.arange(2, order + 1, dtype=float)
    return np.concatenate(([1.0], np.cumprod((k - 2 * alpha) / k)))


def _relation_scale(spec: ClassSpec, order: int) -> np.ndarray:
    """Factors s_n with a_n = s_n p_{n-1}, for n = 2..order."""
    n = np.arange(2, order + 1, dtype=float)
    tag = spec.tag
    if tag is ClassTag.NOSHIRO_WARSCHAWSKI:
        return 1.0 / n
    if tag is ClassTag.HULL_CONVEX:
        return np.full(n.shape, 0.5)
    if tag is ClassTag.HULL_CONVEX_ALPHA:
        return coefficients_A(order, spec.alpha)[1:] / 2.0
    if tag in (ClassTag.HULL_STARLIKE, ClassTag.KOEBE):
        return n / 2.0
    raise Unsupported(f"{spec.name} has no Caratheodory relation")


def coefficients_from_p(spec: ClassSpec, p: np.ndarray) -> np.ndarray:
    """Map p_1..p_{N-1} (last axis) to a_1..a_N, with a_1 = 1."""
    p = np.asarray(p, dtype=complex)
    order = p.shape[-1] + 1
    a = np.empty(p.shape[:-1] + (order,), dtype=complex)
    a[..., 0] = 1.0
    a[..., 1:] = _relation_scale(spec, order) * p
    return a


def p_from_coefficients(spec: ClassSpec, a: np.ndarray) -> np.ndarray:
    """Inverse of :func:`coefficients_from_p` (drops a_1)."""
    a = np.asarray(a, dtype=complex)
    return a[..., 1:] / _relation_scale(spec, a.shape[-1])


def from_measure(spec: ClassSpec, mu: HerglotzMeasure, order: int) -> TruncatedSeries:
    """The member of ``spec`` whose Caratheodory function has Herglotz measure ``mu``."""
    if order < 2:
        raise InvalidArgument("order must be >= 2")
    return TruncatedSeries(coefficients_from_p(spec, p_coefficients(mu.weights, mu.angles, order - 1)))


def hurwitz_from_weights(weights, phases) -> TruncatedSeries:
    """z + sum_{k>=2} e^{i phase_k} (w_k / k) z^k; arrays are indexed from k = 2."""
    w = np.asarray(weights, dtype=float)
    k = np.arange(2, w.size + 2)
    return TruncatedSeries.normalized(np.exp(1j * np.asarray(phases, dtype=float)) * w / k)


def default_atoms(order: int) -> int:
    return max(8, order - 1)


def sample(spec: ClassSpec, order: int, rng: np.random.Generator, atoms: Optional[int] = None) -> TruncatedSeries:
    """Draw one random member of ``spec`` truncated at ``order``."""
    if not isinstance(spec, ClassSpec):
        raise InvalidArgument("expected a ClassSpec")
    if order < 2:
        raise InvalidArgument("order must be >= 2")
    if spec.tag is ClassTag.HURWITZ:
        raw = rng.uniform(size=order - 1)
        scale = rng.uniform()
        weights = scale * raw / raw.sum()
        phases = rng.uniform(0.0, 2 * np.pi, size=order - 1)
        return hurwitz_from_weights(weights, phases)
    if spec.tag is ClassTag.KOEBE:
        return rotate_angle(koebe(order), rng.uniform(0.0, 2 * np.pi))
    mu = sample_measure(atoms if atoms is not None else default_atoms(order), rng)
    return from_measure(spec, mu, order)


def sample_rng(seed: int, index: int) -> np.random.Generator:
    """Independent stream for sample ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng([seed, index])


def sample_many(spec: ClassSpec, order: int, count: int, seed: int, atoms: Optional[int] = None) -> np.ndarray:
    """Coefficient array of shape (count, order); row i is regenerable from (seed, i)."""
    out = np.empty((count, order), dtype=complex)
    for i in range(count):
        out[i] = sample(spec, order, sample_rng(seed, i), atoms).coeffs
    return out


# --- membership -----------------------------------------------------------


def _residual_grid():
    return polar_grid(RESIDUAL_RADII, RESIDUAL_ANGLES)


def fejer_min_real_part(p: np.ndarray, grid: Optional[np.ndarray] = None) -> np.ndarray:
    """Min over the grid of Re of the Fejer mean of 1 + sum p_k z^k.

    For the coefficients of a genuine Caratheodory function this mean is an
    average of nonnegative Poisson-Fejer kernels, so it is >= 0 for every
    truncation order; plain partial sums do not have that property.
    """
    p = np.atleast_2d(np.asarray(p, dtype=complex))
    K = p.shape[-1]
    z = _residual_grid() if grid is None else np.asarray(grid, dtype=complex)
    k = np.arange(1, K + 1)
    taper = 1.0 - k / (K + 1.0)
    powers = z[None, :] ** k[:, None]
    vals = 1.0 + (p * taper) @ powers
    return vals.real.min(axis=-1)


def membership_residuals(spec: ClassSpec, coeffs: np.ndarray) -> np.ndarray:
    """Vectorized :func:`membership_residual` over rows of ``coeffs``."""
    a = np.atleast_2d(np.asarray(coeffs, dtype=complex))
    norm = np.abs(a[:, 0] - 1.0)
    if spec.tag is ClassTag.HURWITZ:
        n = np.arange(2, a.shape[1] + 1)
        return norm + np.maximum(0.0, (n * np.abs(a[:, 1:])).sum(axis=1) - 1.0)
    if a.shape[1] < 2:
        return norm
    min_re = fejer_min_real_part(p_from_coefficients(spec, a))
    if spec.tag is ClassTag.HULL_CONVEX:
        # Re(f/z) > 1/2 is Re g > 0 with g = 2 f/z - 1
        return norm + np.maximum(0.0, -min_re / 2.0)
    return norm + np.maximum(0.0, -min_re)


def membership_residual(spec: ClassSpec, f: TruncatedSeries) -> float:
    """0 for members; grows with the violation of the class condition."""
    return float(membership_residuals(spec, f.coeffs)[0])


# --- extremal functions ---------------------------------------------------

GENERIC = "generic"
RESONANT = "resonant"


def _unit(phase) -> complex:
    if phase is None:
        return 1.0 + 0j
    c = complex(phase)
    if abs(abs(c) - 1.0) > 1e-12:
        raise InvalidArgument("phases must be unimodular")
    return c


def extremal(
    spec: ClassSpec,
    m: int,
    n: int,
    branch: str = GENERIC,
    phases: tuple = (None, None),
    order: Optional[int] = None,
) -> TruncatedSeries:
    """Closed-form equality case for the pair (m, n).

    ``generic`` is the full-support function (Koebe, half-plane, f_alpha,
    2 log(1/(1-z)) - z, or the Hurwitz form z + a z^n / z + a z^m/(2m) + b z^n/(2n));
    ``resonant`` is the function whose only nonzero coefficients sit at
    indices k(m+n-2)+1.  For the non-Hurwitz classes the first phase, if
    given, rotates the result.
    """
    if m < 2 or n < 2:
        raise InvalidArgument("m and n must be >= 2")
    if branch not in (GENERIC, RESONANT):
        raise Unsupported(f"unknown branch {branch!r}")
    N = order if order is not None else 2 * max(m, n)
    if N < m + n - 1:
        raise InvalidArgument(f"order {N} is below m+n-1 = {m + n - 1}")
    alpha_ph, beta_ph = _unit(phases[0]), _unit(phases[1])
    tag = spec.tag

    if tag is ClassTag.HURWITZ:
        if branch == RESONANT:
            return TruncatedSeries.from_dict({1: 1.0, m + n - 1: alpha_ph / (m + n - 1)}, N)
        if m == n:
            return TruncatedSeries.from_dict({1: 1.0, n: alpha_ph / n}, N)
        return TruncatedSeries.from_dict({1: 1.0, m: alpha_ph / (2 * m), n: beta_ph / (2 * n)}, N)

    if tag is ClassTag.KOEBE and branch == RESONANT:
        raise Unsupported("the Koebe family has no resonant extremal")

    q = m + n - 2
    idx = np.arange(1, N + 1)
    if branch == GENERIC:
        mask = np.ones(N, dtype=bool)
    else:
        mask = (idx - 1) % q == 0
    if tag in (ClassTag.HULL_STARLIKE, ClassTag.KOEBE):
        law = idx.astype(float)
    elif tag is ClassTag.HULL_CONVEX:
        law = np.ones(N)
    elif tag is ClassTag.NOSHIRO_WARSCHAWSKI:
        law = 2.0 / idx
        law[0] = 1.0
    elif tag is ClassTag.HULL_CONVEX_ALPHA:
        law = coefficients_A(N, spec.alpha)
    else:  # pragma: no cover - enum is exhaustive
        raise Unsupported(spec.name)
    f = TruncatedSeries(np.where(mask, law, 0.0))
    if phases[0] is not None:
        f = TruncatedSeries(f.coeffs * alpha_ph ** np.arange(N))
    return f


def extremal_measure(spec: ClassSpec, m: int, n: int, branch: str = GENERIC, atoms: Optional[int] = None) -> HerglotzMeasure:
    """Herglotz measure of the extremal: one atom at 1, or uniform on (m+n-2)-th roots.

    Padded with zero-weight atoms to ``atoms`` so it lives in the search space.
    """
    if not spec.uses_measure:
        raise Unsupported(f"{spec.name} is not parametrized by a measure")
    q = m + n - 2
    J = atoms if atoms is not None else max(8, q)
    base = HerglotzMeasure.point_mass() if branch == GENERIC else HerglotzMeasure.roots_of_unity(q)
    if J < base.size:
        raise InvalidArgument(f"{J} atoms cannot hold a {base.size}-atom extremal")
    pad = J - base.size
    weights = np.concatenate((base.weights, np.zeros(pad)))
    angles = np.concatenate((base.angles, 2 * np.pi * (np.arange(pad) + 0.5) / max(pad, 1)))
    return HerglotzMeasure(weights, angles)
