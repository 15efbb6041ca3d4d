"""Truncated complex power series.

Two carriers are used throughout:

* :class:`TruncatedSeries` stores ``a_1 .. a_N`` of a function vanishing at the
  origin, ``f(z) = a_1 z + a_2 z^2 + ... + a_N z^N``.  Indexing is 1-based so
  ``f[n]`` is ``a_n``.  The same type carries Caratheodory coefficients
  ``p_1 .. p_N`` with an implicit constant term 1.
* :class:`PowerSeries` stores ``c_0 .. c_N`` and is indexed from 0.

All arithmetic is double precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidArgument

UNIMODULAR_TOL = 1e-12


def _as_coeffs(values) -> np.ndarray:
    arr = np.array(values, dtype=complex).ravel()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Coefficients a_1..a_N; ``coeffs[k-1]`` holds ``a_k``."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _as_coeffs(self.coeffs)
        if arr.size == 0:
            raise InvalidArgument("a truncated series needs order >= 1")
        object.__setattr__(self, "coeffs", arr)

    @classmethod
    def normalized(cls, tail: Sequence[complex] = ()) -> "TruncatedSeries":
        """Build ``z + tail[0] z^2 + tail[1] z^3 + ...``."""
        return cls(np.concatenate(([1.0 + 0j], np.asarray(tail, dtype=complex))))

    @classmethod
    def from_dict(cls, terms: dict[int, complex], order: int) -> "TruncatedSeries":
        arr = np.zeros(order, dtype=complex)
        for k, v in terms.items():
            if not 1 <= k <= order:
                raise InvalidArgument(f"index {k} outside 1..{order}")
            arr[k - 1] = v
        return cls(arr)

    @property
    def order(self) -> int:
        return int(self.coeffs.size)

    def __len__(self) -> int:
        return self.order

    def __getitem__(self, k: int) -> complex:
        if not 1 <= k <= self.order:
            raise IndexError(f"coefficient index {k} outside 1..{self.order}")
        return complex(self.coeffs[k - 1])

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and bool(np.all(self.coeffs == other.coeffs))

    def __repr__(self) -> str:
        return f"TruncatedSeries(order={self.order}, coeffs={np.array2string(self.coeffs, precision=6)})"

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise InvalidArgument(f"cannot raise order {self.order} to {order} by truncation")
        return TruncatedSeries(self.coeffs[:order])

    def padded(self, order: int) -> "TruncatedSeries":
        """Same function viewed as a polynomial of higher order (zero tail)."""
        if order <= self.order:
            return self.truncate(order)
        return TruncatedSeries(np.concatenate((self.coeffs, np.zeros(order - self.order, dtype=complex))))

    def with_constant(self, constant: complex = 0.0) -> "PowerSeries":
        return PowerSeries(np.concatenate(([constant], self.coeffs)))


@dataclass(frozen=True, eq=False)
class PowerSeries:
    """Coefficients c_0..c_N; ``coeffs[k]`` holds ``c_k``."""

    coeffs: np.ndarray

    def __post_init__(self):
        arr = _as_coeffs(self.coeffs)
        if arr.size == 0:
            raise InvalidArgument("a power series needs at least a constant term")
        object.__setattr__(self, "coeffs", arr)

    @property
    def order(self) -> int:
        return int(self.coeffs.size) - 1

    def __len__(self) -> int:
        return int(self.coeffs.size)

    def __getitem__(self, k: int) -> complex:
        if not 0 <= k <= self.order:
            raise IndexError(f"coefficient index {k} outside 0..{self.order}")
        return complex(self.coeffs[k])

    def __eq__(self, other) -> bool:
        if not isinstance(other, PowerSeries):
            return NotImplemented
        return self.order == other.order and bool(np.all(self.coeffs == other.coeffs))

    def __repr__(self) -> str:
        return f"PowerSeries(order={self.order}, coeffs={np.array2string(self.coeffs, precision=6)})"

    def truncate(self, order: int) -> "PowerSeries":
        if order > self.order:
            raise InvalidArgument(f"cannot raise order {self.order} to {order} by truncation")
        return PowerSeries(self.coeffs[: order + 1])

    def without_constant(self) -> TruncatedSeries:
        return TruncatedSeries(self.coeffs[1:])


def multiply(f: PowerSeries, g: PowerSeries, order: int) -> PowerSeries:
    """Cauchy product truncated after ``z^order``."""
    if order < 0:
        raise InvalidArgument("order must be nonnegative")
    if f.order < order or g.order < order:
        raise InvalidArgument(
            f"inputs of order {f.order} and {g.order} cannot produce a product of order {order}"
        )
    return PowerSeries(np.convolve(f.coeffs[: order + 1], g.coeffs[: order + 1])[: order + 1])


def differentiate(f: TruncatedSeries) -> PowerSeries:
    """``f'`` as a series with constant term; entry k is ``(k+1) a_{k+1}``."""
    k = np.arange(1, f.order + 1)
    return PowerSeries(k * f.coeffs)


def _check_disk(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    if np.any(np.abs(z) >= 1.0):
        raise DomainError("evaluation point must lie in the open unit disk")
    return z


def _horner(coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
    acc = np.zeros_like(z)
    for c in coeffs[::-1]:
        acc = acc * z + c
    return acc


def evaluate(f: TruncatedSeries | PowerSeries, z):
    """Partial sum at ``z`` (scalar or array), ``|z| < 1`` required."""
    zz = _check_disk(z)
    if isinstance(f, TruncatedSeries):
        out = zz * _horner(f.coeffs, zz)
    else:
        out = _horner(f.coeffs, zz)
    return complex(out) if out.ndim == 0 else out


def rotate(f: TruncatedSeries, c: complex) -> TruncatedSeries:
    """Coefficients of ``conj(c) f(c z)``: ``a_k -> c^(k-1) a_k``."""
    c = complex(c)
    if abs(abs(c) - 1.0) > UNIMODULAR_TOL:
        raise InvalidArgument(f"rotation constant must be unimodular, got |c| = {abs(c)!r}")
    return TruncatedSeries(f.coeffs * c ** np.arange(f.order))


def rotate_angle(f: TruncatedSeries, theta: float) -> TruncatedSeries:
    """Rotation by ``c = exp(i theta)`` with powers formed from exact angles."""
    return TruncatedSeries(f.coeffs * np.exp(1j * theta * np.arange(f.order)))


def identity(order: int) -> TruncatedSeries:
    return TruncatedSeries.from_dict({1: 1.0}, order)


def koebe(order: int) -> TruncatedSeries:
    """z/(1-z)^2, a_k = k."""
    return TruncatedSeries(np.arange(1, order + 1, dtype=float))


def geometric(order: int) -> PowerSeries:
    """1/(1-z) = sum z^k."""
    return PowerSeries(np.ones(order + 1))
