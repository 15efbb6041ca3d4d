"""Finitely atomic Herglotz measures and the Caratheodory functions they generate.

A probability measure mu on the unit circle gives

    g(z) = sum_j w_j (1 + eta_j z) / (1 - eta_j z) = 1 + sum_n p_n z^n,
    p_n  = 2 sum_j w_j eta_j^n,

which has positive real part in the disk.  Atom positions are stored as angles
so that ``|eta_j| = 1`` is exact.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument
from .series import UNIMODULAR_TOL, TruncatedSeries

WEIGHT_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class HerglotzMeasure:
    weights: np.ndarray
    angles: np.ndarray

    def __post_init__(self):
        w = np.array(self.weights, dtype=float).ravel()
        t = np.array(self.angles, dtype=float).ravel()
        if w.size == 0:
            raise InvalidArgument("a measure needs at least one atom")
        if w.shape != t.shape:
            raise InvalidArgument("weights and angles differ in length")
        if not np.all(np.isfinite(w)) or not np.all(np.isfinite(t)):
            raise InvalidArgument("non-finite atom data")
        if np.any(w < 0):
            raise InvalidArgument("atom weights must be nonnegative")
        total = w.sum()
        if abs(total - 1.0) > WEIGHT_TOL:
            raise InvalidArgument(f"atom weights sum to {total!r}, not 1")
        w = w / total
        w.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "angles", t)

    @classmethod
    def from_points(cls, weights, positions) -> "HerglotzMeasure":
        eta = np.asarray(positions, dtype=complex).ravel()
        if np.any(np.abs(np.abs(eta) - 1.0) > UNIMODULAR_TOL):
            raise InvalidArgument("atom positions must be unimodular")
        return cls(weights, np.angle(eta))

    @classmethod
    def point_mass(cls, angle: float = 0.0) -> "HerglotzMeasure":
        return cls([1.0], [angle])

    @classmethod
    def roots_of_unity(cls, q: int, rotation: float = 0.0) -> "HerglotzMeasure":
        """Uniform measure on the q-th roots of unity, optionally rotated."""
        if q < 1:
            raise InvalidArgument("q must be positive")
        return cls(np.full(q, 1.0 / q), rotation + 2 * np.pi * np.arange(q) / q)

    @property
    def size(self) -> int:
        return int(self.weights.size)

    @property
    def positions(self) -> np.ndarray:
        return np.exp(1j * self.angles)

    def to_json(self) -> dict:
        return {"atoms": [{"w": float(w), "theta": float(t)} for w, t in zip(self.weights, self.angles)]}

    @classmethod
    def from_json(cls, data: dict) -> "HerglotzMeasure":
        atoms = data["atoms"]
        return cls([a["w"] for a in atoms], [a["theta"] for a in atoms])


def p_coefficients(weights: np.ndarray, angles: np.ndarray, order: int) -> np.ndarray:
    """Batch form of ``p_n = 2 sum_j w_j exp(i n theta_j)`` for n = 1..order.

    ``weights`` and ``angles`` have shape ``(..., J)``; the result has shape
    ``(..., order)``.
    """
    n = np.arange(1, order + 1)
    phase = np.exp(1j * np.asarray(angles)[..., None, :] * n[:, None])
    return 2.0 * np.sum(np.asarray(weights)[..., None, :] * phase, axis=-1)


def caratheodory_coefficients(mu: HerglotzMeasure, order: int) -> TruncatedSeries:
    if not isinstance(mu, HerglotzMeasure):
        raise InvalidArgument("expected a HerglotzMeasure")
    if order < 1:
        raise InvalidArgument("order must be >= 1")
    return TruncatedSeries(p_coefficients(mu.weights, mu.angles, order))


def sample_measure(atoms: int, rng: np.random.Generator) -> HerglotzMeasure:
    """Uniform atom positions, weights from normalized exponential draws."""
    if atoms < 1:
        raise InvalidArgument("atom count must be >= 1")
    angles = rng.uniform(0.0, 2 * np.pi, size=atoms)
    raw = rng.exponential(size=atoms)
    return HerglotzMeasure(raw / raw.sum(), angles)


def real_part_kernel(weights, angles, z) -> np.ndarray:
    """Closed form of Re g(z) = sum_j w_j (1 - |z|^2) / |1 - eta_j z|^2."""
    z = np.asarray(z, dtype=complex)
    eta = np.exp(1j * np.asarray(angles))
    denom = np.abs(1.0 - eta[:, None] * z.ravel()[None, :]) ** 2
    vals = (np.asarray(weights)[:, None] * (1.0 - np.abs(z.ravel()) ** 2)[None, :] / denom).sum(axis=0)
    return vals.reshape(z.shape)


def polar_grid(radii, angles: int) -> np.ndarray:
    theta = 2 * np.pi * np.arange(angles) / angles
    return (np.asarray(radii, dtype=float)[:, None] * np.exp(1j * theta)[None, :]).ravel()


def verify_positive_real_part(mu: HerglotzMeasure, radii=(0.5, 0.9, 0.99), angles: int = 256) -> float:
    """Minimum of Re g over a polar grid, evaluated without truncation."""
    grid = polar_grid(radii, angles)
    return float(real_part_kernel(mu.weights, mu.angles, grid).min())
