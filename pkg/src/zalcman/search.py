"""Derivative-free maximization of |lam a_m a_n - a_{m+n-1}| over a class.

Measure-backed classes are searched over (weights on the simplex, atom angles);
the Hurwitz class over (weights with sum <= 1, phases), where a_k = e^{i phi_k} w_k / k.
Each restart runs a cyclic coordinate search: every coordinate is nudged by
+/- step, the move is projected back to the feasible set and kept if it
improves the objective; a sweep without improvement shrinks the step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .classes import ClassSpec, ClassTag, _relation_scale
from .errors import InvalidArgument, Unsupported
from .functional import FunctionalSpec, sharp_bound
from .herglotz import HerglotzMeasure

GAP_STOP = 1e-8
STEP_STOP = 1e-10


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 20
    max_iter: int = 4000
    step: float = 0.25
    decay: float = 0.5
    seed: int = 0
    target: Optional[float] = None

    def __post_init__(self):
        if self.restarts < 1:
            raise InvalidArgument("restarts must be >= 1")
        if self.max_iter < 1:
            raise InvalidArgument("max_iter must be >= 1")
        if not 0 < self.decay < 1:
            raise InvalidArgument("decay must lie in (0, 1)")
        if self.step <= 0:
            raise InvalidArgument("step must be positive")


@dataclass(frozen=True, eq=False)
class HurwitzParams:
    """Weights and phases for coefficients a_2..a_N."""

    weights: np.ndarray
    phases: np.ndarray

    def to_json(self) -> dict:
        return {"weights": [float(x) for x in self.weights], "phases": [float(x) for x in self.phases]}


Params = Union[HerglotzMeasure, HurwitzParams]


@dataclass(frozen=True, eq=False)
class SearchResult:
    best_value: float
    bound: float
    params: Params
    iterations: int
    restarts_used: int
    seed: int
    history: list = field(default_factory=list, repr=False)

    @property
    def gap(self) -> float:
        return self.bound - self.best_value

    def to_json(self) -> dict:
        return {
            "best_value": self.best_value,
            "bound": self.bound,
            "gap": self.gap,
            "params": self.params.to_json(),
            "restarts_used": self.restarts_used,
            "seed": self.seed,
        }


# --- feasible sets -------------------------------------------------------------


def project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {w >= 0, sum w = 1}."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, v.size + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    tau = css[rho] / (rho + 1.0)
    w = np.maximum(v - tau, 0.0)
    return w / w.sum()


def project_budget(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto {w >= 0, sum w <= 1}."""
    w = np.maximum(v, 0.0)
    if w.sum() <= 1.0:
        return w
    return project_simplex(v)


# --- objectives ----------------------------------------------------------------


class _Problem:
    """Objective and parametrization for one (class, functional) pair."""

    def __init__(self, spec: ClassSpec, fspec: FunctionalSpec):
        if spec.tag is ClassTag.KOEBE:
            raise Unsupported("the Koebe family is a single orbit; nothing to search")
        self.spec, self.fspec = spec, fspec
        m, n, t = fspec.m, fspec.n, fspec.top
        self.lam = fspec.lam
        self.hurwitz = spec.tag is ClassTag.HURWITZ
        if self.hurwitz:
            self.dim = t - 1  # a_2..a_{m+n-1}
            self.idx = (m - 2, n - 2, t - 2)
            self.inv_k = 1.0 / np.arange(2, t + 1)
        else:
            self.dim = max(8, m + n - 2)
            scale = _relation_scale(spec, t)  # a_k = scale[k-2] p_{k-1}
            self.sm, self.sn, self.st = scale[m - 2], scale[n - 2], scale[t - 2]
            self.powers = np.array([m - 1, n - 1, t - 1], dtype=float)

    def value(self, w: np.ndarray, th: np.ndarray) -> float:
        if self.hurwitz:
            i, j, k = self.idx
            a = np.exp(1j * th[[i, j, k]]) * w[[i, j, k]] * self.inv_k[[i, j, k]]
            return abs(self.lam * a[0] * a[1] - a[2])
        p = 2.0 * (np.exp(1j * np.outer(self.powers, th)) @ w)
        return abs(self.lam * self.sm * self.sn * p[0] * p[1] - self.st * p[2])

    def project(self, w: np.ndarray) -> np.ndarray:
        return project_budget(w) if self.hurwitz else project_simplex(w)

    def start(self, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
        if self.hurwitz:
            raw = rng.uniform(size=self.dim)
            w = rng.uniform() * raw / raw.sum()
        else:
            raw = rng.exponential(size=self.dim)
            w = raw / raw.sum()
        th = rng.uniform(0.0, 2 * np.pi, size=self.dim)
        return w, th

    def feasible_point(self, rng: np.random.Generator) -> np.ndarray:
        return self.start(rng)[0]

    def params(self, w: np.ndarray, th: np.ndarray) -> Params:
        if self.hurwitz:
            return HurwitzParams(w.copy(), np.mod(th, 2 * np.pi))
        return HerglotzMeasure(w / w.sum(), np.mod(th, 2 * np.pi))

    def unpack(self, params: Params) -> tuple[np.ndarray, np.ndarray]:
        if self.hurwitz:
            if not isinstance(params, HurwitzParams):
                raise InvalidArgument("Hurwitz search needs HurwitzParams")
            w = np.asarray(params.weights, dtype=float)
            th = np.asarray(params.phases, dtype=float)
        else:
            if not isinstance(params, HerglotzMeasure):
                raise InvalidArgument("measure-backed search needs a HerglotzMeasure")
            w, th = np.array(params.weights), np.array(params.angles)
        if w.size != self.dim:
            raise InvalidArgument(f"expected {self.dim} parameters, got {w.size}")
        return w.copy(), th.copy()


def _coordinate_search(problem: _Problem, w, th, cfg: SearchConfig, target: float):
    best = problem.value(w, th)
    step = cfg.step
    sweeps = 0
    while sweeps < cfg.max_iter and step >= STEP_STOP and target - best > GAP_STOP:
        sweeps += 1
        improved = False
        for i in range(problem.dim):
            for sign in (1.0, -1.0):
                trial = w.copy()
                trial[i] += sign * step
                trial = problem.project(trial)
                v = problem.value(trial, th)
                if v > best:
                    w, best, improved = trial, v, True
                    break
        for i in range(problem.dim):
            for sign in (1.0, -1.0):
                trial = th.copy()
                trial[i] += sign * step * math.pi
                v = problem.value(w, trial)
                if v > best:
                    th, best, improved = trial, v, True
                    break
        if not improved:
            step *= cfg.decay
    return best, w, th, sweeps


def maximize_functional(spec: ClassSpec, fspec: FunctionalSpec, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Multi-start projected coordinate search; deterministic given ``cfg.seed``."""
    problem = _Problem(spec, fspec)
    bound = sharp_bound(spec, fspec)
    target = cfg.target if cfg.target is not None else bound
    best_val, best = -1.0, None
    total_iters = 0
    history = []
    used = 0
    for r in range(cfg.restarts):
        used = r + 1
        rng = np.random.default_rng([cfg.seed, r])
        w, th = problem.start(rng)
        val, w, th, iters = _coordinate_search(problem, w, th, cfg, target)
        total_iters += iters
        history.append(val)
        # first restart wins ties at machine precision
        if best is None or val > best_val * (1 + 4 * np.finfo(float).eps):
            best_val, best = val, (w, th)
        if target - best_val <= GAP_STOP:
            break
    return SearchResult(
        best_value=float(best_val),
        bound=bound,
        params=problem.params(*best),
        iterations=total_iters,
        restarts_used=used,
        seed=cfg.seed,
        history=history,
    )


def evaluate_params(spec: ClassSpec, fspec: FunctionalSpec, params: Params) -> float:
    problem = _Problem(spec, fspec)
    return problem.value(*problem.unpack(params))


def extremal_params(spec: ClassSpec, fspec: FunctionalSpec, branch: str) -> Params:
    """Search-space parameters of the closed-form extremal for ``branch``."""
    from .classes import extremal_measure

    problem = _Problem(spec, fspec)
    if not problem.hurwitz:
        return extremal_measure(spec, fspec.m, fspec.n, branch, atoms=problem.dim)
    m, n, t = fspec.m, fspec.n, fspec.top
    w = np.zeros(problem.dim)
    if branch == "resonant":
        w[t - 2] = 1.0
    elif m == n:
        w[n - 2] = 1.0
    else:
        w[m - 2] = w[n - 2] = 0.5
    return HurwitzParams(w, np.zeros(problem.dim))


def strictness_probe(
    spec: ClassSpec,
    fspec: FunctionalSpec,
    params: Params,
    eps: float = 1e-3,
    seed: int = 0,
    count: int = 32,
) -> float:
    """Largest |Phi| over ``count`` feasible eps-perturbations of ``params``.

    Weights move toward a random feasible point, w -> (1-eps) w + eps u, which
    keeps them feasible without clipping back onto the extremal; angles get
    eps-scaled Gaussian kicks.
    """
    if eps < 0:
        raise InvalidArgument("eps must be nonnegative")
    problem = _Problem(spec, fspec)
    w0, th0 = problem.unpack(params)
    rng = np.random.default_rng(seed)
    best = -math.inf
    for _ in range(count):
        u = problem.feasible_point(rng)
        w = problem.project((1 - eps) * w0 + eps * u) if eps > 0 else w0
        th = th0 + eps * rng.standard_normal(problem.dim)
        best = max(best, problem.value(w, th))
    return best
