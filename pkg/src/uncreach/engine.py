"""Reachability pipelines for linear systems with interval uncertainty.

Numeric route: discretize to a point matrix Abar plus interval remainder
Lbar, then iterate the star recurrence

    R_0 = Theta,    R_k = Abar R_{k-1}  (+)  box(Lbar R_{k-1}),

whose k-th set contains x_k = (Abar + E)^k x_0 for every fixed E in Lbar
and x_0 in Theta.  Symbolic route: the nominal flow exp(At) Theta padded
by a bloating radius from a closed-form bound.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import bounds as _bounds
from .errors import DimensionMismatch
from .intervals import IntervalMatrix, interval_expm
from .stars import Box, Star, compact, interval_reduce, lambda_box, linear_map, \
    minkowski_sum, zono_reduce

__all__ = [
    "CellUncertainty",
    "HalfSpace",
    "ModelSpec",
    "ReachResult",
    "SafetyVerdict",
    "discretize",
    "ors_reach",
    "nominal_reach",
    "symbolic_reach",
    "reach_with_perturbation",
    "safety_check",
    "REDUCTION_METHODS",
]

REDUCTION_METHODS = ("none", "interval", "zonotope")


@dataclass(frozen=True)
class CellUncertainty:
    """Uncertainty of one dynamics-matrix entry.

    Exactly one of `relative` (symmetric fraction of the entry magnitude)
    or `interval` (explicit entry range) must be given.
    """

    row: int
    col: int
    relative: float | None = None
    interval: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if (self.relative is None) == (self.interval is None):
            raise ValueError("give exactly one of relative or interval")
        if self.relative is not None:
            if not math.isfinite(self.relative) or self.relative < 0:
                raise ValueError("relative fraction must be finite and nonnegative")
        else:
            lo, hi = self.interval
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError("interval endpoints must be finite")
            if lo > hi:
                raise ValueError("interval lower endpoint exceeds upper")
            object.__setattr__(self, "interval", (float(lo), float(hi)))


@dataclass(frozen=True, eq=False)
class HalfSpace:
    """Unsafe half-space { x : normal . x >= offset }."""

    normal: np.ndarray
    offset: float

    def __post_init__(self) -> None:
        normal = np.asarray(self.normal, dtype=np.float64)
        if normal.ndim != 1 or not np.all(np.isfinite(normal)):
            raise ValueError("normal must be a finite vector")
        if not np.any(normal):
            raise ValueError("normal must be nonzero")
        if not math.isfinite(self.offset):
            raise ValueError("offset must be finite")
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))


@dataclass(frozen=True, eq=False)
class ModelSpec:
    """A linear model with interval uncertainty, initial box and unsafe sets."""

    name: str
    a: np.ndarray
    uncertainty: tuple[CellUncertainty, ...]
    initial: Box
    horizon: int
    continuous: bool = True
    step: float | None = None
    unsafe: tuple[HalfSpace, ...] = ()
    reduction_method: str = "none"
    reduction_period: int = 500

    def __post_init__(self) -> None:
        a = np.asarray(self.a, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatch("dynamics matrix must be square")
        if not np.all(np.isfinite(a)):
            raise ValueError("dynamics matrix must be finite")
        n = a.shape[0]
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "uncertainty", tuple(self.uncertainty))
        object.__setattr__(self, "unsafe", tuple(self.unsafe))
        if self.initial.dim != n:
            raise DimensionMismatch("initial box dimension must match the matrix")
        for cell in self.uncertainty:
            if not (0 <= cell.row < n and 0 <= cell.col < n):
                raise ValueError(f"uncertainty cell ({cell.row},{cell.col}) out of range")
        for hs in self.unsafe:
            if hs.normal.shape[0] != n:
                raise DimensionMismatch("half-space normal must match the dimension")
        if self.horizon < 1:
            raise ValueError("horizon must be at least 1")
        if self.continuous:
            if self.step is None or not (self.step > 0) or not math.isfinite(self.step):
                raise ValueError("continuous models need a positive step")
        if self.reduction_method not in REDUCTION_METHODS:
            raise ValueError(f"unknown reduction method {self.reduction_method!r}")
        if self.reduction_method != "none" and self.reduction_period < 1:
            raise ValueError("reduction period must be positive")

    @property
    def dim(self) -> int:
        return self.a.shape[0]

    def lambda_u(self) -> IntervalMatrix:
        """Uncertain dynamics family: point A with the listed cells widened."""
        lo = self.a.copy()
        hi = self.a.copy()
        for cell in self.uncertainty:
            if cell.relative is not None:
                r = cell.relative * abs(self.a[cell.row, cell.col])
                lo[cell.row, cell.col] = self.a[cell.row, cell.col] - r
                hi[cell.row, cell.col] = self.a[cell.row, cell.col] + r
            else:
                lo[cell.row, cell.col], hi[cell.row, cell.col] = cell.interval
        return IntervalMatrix(lo, hi)

    def perturbation(self) -> IntervalMatrix:
        """Perturbation part Lambda = lambda_u - A (zero outside listed cells)."""
        return self.lambda_u().sub_point(self.a)

    def times(self) -> np.ndarray:
        """Time grid 0, h, ..., horizon*h (continuous models)."""
        if not self.continuous:
            raise ValueError("time grid is only defined for continuous models")
        return np.arange(self.horizon + 1) * self.step


@dataclass(eq=False)
class ReachResult:
    """Per-step flowpipe data from either pipeline.

    labels : step indices (numeric) or times (symbolic)
    stars  : the star at each step (numeric: the reachable set itself;
             symbolic: the nominal set, to be padded by radii)
    radii  : bloating radius per step (zero on the numeric route)
    boxes  : bounding box per step, radius already applied
    """

    kind: str
    method: str
    labels: np.ndarray
    stars: list[Star]
    radii: np.ndarray
    boxes: list[Box]
    gen_counts: np.ndarray
    wall_time: float = 0.0
    phi: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.stars)


@dataclass(frozen=True)
class SafetyVerdict:
    """Outcome of checking a flowpipe against unsafe half-spaces."""

    safe: bool
    step: int | None = None
    halfspace: int | None = None
    support: float | None = None


def discretize(a, pert: IntervalMatrix, h: float,
               order: int = 20) -> tuple[np.ndarray, IntervalMatrix]:
    """Split exp((A+Lambda) h) into a point matrix and interval remainder.

    Returns (Abar, Lbar) with Abar = expm(A h) and Lbar = M - Abar
    entrywise, M the interval exponential of A + Lambda.  The one-step map
    of every member system lies in Abar + Lbar; the nominal part stays a
    point so all conservatism sits in Lbar.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.shape != pert.shape:
        raise DimensionMismatch("matrix and perturbation shapes differ")
    if not (h > 0) or not math.isfinite(h):
        raise ValueError("step must be positive")
    m = interval_expm(IntervalMatrix.from_point(a) + pert, h, order=order)
    abar = scipy.linalg.expm(a * h)
    return abar, m.sub_point(abar)


def _run_recurrence(abar: np.ndarray, lbar: IntervalMatrix, theta: Box,
                    horizon: int, reduction_method: str,
                    reduction_period: int, method_name: str) -> ReachResult:
    start = time.perf_counter()
    s = theta.to_star()
    stars = [s]
    boxes = [s.bounding_box()]
    counts = [s.n_gens]
    n = theta.dim
    for k in range(1, horizon + 1):
        u = compact(lambda_box(lbar, s))
        s = linear_map(abar, s)
        if u.n_gens or np.any(u.anchor):
            s = minkowski_sum(s, u)
        if reduction_method != "none" and k % reduction_period == 0:
            if reduction_method == "interval":
                s = interval_reduce(s)
            else:
                s = zono_reduce(s, 2 * n)
        stars.append(s)
        boxes.append(s.bounding_box())
        counts.append(s.n_gens)
    wall = time.perf_counter() - start
    return ReachResult(
        kind="numeric",
        method=method_name,
        labels=np.arange(horizon + 1, dtype=np.float64),
        stars=stars,
        radii=np.zeros(horizon + 1),
        boxes=boxes,
        gen_counts=np.asarray(counts, dtype=np.int64),
        wall_time=wall,
    )


def reach_with_perturbation(model: ModelSpec, pert: IntervalMatrix,
                            order: int = 20) -> ReachResult:
    """Numeric flowpipe of the model with an explicit perturbation family."""
    if model.continuous:
        abar, lbar = discretize(model.a, pert, model.step, order=order)
    else:
        abar, lbar = model.a, pert
    return _run_recurrence(abar, lbar, model.initial, model.horizon,
                           model.reduction_method, model.reduction_period,
                           method_name="numeric")


def ors_reach(model: ModelSpec, order: int = 20) -> ReachResult:
    """Numeric over-approximate flowpipe over the model horizon."""
    return reach_with_perturbation(model, model.perturbation(), order=order)


def nominal_reach(a_discrete, theta: Box, horizon: int) -> ReachResult:
    """Exact flowpipe of the unperturbed discrete map x -> A x."""
    a = np.asarray(a_discrete, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] != theta.dim:
        raise DimensionMismatch("matrix must be square and match the box")
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    start = time.perf_counter()
    s = theta.to_star()
    stars = [s]
    boxes = [s.bounding_box()]
    for _ in range(horizon):
        s = linear_map(a, s)
        stars.append(s)
        boxes.append(s.bounding_box())
    wall = time.perf_counter() - start
    return ReachResult(
        kind="numeric",
        method="nominal",
        labels=np.arange(horizon + 1, dtype=np.float64),
        stars=stars,
        radii=np.zeros(horizon + 1),
        boxes=boxes,
        gen_counts=np.full(horizon + 1, theta.dim, dtype=np.int64),
        wall_time=wall,
    )


def symbolic_reach(a, pert: IntervalMatrix, theta: Box, times,
                   method: str = "kagstrom1", norm_kind: str = "two",
                   cond_max: float = 1e8) -> ReachResult:
    """Nominal flow exp(At) Theta with a bloating radius per time point.

    The radius delta(t) = phi(t) ||exp(At)||_2 max_{x in Theta} ||x||_2
    makes the padded set contain every perturbed trajectory point, since
    phi bounds the relative deviation of the perturbed exponential.
    """
    a = np.asarray(a, dtype=np.float64)
    series = _bounds.bloat_series(a, pert, times, method, norm_kind,
                                  cond_max=cond_max)
    start = time.perf_counter()
    theta_star = theta.to_star()
    theta_norm = theta.max_norm()
    stars: list[Star] = []
    boxes: list[Box] = []
    radii = np.empty(series.times.shape)
    counts = np.full(series.times.shape, theta_star.n_gens, dtype=np.int64)
    for idx, t in enumerate(series.times):
        ea = scipy.linalg.expm(a * t)
        nominal = linear_map(ea, theta_star)
        delta = series.phi[idx] * float(np.linalg.norm(ea, 2)) * theta_norm
        radii[idx] = delta
        stars.append(nominal)
        box = nominal.bounding_box()
        boxes.append(Box(box.lo - delta, box.hi + delta))
    wall = time.perf_counter() - start
    return ReachResult(
        kind="symbolic",
        method=method,
        labels=series.times.copy(),
        stars=stars,
        radii=radii,
        boxes=boxes,
        gen_counts=counts,
        wall_time=wall,
        phi=series.phi.copy(),
    )


def safety_check(result: ReachResult, halfspaces) -> SafetyVerdict:
    """First step whose set meets an unsafe half-space, scanning in order.

    A half-space (normal, offset) is violated at a step iff the support of
    the step's set in direction normal is >= offset; symbolic sets add
    radius * ||normal||_2 on top of the nominal support.
    """
    halfspaces = tuple(halfspaces)
    if not halfspaces:
        return SafetyVerdict(safe=True)
    dirs = np.vstack([hs.normal for hs in halfspaces])
    dir_norms = np.linalg.norm(dirs, axis=1)
    offsets = np.asarray([hs.offset for hs in halfspaces])
    for k, star in enumerate(result.stars):
        sups = star.support_batch(dirs)
        if result.radii[k]:
            sups = sups + result.radii[k] * dir_norms
        hit = np.nonzero(sups >= offsets)[0]
        if hit.size:
            j = int(hit[0])
            return SafetyVerdict(safe=False, step=k, halfspace=j,
                                 support=float(sups[j]))
    return SafetyVerdict(safe=True)
