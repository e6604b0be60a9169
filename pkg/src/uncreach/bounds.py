"""Closed-form bounds on the relative deviation of a perturbed exponential.

For dynamics matrix A and interval perturbation family Lambda, the bloating
factor at time t is

    phi(t) = sup_{E in Lambda} ||exp((A+E)t) - exp(At)|| / ||exp(At)||.

The three bounds implemented here dominate phi(t) whenever the norm
argument dominates sup ||E||, so instantiating them with the interval
2-norm sup gives a valid 2-norm bound and with the Frobenius sup a valid
(larger) Frobenius bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DefectiveMatrix, DimensionMismatch
from .intervals import IntervalMatrix

__all__ = [
    "SpectralData",
    "spectral_data",
    "p_poly",
    "kagstrom1",
    "kagstrom2",
    "loan",
    "bloat_factor",
    "BloatSeries",
    "bloat_series",
    "interval_norm",
    "BLOAT_METHODS",
    "NORM_KINDS",
]

BLOAT_METHODS = ("kagstrom1", "kagstrom2", "loan")
NORM_KINDS = ("two", "frobenius")


@dataclass(frozen=True)
class SpectralData:
    """Spectral quantities of a point matrix used by the bounds.

    two_norm : spectral norm ||A||_2
    alpha    : spectral abscissa, max real part of the eigenvalues
    eps      : largest eigenvalue modulus
    cond_s   : 2-norm condition number of the eigenvector matrix
               (inf when numerically defective)
    """

    two_norm: float
    alpha: float
    eps: float
    cond_s: float


def _square(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch("matrix must be square")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix must be finite")
    return a


def spectral_data(a) -> SpectralData:
    a = _square(a)
    two_norm = float(np.linalg.norm(a, 2))
    eigvals, eigvecs = np.linalg.eig(a)
    alpha = float(np.max(eigvals.real))
    eps = float(np.max(np.abs(eigvals)))
    sv = np.linalg.svd(eigvecs, compute_uv=False)
    cond_s = float(sv[0] / sv[-1]) if sv[-1] > 0 else math.inf
    return SpectralData(two_norm=two_norm, alpha=alpha, eps=eps, cond_s=cond_s)


def p_poly(n: int, x: float) -> float:
    """Truncated exponential sum p_{n-1}(x) = sum_{k=0}^{n-1} x^k / k!."""
    if n < 1:
        raise ValueError("n must be at least 1")
    acc = 1.0
    term = 1.0
    for k in range(1, n):
        term *= x / k
        acc += term
    return acc


def _exp(x: float) -> float:
    # the closed forms are upper bounds, so saturating at inf stays sound
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def _expm1(x: float) -> float:
    try:
        return math.expm1(x)
    except OverflowError:
        return math.inf


def kagstrom1(a, lambda_norm: float, t: float) -> float:
    """Power-series bound p(x)(exp(p(x) ||Lambda|| t) - 1), x = ||A||_2 t."""
    a = _square(a)
    _check_args(lambda_norm, t)
    if lambda_norm == 0 or t == 0:
        return 0.0
    n = a.shape[0]
    p = p_poly(n, float(np.linalg.norm(a, 2)) * t)
    return p * _expm1(p * lambda_norm * t)


def kagstrom2(a, lambda_norm: float, t: float, cond_max: float = 1e8) -> float:
    """Eigenbasis bound K e^(eps t)(e^(K ||Lambda|| t) - 1).

    K is the condition number of the eigenvector matrix and eps the
    largest eigenvalue modulus.  Raises DefectiveMatrix when the
    eigenbasis is numerically unusable (cond above cond_max).
    """
    _check_args(lambda_norm, t)
    sd = spectral_data(a)
    if not math.isfinite(sd.cond_s) or sd.cond_s > cond_max:
        raise DefectiveMatrix(
            f"kagstrom2 bound unusable: eigenvector condition {sd.cond_s:.3g} "
            f"exceeds {cond_max:.3g}"
        )
    if lambda_norm == 0 or t == 0:
        return 0.0
    k = sd.cond_s
    return k * _exp(sd.eps * t) * _expm1(k * lambda_norm * t)


def loan(a, lambda_norm: float, t: float) -> float:
    """Log-norm style bound t ||Lambda|| exp((||A||_2 - alpha + ||Lambda||) t)."""
    _check_args(lambda_norm, t)
    sd = spectral_data(a)
    if lambda_norm == 0 or t == 0:
        return 0.0
    return t * lambda_norm * _exp((sd.two_norm - sd.alpha + lambda_norm) * t)


def _check_args(lambda_norm: float, t: float) -> None:
    if lambda_norm < 0:
        raise ValueError("perturbation norm must be nonnegative")
    if t < 0:
        raise ValueError("time must be nonnegative")


def bloat_factor(a, lambda_norm: float, t: float, method: str,
                 cond_max: float = 1e8) -> float:
    if method == "kagstrom1":
        return kagstrom1(a, lambda_norm, t)
    if method == "kagstrom2":
        return kagstrom2(a, lambda_norm, t, cond_max=cond_max)
    if method == "loan":
        return loan(a, lambda_norm, t)
    raise ValueError(f"unknown bloat method {method!r}")


def interval_norm(lam: IntervalMatrix, kind: str, max_dim: int = 8) -> float:
    """Interval matrix norm sup used to instantiate the bounds."""
    if kind == "two":
        return lam.two_norm_sup(max_dim=max_dim)
    if kind == "frobenius":
        return lam.frobenius_sup()
    raise ValueError(f"unknown norm kind {kind!r}")


@dataclass(frozen=True, eq=False)
class BloatSeries:
    """Bloating factors phi(t) on a time grid for one method and norm."""

    method: str
    norm_kind: str
    lambda_norm: float
    times: np.ndarray
    phi: np.ndarray


def bloat_series(a, lam: IntervalMatrix, times, method: str,
                 norm_kind: str = "two", cond_max: float = 1e8,
                 max_dim: int = 8) -> BloatSeries:
    """Evaluate one bound over an ascending time grid.

    The interval norm is computed once; each phi value is the closed form
    at that time.  Values are nondecreasing in t.
    """
    a = _square(a)
    times = np.asarray(times, dtype=np.float64)
    if times.ndim != 1:
        raise ValueError("times must be a 1-d grid")
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be nonnegative and ascending")
    if lam.shape != a.shape:
        raise DimensionMismatch("perturbation family must match the matrix shape")
    lambda_norm = interval_norm(lam, norm_kind, max_dim=max_dim)
    phi = np.empty(times.shape)
    if method == "kagstrom1":
        norm_a = float(np.linalg.norm(a, 2))
        n = a.shape[0]
        for idx, t in enumerate(times):
            if lambda_norm == 0 or t == 0:
                phi[idx] = 0.0
                continue
            p = p_poly(n, norm_a * t)
            phi[idx] = p * _expm1(p * lambda_norm * t)
    elif method == "kagstrom2":
        sd = spectral_data(a)
        if not math.isfinite(sd.cond_s) or sd.cond_s > cond_max:
            raise DefectiveMatrix(
                f"kagstrom2 bound unusable: eigenvector condition {sd.cond_s:.3g} "
                f"exceeds {cond_max:.3g}"
            )
        for idx, t in enumerate(times):
            if lambda_norm == 0 or t == 0:
                phi[idx] = 0.0
                continue
            phi[idx] = sd.cond_s * _exp(sd.eps * t) * _expm1(
                sd.cond_s * lambda_norm * t
            )
    elif method == "loan":
        sd = spectral_data(a)
        rate = sd.two_norm - sd.alpha + lambda_norm
        for idx, t in enumerate(times):
            phi[idx] = t * lambda_norm * _exp(rate * t) if t > 0 and lambda_norm > 0 else 0.0
    else:
        raise ValueError(f"unknown bloat method {method!r}")
    return BloatSeries(method=method, norm_kind=norm_kind,
                       lambda_norm=lambda_norm, times=times, phi=phi)
