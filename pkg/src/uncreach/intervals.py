"""Interval scalars, interval matrices, their norms and exponential.

An interval matrix L = [lo, hi] stands for the set of real matrices
{ M : lo <= M <= hi entrywise }.  Arithmetic is outward in exact real
arithmetic (floating-point rounding is not directed; consumers that need
slack add it explicitly).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DimensionTooLarge, RemainderDiverges

__all__ = [
    "Interval",
    "IntervalMatrix",
    "interval_expm",
]


@dataclass(frozen=True)
class Interval:
    """A closed real interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("interval endpoints must be finite")
        if self.lo > self.hi:
            raise ValueError("lower endpoint has to be smaller or equal to upper")

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def radius(self) -> float:
        return 0.5 * (self.hi - self.lo)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def __add__(self, other: "Interval | float") -> "Interval":
        other = _as_interval(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other: "Interval | float") -> "Interval":
        return self + (-_as_interval(other))

    def __mul__(self, other: "Interval | float") -> "Interval":
        other = _as_interval(other)
        p = (self.lo * other.lo, self.lo * other.hi,
             self.hi * other.lo, self.hi * other.hi)
        return Interval(min(p), max(p))

    __rmul__ = __mul__

    def contains(self, x: float, tol: float = 0.0) -> bool:
        return self.lo - tol <= x <= self.hi + tol


def _as_interval(x) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval(float(x), float(x))


def _check_finite(a: np.ndarray, what: str) -> None:
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{what} must be finite")


@dataclass(frozen=True, eq=False)
class IntervalMatrix:
    """Entrywise interval matrix given by lower and upper bound arrays.

    The arrays are float64, shape (rows, cols), and are treated as
    immutable after construction.
    """

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self) -> None:
        lo = np.ascontiguousarray(np.asarray(self.lo, dtype=np.float64))
        hi = np.ascontiguousarray(np.asarray(self.hi, dtype=np.float64))
        if lo.ndim != 2 or lo.shape != hi.shape:
            raise DimensionMismatch(
                f"bound arrays must be matching 2-d arrays, got {lo.shape} and {hi.shape}"
            )
        _check_finite(lo, "interval matrix bounds")
        _check_finite(hi, "interval matrix bounds")
        if np.any(lo > hi):
            raise ValueError("lower bound exceeds upper bound in some entry")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    # -- constructors ----------------------------------------------------

    @classmethod
    def from_point(cls, m: np.ndarray) -> "IntervalMatrix":
        m = np.asarray(m, dtype=np.float64)
        return cls(m.copy(), m.copy())

    @classmethod
    def from_center_radius(cls, center: np.ndarray, radius: np.ndarray) -> "IntervalMatrix":
        center = np.asarray(center, dtype=np.float64)
        radius = np.asarray(radius, dtype=np.float64)
        if np.any(radius < 0):
            raise ValueError("radius must be nonnegative")
        return cls(center - radius, center + radius)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntervalMatrix":
        return cls(np.zeros((rows, cols)), np.zeros((rows, cols)))

    # -- basic queries ----------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.lo.shape

    @property
    def center(self) -> np.ndarray:
        return 0.5 * (self.lo + self.hi)

    @property
    def radius(self) -> np.ndarray:
        return 0.5 * (self.hi - self.lo)

    def is_point(self) -> bool:
        return bool(np.all(self.lo == self.hi))

    def contains(self, m: np.ndarray, tol: float = 0.0) -> bool:
        m = np.asarray(m, dtype=np.float64)
        return bool(np.all(m >= self.lo - tol) and np.all(m <= self.hi + tol))

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        """A uniformly drawn member matrix."""
        u = rng.random(self.shape)
        return self.lo + u * (self.hi - self.lo)

    def __getitem__(self, idx) -> Interval:
        i, j = idx
        return Interval(float(self.lo[i, j]), float(self.hi[i, j]))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        other = _as_im(other)
        if other.shape != self.shape:
            raise DimensionMismatch("shape mismatch in interval addition")
        return IntervalMatrix(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __sub__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        other = _as_im(other)
        if other.shape != self.shape:
            raise DimensionMismatch("shape mismatch in interval subtraction")
        return IntervalMatrix(self.lo - other.hi, self.hi - other.lo)

    def sub_point(self, m: np.ndarray) -> "IntervalMatrix":
        """Entrywise translate by a point matrix: [lo - m, hi - m]."""
        m = np.asarray(m, dtype=np.float64)
        if m.shape != self.shape:
            raise DimensionMismatch("shape mismatch in point subtraction")
        return IntervalMatrix(self.lo - m, self.hi - m)

    def scale(self, c: float) -> "IntervalMatrix":
        """Multiply by a real scalar."""
        if c >= 0:
            return IntervalMatrix(self.lo * c, self.hi * c)
        return IntervalMatrix(self.hi * c, self.lo * c)

    def __matmul__(self, other: "IntervalMatrix") -> "IntervalMatrix":
        """Exact interval matrix product.

        Each scalar product [a,b]*[c,d] is the tight hull of the four
        endpoint products; entries are summed exactly (up to rounding).
        """
        other = _as_im(other)
        if self.shape[1] != other.shape[0]:
            raise DimensionMismatch("inner dimensions do not match")
        # (rows, inner, cols) tensors of all endpoint products
        a = self.lo[:, :, None]
        b = self.hi[:, :, None]
        c = other.lo[None, :, :]
        d = other.hi[None, :, :]
        pr = np.stack((a * c, a * d, b * c, b * d))
        lo = pr.min(axis=0).sum(axis=1)
        hi = pr.max(axis=0).sum(axis=1)
        return IntervalMatrix(lo, hi)

    # -- norms --------------------------------------------------------------

    def frobenius_sup(self) -> float:
        """sup of the Frobenius norm over the matrix family.

        Equals || |center| + radius ||_F: the entrywise largest magnitudes
        are attained independently.
        """
        worst = np.abs(self.center) + self.radius
        return float(np.linalg.norm(worst, "fro"))

    def two_norm_sup(self, max_dim: int = 8) -> float:
        """sup of the spectral norm over the matrix family.

        The supremum is attained on a vertex matrix of the form
        C + (y z^T) o Delta with sign vectors y, z, so it is computed by
        enumerating sign patterns (2^(2n-1) after symmetry).  Refuses with
        DimensionTooLarge when the matrix order exceeds `max_dim`.
        """
        n, m = self.shape
        if n != m:
            raise DimensionMismatch("interval 2-norm sup requires a square matrix")
        if n > max_dim:
            raise DimensionTooLarge(
                f"sign enumeration needs 2^(2n-1) spectral norms; n={n} exceeds max_dim={max_dim}"
            )
        c = self.center
        r = self.radius
        if not np.any(r):
            return float(np.linalg.norm(c, 2))
        best = 0.0
        for cand in self.two_norm_vertices(max_dim=max_dim):
            val = float(np.linalg.norm(cand, 2))
            if val > best:
                best = val
        return best

    def two_norm_vertices(self, max_dim: int = 8):
        """Yield the sign-vertex candidates C + (y z^T) o Delta.

        (y, z) and (-y, -z) give the same matrix, so y[0] is fixed at +1
        and 2^(2n-1) matrices are produced.
        """
        n, m = self.shape
        if n != m:
            raise DimensionMismatch("interval 2-norm sup requires a square matrix")
        if n > max_dim:
            raise DimensionTooLarge(f"n={n} exceeds max_dim={max_dim}")
        c = self.center
        r = self.radius
        for ybits in range(2 ** (n - 1)):
            y = _sign_vector(ybits << 1, n)
            yr = y[:, None] * r
            for zbits in range(2 ** n):
                z = _sign_vector(zbits, n)
                yield c + yr * z[None, :]


def _sign_vector(bits: int, n: int) -> np.ndarray:
    """Map the low n bits to a +/-1 vector (set bit -> -1)."""
    s = np.ones(n)
    for i in range(n):
        if (bits >> i) & 1:
            s[i] = -1.0
    return s


def _as_im(x) -> IntervalMatrix:
    if isinstance(x, IntervalMatrix):
        return x
    return IntervalMatrix.from_point(np.asarray(x, dtype=np.float64))


def interval_expm(lam: IntervalMatrix, t: float, order: int = 20) -> IntervalMatrix:
    """Interval matrix containing { expm(M t) : M in lam }.

    Sums the Taylor series through `order` with interval arithmetic and
    widens every entry by the rigorous tail bound

        r = theta^(order+1) / ((order+1)! (1 - theta/(order+2))),

    theta = frobenius_sup(lam) * t, valid while theta < order + 2
    (RemainderDiverges otherwise).  Each scalar |R_ij| <= ||R||_2 <= r.
    """
    n, m = lam.shape
    if n != m:
        raise DimensionMismatch("matrix exponential requires a square matrix")
    if t < 0:
        raise ValueError("time must be nonnegative")
    if order < 1:
        raise ValueError("order must be at least 1")
    theta = lam.frobenius_sup() * t
    if theta >= order + 2:
        raise RemainderDiverges(
            f"theta={theta:.3g} >= order+2={order + 2}; raise the order or shrink t"
        )
    lt = lam.scale(t)
    acc = IntervalMatrix.from_point(np.eye(n))
    term = IntervalMatrix.from_point(np.eye(n))
    for k in range(1, order + 1):
        term = (term @ lt).scale(1.0 / k)
        acc = acc + term
    tail = theta ** (order + 1) / (
        math.factorial(order + 1) * (1.0 - theta / (order + 2))
    )
    pad = np.full((n, n), tail)
    return IntervalMatrix(acc.lo - pad, acc.hi + pad)
