"""Shared domain types: monomials, structured domains, points, error reports.

Everything here is immutable after construction and every operation is a pure
function, so concurrent use needs no synchronization.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

# Default comparison tolerances. Closed-form identities should agree to
# TOL_EXACT; oracle-vs-bound agreement is limited by grid resolution.
TOL_EXACT = 1e-9
TOL_ORACLE = 1e-4

VERTEX_ENUM_LIMIT = 20  # 2^n blowup guard for explicit vertex lists


class DimensionMismatch(ValueError):
    """Point dimension does not match the monomial/domain dimension."""


class OutsideDomain(ValueError):
    """A point violates the defining inequalities of its domain."""


class UnsupportedDomain(ValueError):
    """The requested operation is not defined for this domain family."""


class ScaleExceeded(RuntimeError):
    """The request is beyond the enumeration/grid scale this library supports."""


def as_points(x, n: int) -> tuple[np.ndarray, bool]:
    """Normalize ``x`` to a (m, n) float array.

    Accepts a single n-vector or a stack of points; returns the 2-D array and
    a flag telling whether the input was a single point.
    """
    X = np.asarray(x, dtype=float)
    if X.ndim == 1:
        if X.shape[0] != n:
            raise DimensionMismatch(f"expected a point of dimension {n}, got {X.shape[0]}")
        return X[None, :], True
    if X.ndim == 2:
        if X.shape[1] != n:
            raise DimensionMismatch(f"expected points of dimension {n}, got {X.shape[1]}")
        return X, False
    raise DimensionMismatch(f"expected a vector or a matrix of points, got ndim={X.ndim}")


# ---------------------------------------------------------------------------
# Monomials
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Monomial:
    """A monomial prod_j x_j**alpha_j with integer exponents alpha_j >= 1."""

    alpha: tuple[int, ...]

    def __post_init__(self):
        if len(self.alpha) == 0:
            raise ValueError("monomial needs at least one variable")
        cleaned = []
        for a in self.alpha:
            if float(a) != int(a):
                raise ValueError(f"exponents must be integers, got {a!r}")
            if int(a) < 1:
                raise ValueError(f"exponents must be >= 1, got {a!r}")
            cleaned.append(int(a))
        object.__setattr__(self, "alpha", tuple(cleaned))

    @property
    def n(self) -> int:
        return len(self.alpha)

    @property
    def degree(self) -> int:
        return sum(self.alpha)

    def is_multilinear(self) -> bool:
        return all(a == 1 for a in self.alpha)

    def is_symmetric(self) -> bool:
        return len(set(self.alpha)) == 1

    @staticmethod
    def multilinear(n: int) -> "Monomial":
        return Monomial((1,) * n)

    def alpha_power(self) -> float:
        """prod_j alpha_j**alpha_j (the self-exponentiated coefficient)."""
        return float(np.prod([float(a) ** a for a in self.alpha]))


def monomial_values(m: Monomial, X: np.ndarray) -> np.ndarray:
    """Vectorized prod_j x_j**alpha_j over rows of X, sign-safe at negative bases.

    Powers are taken on |x_j| (so no real-pow domain issues) with the sign
    tracked explicitly from the exponent parity.
    """
    a = np.asarray(m.alpha, dtype=np.int64)
    mags = np.power(np.abs(X), a)
    odd = (a % 2).astype(bool)
    neg = (X < 0) & odd
    signs = np.where(neg, -1.0, 1.0)
    return np.prod(mags * signs, axis=-1)


def eval_monomial(m: Monomial, x) -> float | np.ndarray:
    """Evaluate x**alpha at a point (or rows of points)."""
    X, single = as_points(x, m.n)
    vals = monomial_values(m, X)
    return float(vals[0]) if single else vals


def scale_error(err: float, c, m: Monomial) -> float:
    """Transport an error value to the coordinate-scaled box: |c**alpha| * err.

    ``c`` must have no zero entries; the companion point map is
    :func:`scale_point`.
    """
    C = np.asarray(c, dtype=float)
    if C.shape != (m.n,):
        raise DimensionMismatch(f"scaling vector must have dimension {m.n}")
    if np.any(C == 0.0):
        raise ValueError("scaling vector must have no zero entries")
    return abs(float(monomial_values(m, C[None, :])[0])) * err


def scale_point(x, w: float, c, m: Monomial) -> tuple[np.ndarray, float]:
    """Companion map of :func:`scale_error`: x_j -> c_j x_j, w -> c**alpha * w."""
    X, _ = as_points(x, m.n)
    C = np.asarray(c, dtype=float)
    if np.any(C == 0.0):
        raise ValueError("scaling vector must have no zero entries")
    calpha = float(monomial_values(m, C[None, :])[0])
    return X[0] * C, calpha * w


# ---------------------------------------------------------------------------
# Structured domains
# ---------------------------------------------------------------------------

class Domain:
    """Base class for the structured domain families.

    Each family is described exactly by finitely many halfspaces A x <= b, and
    all membership queries reduce to those inequalities.
    """

    n: int

    def halfspaces(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        raise NotImplementedError

    def contains_many(self, X, tol: float = TOL_EXACT) -> np.ndarray:
        P, _ = as_points(X, self.n)
        A, b = self.halfspaces()
        return np.all(P @ A.T <= b + tol, axis=1)

    def contains(self, x, tol: float = TOL_EXACT) -> bool:
        return bool(self.contains_many(np.asarray(x, float)[None, :], tol)[0])

    def require_inside(self, X, tol: float = TOL_EXACT) -> None:
        ok = self.contains_many(X, tol)
        if not np.all(ok):
            bad = np.asarray(X, float).reshape(-1, self.n)[~ok][0]
            raise OutsideDomain(f"point {bad.tolist()} is outside {self}")

    def coordinate_range(self, x, j: int) -> tuple[float, float]:
        """Feasible interval for coordinate j with the other coordinates fixed."""
        d = np.zeros(self.n)
        d[j] = 1.0
        tlo, thi = self.line_range(x, d)
        xj = float(np.asarray(x, float)[j])
        return xj + tlo, xj + thi

    def line_range(self, x, d) -> tuple[float, float]:
        """Feasible parameter interval {t : x + t d in domain} (x feasible)."""
        A, b = self.halfspaces()
        x = np.asarray(x, dtype=float)
        d = np.asarray(d, dtype=float)
        num = b - A @ x
        den = A @ d
        tlo, thi = -np.inf, np.inf
        pos = den > 1e-14
        neg = den < -1e-14
        if np.any(pos):
            thi = float(np.min(num[pos] / den[pos]))
        if np.any(neg):
            tlo = float(np.max(num[neg] / den[neg]))
        return tlo, thi

    def vertices(self) -> np.ndarray:
        raise UnsupportedDomain(f"{type(self).__name__} has no vertex list")


def _box_vertices(lower: np.ndarray, upper: np.ndarray) -> np.ndarray:
    n = len(lower)
    if n > VERTEX_ENUM_LIMIT:
        raise ScaleExceeded(f"vertex enumeration refused for n={n} (2^n blowup)")
    cols = [(lower[j], upper[j]) for j in range(n)]
    return np.array(list(itertools.product(*cols)), dtype=float)


class _BoxDomain(Domain):
    """Shared behavior for the four box families."""

    def lower_vec(self) -> np.ndarray:
        raise NotImplementedError

    def upper_vec(self) -> np.ndarray:
        raise NotImplementedError

    def halfspaces(self):
        n = self.n
        eye = np.eye(n)
        A = np.vstack([eye, -eye])
        b = np.concatenate([self.upper_vec(), -self.lower_vec()])
        return A, b

    def bounding_box(self):
        return self.lower_vec(), self.upper_vec()

    def vertices(self) -> np.ndarray:
        return _box_vertices(self.lower_vec(), self.upper_vec())


@dataclass(frozen=True)
class UnitBox(_BoxDomain):
    """[0, 1]^n."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def lower_vec(self):
        return np.zeros(self.n)

    def upper_vec(self):
        return np.ones(self.n)


@dataclass(frozen=True)
class SubBox(_BoxDomain):
    """An axis-aligned box inside the unit box: prod_j [lower_j, upper_j]."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lower)
        up = tuple(float(v) for v in self.upper)
        if len(lo) != len(up) or len(lo) == 0:
            raise ValueError("lower/upper must be nonempty vectors of equal length")
        for l, u in zip(lo, up):
            if not (0.0 <= l <= u <= 1.0):
                raise ValueError(f"need 0 <= lower <= upper <= 1, got [{l}, {u}]")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", up)

    @property
    def n(self) -> int:
        return len(self.lower)

    def lower_vec(self):
        return np.asarray(self.lower, dtype=float)

    def upper_vec(self):
        return np.asarray(self.upper, dtype=float)


@dataclass(frozen=True)
class RatioBox(_BoxDomain):
    """[1, r]^n with r > 1 (constant upper/lower ratio in every coordinate)."""

    n: int
    r: float

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.r > 1.0:
            raise ValueError("ratio r must be > 1")
        object.__setattr__(self, "r", float(self.r))

    def lower_vec(self):
        return np.ones(self.n)

    def upper_vec(self):
        return np.full(self.n, self.r)


@dataclass(frozen=True)
class SymBox(_BoxDomain):
    """[-1, 1]^n."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def lower_vec(self):
        return -np.ones(self.n)

    def upper_vec(self):
        return np.ones(self.n)


@dataclass(frozen=True)
class StdSimplex(Domain):
    """{x >= 0 : sum_j x_j <= 1}."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")

    def halfspaces(self):
        n = self.n
        A = np.vstack([-np.eye(n), np.ones((1, n))])
        b = np.concatenate([np.zeros(n), [1.0]])
        return A, b

    def bounding_box(self):
        return np.zeros(self.n), np.ones(self.n)

    def vertices(self) -> np.ndarray:
        return np.vstack([np.zeros(self.n), np.eye(self.n)])


@dataclass(frozen=True)
class CornerSimplexOne(Domain):
    """Simplex cornered at the all-ones point: conv{1, 1 - lam_i e_i}.

    Equivalently {x <= 1 : sum_j x_j/lam_j >= sum_j 1/lam_j - 1} with
    0 < lam_j <= 1.
    """

    lam: tuple[float, ...]

    def __post_init__(self):
        lam = tuple(float(v) for v in self.lam)
        if len(lam) == 0:
            raise ValueError("lam must be nonempty")
        for v in lam:
            if not (0.0 < v <= 1.0):
                raise ValueError(f"need 0 < lam_j <= 1, got {v}")
        object.__setattr__(self, "lam", lam)

    @property
    def n(self) -> int:
        return len(self.lam)

    def halfspaces(self):
        n = self.n
        inv = 1.0 / np.asarray(self.lam)
        A = np.vstack([np.eye(n), -inv[None, :]])
        b = np.concatenate([np.ones(n), [1.0 - float(inv.sum())]])
        return A, b

    def bounding_box(self):
        return 1.0 - np.asarray(self.lam), np.ones(self.n)

    def vertices(self) -> np.ndarray:
        vs = [np.ones(self.n)]
        for i in range(self.n):
            v = np.ones(self.n)
            v[i] = 1.0 - self.lam[i]
            vs.append(v)
        return np.vstack(vs)


@dataclass(frozen=True)
class ComplementSimplex(Domain):
    """conv({0,1}^n minus the all-ones point) = {x in [0,1]^n : sum x_j <= n-1}."""

    n: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("n must be >= 2")

    def halfspaces(self):
        n = self.n
        eye = np.eye(n)
        A = np.vstack([eye, -eye, np.ones((1, n))])
        b = np.concatenate([np.ones(n), np.zeros(n), [float(n - 1)]])
        return A, b

    def bounding_box(self):
        return np.zeros(self.n), np.ones(self.n)

    def vertices(self) -> np.ndarray:
        if self.n > VERTEX_ENUM_LIMIT:
            raise ScaleExceeded(f"vertex enumeration refused for n={self.n}")
        vs = [v for v in itertools.product((0.0, 1.0), repeat=self.n) if sum(v) < self.n]
        return np.array(vs, dtype=float)


# ---------------------------------------------------------------------------
# Error reports
# ---------------------------------------------------------------------------

class Verdict(Enum):
    TIGHT = "TIGHT"
    VALID_UPPER = "VALID_UPPER"
    VIOLATED = "VIOLATED"


@dataclass(frozen=True)
class ErrorReport:
    """A computed bound next to an oracle measurement of the same error."""

    bound_value: float
    measured_value: float
    attainment_points: tuple
    abs_gap: float
    verdict: Verdict
    tolerance: float = TOL_ORACLE
    grid: Optional[object] = None  # GridSpec used by the oracle, if any

    @property
    def ok(self) -> bool:
        return self.verdict is not Verdict.VIOLATED


def error_report(bound: float, measured: float, points: Sequence = (),
                 tol: float = TOL_ORACLE, grid=None) -> ErrorReport:
    """Classify a measurement against a bound at the given tolerance."""
    if measured > bound + tol:
        verdict = Verdict.VIOLATED
    elif abs(measured - bound) <= tol:
        verdict = Verdict.TIGHT
    else:
        verdict = Verdict.VALID_UPPER
    pts = tuple(np.asarray(p, dtype=float) for p in points)
    return ErrorReport(
        bound_value=float(bound),
        measured_value=float(measured),
        attainment_points=pts,
        abs_gap=abs(float(bound) - float(measured)),
        verdict=verdict,
        tolerance=tol,
        grid=grid,
    )
