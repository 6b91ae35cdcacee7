"""Brute-force verifiers: grid maximization with local refinement, monomial
extremes, sampled-hull envelope values via tiny LPs, and numeric intercepts.

Grids use cell-center sampling (no boundary ties); the incumbent is then
polished by per-coordinate golden-section plus a line search along the
incumbent's orthant diagonal, which is where the attainment loci live. All
randomness is seeded, so results are reproducible bit for bit.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import (
    TOL_ORACLE,
    CornerSimplexOne,
    Domain,
    ErrorReport,
    Monomial,
    ScaleExceeded,
    StdSimplex,
    SymBox,
    UnitBox,
    _BoxDomain,
    as_points,
    error_report,
    monomial_values,
)
from .lp import solve_equality_lp

OVER = "OVER"
UNDER = "UNDER"

_DEFAULT_RESOLUTION = {1: 512, 2: 64, 3: 64, 4: 24, 5: 12, 6: 8}


@dataclass(frozen=True)
class GridSpec:
    """Scan parameters: per-coordinate resolution (n-dependent default),
    number of refinement passes, a total-size cap, and seeded restarts used
    for n >= 5 where the grid is coarse."""

    resolution: Optional[int] = None
    refine_passes: int = 3
    max_points: int = 100_000_000
    restarts: int = 16
    seed: int = 42

    def resolution_for(self, n: int) -> int:
        if self.resolution is not None:
            if self.resolution < 2:
                raise ValueError("resolution must be >= 2")
            return self.resolution
        try:
            return _DEFAULT_RESOLUTION[n]
        except KeyError:
            raise ScaleExceeded(
                f"no default grid for n={n}; supply an explicit GridSpec"
            ) from None


_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@functools.lru_cache(maxsize=16)
def _grid_points(dom: Domain, res: int, max_points: int) -> np.ndarray:
    """Cell-center grid over the domain's bounding box, filtered to members."""
    lo, hi = dom.bounding_box()
    n = dom.n
    if res ** n > max_points:
        raise ScaleExceeded(f"grid of {res}^{n} points exceeds the cap {max_points}")
    axes = [lo[j] + (np.arange(res) + 0.5) * (hi[j] - lo[j]) / res for j in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    pts = np.stack([g.ravel() for g in mesh], axis=-1)
    keep = dom.contains_many(pts)
    pts = pts[keep]
    pts.setflags(write=False)
    return pts


def _golden_line(func1, x: np.ndarray, d: np.ndarray, tlo: float, thi: float,
                 iters: int = 60) -> tuple[float, float]:
    """Golden-section max of t -> func1(x + t d) on [tlo, thi]."""
    a, b = tlo, thi
    c = b - _INVPHI * (b - a)
    e = a + _INVPHI * (b - a)
    fc = func1(x + c * d)
    fe = func1(x + e * d)
    for _ in range(iters):
        if fc >= fe:
            b, e, fe = e, c, fc
            c = b - _INVPHI * (b - a)
            fc = func1(x + c * d)
        else:
            a, c, fc = c, e, fe
            e = a + _INVPHI * (b - a)
            fe = func1(x + e * d)
        if b - a <= 1e-13:
            break
    t = 0.5 * (a + b)
    return t, func1(x + t * d)


def _refine(func: Callable[[np.ndarray], np.ndarray], dom: Domain,
            x0: np.ndarray, v0: float, cell: np.ndarray, passes: int,
            center_weights: Optional[np.ndarray] = None) -> tuple[np.ndarray, float]:
    """Coordinate golden-section around the incumbent cell, then line searches
    along the incumbent's orthant diagonal and centering directions.

    A centering direction moves toward equal |coordinates| while preserving a
    weighted signed sum, which tracks hinge ridges {sum w_j x_j = const}; the
    unweighted move covers multilinear cuts and ``center_weights`` (usually
    the monomial's exponents) covers slope-weighted ones.
    """

    def func1(p: np.ndarray) -> float:
        return float(func(p[None, :])[0])

    def line(x, v, d):
        tlo, thi = dom.line_range(x, d)
        if thi > tlo and np.isfinite(tlo) and np.isfinite(thi):
            t, vt = _golden_line(func1, x, d, tlo, thi)
            if vt > v:
                return x + t * d, vt
        return x, v

    n = dom.n
    x, v = x0.copy(), v0
    weightings = [np.ones(n)]
    if center_weights is not None and not np.all(np.asarray(center_weights) == 1.0):
        weightings.append(np.asarray(center_weights, dtype=float))
    for _ in range(passes):
        for j in range(n):
            lo_j, hi_j = dom.coordinate_range(x, j)
            a = max(lo_j, x[j] - cell[j])
            b = min(hi_j, x[j] + cell[j])
            if b - a <= 1e-14:
                continue
            d = np.zeros(n)
            d[j] = 1.0
            t, vt = _golden_line(func1, x, d, a - x[j], b - x[j])
            if vt > v:
                x = x + t * d
                v = vt
        diag = np.where(x < 0, -1.0, 1.0)
        x, v = line(x, v, diag)
        for w in weightings:
            target = float(np.sum(w * diag * x) / np.sum(w))
            cen = diag * target - x
            if np.max(np.abs(cen)) > 1e-12:
                x, v = line(x, v, cen)
    return x, v


def grid_maximize(func: Callable[[np.ndarray], np.ndarray], dom: Domain,
                  grid: Optional[GridSpec] = None,
                  center_weights: Optional[np.ndarray] = None) -> tuple[float, np.ndarray]:
    """Maximize a vectorized function over a structured domain.

    Grid scan (lexicographic tie-break), golden-section refinement from the
    incumbent, plus seeded random restarts when the grid is coarse (n >= 5).
    The refined value never falls below the grid incumbent.
    """
    spec = grid or GridSpec()
    n = dom.n
    res = spec.resolution_for(n)
    pts = _grid_points(dom, res, spec.max_points)
    if len(pts) == 0:
        raise ScaleExceeded("grid resolution too coarse: no interior cell centers")
    vals = func(pts)
    k = int(np.argmax(vals))  # first max in C order = lexicographic argmax
    lo, hi = dom.bounding_box()
    cell = (hi - lo) / res
    x, v = _refine(func, dom, pts[k].copy(), float(vals[k]), cell, spec.refine_passes,
                   center_weights)

    if n >= 5 and spec.restarts > 0:
        rng = np.random.default_rng(spec.seed)
        span = hi - lo
        starts = []
        while len(starts) < spec.restarts:
            cand = lo + rng.random((max(4 * spec.restarts, 64), n)) * span
            cand = cand[dom.contains_many(cand)]
            starts.extend(cand[: spec.restarts - len(starts)])
        for s in starts:
            xs, vs = _refine(func, dom, np.asarray(s), float(func(s[None, :])[0]),
                             cell, spec.refine_passes, center_weights)
            if vs > v:
                x, v = xs, vs
    return v, x


def grid_minimize(func, dom: Domain, grid: Optional[GridSpec] = None,
                  center_weights: Optional[np.ndarray] = None) -> tuple[float, np.ndarray]:
    v, x = grid_maximize(lambda X: -func(X), dom, grid, center_weights)
    return -v, x


def max_gap(m: Monomial, dom: Domain, estimator: Callable[[np.ndarray], np.ndarray],
            side: str, bound: Optional[float] = None,
            grid: Optional[GridSpec] = None, tol: float = TOL_ORACLE) -> ErrorReport:
    """Measure the worst estimator gap over a domain.

    ``side="OVER"`` scans estimator(x) - f(x) (concave overestimators),
    ``side="UNDER"`` scans f(x) - estimator(x). The report compares the
    measured maximum against ``bound`` when one is supplied.
    """
    if side not in (OVER, UNDER):
        raise ValueError(f"side must be OVER or UNDER, got {side!r}")
    if dom.n != m.n:
        raise ValueError("domain and monomial dimensions differ")

    if side == OVER:
        def gap(X):
            return np.asarray(estimator(X), dtype=float) - monomial_values(m, X)
    else:
        def gap(X):
            return monomial_values(m, X) - np.asarray(estimator(X), dtype=float)

    spec = grid or GridSpec()
    measured, point = grid_maximize(gap, dom, spec, center_weights=np.asarray(m.alpha, float))
    ref_bound = measured if bound is None else bound
    return error_report(ref_bound, measured, points=[point], tol=tol, grid=spec)


def extremize_f(m: Monomial, dom: Domain, sense: str,
                grid: Optional[GridSpec] = None) -> tuple[float, np.ndarray]:
    """Monomial extreme value over a domain, by closed form where available
    and by grid plus refinement otherwise."""
    if sense not in ("min", "max"):
        raise ValueError("sense must be 'min' or 'max'")
    a = np.asarray(m.alpha, dtype=float)

    if isinstance(dom, StdSimplex):
        if sense == "max":
            # stationary point of the product on the unit-sum face
            point = a / m.degree
            return m.alpha_power() / float(m.degree) ** m.degree, point
        return 0.0, np.zeros(m.n)
    if isinstance(dom, CornerSimplexOne):
        if sense == "max":
            return 1.0, np.ones(m.n)
        vals = [(1.0 - dom.lam[i]) ** m.alpha[i] for i in range(m.n)]
        i = int(np.argmin(vals))
        point = np.ones(m.n)
        point[i] = 1.0 - dom.lam[i]
        return float(vals[i]), point
    if isinstance(dom, SymBox):
        if sense == "max":
            return 1.0, np.ones(m.n)
        odd = [i for i, ai in enumerate(m.alpha) if ai % 2 == 1]
        if odd:
            point = np.ones(m.n)
            point[odd[0]] = -1.0
            return -1.0, point
        point = np.ones(m.n)
        point[0] = 0.0
        return 0.0, point
    if isinstance(dom, _BoxDomain):
        lo, hi = dom.bounding_box()
        if np.all(lo >= 0.0):  # monotone increasing on the nonnegative orthant
            corner = hi if sense == "max" else lo
            return float(monomial_values(m, corner[None, :])[0]), corner

    if sense == "max":
        v, x = grid_maximize(lambda X: monomial_values(m, X), dom, grid)
    else:
        v, x = grid_minimize(lambda X: monomial_values(m, X), dom, grid)
    return v, x


def sampled_hull_envelope(m: Monomial, box: Domain, x, side: str) -> float:
    """Envelope value at x from a tiny LP over convex multipliers on the box
    vertices: optimize sum(lam_v f(v)) with sum(lam_v v) = x, sum(lam) = 1.

    Valid for multilinear monomials (vertex-extendable) on boxes with n <= 4;
    this is the independent cross-check for every closed-form envelope.
    """
    if not m.is_multilinear():
        raise ValueError("sampled hull envelopes require a multilinear monomial")
    if not isinstance(box, _BoxDomain):
        raise ValueError("sampled hull envelopes require a box domain")
    if m.n > 4:
        raise ScaleExceeded("sampled hull envelope supports n <= 4")
    if side not in (OVER, UNDER):
        raise ValueError("side must be OVER or UNDER")
    X, _ = as_points(x, m.n)
    box.require_inside(X)
    verts = box.vertices()
    fvals = monomial_values(m, verts)
    nv = len(verts)
    A = np.vstack([verts.T, np.ones((1, nv))])
    b = np.concatenate([X[0], [1.0]])
    c = fvals if side == UNDER else -fvals
    _, val = solve_equality_lp(c, A, b)
    return float(val) if side == UNDER else float(-val)


def sigma_numeric(m: Monomial, dom: Domain, beta,
                  grid: Optional[GridSpec] = None) -> float:
    """Numeric best valid intercept: sum(beta) + min over the domain of
    x**alpha - beta.x, via grid refinement plus exact vertex enumeration
    whenever the domain carries a vertex list."""
    if m.n > 6:
        raise ScaleExceeded("sigma_numeric supports n <= 6")
    b = np.asarray(beta, dtype=float)
    if b.shape != (m.n,):
        raise ValueError(f"beta must have dimension {m.n}")

    def objective(X):
        return monomial_values(m, X) - X @ b

    best, _ = grid_minimize(objective, dom, grid, center_weights=b)
    try:
        verts = dom.vertices()
    except Exception:
        verts = None
    if verts is not None:
        best = min(best, float(np.min(objective(verts))))
    return float(b.sum()) + best


def relaxation_error_PB(m: Monomial, B: Sequence, dom: Domain,
                        grid: Optional[GridSpec] = None,
                        tol: float = TOL_ORACLE) -> ErrorReport:
    """Error of the sandwich relaxation built from a family of affine cuts.

    ``B`` is a list of slope vectors that must contain alpha; each slope gets
    its best valid intercept over ``dom`` (exact where known, numeric
    otherwise). The scanned set lives over the whole unit box: points between
    the pointwise-max underestimator and the min-coordinate overestimator.
    The measured error is compared against the degree constant c1.
    """
    from . import bounds as _bounds

    a = np.asarray(m.alpha, dtype=float)
    slopes = [np.asarray(bb, dtype=float) for bb in B]
    if not any(np.array_equal(s, a) for s in slopes):
        raise ValueError("B must contain alpha itself")
    if not dom.contains(np.ones(m.n)):
        raise ValueError("the all-ones point must belong to the domain")

    pairs = []
    for s in slopes:
        iv = _bounds.sigma_beta(m, dom, s)
        sig = iv.lo if iv.exact else sigma_numeric(m, dom, s, grid)
        pairs.append((s, sig))

    box = UnitBox(m.n)

    def err(X):
        f = monomial_values(m, X)
        under = np.zeros(X.shape[0])
        for s, sig in pairs:
            under = np.maximum(under, sig + (X - 1.0) @ s)
        over = np.min(X, axis=-1)
        return np.maximum(f - under, over - f)

    spec = grid or GridSpec()
    measured, point = grid_maximize(err, box, spec, center_weights=np.asarray(m.alpha, float))
    return error_report(_bounds.c1(m.degree), measured, points=[point], tol=tol, grid=spec)
