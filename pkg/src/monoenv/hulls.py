"""Facet description of the multilinear-monomial hull over the symmetric box.

The hull of {(x, w) in [-1,1]^(n+1) : w = x_1...x_n} is cut out by one
parity inequality per odd subset of the n+1 coordinates (w counted as
coordinate n+1), together with the box bounds. Facets are stored as subset
bitmasks, so evaluating one costs O(n).
"""

from __future__ import annotations

import functools
import io
import re
from dataclasses import dataclass
import numpy as np

from . import lp
from .core import ScaleExceeded, as_points

MEMBERSHIP_TOL = 1e-9
FACET_ENUM_LIMIT = 20


@dataclass(frozen=True)
class SignedSubsetInequality:
    """sum_{i in I} z_i - sum_{i not in I} z_i >= -(n-1) over z in R^(n+1).

    ``mask`` encodes I as a bitmask over coordinates 1..n+1 (bit i-1 for
    coordinate i); |I| is odd. The inequality cuts exactly the +/-1 point
    whose -1 entries are the coordinates in I.
    """

    mask: int
    n: int
    sense: str = "GE"

    @property
    def rhs(self) -> float:
        return -(self.n - 1.0)

    @property
    def nvars(self) -> int:
        return self.n + 1

    def subset(self) -> tuple[int, ...]:
        return tuple(i + 1 for i in range(self.nvars) if (self.mask >> i) & 1)

    def coefficients(self) -> np.ndarray:
        signs = -np.ones(self.nvars)
        for i in range(self.nvars):
            if (self.mask >> i) & 1:
                signs[i] = 1.0
        return signs

    def value(self, z) -> float | np.ndarray:
        Z, single = as_points(z, self.nvars)
        inside = np.zeros(Z.shape[1], dtype=bool)
        for i in range(self.nvars):
            if (self.mask >> i) & 1:
                inside[i] = True
        vals = Z[:, inside].sum(axis=1) - Z[:, ~inside].sum(axis=1)
        return float(vals[0]) if single else vals

    def satisfied(self, z, tol: float = MEMBERSHIP_TOL) -> bool:
        return bool(self.value(z) >= self.rhs - tol)


@dataclass(frozen=True)
class FacetSystem:
    """All parity facets for one dimension, plus the implied [-1,1] box."""

    n: int
    facets: tuple[SignedSubsetInequality, ...]

    @property
    def nvars(self) -> int:
        return self.n + 1

    def sign_matrix(self) -> np.ndarray:
        return np.vstack([f.coefficients() for f in self.facets])

    def to_ub(self) -> tuple[np.ndarray, np.ndarray]:
        """Inequalities as A z <= b (facet rows only, box handled separately)."""
        A = -self.sign_matrix()
        b = np.full(len(self.facets), self.n - 1.0)
        return A, b

    @functools.cached_property
    def _xpart_signs(self) -> tuple[np.ndarray, np.ndarray]:
        """x-coordinate sign rows of the facets, split by whether the lifted
        coordinate belongs to the subset (lower-bounding vs upper-bounding)."""
        wbit = 1 << self.n
        low = np.vstack([f.coefficients()[: self.n] for f in self.facets if f.mask & wbit])
        upp = np.vstack([f.coefficients()[: self.n] for f in self.facets if not f.mask & wbit])
        return low, upp

    def envelope_bounds(self, x) -> tuple[np.ndarray, np.ndarray] | tuple[float, float]:
        """Implied range [lo(x), hi(x)] for the lifted coordinate at each x.

        Facets containing coordinate n+1 give lower bounds on w, the others
        upper bounds; both get clipped to the [-1, 1] box.
        """
        X, single = as_points(x, self.n)
        low, upp = self._xpart_signs
        rhs = -(self.n - 1.0)
        lo = np.maximum(np.max(rhs - X @ low.T, axis=1), -1.0)
        hi = np.minimum(np.min(X @ upp.T - rhs, axis=1), 1.0)
        if single:
            return float(lo[0]), float(hi[0])
        return lo, hi

    def envelope_lower(self, x):
        return self.envelope_bounds(x)[0]

    def envelope_upper(self, x):
        return self.envelope_bounds(x)[1]


def build_symbox_hull(n: int) -> FacetSystem:
    """All odd-subset parity inequalities over n+1 coordinates (2**n of them)."""
    if n < 1:
        raise ValueError("need n >= 1")
    if n > FACET_ENUM_LIMIT:
        raise ScaleExceeded(
            f"facet enumeration refused for n={n}: 2^{n} facets; "
            "use the closed-form envelope evaluation instead"
        )
    facets = tuple(
        SignedSubsetInequality(mask=mask, n=n)
        for mask in range(1, 2 ** (n + 1))
        if bin(mask).count("1") % 2 == 1
    )
    return FacetSystem(n=n, facets=facets)


@dataclass(frozen=True)
class MembershipResult:
    member: bool
    violated: tuple[SignedSubsetInequality, ...]
    box_violations: tuple[int, ...]


def hull_membership(fs: FacetSystem, x, w: float,
                    tol: float = MEMBERSHIP_TOL) -> MembershipResult:
    """Check (x, w) against the box bounds and every parity facet."""
    X, _ = as_points(x, fs.n)
    z = np.concatenate([X[0], [float(w)]])
    box_bad = tuple(i + 1 for i, v in enumerate(z) if abs(v) > 1.0 + tol)
    violated = tuple(f for f in fs.facets if not f.satisfied(z, tol))
    return MembershipResult(member=not box_bad and not violated,
                            violated=violated, box_violations=box_bad)


# ---------------------------------------------------------------------------
# Integrality verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntegralityReport:
    n: int
    trials: int
    seed: int
    max_value_gap: float
    constructive_all_pm1_even: bool
    failures: int

    @property
    def passed(self) -> bool:
        return self.failures == 0 and self.constructive_all_pm1_even


def constructive_maximizer(c) -> tuple[np.ndarray, float]:
    """Closed-form maximizer of c.z over the parity polytope.

    Sets z = -1 on the negative-coefficient coordinates, fixing parity with a
    zero coordinate when one exists and otherwise by flipping the coordinate
    of least |c|. The result is a +/-1 vector with an even number of -1s.
    """
    c = np.asarray(c, dtype=float)
    z = np.ones(len(c))
    neg = np.flatnonzero(c < 0.0)
    zero = np.flatnonzero(c == 0.0)
    z[neg] = -1.0
    if len(neg) % 2 == 1:
        if len(zero) > 0:
            z[zero[0]] = -1.0
        else:
            j = int(np.argmin(np.abs(c)))
            z[j] = -z[j]
    return z, float(c @ z)


def verify_integrality(n: int, trials: int = 1000, seed: int = 42) -> IntegralityReport:
    """Check that optimizing any direction over the facet system lands on a
    +/-1 point with even -1 parity, by comparing the closed-form maximizer
    against the dense LP solver on seeded random objectives."""
    if n > 6:
        raise ScaleExceeded(f"integrality verification supports n <= 6, got {n}")
    fs = build_symbox_hull(n)
    A_ub, b_ub = fs.to_ub()
    lower = -np.ones(fs.nvars)
    upper = np.ones(fs.nvars)
    max_gap = 0.0
    failures = 0
    all_pm1_even = True
    for t in range(trials):
        rng = np.random.default_rng((seed, t))
        c = rng.standard_normal(fs.nvars)
        if rng.random() < 0.25:
            kill = rng.integers(0, fs.nvars)
            c[kill] = 0.0
        z_con, v_con = constructive_maximizer(c)
        if not (np.all(np.abs(np.abs(z_con) - 1.0) < 1e-12)
                and int((z_con < 0).sum()) % 2 == 0
                and hull_membership(fs, z_con[:-1], z_con[-1]).member):
            all_pm1_even = False
        _, v_lp = lp.solve_box_lp(c, A_ub, b_ub, lower, upper, maximize=True)
        gap = abs(v_lp - v_con)
        max_gap = max(max_gap, gap)
        if gap > 1e-9:
            failures += 1
    return IntegralityReport(n=n, trials=trials, seed=seed, max_value_gap=max_gap,
                             constructive_all_pm1_even=all_pm1_even, failures=failures)


# ---------------------------------------------------------------------------
# Facet export / import
# ---------------------------------------------------------------------------

def export_facets_text(fs: FacetSystem) -> str:
    """One line per facet: ``I={i,...} sense=GE rhs=-(n-1)``, with a header."""
    out = io.StringIO()
    out.write(f"# symbox-hull n={fs.n} facets={len(fs.facets)}\n")
    for f in fs.facets:
        idx = ",".join(str(i) for i in f.subset())
        out.write(f"I={{{idx}}} sense={f.sense} rhs={f.rhs:.9g}\n")
    return out.getvalue()


def export_facets_csv(fs: FacetSystem) -> str:
    out = io.StringIO()
    out.write("mask,sense,rhs\n")
    for f in fs.facets:
        out.write(f"{f.mask},{f.sense},{f.rhs:.9g}\n")
    return out.getvalue()


_TEXT_HEADER = re.compile(r"#\s*symbox-hull\s+n=(\d+)\s+facets=(\d+)")
_TEXT_LINE = re.compile(r"I=\{([\d,]*)\}\s+sense=(\w+)\s+rhs=(\S+)")


def parse_facets_text(text: str) -> FacetSystem:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    m = _TEXT_HEADER.match(lines[0])
    if not m:
        raise ValueError("missing facet header line")
    n = int(m.group(1))
    facets = []
    for ln in lines[1:]:
        g = _TEXT_LINE.match(ln)
        if not g:
            raise ValueError(f"bad facet line: {ln!r}")
        idx = [int(s) for s in g.group(1).split(",") if s]
        mask = 0
        for i in idx:
            mask |= 1 << (i - 1)
        facets.append(SignedSubsetInequality(mask=mask, n=n, sense=g.group(2)))
    if len(facets) != int(m.group(2)):
        raise ValueError("facet count disagrees with header")
    return FacetSystem(n=n, facets=tuple(facets))


def parse_facets_csv(text: str) -> FacetSystem:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if lines[0] != "mask,sense,rhs":
        raise ValueError("missing csv header")
    rows = [ln.split(",") for ln in lines[1:]]
    masks = [int(r[0]) for r in rows]
    # n from the rhs column: rhs = -(n-1)
    n = int(round(-float(rows[0][2]))) + 1
    facets = tuple(SignedSubsetInequality(mask=msk, n=n, sense=r[1])
                   for msk, r in zip(masks, rows))
    return FacetSystem(n=n, facets=facets)
