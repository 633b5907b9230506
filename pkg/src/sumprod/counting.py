"""Counting kernels: three-variable linear equations, collinear triples,
the consecutive-slope cluster construction, and the energy/triples chain
relating E+(A) to the quotient and product sets.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, lcm

import numpy as np

from ._approx import log2_frac, ln_frac, sqrt_frac
from .exactset import (
    DomainError,
    FiniteSet,
    ResourceError,
    Scalar,
    as_scalar,
    scaled_integers,
)
from .stats import (
    dyadic_slices,
    energy,
    lambda_set,
    productset,
    quotientset,
    rep_counts,
    spectrum,
    sumset,
)

SIGMA_SIZE_LIMIT = 1_000_000
SIGMA_PAIR_BUDGET = 5_000_000


@dataclass(frozen=True)
class SigmaResult:
    """Solution count of a1*x1 + a2*x2 + a3*x3 = 0 with the coefficients used."""

    count: int
    coefficients: tuple[Scalar, Scalar, Scalar]


def sigma_count(a1, A1: FiniteSet, a2, A2: FiniteSet, a3, A3: FiniteSet) -> SigmaResult:
    """Count solutions of a1*x1 + a2*x2 + a3*x3 = 0, x_i in A_i.

    Hashes a3*A3 and enumerates (x1, x2) pairs: O(|A1||A2|).
    """
    a1, a2, a3 = as_scalar(a1), as_scalar(a2), as_scalar(a3)
    if a1 == 0 or a2 == 0 or a3 == 0:
        raise DomainError("sigma coefficients must be nonzero")
    targets = {-a3 * x for x in A3}
    count = 0
    for x1 in A1:
        v1 = a1 * x1
        for x2 in A2:
            if v1 + a2 * x2 in targets:
                count += 1
    return SigmaResult(count=count, coefficients=(a1, a2, a3))


def _line_of_triple(t1: Fraction, t2: Fraction, t3: Fraction):
    """Canonical form of {(b, c) : t2*b + t3*c = -t1} in the (a2, a3) plane.

    Returns None for the degenerate all-plane case (t2 = t3 = 0, t1 = 0)
    and 'empty' when the constraint is unsatisfiable.
    """
    if t2 == 0 and t3 == 0:
        return None if t1 == 0 else "empty"
    if t2 != 0:
        return (Fraction(1), t3 / t2, -t1 / t2)
    return (Fraction(0), Fraction(1), -t1 / t3)


def _line_candidates(line) -> list[tuple[Fraction, Fraction]]:
    """Representative interior points of a line, skipping zero coordinates.

    The symmetric point a2 = a3 comes first so ties resolve the way the
    one-triple case expects (e.g. (-1/2, -1/2) for x + a2*y + a3*z = 0
    with x = y = z).
    """
    c2, c3, c0 = line
    out = []
    if c2 + c3 != 0:
        v = c0 / (c2 + c3)
        if v != 0:
            out.append((v, v))
    for b in (Fraction(1), Fraction(-1), Fraction(2), Fraction(-2)):
        if c3 != 0:
            c = (c0 - c2 * b) / c3
            if c != 0:
                out.append((b, c))
        elif c2 != 0:
            bb = c0 / c2
            if bb != 0:
                out.append((bb, b))
    return out


def sigma_max(A1: FiniteSet, A2: FiniteSet, A3: FiniteSet,
              pair_budget: int = SIGMA_PAIR_BUDGET) -> SigmaResult:
    """Exact max over nonzero (a2, a3) of sigma_count(1, A1, a2, A2, a3, A3).

    Each solution triple constrains (a2, a3) to a line; a coefficient pair
    satisfying two or more triples therefore lies on an intersection of two
    such lines, so enumerating all pairwise intersections (plus one interior
    representative per line for the single-line maxima) is exhaustive.  The
    maximum is consequently always attained at a rational point.  Ties are
    broken by the lexicographically smallest (a2, a3).
    """
    size = len(A1) * len(A2) * len(A3)
    if size > SIGMA_SIZE_LIMIT:
        raise ResourceError(f"sigma_max input too large: {size}")

    lines: Counter = Counter()
    base = 0  # triples satisfied by every coefficient choice
    for x1 in A1:
        for x2 in A2:
            for x3 in A3:
                line = _line_of_triple(x1, x2, x3)
                if line is None:
                    base += 1
                elif line != "empty":
                    lines[line] += 1

    distinct = sorted(lines)
    if comb(len(distinct), 2) > pair_budget:
        raise ResourceError(
            f"sigma_max candidate enumeration too large: {len(distinct)} lines")

    candidates: set[tuple[Fraction, Fraction]] = set()
    for ln in distinct:
        candidates.update(_line_candidates(ln))
    for la, lb in combinations(distinct, 2):
        # la: b + (la[1]) c = la[2]   (or c = la[2] when la[0] == 0)
        det = la[0] * lb[1] - lb[0] * la[1]
        if det == 0:
            continue
        c = (la[0] * lb[2] - lb[0] * la[2]) / det
        b = (la[2] - la[1] * c) / la[0] if la[0] != 0 else (lb[2] - lb[1] * c) / lb[0]
        if b != 0 and c != 0:
            candidates.add((b, c))

    if not candidates:
        # No satisfiable constraint anywhere (e.g. all-positive sets with
        # positive coefficients still admit negative ones, so this only
        # happens when no line has a valid interior point).
        return SigmaResult(count=base, coefficients=(Fraction(1), Fraction(1), Fraction(1)))

    # Direct per-candidate evaluation (immune to any line bookkeeping
    # mistakes), over a common integer scaling so the inner loop is pure
    # integer arithmetic: x1 + b*x2 + c*x3 = 0 becomes
    # qb*qc*x1 + pb*qc*x2 + pc*qb*x3 = 0 after clearing denominators.
    s1, m1 = scaled_integers(A1)
    s2, m2 = scaled_integers(A2)
    s3, m3 = scaled_integers(A3)
    m = lcm(m1, m2, m3)
    s1 = [x * (m // m1) for x in s1]
    s2 = [x * (m // m2) for x in s2]
    targets3 = {x * (m // m3) for x in s3}
    pairs = [(x1, x2) for x1 in s1 for x2 in s2]
    best = None
    for b, c in sorted(candidates):
        pb, qb = b.numerator, b.denominator
        pc, qc = c.numerator, c.denominator
        f1, f2, d = qb * qc, pb * qc, pc * qb
        count = base
        for x1, x2 in pairs:
            v = -(f1 * x1 + f2 * x2)
            if v % d == 0 and v // d in targets3:
                count += 1
        if best is None or count > best.count:
            best = SigmaResult(count=count, coefficients=(Fraction(1), b, c))
    return best


# -- collinear triples -----------------------------------------------------

def _canonical_points(points) -> list[tuple[Fraction, Fraction]]:
    pts = {(as_scalar(x), as_scalar(y)) for x, y in points}
    if not pts:
        raise DomainError("empty point set")
    return sorted(pts)


def _scaled_point_ints(pts) -> tuple[list[int], list[int]]:
    m = lcm(*(c.denominator for p in pts for c in p))
    return [int(p[0] * m) for p in pts], [int(p[1] * m) for p in pts]


_GRID_INT64_SAFE = 1 << 30


def collinear_triples(points) -> int:
    """Ordered collinear triples of a planar point set, repetition allowed.

    Any triple with at most two distinct points counts as collinear, so
    with D3 = sum over maximal lines of m(m-1)(m-2):

        T = n + 3n(n-1) + D3.

    D3 is computed by grouping, around each point, the directions to all
    other points: each ordered triple of distinct collinear points is seen
    exactly once at its first element.
    """
    pts = _canonical_points(points)
    n = len(pts)
    degenerate = n + 3 * n * (n - 1)
    if n <= 2:
        return degenerate
    xs, ys = _scaled_point_ints(pts)
    span = max(max(map(abs, xs)), max(map(abs, ys)))
    if span < _GRID_INT64_SAFE:
        d3 = _distinct_collinear_numpy(xs, ys)
    else:
        d3 = _distinct_collinear_python(xs, ys)
    return degenerate + d3


def _distinct_collinear_numpy(xs, ys) -> int:
    X = np.array(xs, dtype=np.int64)
    Y = np.array(ys, dtype=np.int64)
    n = len(X)
    key_base = 4 * int(max(np.max(np.abs(X)), np.max(np.abs(Y)))) + 3
    total = 0
    for i in range(n):
        dx = np.delete(X - X[i], i)
        dy = np.delete(Y - Y[i], i)
        g = np.gcd(np.abs(dx), np.abs(dy))
        dx //= g
        dy //= g
        flip = (dx < 0) | ((dx == 0) & (dy < 0))
        dx[flip] *= -1
        dy[flip] *= -1
        _, counts = np.unique(dx * key_base + dy, return_counts=True)
        total += int(np.sum(counts * (counts - 1)))
    return total


def _distinct_collinear_python(xs, ys) -> int:
    n = len(xs)
    total = 0
    for i in range(n):
        dirs: Counter = Counter()
        xi, yi = xs[i], ys[i]
        for j in range(n):
            if j == i:
                continue
            dx, dy = xs[j] - xi, ys[j] - yi
            g = gcd(abs(dx), abs(dy))
            dx, dy = dx // g, dy // g
            if dx < 0 or (dx == 0 and dy < 0):
                dx, dy = -dx, -dy
            dirs[(dx, dy)] += 1
        total += sum(c * (c - 1) for c in dirs.values())
    return total


def collinear_triples_brute(points, limit: int = 3_000_000) -> int:
    """O(|P|^3) oracle for collinear_triples."""
    pts = _canonical_points(points)
    n = len(pts)
    if n**3 > limit:
        raise ResourceError("brute-force triple enumeration too large")
    count = 0
    for p in pts:
        for q in pts:
            for r in pts:
                if len({p, q, r}) <= 2:
                    count += 1
                elif ((q[0] - p[0]) * (r[1] - p[1])
                      - (q[1] - p[1]) * (r[0] - p[0])) == 0:
                    count += 1
    return count


# -- consecutive-slope clusters -------------------------------------------

@dataclass(frozen=True)
class ClusterReport:
    """Distinct vector sums across clusters of consecutive slope fibers.

    per_group entries are (distinct_sums, rho_lower) with
    rho_lower = tau^2 * C(M,2) - sigma * M^4, the inclusion-exclusion
    lower bound.  lemma_pass records |A+A|^2 >= tau^3 |S'| / (128 sqrt(sigma))
    and is only meaningful when both conditions hold.
    """

    tau: Scalar
    M: int
    group_count: int
    per_group: list[tuple[int, Fraction]]
    sigma_used: int | None
    conditions_ok: tuple[bool, bool]
    sums_total: int
    sums_in_box: bool
    lemma_rhs: Fraction | None
    lemma_pass: bool | None
    slopes: FiniteSet


def slice_slopes(A: FiniteSet, tau) -> dict:
    """Fibers of the dyadic window tau < |A_lambda| <= 2*tau, as a dict."""
    tau = as_scalar(tau)
    out = {}
    for lam, size in spectrum(A):
        if tau < size <= 2 * tau:
            out[lam] = lambda_set(A, lam)
    return out


def cluster_sigma(fibers: dict, slopes, pair_budget: int = SIGMA_PAIR_BUDGET,
                  size_limit: int = SIGMA_SIZE_LIMIT,
                  triple_budget: int = 2_000) -> int | None:
    """max sigma_max over distinct slope triples; None if fewer than 3 slopes."""
    slopes = sorted(slopes)
    if len(slopes) < 3:
        return None
    if comb(len(slopes), 3) > triple_budget:
        raise ResourceError(
            f"cluster sigma: {comb(len(slopes), 3)} slope triples exceed "
            f"the budget {triple_budget}")
    best = 0
    for l1, l2, l3 in combinations(slopes, 3):
        f1, f2, f3 = fibers[l1], fibers[l2], fibers[l3]
        if len(f1) * len(f2) * len(f3) > size_limit:
            raise ResourceError("cluster sigma fibers too large")
        best = max(best, sigma_max(f1, f2, f3, pair_budget=pair_budget).count)
    return best


def solymosi_cluster_report(A: FiniteSet, tau, M: int,
                            S_sub: FiniteSet | None = None,
                            pair_budget: int = SIGMA_PAIR_BUDGET,
                            triple_budget: int = 2_000) -> ClusterReport:
    """Cluster construction over M consecutive slopes of one dyadic window.

    Sorts the chosen slopes ascending, splits them into groups of M, and
    for each group counts the exact number of distinct vector sums of the
    point fibers {(x, lambda*x) : x in A_lambda} over distinct slope pairs.
    All sums are verified to land in (A+A) x (A+A).
    """
    tau = as_scalar(tau)
    if A.has_zero() or not A.is_positive():
        raise DomainError("cluster construction requires positive elements")
    if M < 2:
        raise DomainError("cluster needs two slopes")

    fibers = slice_slopes(A, tau)
    window = FiniteSet(fibers) if fibers else None
    if S_sub is not None:
        if window is None or not S_sub <= window:
            raise DomainError("S_sub is not contained in the slice window")
        slopes = S_sub
    else:
        if window is None:
            raise DomainError("empty slice window")
        slopes = window
    if M > len(slopes):
        raise DomainError("M exceeds the number of available slopes")

    sigma = cluster_sigma(fibers, slopes.elements, pair_budget=pair_budget,
                          triple_budget=triple_budget)

    AplusA = sumset(A, A)
    box = set(AplusA.elements)
    ordered = list(slopes.elements)
    k = len(ordered) // M
    per_group: list[tuple[int, Fraction]] = []
    sums_total = 0
    in_box = True
    for j in range(k):
        group = ordered[j * M:(j + 1) * M]
        pts = set()
        for la, lb in combinations(group, 2):
            # the grid points on the slope-la line are (x/la, x), x in A_la:
            # both coordinates then lie in A, so every pair sum lands in
            # (A+A) x (A+A)
            for x in fibers[la]:
                for y in fibers[lb]:
                    p = (x / la + y / lb, x + y)
                    pts.add(p)
                    if p[0] not in box or p[1] not in box:
                        in_box = False
        rho = (tau**2 * comb(M, 2) - sigma * Fraction(M) ** 4
               if sigma is not None else None)
        per_group.append((len(pts), rho))
        sums_total += len(pts)

    if sigma is None:
        conditions = (False, False)
        lemma_rhs = None
        lemma_pass = None
    else:
        cond1 = 32 * sigma <= tau**2
        cond2 = tau**4 <= Fraction(len(AplusA)) ** 2 * sigma
        conditions = (cond1, cond2)
        if sigma > 0:
            lemma_rhs = tau**3 * len(slopes) / (128 * sqrt_frac(Fraction(sigma)))
            # exact: |A+A|^2 >= tau^3 |S'| / (128 sqrt(sigma))
            lemma_pass = ((Fraction(len(AplusA)) ** 2 * 128) ** 2 * sigma
                          >= (tau**3 * len(slopes)) ** 2)
        else:
            lemma_rhs = Fraction(0)
            lemma_pass = True

    return ClusterReport(tau=tau, M=M, group_count=k, per_group=per_group,
                         sigma_used=sigma, conditions_ok=conditions,
                         sums_total=sums_total, sums_in_box=in_box,
                         lemma_rhs=lemma_rhs, lemma_pass=lemma_pass,
                         slopes=slopes)


# -- the E+(A) versus |A/A|, |AA| chain ------------------------------------

TRIPLES_POINT_LIMIT = 25_000


@dataclass(frozen=True)
class ErChain:
    """Popular-sum chain: N(x) = |A ∩ (x-A)|, the popular set F, and the
    collinear triples of (A ∪ F) x (A ∪ F).

    T is None when the grid exceeds the triples limit; the dependent check
    and ratios are then omitted.
    """

    N: Counter
    F: FiniteSet
    U: int
    T: int | None
    checks: dict
    ratios: dict


def er_chain(A: FiniteSet, triples_limit: int = TRIPLES_POINT_LIMIT) -> ErChain:
    if len(A) < 2:
        raise DomainError("chain requires |A| >= 2")
    if A.has_zero() or not A.is_positive():
        raise DomainError("chain requires positive elements")

    n = len(A)
    N = rep_counts(A, A, "add")
    Ep = sum(c * c for c in N.values())
    threshold = Fraction(Ep, 2 * n * n)
    F = FiniteSet(x for x, c in N.items() if c > threshold)
    U = sum(N[x] for x in F)
    sumsq_F = sum(N[x] ** 2 for x in F)

    AA = productset(A, A)
    AdivA = quotientset(A, A)
    m = min(len(AA), len(AdivA))

    X = A.union(F)
    T = None
    if len(X) ** 2 <= triples_limit:
        pts = [(x, y) for x in X for y in X]
        T = collinear_triples(pts)

    checks = {
        "sum_F": 2 * sumsq_F >= Ep,
        "est_U": 2 * n * U >= Ep,
        "est_F+A": (len(F) + n) * Ep <= 4 * n * n * U,
    }
    if T is not None:
        checks["tripple_low"] = T * m * n * n >= U**4

    log2n = log2_frac(Fraction(n))
    lnn = ln_frac(Fraction(n))
    ratios = {
        "er_log2": Fraction(Ep) ** 4 / (m * Fraction(n) ** 10 * log2n),
        "er_ln": Fraction(Ep) ** 4 / (m * Fraction(n) ** 10 * lnn),
    }
    if T is not None:
        ratios["triples_upper_log2"] = T / (Fraction(len(X)) ** 4 * log2n)
        ratios["triples_upper_ln"] = T / (Fraction(len(X)) ** 4 * lnn)

    return ErChain(N=N, F=F, U=U, T=T, checks=checks, ratios=ratios)
