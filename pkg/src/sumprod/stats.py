"""Arithmetic statistics of finite rational sets.

Sumsets, product/quotient sets, representation functions, additive and
multiplicative energies, the fiber decomposition A_lambda = A ∩ lambda*A
with its dyadic spectrum, and certified upper bounds for the doubling
functional min_C |AC|^2/(|A||C|).

All counting is exact.  For integer-scalable inputs the hot paths
(pairwise sums/products of large sets) go through numpy int64 kernels;
the generic path uses hashed Fraction enumeration.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import ceil, lcm, log2

import numpy as np

from .exactset import (
    DomainError,
    FiniteSet,
    ResourceError,
    Scalar,
    as_scalar,
    dilate,
    scaled_integers,
)

# int64 results must stay below 2^62; inputs are pre-checked against this.
_INT64_SAFE = 1 << 31


def _joint_scaled(A: FiniteSet, B: FiniteSet) -> tuple[list[int], list[int], int]:
    sa, ma = scaled_integers(A)
    sb, mb = scaled_integers(B)
    m = lcm(ma, mb)
    fa, fb = m // ma, m // mb
    return [x * fa for x in sa], [x * fb for x in sb], m


def _int64_ok(*int_lists) -> bool:
    return all(abs(x) < _INT64_SAFE for xs in int_lists for x in xs)


# -- pairwise operation sets ----------------------------------------------

def sumset(A: FiniteSet, B: FiniteSet) -> FiniteSet:
    """{a+b : a in A, b in B}."""
    sa, sb, m = _joint_scaled(A, B)
    if _int64_ok(sa, sb):
        vals = np.unique(np.add.outer(np.array(sa, dtype=np.int64),
                                      np.array(sb, dtype=np.int64)))
        return FiniteSet(Fraction(int(v), m) for v in vals)
    return FiniteSet({a + b for a in A for b in B})


def differenceset(A: FiniteSet, B: FiniteSet) -> FiniteSet:
    """{a-b : a in A, b in B}."""
    sa, sb, m = _joint_scaled(A, B)
    if _int64_ok(sa, sb):
        vals = np.unique(np.subtract.outer(np.array(sa, dtype=np.int64),
                                           np.array(sb, dtype=np.int64)))
        return FiniteSet(Fraction(int(v), m) for v in vals)
    return FiniteSet({a - b for a in A for b in B})


def productset(A: FiniteSet, B: FiniteSet) -> FiniteSet:
    """{ab : a in A, b in B}."""
    sa, ma = scaled_integers(A)
    sb, mb = scaled_integers(B)
    if _int64_ok(sa, sb):
        vals = np.unique(np.multiply.outer(np.array(sa, dtype=np.int64),
                                           np.array(sb, dtype=np.int64)))
        m = ma * mb
        return FiniteSet(Fraction(int(v), m) for v in vals)
    return FiniteSet({a * b for a in A for b in B})


def quotientset(A: FiniteSet, B: FiniteSet) -> FiniteSet:
    """{a/b : a in A, b in B, b != 0}."""
    divisors = [b for b in B if b != 0]
    if not divisors:
        raise DomainError("no nonzero divisors")
    return FiniteSet({a / b for a in A for b in divisors})


_MODES = ("add", "sub", "mul", "div")


def rep_counts(A: FiniteSet, B: FiniteSet, mode: str) -> Counter:
    """Representation function of a o b: counts[x] = #{(a,b) : a o b = x}.

    mode 'div' skips pairs with b = 0 (mirrors the b != 0 in A/B).
    """
    if mode not in _MODES:
        raise DomainError(f"unknown mode {mode!r}")
    counts: Counter = Counter()
    if mode == "add":
        for a in A:
            for b in B:
                counts[a + b] += 1
    elif mode == "sub":
        for a in A:
            for b in B:
                counts[a - b] += 1
    elif mode == "mul":
        for a in A:
            for b in B:
                counts[a * b] += 1
    else:
        divisors = [b for b in B if b != 0]
        if not divisors:
            raise DomainError("no nonzero divisors")
        for a in A:
            for b in divisors:
                counts[a / b] += 1
    return counts


def energy(A: FiniteSet, B: FiniteSet | None = None, mode: str = "add") -> int:
    """E = sum_x r(x)^2 where r is the add/mul representation function.

    This equals the number of quadruples (a1,b1,a2,b2) with
    a1 o b1 = a2 o b2.  mode 'mul' requires 0 outside both sets.
    """
    if B is None:
        B = A
    if mode not in ("add", "mul"):
        raise DomainError(f"energy mode must be add or mul, got {mode!r}")
    if mode == "mul" and (A.has_zero() or B.has_zero()):
        raise DomainError("zero element in multiplicative energy")

    if mode == "add":
        sa, sb, _ = _joint_scaled(A, B)
        if _int64_ok(sa, sb):
            grid = np.add.outer(np.array(sa, dtype=np.int64),
                                np.array(sb, dtype=np.int64))
            _, c = np.unique(grid.ravel(), return_counts=True)
            return int(np.sum(c.astype(object) ** 2))
    else:
        sa, _ = scaled_integers(A)
        sb, _ = scaled_integers(B)
        if _int64_ok(sa, sb):
            grid = np.multiply.outer(np.array(sa, dtype=np.int64),
                                     np.array(sb, dtype=np.int64))
            _, c = np.unique(grid.ravel(), return_counts=True)
            return int(np.sum(c.astype(object) ** 2))
    counts = rep_counts(A, B, mode)
    return sum(c * c for c in counts.values())


def energy_by_quadruples(A: FiniteSet, B: FiniteSet | None = None,
                         mode: str = "add", limit: int = 250_000) -> int:
    """Independent O(|A|^2|B|^2) oracle for `energy`: enumerate quadruples."""
    if B is None:
        B = A
    if mode not in ("add", "mul"):
        raise DomainError(f"energy mode must be add or mul, got {mode!r}")
    if mode == "mul" and (A.has_zero() or B.has_zero()):
        raise DomainError("zero element in multiplicative energy")
    if (len(A) * len(B)) ** 2 > limit:
        raise ResourceError("quadruple enumeration too large")
    count = 0
    for a1 in A:
        for b1 in B:
            v = a1 + b1 if mode == "add" else a1 * b1
            for a2 in A:
                for b2 in B:
                    w = a2 + b2 if mode == "add" else a2 * b2
                    if v == w:
                        count += 1
    return count


# -- fiber decomposition ---------------------------------------------------

def lambda_set(A: FiniteSet, lam) -> FiniteSet | None:
    """A_lambda = A ∩ lambda*A, or None when the intersection is empty."""
    lam = as_scalar(lam)
    if lam == 0:
        raise DomainError("lambda must be nonzero")
    if A.has_zero():
        raise DomainError("fiber decomposition requires 0 not in A")
    return A.intersect(dilate(A, lam))


def spectrum(A: FiniteSet) -> list[tuple[Scalar, int]]:
    """All (lambda, |A_lambda|) for lambda in A/A, sorted by lambda.

    |A_lambda| equals the representation count of lambda in A/A, so the
    whole spectrum is one pass over |A|^2 quotients.  The sizes satisfy
    sum = |A|^2 and sum of squares = multiplicative energy.
    """
    if A.has_zero():
        raise DomainError("spectrum requires 0 not in A")
    counts = rep_counts(A, A, "div")
    return sorted(counts.items())


@dataclass(frozen=True)
class SpectrumSlice:
    """One dyadic window of the fiber-size spectrum: tau < |A_lambda| <= 2*tau."""

    tau: Scalar
    lambdas: FiniteSet
    sizes: dict


def dyadic_slices(A: FiniteSet) -> list[SpectrumSlice]:
    """Partition the spectrum into windows (2^{j-1}, 2^j], j = 0..ceil(log2 |A|).

    Every lambda in A/A lands in exactly one slice; the j = 0 window
    (1/2, 1] captures the size-1 fibers.  Empty slices are kept so slice
    indices line up with j.
    """
    spec = spectrum(A)
    n_slices = ceil(log2(len(A))) + 1 if len(A) > 1 else 1
    buckets: list[dict] = [{} for _ in range(n_slices)]
    for lam, size in spec:
        j = 0 if size == 1 else (size - 1).bit_length()
        buckets[j][lam] = size
    out = []
    for j, sizes in enumerate(buckets):
        tau = Fraction(1, 2) * 2**j
        if sizes:
            out.append(SpectrumSlice(tau=tau, lambdas=FiniteSet(sizes), sizes=sizes))
        else:
            out.append(SpectrumSlice(tau=tau, lambdas=None, sizes={}))
    return out


# -- doubling functional ---------------------------------------------------

@dataclass(frozen=True)
class DoublingProfile:
    """Certified upper bound on min_C |AC|^2/(|A||C|) with its witness."""

    K_mul: Scalar
    d_upper: Scalar
    witness_C: FiniteSet


def _ratio_for(A: FiniteSet, C: FiniteSet) -> Fraction:
    return Fraction(len(productset(A, C)) ** 2, len(A) * len(C))


def d_upper(A: FiniteSet, candidates: list[FiniteSet] = (),
            pair_budget: int = 4_000_000) -> DoublingProfile:
    """Best upper bound on the doubling functional over candidate sets C.

    Always tries the defaults {1}, A, A^{-1} and A/A in addition to any
    supplied candidates.  Candidates whose |A||C| exceeds pair_budget are
    skipped (this only weakens the bound, never unsound).  The {1} and
    {A, A^{-1}} defaults guarantee d_upper <= min(|A|, K_mul^2).
    """
    if A.has_zero():
        raise DomainError("doubling profile requires 0 not in A")
    AA = productset(A, A)
    AdivA = quotientset(A, A)
    K_mul = Fraction(min(len(AA), len(AdivA)), len(A))

    defaults = [FiniteSet([1]), A, A.inverse()]
    if len(A) * len(AdivA) <= pair_budget:
        defaults.append(AdivA)
    best = None
    witness = None
    for C in list(defaults) + [c for c in candidates]:
        if C.has_zero():
            raise DomainError("candidate contains zero")
        if len(A) * len(C) > pair_budget:
            continue
        r = _ratio_for(A, C)
        if best is None or r < best:
            best, witness = r, C
    return DoublingProfile(K_mul=K_mul, d_upper=best, witness_C=witness)


def d_exhaustive(A: FiniteSet, ground: FiniteSet, max_size: int) -> DoublingProfile:
    """Exact minimum of |AC|^2/(|A||C|) over nonempty C ⊆ ground, |C| <= max_size.

    Brute-force subset enumeration; the ground set is capped at 20 elements.
    """
    if A.has_zero() or ground.has_zero():
        raise DomainError("doubling profile requires 0 not in the sets")
    if len(ground) > 20:
        raise ResourceError("ground set too large for exhaustive d(A)")
    max_size = min(max_size, len(ground))
    if max_size < 1:
        raise DomainError("max_size must be positive")
    AA = productset(A, A)
    AdivA = quotientset(A, A)
    K_mul = Fraction(min(len(AA), len(AdivA)), len(A))

    best = None
    witness = None
    for k in range(1, max_size + 1):
        for combo in combinations(ground.elements, k):
            C = FiniteSet(combo)
            r = _ratio_for(A, C)
            if best is None or r < best or (r == best and C < witness):
                best, witness = r, C
    return DoublingProfile(K_mul=K_mul, d_upper=best, witness_C=witness)
