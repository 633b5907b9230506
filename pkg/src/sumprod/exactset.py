"""Exact rational scalars and immutable finite sets.

Everything downstream works over `Fraction` elements; there is no floating
point anywhere in the counting paths.  A `FiniteSet` is an immutable,
strictly sorted, duplicate-free tuple of rationals with O(1) membership.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import lcm
from typing import Iterable, Iterator, Sequence

log = logging.getLogger(__name__)

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


class DomainError(ValueError):
    """An argument violates a mathematical precondition."""


class ResourceError(RuntimeError):
    """The exact computation would exceed the configured resource budget."""


class ParseError(ValueError):
    """A set file could not be parsed."""


def rational_normalize(p: int, q: int) -> Fraction:
    """Canonical rational p/q: reduced, positive denominator, 0 -> 0/1."""
    if q == 0:
        raise DomainError("zero denominator")
    return Fraction(p, q)


def as_scalar(x) -> Fraction:
    """Coerce an int, Fraction or 'p/q' string to a canonical Scalar."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise DomainError(f"not an exact scalar: {x!r}")


def parse_scalar(text: str) -> Fraction:
    """Parse an optionally signed integer or 'p/q' string."""
    s = text.strip()
    try:
        if "/" in s:
            p_str, q_str = s.split("/", 1)
            p, q = int(p_str), int(q_str)
            if q <= 0:
                raise DomainError(f"denominator must be positive: {s!r}")
            return Fraction(p, q)
        return Fraction(int(s))
    except DomainError:
        raise
    except ValueError as exc:
        raise ParseError(f"not a rational value: {text!r}") from exc


def format_scalar(x: Fraction) -> str:
    """Render a Scalar in the canonical 'p/q' (or bare integer) form."""
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


class FiniteSet:
    """Immutable, sorted, duplicate-free set of rational scalars."""

    __slots__ = ("_elems", "_members")

    def __init__(self, values: Iterable):
        elems = sorted({as_scalar(v) for v in values})
        if not elems:
            raise DomainError("empty set")
        self._elems: tuple[Fraction, ...] = tuple(elems)
        self._members = frozenset(self._elems)

    @property
    def elements(self) -> tuple[Fraction, ...]:
        return self._elems

    def __len__(self) -> int:
        return len(self._elems)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._elems)

    def __contains__(self, x) -> bool:
        return as_scalar(x) in self._members

    def __getitem__(self, i: int) -> Fraction:
        return self._elems[i]

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteSet) and self._elems == other._elems

    def __hash__(self) -> int:
        return hash(self._elems)

    def __le__(self, other: "FiniteSet") -> bool:
        return self._members <= other._members

    def __lt__(self, other: "FiniteSet") -> bool:
        # Lexicographic on the sorted element tuples; used for tie-breaking.
        return self._elems < other._elems

    def __repr__(self) -> str:
        inner = ", ".join(format_scalar(x) for x in self._elems)
        return "{" + inner + "}"

    # -- convenience predicates -------------------------------------------

    def has_zero(self) -> bool:
        return ZERO in self._members

    def is_positive(self) -> bool:
        return self._elems[0] > 0

    def min(self) -> Fraction:
        return self._elems[0]

    def max(self) -> Fraction:
        return self._elems[-1]

    # -- derived sets ------------------------------------------------------

    def inverse(self) -> "FiniteSet":
        """{1/a : a in A}; requires 0 not in A."""
        if self.has_zero():
            raise DomainError("cannot invert a set containing zero")
        return FiniteSet(ONE / a for a in self._elems)

    def union(self, other: "FiniteSet") -> "FiniteSet":
        return FiniteSet(self._elems + other._elems)

    def intersect(self, other: "FiniteSet") -> "FiniteSet | None":
        common = self._members & other._members
        return FiniteSet(common) if common else None

    def subset(self, values: Iterable) -> "FiniteSet":
        sub = FiniteSet(values)
        if not sub <= self:
            raise DomainError("not a subset")
        return sub


def set_build(values: Sequence) -> FiniteSet:
    """Sorted, deduplicated FiniteSet; logs how many duplicates dropped."""
    if not values:
        raise DomainError("empty set")
    out = FiniteSet(values)
    dropped = len(values) - len(out)
    if dropped:
        log.debug("set_build dropped %d duplicate value(s)", dropped)
    return out


def affine_image(A: FiniteSet, alpha, beta=ZERO) -> FiniteSet:
    """{alpha*a + beta : a in A}; alpha must be nonzero so |image| = |A|."""
    alpha, beta = as_scalar(alpha), as_scalar(beta)
    if alpha == 0:
        raise DomainError("degenerate dilation")
    return FiniteSet(alpha * a + beta for a in A)


def dilate(A: FiniteSet, alpha) -> FiniteSet:
    return affine_image(A, alpha, ZERO)


def translate(A: FiniteSet, beta) -> FiniteSet:
    return affine_image(A, ONE, beta)


# -- integer scaling ------------------------------------------------------

def scaled_integers(A: FiniteSet) -> tuple[list[int], int]:
    """Return (m*A as ints, m) with m the lcm of all denominators."""
    m = lcm(*(a.denominator for a in A)) if len(A) else 1
    return [int(a * m) for a in A], m


def parse_set_text(text: str) -> tuple[FiniteSet, int]:
    """Parse the one-value-per-line set format.

    Blank lines and lines starting with '#' are ignored; duplicates are
    permitted and dropped.  Returns (set, number_of_duplicates_dropped).
    """
    values = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            values.append(parse_scalar(line))
        except (ParseError, DomainError) as exc:
            raise ParseError(f"line {lineno}: {exc}") from exc
    if not values:
        raise ParseError("no values in set file")
    A = FiniteSet(values)
    return A, len(values) - len(A)


def load_set_file(path) -> FiniteSet:
    """Load a FiniteSet from a set file, warning about dropped duplicates."""
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    A, dropped = parse_set_text(text)
    if dropped:
        log.warning("%s: dropped %d duplicate value(s)", path, dropped)
    return A
