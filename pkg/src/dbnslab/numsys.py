"""Base systems, term enumeration, and representations.

A base system is a set of pairwise-coprime bases b_1 < ... < b_q together
with a set of positive digits (default {1}).  A *term* is any value
d * b_1^e_1 * ... * b_q^e_q with d a digit and e_j >= 0; a representation
of m is a list of terms summing to m.  The canonical double-base system
uses bases (2, 3) and digit 1, so its terms are the numbers 2^x * 3^y.

All values live in the 62-bit machine range [0, 2^62); constructors
reject anything larger.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DuplicateTerm, InvalidBase, InvalidDigit, NotCoprime, Overflow

MAX_VALUE = (1 << 62) - 1


@dataclass(frozen=True)
class BaseSystem:
    """Pairwise-coprime bases plus a positive digit set, both sorted ascending."""

    bases: tuple[int, ...]
    digits: tuple[int, ...] = (1,)

    @property
    def q(self) -> int:
        return len(self.bases)

    def describe(self) -> str:
        """Short stable descriptor, e.g. ``bases=2,3 digits=1``."""
        b = ",".join(str(x) for x in self.bases)
        d = ",".join(str(x) for x in self.digits)
        return f"bases={b} digits={d}"


@dataclass(frozen=True)
class Term:
    """One summand: value = digit * prod(bases[j] ** exponents[j])."""

    digit: int
    exponents: tuple[int, ...]
    value: int


@dataclass(frozen=True)
class Representation:
    """An ordered list of terms whose values sum to ``value``.

    The list is canonical when term values are strictly decreasing; use
    :func:`canonicalize` to get that form.  value == 0 iff there are no
    terms.
    """

    terms: tuple[Term, ...]
    value: int

    @property
    def k(self) -> int:
        return len(self.terms)


@dataclass(frozen=True, eq=True)
class TermTable:
    """All distinct term values <= limit, ascending, with one witness each."""

    limit: int
    system: BaseSystem
    values: tuple[int, ...]
    index: dict[int, Term] = field(compare=False)


def make_base_system(bases, digits=(1,)) -> BaseSystem:
    """Validate, sort, and deduplicate a base system.

    Raises InvalidBase for an empty list or a base < 2, InvalidDigit for an
    empty list or a digit < 1, and NotCoprime when two distinct bases share
    a factor.
    """
    bases = list(bases)
    digits = list(digits)
    if not bases:
        raise InvalidBase("at least one base is required")
    if not digits:
        raise InvalidDigit("at least one digit is required")
    for b in bases:
        if b < 2:
            raise InvalidBase(f"base {b} is smaller than 2")
        if b > MAX_VALUE:
            raise Overflow(f"base {b} exceeds the machine range")
    for d in digits:
        if d < 1:
            raise InvalidDigit(f"digit {d} is smaller than 1")
        if d > MAX_VALUE:
            raise Overflow(f"digit {d} exceeds the machine range")
    bs = tuple(sorted(set(bases)))
    ds = tuple(sorted(set(digits)))
    for i in range(len(bs)):
        for j in range(i + 1, len(bs)):
            if math.gcd(bs[i], bs[j]) != 1:
                raise NotCoprime(f"bases {bs[i]} and {bs[j]} share a factor")
    return BaseSystem(bs, ds)


DBNS = make_base_system((2, 3))


def make_term(system: BaseSystem, digit: int, exponents) -> Term:
    """Build a term, computing its value and checking the machine range."""
    exponents = tuple(exponents)
    if digit not in system.digits:
        raise InvalidDigit(f"digit {digit} is not in {system.digits}")
    if len(exponents) != system.q:
        raise InvalidBase(
            f"expected {system.q} exponents, got {len(exponents)}"
        )
    value = digit
    for b, e in zip(system.bases, exponents):
        if e < 0:
            raise InvalidBase(f"negative exponent {e}")
        for _ in range(e):
            value *= b
            if value > MAX_VALUE:
                raise Overflow("term value exceeds 2^62 - 1")
    return Term(digit, exponents, value)


def make_representation(system: BaseSystem, exponent_vectors, digits=None) -> Representation:
    """Build a representation from per-term exponent vectors.

    ``exponent_vectors`` is a sequence of q-tuples; ``digits`` optionally
    gives one digit per term (default: all 1).  Term order is preserved.
    """
    vectors = [tuple(v) for v in exponent_vectors]
    if digits is None:
        digits = [1] * len(vectors)
    terms = tuple(
        make_term(system, d, v) for d, v in zip(digits, vectors, strict=True)
    )
    total = 0
    for t in terms:
        total += t.value
        if total > MAX_VALUE:
            raise Overflow("representation value exceeds 2^62 - 1")
    return Representation(terms, total)


def evaluate(rep: Representation) -> int:
    """Sum of the term values.  Equals rep.value for any valid representation."""
    total = 0
    for t in rep.terms:
        total += t.value
        if total > MAX_VALUE:
            raise Overflow("sum exceeds 2^62 - 1")
    return total


def canonicalize(rep: Representation) -> Representation:
    """Return the same terms sorted by strictly decreasing value.

    Raises DuplicateTerm when two terms share a value; such a multiset has
    no canonical form.  (With 2 among the bases a minimal representation
    never repeats a value: two copies of t would merge into the single
    term 2t.)
    """
    ordered = sorted(rep.terms, key=lambda t: t.value, reverse=True)
    for a, b in zip(ordered, ordered[1:]):
        if a.value == b.value:
            raise DuplicateTerm(f"term value {a.value} appears twice")
    return Representation(tuple(ordered), rep.value)


def enumerate_terms(system: BaseSystem, limit: int) -> TermTable:
    """All distinct term values <= limit, sorted ascending.

    Depth-first over exponent vectors, pruning as soon as the running
    product exceeds the limit, so no intermediate value can overflow.
    When several (digit, exponents) pairs hit the same value the first in
    (digit ascending, exponents lexicographic) order is kept as witness.
    """
    if limit < 0:
        raise ValueError("limit must be non-negative")
    if limit > MAX_VALUE:
        raise Overflow(f"limit {limit} exceeds the machine range")
    index: dict[int, Term] = {}

    def descend(j: int, prod: int, exps: tuple[int, ...], digit: int) -> None:
        if j == system.q:
            if prod not in index:
                index[prod] = Term(digit, exps, prod)
            return
        base = system.bases[j]
        v, e = prod, 0
        while v <= limit:
            descend(j + 1, v, exps + (e,), digit)
            v *= base
            e += 1

    for d in system.digits:
        if d > limit:
            break
        descend(0, d, (), d)
    values = tuple(sorted(index))
    return TermTable(limit, system, values, index)
