"""Minimum and greedy term counts.

Two independent routes to the minimum number of terms:

* :func:`solve_batch` computes the whole array ``kstar[m]`` for m < 2^n.
  The result satisfies the shortest-sum recurrence
  ``kstar[v] = 1 + min(kstar[v - s] for terms s <= v)`` with kstar[0] = 0;
  it is computed as a layered reachability sweep (layer k holds exactly
  the values whose minimum is k), which gives the same array much faster
  than the ascending-v loop in pure Python.
* :func:`solve_single` finds the minimum for one value by iterative
  deepening over strictly decreasing term choices.  It shares no code or
  intermediate state with the batch sweep, so agreement between the two
  is a genuine cross-check.

:func:`greedy` repeatedly subtracts the largest term that fits, the
classic algorithm for building short double-base representations.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import CapExceeded, Overflow, OutOfRange, Unrepresentable
from .numsys import (
    MAX_VALUE,
    BaseSystem,
    Representation,
    TermTable,
    canonicalize,
    enumerate_terms,
)

DEFAULT_CAP = 24

WITNESS_LARGEST_FIRST = "largest-first"


@dataclass(frozen=True)
class OptimalTable:
    """Minimum term counts for every m < 2^n, one byte per value."""

    n: int
    system: BaseSystem
    kstar: bytes
    witness_policy: str = WITNESS_LARGEST_FIRST

    @property
    def size(self) -> int:
        return 1 << self.n

    @cached_property
    def term_table(self) -> TermTable:
        return enumerate_terms(self.system, self.size - 1)


@dataclass(frozen=True)
class GreedyResult:
    """Greedy representation of one value and its term count."""

    value: int
    representation: Representation
    kprime: int


def solve_batch(system: BaseSystem, n: int, cap: int = DEFAULT_CAP) -> OptimalTable:
    """Exact minimum term count for every m < 2^n.

    Layer k of the sweep is the set of values whose minimum count is
    exactly k; layer k+1 is (layer k + one term) minus everything already
    reached.  Dropping one term from a minimum representation always lands
    in the previous layer, so the sweep finds every value at its true
    minimum depth.
    """
    if not 1 <= n <= cap:
        raise CapExceeded(f"n={n} outside 1..{cap}")
    size = 1 << n
    term_values = enumerate_terms(system, size - 1).values
    kstar = np.zeros(size, dtype=np.uint8)
    seen = np.zeros(size, dtype=bool)
    seen[0] = True
    frontier = seen.copy()
    k = 0
    remaining = size - 1
    while remaining:
        k += 1
        if k > 62:
            # keeps every stored count within the cache format's byte bound
            raise Unrepresentable(f"minimum term count exceeds 62 for {system.describe()}")
        nxt = np.zeros(size, dtype=bool)
        for s in term_values:
            np.logical_or(nxt[s:], frontier[: size - s], out=nxt[s:])
        nxt &= ~seen
        reached = int(np.count_nonzero(nxt))
        if reached == 0:
            raise Unrepresentable(
                f"{remaining} values below 2^{n} have no representation in {system.describe()}"
            )
        kstar[nxt] = k
        seen |= nxt
        frontier = nxt
        remaining -= reached
    return OptimalTable(n, system, bytes(kstar))


def solve_single(system: BaseSystem, m: int) -> tuple[int, Representation]:
    """Minimum term count and one witness for a single value.

    Iterative deepening: try k = 0, 1, 2, ... and depth-first search for k
    terms with strictly decreasing values summing to m (non-increasing
    when 2 is not a base, since then equal terms can be unavoidable).
    The only pruning is that every chosen term must fit in the residual.
    """
    if not 0 <= m <= MAX_VALUE:
        raise Overflow(f"m={m} outside the machine range")
    if m == 0:
        return 0, Representation((), 0)
    table = enumerate_terms(system, m)
    values = table.values
    if not values:
        raise Unrepresentable(f"{m} has no representation in {system.describe()}")
    value_set = set(values)
    strict = 2 in system.bases and 1 in system.digits
    # With base 2 and digit 1 the binary expansion is a valid representation,
    # so popcount(m) bounds the search; otherwise m // min_term does.
    depth_cap = bin(m).count("1") if strict else m // values[0]
    offset = 1 if strict else 0

    def dfs(residual: int, depth_left: int, max_idx: int, chosen: list[int]) -> bool:
        if depth_left == 1:
            i = bisect_right(values, residual) - 1
            if 0 <= i <= max_idx and values[i] == residual:
                chosen.append(residual)
                return True
            return False
        i = min(max_idx, bisect_right(values, residual) - 1)
        while i >= 0:
            t = values[i]
            chosen.append(t)
            if dfs(residual - t, depth_left - 1, i - offset, chosen):
                return True
            chosen.pop()
            i -= 1
        return False

    top = len(values) - 1
    for k in range(1, depth_cap + 1):
        chosen: list[int] = []
        if dfs(m, k, top, chosen):
            rep = Representation(tuple(table.index[v] for v in chosen), m)
            return k, canonicalize(rep) if strict else rep
    raise Unrepresentable(f"{m} has no representation in {system.describe()}")


def greedy(system: BaseSystem, m: int, table: TermTable | None = None) -> GreedyResult:
    """Subtract the largest term that fits, repeat until nothing is left.

    An optional precomputed ``table`` (with limit >= m) amortizes the term
    enumeration across many calls.
    """
    if not 0 <= m <= MAX_VALUE:
        raise Overflow(f"m={m} outside the machine range")
    if table is None:
        table = enumerate_terms(system, m)
    elif table.limit < m:
        raise OutOfRange(f"term table limit {table.limit} < m={m}")
    values = table.values
    chosen = []
    residual = m
    while residual:
        i = bisect_right(values, residual) - 1
        if i < 0:
            raise Unrepresentable(
                f"residual {residual} is below every term of {system.describe()}"
            )
        chosen.append(table.index[values[i]])
        residual -= values[i]
    rep = Representation(tuple(chosen), m)
    return GreedyResult(m, rep, len(chosen))


def greedy_count_batch(system: BaseSystem, n: int, cap: int = DEFAULT_CAP) -> bytes:
    """Greedy term count for every m < 2^n, one byte per value.

    Follows the greedy recursion k'[v] = 1 + k'[v - largest term <= v]
    with vectorized predecessor chasing; agrees with per-value
    :func:`greedy` by construction.
    """
    if not 1 <= n <= cap:
        raise CapExceeded(f"n={n} outside 1..{cap}")
    size = 1 << n
    term_values = np.asarray(enumerate_terms(system, size - 1).values, dtype=np.int64)
    if term_values.size == 0 or int(term_values[0]) != 1:
        # without the term 1 the value 1 has no greedy step to take
        raise Unrepresentable(f"value 1 has no representation in {system.describe()}")
    v = np.arange(size, dtype=np.int64)
    idx = np.searchsorted(term_values, v, side="right") - 1
    pred = (v - term_values[np.maximum(idx, 0)]).astype(np.int64)
    pred[0] = 0
    del v, idx
    counts = np.zeros(size, dtype=np.uint8)
    cur = pred.copy()
    for _ in range(256):
        alive = cur != 0
        if not alive.any():
            break
        counts[alive] += 1
        cur = pred[cur]
    else:
        raise Overflow("greedy term count exceeds 255")
    counts[1:] += 1  # every nonzero value takes at least the first step
    return bytes(counts)


def extract_witness(table: OptimalTable, m: int) -> Representation:
    """One canonical minimum representation of m from a batch table.

    Walks down from m, at each step taking the largest term s with
    ``kstar[residual - s] == kstar[residual] - 1``; when that choice would
    repeat the previous term it falls back to the next-largest optimal
    predecessor.  The result is canonical (strictly decreasing) and has
    exactly kstar[m] terms.
    """
    if not 0 <= m < table.size:
        raise OutOfRange(f"m={m} outside the table range 0..{table.size - 1}")
    kstar = table.kstar
    tt = table.term_table
    values = tt.values
    chosen = []
    residual = m
    prev = None
    while residual:
        k = kstar[residual]
        pick = None
        duplicate = None
        i = bisect_right(values, residual) - 1
        while i >= 0:
            s = values[i]
            if kstar[residual - s] == k - 1:
                if s != prev:
                    pick = s
                    break
                duplicate = s
            i -= 1
        if pick is None:
            pick = duplicate
        if pick is None:
            raise Unrepresentable(f"no optimal predecessor for {residual}")
        chosen.append(tt.index[pick])
        prev = pick
        residual -= pick
    return canonicalize(Representation(tuple(chosen), m))


def recurrence_violations(table: OptimalTable, values_to_check) -> list[int]:
    """Values v whose entry breaks the shortest-sum recurrence.

    For each v >= 1 checks both directions: some term s <= v has
    kstar[v] == kstar[v - s] + 1, and no term gives anything smaller.
    v == 0 must have kstar 0.  Used by the self-audit command and the
    cache-loading tests.
    """
    kstar = table.kstar
    term_values = table.term_table.values
    bad = []
    for v in values_to_check:
        if v == 0:
            if kstar[0] != 0:
                bad.append(v)
            continue
        best = None
        for s in term_values:
            if s > v:
                break
            d = kstar[v - s]
            if best is None or d < best:
                best = d
        if best is None or kstar[v] != best + 1:
            bad.append(v)
    return bad
