"""Fixed-width bit codes over minimal representations, plus Huffman.

Every m < 2^n gets the codeword

    [term count | w_k bits] then per term, in canonical order:
    [digit index | w_d bits] [exponent of b_1 | w_e bits] ... [b_q | w_e bits]

with w_k = ceil(lg(n+1)), w_e = max(1, ceil(lg n)) and w_d = ceil(lg of the
digit-set size) (zero fields are omitted when the digit set is {1}).  The
count field announces the total length, so no codeword can be a proper
prefix of another, and distinct values decode to distinct sums; the code
is prefix-free by construction and a decoder can verify that executably.

Because any prefix code over the 2^n equally likely values must average
at least n bits per word (Huffman on the uniform distribution is optimal
and uses exactly n bits everywhere), the average codeword length yields
an exact per-n lower bound on the average number of terms:

    w_k + avg_terms * (w_d + q * w_e) >= n.

:func:`huffman` and :func:`min_average_length_uniform` provide the
optimal-prefix-code side of that argument; :func:`kraft_sum` is an
independent dyadic-arithmetic audit of prefix-freeness.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction

from .errors import (
    CapExceeded,
    FieldOverflow,
    Overflow,
    TrailingBits,
    Truncated,
)
from .numsys import MAX_VALUE, BaseSystem
from .solver import OptimalTable, extract_witness

CODEBOOK_CAP = 16


def ceil_log2(x: int) -> int:
    """Smallest w with 2^w >= x, for x >= 1."""
    return (x - 1).bit_length()


@dataclass(frozen=True)
class CodeWord:
    """A bit string packed as (length, integer value), MSB first."""

    length: int
    value: int

    def __post_init__(self):
        if self.length < 0 or not 0 <= self.value < (1 << self.length):
            raise FieldOverflow(f"value {self.value} does not fit {self.length} bits")

    @classmethod
    def from01(cls, bits: str) -> "CodeWord":
        if bits and set(bits) - {"0", "1"}:
            raise ValueError(f"not a 0/1 string: {bits!r}")
        return cls(len(bits), int(bits, 2) if bits else 0)

    def to01(self) -> str:
        return format(self.value, f"0{self.length}b") if self.length else ""

    def concat(self, other: "CodeWord") -> "CodeWord":
        return CodeWord(self.length + other.length,
                        (self.value << other.length) | other.value)

    def field(self, offset: int, width: int) -> int:
        """The integer held in bits [offset, offset + width)."""
        if offset + width > self.length:
            raise Truncated(
                f"need bits {offset}..{offset + width}, have {self.length}"
            )
        return (self.value >> (self.length - offset - width)) & ((1 << width) - 1)

    def is_prefix_of(self, other: "CodeWord") -> bool:
        return (self.length <= other.length and
                (other.value >> (other.length - self.length)) == self.value)

    def __str__(self) -> str:
        return self.to01()


@dataclass(frozen=True)
class FieldLayout:
    """Bit widths of the count, digit-index, and exponent fields for one n."""

    n: int
    q: int
    w_k: int
    w_e: int
    w_d: int

    @property
    def group_width(self) -> int:
        """Bits per term: digit index plus q exponents."""
        return self.w_d + self.q * self.w_e

    def word_length(self, k: int) -> int:
        return self.w_k + k * self.group_width


def layout_for(n: int, system: BaseSystem) -> FieldLayout:
    """Field widths for values below 2^n in the given system.

    The count can reach n (never more, since the binary expansion bounds
    it), so it gets ceil(lg(n+1)) bits; exponents stay below n, so
    ceil(lg n) bits suffice, widened to 1 for the degenerate n = 1.
    """
    if n < 1:
        raise CapExceeded(f"n={n} must be at least 1")
    return FieldLayout(
        n=n,
        q=system.q,
        w_k=ceil_log2(n + 1),
        w_e=max(1, ceil_log2(n)),
        w_d=ceil_log2(len(system.digits)),
    )


@dataclass(frozen=True)
class CodeBook:
    """Codewords for every m < 2^n under one field layout."""

    n: int
    layout: FieldLayout
    words: tuple[CodeWord, ...]


def fixed_width(x: int, w: int) -> CodeWord:
    """x as exactly w bits, MSB first, left-padded with zeros."""
    if w < 1:
        raise FieldOverflow(f"width {w} must be positive")
    if not 0 <= x < (1 << w):
        raise FieldOverflow(f"{x} does not fit in {w} bits")
    return CodeWord(w, x)


def encode(m: int, table: OptimalTable, layout: FieldLayout | None = None) -> CodeWord:
    """Codeword of m: count field, then digit/exponent fields per term.

    The witness comes from :func:`dbnslab.solver.extract_witness`, so the
    term order is canonical and the encoding deterministic.  A field
    overflow here means the table and layout disagree, not bad user input.
    """
    if layout is None:
        layout = layout_for(table.n, table.system)
    witness = extract_witness(table, m)
    digits = table.system.digits
    word = fixed_width(witness.k, layout.w_k)
    for term in witness.terms:
        if layout.w_d:
            word = word.concat(fixed_width(digits.index(term.digit), layout.w_d))
        for e in term.exponents:
            word = word.concat(fixed_width(e, layout.w_e))
    return word


def decode(bits: CodeWord | str, system: BaseSystem, layout: FieldLayout) -> int:
    """Inverse of :func:`encode`: read the count, then k term groups.

    Accepts a packed word or a plain 0/1 string.  The whole input must be
    consumed: shorter raises Truncated, longer TrailingBits.
    """
    if isinstance(bits, str):
        bits = CodeWord.from01(bits)
    k = bits.field(0, layout.w_k)
    expected = layout.word_length(k)
    if bits.length < expected:
        raise Truncated(f"count {k} needs {expected} bits, got {bits.length}")
    if bits.length > expected:
        raise TrailingBits(f"count {k} needs {expected} bits, got {bits.length}")
    digits = system.digits
    pos = layout.w_k
    total = 0
    for _ in range(k):
        if layout.w_d:
            di = bits.field(pos, layout.w_d)
            pos += layout.w_d
            if di >= len(digits):
                raise FieldOverflow(f"digit index {di} >= {len(digits)}")
            value = digits[di]
        else:
            value = digits[0]
        for b in system.bases:
            e = bits.field(pos, layout.w_e)
            pos += layout.w_e
            for _ in range(e):
                value *= b
                if value > MAX_VALUE:
                    raise Overflow("decoded term exceeds 2^62 - 1")
        total += value
        if total > MAX_VALUE:
            raise Overflow("decoded sum exceeds 2^62 - 1")
    return total


def build_codebook(table: OptimalTable, cap: int = CODEBOOK_CAP) -> CodeBook:
    """Encode every m < 2^n of the table."""
    if table.n > cap:
        raise CapExceeded(f"n={table.n} above the codebook cap {cap}")
    layout = layout_for(table.n, table.system)
    words = tuple(encode(m, table, layout) for m in range(table.size))
    return CodeBook(table.n, layout, words)


def verify_prefix_free(book) -> tuple[bool, tuple[int, int] | None]:
    """True iff no word is a prefix of another (equal words also violate).

    Sorts the words lexicographically; a violation, if any, must then sit
    in an adjacent pair.  Returns the indices of the first offending pair.
    """
    words = book.words if isinstance(book, CodeBook) else tuple(book)
    ranked = sorted(range(len(words)), key=lambda i: words[i].to01())
    for a, b in zip(ranked, ranked[1:]):
        if words[a].is_prefix_of(words[b]):
            return False, (min(a, b), max(a, b))
    return True, None


def kraft_sum(book) -> Fraction:
    """Sum of 2^-len(word), exact.  At most 1 for any prefix-free set."""
    words = book.words if isinstance(book, CodeBook) else tuple(book)
    if not words:
        return Fraction(0)
    longest = max(w.length for w in words)
    numerator = sum(1 << (longest - w.length) for w in words)
    return Fraction(numerator, 1 << longest)


def codebook_lines(book: CodeBook):
    """Text export, one line per value: ``<m> <count> <bits>``."""
    group = book.layout.group_width
    for m, word in enumerate(book.words):
        k = (word.length - book.layout.w_k) // group if group else 0
        yield f"{m} {k} {word.to01()}"


@dataclass(frozen=True)
class Distribution:
    """Probabilities over symbols 0..N-1, summing to 1."""

    N: int
    p: tuple[float, ...]


def make_distribution(probabilities) -> Distribution:
    ps = tuple(float(x) for x in probabilities)
    if not ps:
        raise ValueError("a distribution needs at least one symbol")
    if any(x < 0 for x in ps):
        raise ValueError("probabilities must be non-negative")
    if abs(sum(ps) - 1.0) > 1e-12:
        raise ValueError(f"probabilities sum to {sum(ps)}, not 1")
    return Distribution(len(ps), ps)


@dataclass(frozen=True)
class HuffmanCode:
    """Codeword lengths and a consistent prefix code."""

    lengths: tuple[int, ...]
    words: tuple[CodeWord, ...]

    def expected_length(self, dist: Distribution) -> float:
        return sum(p * l for p, l in zip(dist.p, self.lengths))


def huffman(dist: Distribution) -> HuffmanCode:
    """Optimal prefix code by repeatedly merging the two lightest items.

    The queue is ordered by (weight, insertion sequence number), so ties
    resolve deterministically and the output is reproducible.  A single
    symbol gets the empty codeword.
    """
    n = dist.N
    if n == 1:
        return HuffmanCode((0,), (CodeWord(0, 0),))
    # entries: (weight, seq, node); a node is a symbol or a (left, right) pair
    heap = [(w, i, i) for i, w in enumerate(dist.p)]
    heapq.heapify(heap)
    seq = n
    while len(heap) > 1:
        wa, _, a = heapq.heappop(heap)
        wb, _, b = heapq.heappop(heap)
        heapq.heappush(heap, (wa + wb, seq, (a, b)))
        seq += 1
    root = heap[0][2]
    words: dict[int, CodeWord] = {}
    stack = [(root, 0, 0)]
    while stack:
        node, length, value = stack.pop()
        if isinstance(node, tuple):
            stack.append((node[0], length + 1, value << 1))
            stack.append((node[1], length + 1, (value << 1) | 1))
        else:
            words[node] = CodeWord(length, value)
    ordered = tuple(words[i] for i in range(n))
    return HuffmanCode(tuple(w.length for w in ordered), ordered)


def min_average_length_uniform(n: int, cap: int = 16) -> int:
    """Best possible average length over 2^n equally likely symbols: n.

    Runs the Huffman construction on the uniform distribution and checks
    that every codeword has length exactly n before returning.
    """
    if not 1 <= n <= cap:
        raise CapExceeded(f"n={n} outside 1..{cap}")
    size = 1 << n
    code = huffman(make_distribution([1.0 / size] * size))
    if any(l != n for l in code.lengths):
        raise AssertionError(f"uniform Huffman lengths at n={n} are not all {n}")
    return n
