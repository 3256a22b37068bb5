"""Average term counts and the per-n code-length lower bound, exactly.

Averages are exact rationals with denominator 2^n; floats appear only in
the display-only ratio column.  The key per-row fact is

    avg_code_len = w_k + A_star * (w_d + q * w_e) >= n,

the executable form of the optimal-prefix-code bound: it forces the
average number of terms A_star upward as n grows.
"""

from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .coding import FieldLayout, layout_for
from .errors import FieldOverflow
from .numsys import BaseSystem
from .solver import DEFAULT_CAP, OptimalTable, greedy_count_batch, solve_batch

CSV_HEADER = (
    "n,A_star_num,A_star_den,A_prime_num,A_prime_den,"
    "avg_code_len_num,avg_code_len_den,lower_bound,max_kstar,max_kprime,ratio"
)


@dataclass(frozen=True)
class StatsRow:
    """Exact per-n averages and the bound they must respect."""

    n: int
    system_desc: str
    A_star: Fraction
    A_prime: Fraction
    avg_code_len: Fraction
    lower_bound_rhs: int
    reference_ratio: float
    max_kstar: int
    max_kprime: int
    w_k: int
    group_width: int


def compute_row(
    system: BaseSystem,
    n: int,
    cap: int = DEFAULT_CAP,
    table: OptimalTable | None = None,
) -> StatsRow:
    """Averages over all m < 2^n from the batch solver and batch greedy.

    The average codeword length comes from the length formula, not from
    materializing 2^n codewords; the coding tests pin the formula to the
    materialized lengths at small n.
    """
    if table is None:
        table = solve_batch(system, n, cap)
    size = 1 << n
    kstar = np.frombuffer(table.kstar, dtype=np.uint8)
    kprime = np.frombuffer(greedy_count_batch(system, n, cap), dtype=np.uint8)
    layout = layout_for(n, system)
    max_kstar = int(kstar.max())
    if max_kstar >= (1 << layout.w_k):
        raise FieldOverflow(
            f"term count {max_kstar} does not fit the {layout.w_k}-bit count field"
        )
    a_star = Fraction(int(kstar.sum(dtype=np.int64)), size)
    a_prime = Fraction(int(kprime.sum(dtype=np.int64)), size)
    avg_len = layout.w_k + a_star * layout.group_width
    return StatsRow(
        n=n,
        system_desc=system.describe(),
        A_star=a_star,
        A_prime=a_prime,
        avg_code_len=avg_len,
        lower_bound_rhs=n,
        reference_ratio=float(a_star) * math.log2(n) / n,
        max_kstar=max_kstar,
        max_kprime=int(kprime.max()),
        w_k=layout.w_k,
        group_width=layout.group_width,
    )


def row_violations(row: StatsRow) -> list[str]:
    """Invariants the row must satisfy; empty list means all hold."""
    bad = []
    if not row.A_star <= row.A_prime:
        bad.append(f"n={row.n}: A_star {row.A_star} > A_prime {row.A_prime}")
    if not row.avg_code_len >= row.lower_bound_rhs:
        bad.append(
            f"n={row.n}: avg_code_len {row.avg_code_len} < {row.lower_bound_rhs}"
        )
    if not row.A_star >= Fraction(row.n - row.w_k, row.group_width):
        bad.append(f"n={row.n}: A_star below the rearranged bound")
    return bad


def bound_table(system: BaseSystem, n_list, cap: int = DEFAULT_CAP, table_for=None) -> list[StatsRow]:
    """One row per requested n, ascending.  ``table_for(n)`` may supply
    precomputed (e.g. cached) solver tables."""
    rows = []
    for n in sorted(set(n_list)):
        table = table_for(n) if table_for is not None else None
        rows.append(compute_row(system, n, cap, table))
    return rows


def kstar_histogram(table: OptimalTable) -> dict[int, int]:
    """Count of values per minimum term count; counts sum to 2^n."""
    counts = Counter(table.kstar)
    return {k: counts[k] for k in sorted(counts)}


def _csv_fields(row: StatsRow) -> list:
    size = 1 << row.n
    return [
        row.n,
        int(row.A_star * size), size,
        int(row.A_prime * size), size,
        int(row.avg_code_len * size), size,
        row.lower_bound_rhs,
        row.max_kstar,
        row.max_kprime,
        f"{row.reference_ratio:.6f}",
    ]


def rows_to_csv(rows) -> str:
    """CSV with the fixed schema; numerators are kept over denominator 2^n."""
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(CSV_HEADER.split(","))
    for row in rows:
        writer.writerow(_csv_fields(row))
    return out.getvalue()


def rows_to_json(rows) -> str:
    """JSON mirror of the CSV schema: a list of objects, same field names."""
    keys = CSV_HEADER.split(",")
    records = []
    for row in rows:
        fields = _csv_fields(row)
        fields[-1] = float(fields[-1])
        records.append(dict(zip(keys, fields)))
    return json.dumps(records, indent=2)


def rows_to_text(rows) -> str:
    """One stable line per n for eyeballing and diffing."""
    lines = []
    for r in rows:
        lines.append(
            f"n={r.n} A*={float(r.A_star):.6f} ({r.A_star}) "
            f"A'={float(r.A_prime):.6f} ({r.A_prime}) "
            f"avg_len={float(r.avg_code_len):.6f} ({r.avg_code_len}) "
            f"bound={r.lower_bound_rhs} max_k*={r.max_kstar} "
            f"max_k'={r.max_kprime} ratio={r.reference_ratio:.6f}"
        )
    return "\n".join(lines)
