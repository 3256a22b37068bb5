"""Command-line surface: tables, codewords, and verification verdicts.

Exit codes: 0 success, 1 a verification check failed, 2 usage errors or
limits (bad flags, values out of range, caps).
"""

from __future__ import annotations

import argparse
import random
import sys
from fractions import Fraction

from . import coding, stats, storage
from .coding import CODEBOOK_CAP
from .errors import DbnsError
from .numsys import BaseSystem, Term, enumerate_terms, make_base_system
from .solver import (
    DEFAULT_CAP,
    greedy,
    solve_single,
    recurrence_violations,
)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2


def _parse_int_list(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [int(part) for part in text.split(",")]


def _system_from(args) -> BaseSystem:
    return make_base_system(_parse_int_list(args.bases), _parse_int_list(args.digits))


def _format_term(term: Term, system: BaseSystem) -> str:
    factors = "*".join(
        f"{b}^{e}" for b, e in zip(system.bases, term.exponents)
    )
    return f"{term.digit}*{factors}"


def _rep_line(m: int, count_name: str, rep, system: BaseSystem) -> str:
    values = ",".join(str(t.value) for t in rep.terms)
    factored = ",".join(_format_term(t, system) for t in rep.terms)
    return f"m={m} {count_name}={rep.k} terms={values} factored={factored}"


def cmd_terms(args) -> int:
    system = _system_from(args)
    table = enumerate_terms(system, args.limit)
    if args.format == "json":
        import json

        print(json.dumps([
            {"value": v, "digit": table.index[v].digit,
             "exponents": list(table.index[v].exponents)}
            for v in table.values
        ]))
    elif args.format == "csv":
        cols = ",".join(f"exp_{b}" for b in system.bases)
        print(f"value,digit,{cols}")
        for v in table.values:
            t = table.index[v]
            print(f"{v},{t.digit}," + ",".join(str(e) for e in t.exponents))
    else:
        for v in table.values:
            print(f"{v} = {_format_term(table.index[v], system)}")
    return EXIT_OK


def cmd_optimal(args) -> int:
    system = _system_from(args)
    _, rep = solve_single(system, args.m)
    print(_rep_line(args.m, "k*", rep, system))
    return EXIT_OK


def cmd_greedy(args) -> int:
    system = _system_from(args)
    result = greedy(system, args.m)
    print(_rep_line(args.m, "k'", result.representation, system))
    return EXIT_OK


def cmd_batch(args) -> int:
    system = _system_from(args)
    cap = args.cap if args.cap is not None else DEFAULT_CAP
    table, path = storage.load_or_solve(system, args.n, args.cache_dir, cap)
    print(f"n={table.n} size={table.size} max_kstar={max(table.kstar)} cache={path}")
    return EXIT_OK


def cmd_stats(args) -> int:
    system = _system_from(args)
    cap = args.cap if args.cap is not None else DEFAULT_CAP
    ns = _parse_int_list(args.n_list)
    if not ns:
        return EXIT_OK

    def table_for(n):
        table, _ = storage.load_or_solve(system, n, args.cache_dir, cap)
        return table

    rows = stats.bound_table(system, ns, cap, table_for)
    if args.format == "csv":
        print(stats.rows_to_csv(rows), end="")
    elif args.format == "json":
        print(stats.rows_to_json(rows))
    else:
        print(stats.rows_to_text(rows))
    problems = [p for row in rows for p in stats.row_violations(row)]
    for p in problems:
        print(f"INVARIANT VIOLATED: {p}", file=sys.stderr)
    return EXIT_VERIFY_FAILED if problems else EXIT_OK


def cmd_encode(args) -> int:
    system = _system_from(args)
    cap = args.cap if args.cap is not None else CODEBOOK_CAP
    if args.n > cap:
        raise DbnsError(f"n={args.n} above the codebook cap {cap}")
    table, _ = storage.load_or_solve(system, args.n, args.cache_dir, DEFAULT_CAP)
    if args.all:
        book = coding.build_codebook(table, cap)
        for line in coding.codebook_lines(book):
            print(line)
        return EXIT_OK
    if args.m is None:
        raise DbnsError("encode needs a value m (or --all)")
    word = coding.encode(args.m, table)
    print(word.to01())
    return EXIT_OK


def cmd_decode(args) -> int:
    system = _system_from(args)
    layout = coding.layout_for(args.n, system)
    print(coding.decode(args.bits, system, layout))
    return EXIT_OK


def cmd_verify(args) -> int:
    system = _system_from(args)
    n = args.n
    cap = args.cap if args.cap is not None else CODEBOOK_CAP
    if not 1 <= n <= cap:
        raise DbnsError(f"n={n} outside 1..{cap} (codebook cap)")
    table, _ = storage.load_or_solve(system, n, args.cache_dir, DEFAULT_CAP)
    size = table.size
    book = coding.build_codebook(table, cap)
    checks = []

    ok, pair = coding.verify_prefix_free(book)
    checks.append(("prefix_free", ok,
                   f"{size} words" if ok else f"words {pair[0]} and {pair[1]} collide"))

    bad = next((m for m in range(size)
                if coding.decode(book.words[m], system, book.layout) != m), None)
    checks.append(("roundtrip", bad is None,
                   f"{size} values" if bad is None else f"value {bad} broke"))

    ksum = coding.kraft_sum(book)
    checks.append(("kraft_sum", ksum <= 1, f"{ksum} <= 1"))

    avg = Fraction(sum(w.length for w in book.words), size)
    checks.append(("avg_length", avg >= n, f"{avg} >= {n}"))

    rng = random.Random(f"dbnslab-verify-{n}")
    sample = [rng.randrange(size) for _ in range(512)]
    mismatch = next(
        (m for m in sample if solve_single(system, m)[0] != table.kstar[m]), None
    )
    recurrence_bad = recurrence_violations(table, sample[:64])
    spot_ok = mismatch is None and not recurrence_bad
    culprit = mismatch if mismatch is not None else (recurrence_bad[0] if recurrence_bad else None)
    checks.append(("oracle_spot", spot_ok,
                   "512 samples" if spot_ok else f"value {culprit} disagrees"))

    for name, ok, detail in checks:
        print(f"{'PASS' if ok else 'FAIL'} {name} ({detail})")
    return EXIT_OK if all(ok for _, ok, _ in checks) else EXIT_VERIFY_FAILED


def cmd_huffman(args) -> int:
    if (args.dist is None) == (args.uniform_n is None):
        raise DbnsError("huffman needs exactly one of --dist or --uniform-n")
    if args.uniform_n is not None:
        n = args.uniform_n
        if not 1 <= n <= CODEBOOK_CAP:
            raise DbnsError(f"--uniform-n {n} outside 1..{CODEBOOK_CAP}")
        probabilities = [1.0 / (1 << n)] * (1 << n)
    else:
        with open(args.dist) as fh:
            raw = [float(tok) for tok in fh.read().split()]
        if not raw:
            raise DbnsError(f"{args.dist}: empty distribution")
        if any(x < 0 for x in raw):
            raise DbnsError(f"{args.dist}: negative probability")
        total = sum(raw)
        if abs(total - 1.0) > 1e-9:
            raise DbnsError(f"{args.dist}: probabilities sum to {total}, not 1")
        probabilities = [x / total for x in raw]
    dist = coding.make_distribution(probabilities)
    code = coding.huffman(dist)
    print("lengths=" + " ".join(str(l) for l in code.lengths))
    print(f"expected_length={code.expected_length(dist):.6f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--bases", default="2,3",
                        help="comma-separated bases (default 2,3)")
    common.add_argument("--digits", default="1",
                        help="comma-separated digits (default 1)")
    common.add_argument("--format", choices=("text", "csv", "json"),
                        default="text", help="output format where applicable")
    common.add_argument("--cache-dir", default=None,
                        help=f"cache directory (default ${storage.ENV_CACHE_DIR} "
                             "or ~/.cache/dbnslab)")
    common.add_argument("--cap", type=int, default=None,
                        help="override the command's n cap "
                             f"(solver {DEFAULT_CAP}, codebook {CODEBOOK_CAP})")

    parser = argparse.ArgumentParser(
        prog="dbnslab",
        description="Double-base number system laboratory: minimal and greedy "
                    "representations, term-count statistics, prefix codes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("terms", parents=[common],
                       help="list all term values up to a limit")
    p.add_argument("--limit", type=int, required=True)
    p.set_defaults(func=cmd_terms)

    p = sub.add_parser("optimal", parents=[common],
                       help="minimum-term representation of one value")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_optimal)

    p = sub.add_parser("greedy", parents=[common],
                       help="greedy representation of one value")
    p.add_argument("m", type=int)
    p.set_defaults(func=cmd_greedy)

    p = sub.add_parser("batch", parents=[common],
                       help="solve all values below 2^n and cache the table")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("stats", parents=[common],
                       help="average term counts and bound table per n")
    p.add_argument("--n-list", default="", help="comma-separated n values")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("encode", parents=[common],
                       help="codeword of one value (or --all for the codebook)")
    p.add_argument("m", type=int, nargs="?", default=None)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--all", action="store_true",
                   help="emit '<m> <count> <bits>' lines for every value")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", parents=[common],
                       help="value of one codeword")
    p.add_argument("bits", help="0/1 string")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("verify", parents=[common],
                       help="full audit for one n: prefix-freeness, roundtrip, "
                            "Kraft sum, average length, solver spot check")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("huffman", parents=[common],
                       help="optimal prefix code for a distribution")
    p.add_argument("--dist", default=None,
                   help="file of whitespace-separated probabilities")
    p.add_argument("--uniform-n", type=int, default=None,
                   help="shorthand for the uniform distribution over 2^n symbols")
    p.set_defaults(func=cmd_huffman)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except DbnsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
