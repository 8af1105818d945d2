"""Command-line interface.

Structured reports go to stdout as JSON (``--pretty`` for aligned text);
errors go to stderr. Exit codes: 0 success, 1 invalid input, 2 internal
self-check failure, 3 budget refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from math import gcd
from typing import Sequence

from . import __version__
from .classifier import classify, normalization_trace
from .cohomology import MAX_M, dw_from_triangulation
from .errors import BudgetExceeded, SeifertDWError, SeifertValidationError
from .seifert import (
    SeifertData,
    canonicalize,
    count_hom_z2,
    h1,
    insert_trivial,
    parse_fibers,
    presentation_matrix,
    remove_trivial,
    trade,
)
from .triangulation.builders import MAX_FIBERS, MAX_TETS, build_lens, build_surface_times_circle
from .triangulation.core import PseudoTriangulation, validate
from .triangulation.io import format_tri, read_tri, write_tri

EXIT_OK, EXIT_INVALID, EXIT_SELFCHECK, EXIT_BUDGET = 0, 1, 2, 3
MAX_SWEEP_ROWS = 1_000_000


class UsageError(SeifertValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for self-check failures here
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- input --------------------------------------------------------------------

def _add_spec_args(p: argparse.ArgumentParser):
    p.add_argument("--fibers", help='inline fiber list, e.g. "(3,1),(3,1),(1,4)"')
    p.add_argument("--genus", type=int, default=None, help="genus of the base surface (default 0)")
    p.add_argument("--spec", metavar="PATH", help="Seifert document file ('-' for stdin)")


def _add_budget_args(p: argparse.ArgumentParser, tets: bool = True, m: bool = True):
    if tets:
        p.add_argument("--max-tets", type=int, default=MAX_TETS, help=f"tetrahedron budget (default {MAX_TETS})")
    if m:
        p.add_argument("--max-m", type=int, default=MAX_M, help=f"largest dim H^1 enumerated (default {MAX_M})")


def _spec(args) -> SeifertData:
    if args.spec is not None:
        if args.fibers is not None or args.genus is not None:
            raise UsageError("give either --spec or --fibers/--genus, not both")
        if args.spec == "-":
            text = sys.stdin.read()
        else:
            with open(args.spec, encoding="utf-8") as fh:
                text = fh.read()
        d = SeifertData.from_json(text)
    else:
        if args.fibers is None:
            raise UsageError("a Seifert spec is required: use --fibers or --spec")
        d = SeifertData(args.genus or 0, parse_fibers(args.fibers))
    return canonicalize(d)


def _build(family: str, params: Sequence[str], args) -> PseudoTriangulation:
    from .pipeline import seifert_triangulation

    def ints(count):
        if len(params) != count:
            raise UsageError(f"'{family}' takes {count} integer parameter(s), got {len(params)}")
        try:
            return [int(x) for x in params]
        except ValueError:
            raise UsageError(f"'{family}' parameters must be integers, got {list(params)}") from None

    if family == "lens":
        p, q = ints(2)
        return build_lens(p, q, max_tets=args.max_tets)
    if family == "product":
        (g,) = ints(1)
        return build_surface_times_circle(g, max_tets=args.max_tets)
    if family == "seifert":
        ints(0)
        return seifert_triangulation(_spec(args), max_tets=args.max_tets)
    raise UsageError(f"unknown family {family!r}; expected lens, product or seifert")


# -- output -------------------------------------------------------------------

def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        if set(obj) == {"num", "den"}:
            yield prefix, f"{obj['num']}/{obj['den']}"
            return
        for key, val in obj.items():
            yield from _flatten(val, f"{prefix}.{key}" if prefix else key)
    elif isinstance(obj, list) and obj and all(isinstance(x, list) for x in obj):
        yield prefix, " ".join("(" + ",".join(map(str, x)) + ")" for x in obj)
    elif isinstance(obj, list):
        yield prefix, " ".join(map(str, obj)) if obj else "-"
    else:
        yield prefix, "-" if obj is None else str(obj).lower() if isinstance(obj, bool) else str(obj)


def _emit(obj: dict, args):
    if getattr(args, "pretty", False):
        items = list(_flatten(obj))
        width = max((len(k) for k, _ in items), default=0)
        for k, v in items:
            print(f"{k:<{width}}  {v}")
    else:
        print(json.dumps(obj, indent=2))


def _spec_fields(d: SeifertData) -> dict:
    return {"genus": d.genus, "fibers": [[p, q] for p, q in d.fibers]}


# -- commands -----------------------------------------------------------------

def cmd_classify(args) -> int:
    d = _spec(args)
    v = classify(d)
    _emit({**_spec_fields(d), **v.to_dict()}, args)
    return EXIT_OK


def cmd_invariant(args) -> int:
    v = classify(_spec(args))
    if args.pretty:
        print(f"Z = {v.z}")
    else:
        _emit({"z": v.z.to_dict()}, args)
    return EXIT_OK


def cmd_homology(args) -> int:
    d = _spec(args)
    s = h1(d)
    ints, _ = presentation_matrix(d)
    try:
        homs = count_hom_z2(d)
    except BudgetExceeded:
        homs = None
    _emit({**_spec_fields(d), **s.to_dict(), "hom_z2_count": homs, "presentation": ints}, args)
    return EXIT_OK


def cmd_build(args) -> int:
    tri = _build(args.family, args.params, args)
    if args.output is None:
        sys.stdout.write(format_tri(tri))
        return EXIT_OK
    write_tri(tri, args.output)
    _emit({"family": args.family, "tets": tri.tet_count, "path": args.output,
           "validation": validate(tri).to_dict()}, args)
    return EXIT_OK


def cmd_oracle(args) -> int:
    if (args.file is None) == (args.build is None):
        raise UsageError("give exactly one of a triangulation file or --build FAMILY ...")
    if args.file is not None:
        tri = read_tri(args.file)
        source = args.file
    else:
        family, *params = args.build
        tri = _build(family, params, args)
        source = " ".join(args.build)
    if tri.tet_count > args.max_tets:
        raise BudgetExceeded(f"{tri.tet_count} tetrahedra exceed the limit of {args.max_tets}")
    prof = dw_from_triangulation(tri, max_m=args.max_m)
    _emit({"source": source, "tets": tri.tet_count, **prof.to_dict()}, args)
    return EXIT_OK


def cmd_compare(args) -> int:
    from .pipeline import compare

    report = compare(_spec(args), max_tets=args.max_tets, max_m=args.max_m)
    _emit(report.to_dict(), args)
    return EXIT_OK if report.agree else EXIT_SELFCHECK


def cmd_moves(args) -> int:
    d = _spec(args)
    if args.move == "trade":
        out = [trade(d, args.i, args.j)]
    elif args.move == "normalize":
        out = normalization_trace(d)
    elif args.move == "insert":
        out = [insert_trivial(d)]
    else:
        out = [remove_trivial(d, args.i)]
    for step in out:
        print(step.to_json())
    return EXIT_OK


# -- sweep --------------------------------------------------------------------

SWEEP_COLUMNS = ["genus", "n", "fibers", "in_class_a", "b_eligible", "xi_parity", "in_class_b",
                 "essential", "m", "z"]
COMPARE_COLUMNS = ["oracle_m", "oracle_z", "agree"]


def sweep_data(genera: Sequence[int], min_n: int, max_n: int, max_p: int, max_q: int):
    """Data sets in sweep order: genus, then n, then fiber lists lexicographically."""
    pairs = [(p, q) for p in range(1, max_p + 1) for q in range(-max_q, max_q + 1) if gcd(p, abs(q)) == 1]
    for g in genera:
        for n in range(min_n, max_n + 1):
            for fibers in product(pairs, repeat=n):
                yield SeifertData(g, fibers)


def sweep_row(job) -> dict:
    d, with_compare, max_tets, max_m = job
    v = classify(d)
    row = {"genus": d.genus, "n": d.n, "fibers": d.fibers, **v.to_dict()}
    if with_compare:
        from .pipeline import compare

        row["oracle"] = None
        if d.genus == 0 and canonicalize(d).n <= MAX_FIBERS:
            try:
                c = compare(d, max_tets=max_tets, max_m=max_m)
            except BudgetExceeded:
                pass
            else:
                row["oracle"] = {"m": c.oracle.m, "z": c.oracle.z_definition.to_dict(), "agree": c.agree}
    return row


def _cell(row: dict, col: str) -> str:
    if col == "fibers":
        return ",".join(f"({p},{q})" for p, q in row["fibers"]) or "-"
    if col == "z":
        return f"{row['z']['num']}/{row['z']['den']}"
    if col in COMPARE_COLUMNS:
        o = row["oracle"]
        if o is None:
            return "-"
        if col == "oracle_m":
            return str(o["m"])
        if col == "oracle_z":
            return f"{o['z']['num']}/{o['z']['den']}"
        return "1" if o["agree"] else "0"
    val = row[col]
    if val is None:
        return "-"
    if isinstance(val, bool):
        return "1" if val else "0"
    return str(val)


def cmd_sweep(args) -> int:
    try:
        genera = [int(g) for g in args.genus.split(",") if g.strip()]
    except ValueError:
        raise UsageError(f"--genus expects a comma-separated list of integers, got {args.genus!r}") from None
    if not genera or any(g < 0 for g in genera):
        raise UsageError("--genus needs at least one non-negative integer")
    if args.min_n < 0 or args.max_n < args.min_n or args.max_p < 1 or args.max_q < 0:
        raise UsageError("sweep ranges must satisfy 0 <= min-n <= max-n, max-p >= 1, max-q >= 0")
    npairs = sum(1 for p in range(1, args.max_p + 1) for q in range(-args.max_q, args.max_q + 1)
                 if gcd(p, abs(q)) == 1)
    total = len(genera) * sum(npairs ** n for n in range(args.min_n, args.max_n + 1))
    if total > args.max_rows:
        raise BudgetExceeded(f"sweep would produce {total} rows, above --max-rows {args.max_rows}")

    jobs = [(d, args.compare, args.max_tets, args.max_m)
            for d in sweep_data(genera, args.min_n, args.max_n, args.max_p, args.max_q)]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(sweep_row, jobs, chunksize=64))
    else:
        rows = [sweep_row(j) for j in jobs]

    cols = SWEEP_COLUMNS + (COMPARE_COLUMNS if args.compare else [])
    out = ["\t".join(cols)]
    out += ["\t".join(_cell(r, c) for c in cols) for r in rows]
    sys.stdout.write("\n".join(out) + "\n")
    if args.figure:
        from .plotting import sweep_figure

        sweep_figure(rows, args.figure)
        print(f"figure written to {args.figure}", file=sys.stderr)
    if args.compare and any(r["oracle"] is not None and not r["oracle"]["agree"] for r in rows):
        print("error: classifier and oracle disagree on at least one row", file=sys.stderr)
        return EXIT_SELFCHECK
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="seifert-dw", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text, fn):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--pretty", action="store_true", help="human-readable output")
        p.set_defaults(func=fn)
        return p

    p = command("classify", "class A/B verdict, m and Z from Seifert data", cmd_classify)
    _add_spec_args(p)
    p = command("invariant", "only the value Z", cmd_invariant)
    _add_spec_args(p)
    p = command("homology", "first homology and the Z/2 homomorphism count", cmd_homology)
    _add_spec_args(p)

    p = command("build", "write a triangulation (lens P Q | product G | seifert --fibers ...)", cmd_build)
    p.add_argument("family", choices=["lens", "product", "seifert"])
    p.add_argument("params", nargs="*")
    p.add_argument("-o", "--output", help="output path (default: the table on stdout)")
    _add_spec_args(p)
    _add_budget_args(p, m=False)

    p = command("oracle", "cohomology-ring computation of Z on a triangulation", cmd_oracle)
    p.add_argument("file", nargs="?", help="triangulation file")
    p.add_argument("--build", nargs="+", metavar="ARG", help="build instead: lens P Q | product G | seifert")
    _add_spec_args(p)
    _add_budget_args(p)

    p = command("compare", "classifier against the oracle on a built triangulation", cmd_compare)
    _add_spec_args(p)
    _add_budget_args(p)

    p = command("sweep", "classify every data set in a range, as tab-separated rows", cmd_sweep)
    p.add_argument("--min-n", type=int, default=1)
    p.add_argument("--max-n", type=int, default=2)
    p.add_argument("--max-p", type=int, default=4)
    p.add_argument("--max-q", type=int, default=2)
    p.add_argument("--genus", default="0", help="comma-separated genera (default 0)")
    p.add_argument("--compare", action="store_true", help="add oracle columns where in budget")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--figure", metavar="PATH", help="also render a summary figure")
    p.add_argument("--max-rows", type=int, default=MAX_SWEEP_ROWS)
    _add_budget_args(p)

    p = command("moves", "apply Seifert moves and print the resulting spec(s)", cmd_moves)
    moves = p.add_subparsers(dest="move", required=True, parser_class=_Parser)
    m = moves.add_parser("trade", help="(p_i, q_i + p_i), (p_j, q_j - p_j)")
    m.add_argument("i", type=int)
    m.add_argument("j", type=int)
    _add_spec_args(m)
    m = moves.add_parser("normalize", help="print every step of the xi normalization")
    _add_spec_args(m)
    m = moves.add_parser("insert", help="append a (1,0) fiber")
    _add_spec_args(m)
    m = moves.add_parser("remove", help="remove the (1,0) fiber at index i")
    m.add_argument("i", type=int)
    _add_spec_args(m)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except SeifertDWError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
