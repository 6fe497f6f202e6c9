"""Command-line front end.

    stareigen graph-stats    --n 3 --n-max 6
    stareigen verify         --n 3 --n-max 5 [--samples 20] [--seed 0]
    stareigen min-support    --n 3 | --n 5 --radius 2
    stareigen fuzz-theorem1  --n 8 --samples 200 --seed 0
    stareigen classify       matrix.json
    stareigen partition-check --n 7 --n-max 30
    stareigen crc-check      --n 3 --n-max 6
    stareigen export         --n 4 --elementary 1,2,3

Every command accepts --format {json,csv,text} and --out PATH.  The exit code
is 0 iff every gating check in the report passed, 1 if one failed and 2 for
usage or input errors.  STAREIGEN_THREADS sets the worker-thread count.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from stareigen import __version__, suite
from stareigen.eigen import CoefficientVector, VertexFunction, elementary, export_table, from_coefficients
from stareigen.extremal import SearchSpaceError
from stareigen.matrices import MatrixFormatError, SquareMatrix
from stareigen.report import Report, render


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--timing", action="store_true",
                   help="add wall-clock seconds to the report (breaks byte-identical reruns)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stareigen", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"stareigen {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graph-stats", help="order, degree, bipartiteness, girth, diameter of S_n")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--n-max", type=int)
    _common(p)

    p = sub.add_parser("verify", help="basis rank, eigenvalue equation, M(f) correspondence, "
                                      "coset codes, equality family")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--n-max", type=int)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-fault", action="store_true",
                   help="test mode: corrupt one basis function in the eigenvalue check")
    _common(p)

    p = sub.add_parser("min-support", help="exact minimum for n = 3, grid upper bound for 4..6")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--max-points", type=int)
    _common(p)

    p = sub.add_parser("fuzz-theorem1", help="g_M >= 2(n-1)! on seeded random special matrices")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force-large-n", action="store_true", help="allow n = 9, 10 (slow)")
    _common(p)

    p = sub.add_parser("classify", help="classify a matrix file ({n, entries})")
    p.add_argument("matrix", help="path to a JSON matrix file, or - for stdin")
    p.add_argument("--force-large-n", action="store_true")
    _common(p)

    p = sub.add_parser("partition-check", help="partition arithmetic dichotomy for n >= 7")
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--n-max", type=int)
    _common(p)

    p = sub.add_parser("crc-check", help="cosets S_a^alpha as completely regular codes")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--n-max", type=int)
    _common(p)

    p = sub.add_parser("export", help="value table of an eigenfunction (n <= 6)")
    p.add_argument("--n", type=int, default=3)
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--elementary", metavar="U,V,W", help="export f_u^{v,w}")
    src.add_argument("--coefficients", metavar="FILE", help="coefficient-vector JSON record")
    _common(p)
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _run(args) -> Report:
    cmd = args.command
    if cmd == "graph-stats":
        return suite.run_graph_stats(args.n, args.n_max)
    if cmd == "verify":
        return suite.run_verify(args.n, args.n_max, args.samples, args.seed, args.inject_fault)
    if cmd == "min-support":
        return suite.run_min_support(args.n, args.radius, args.max_points)
    if cmd == "fuzz-theorem1":
        return suite.run_fuzz_theorem1(args.n, args.samples, args.seed, args.force_large_n)
    if cmd == "classify":
        return suite.run_classify(SquareMatrix.from_json(_read(args.matrix)), args.force_large_n)
    if cmd == "partition-check":
        return suite.run_partition_check(args.n, args.n_max)
    if cmd == "crc-check":
        return suite.run_crc_check(args.n, args.n_max)
    raise AssertionError(cmd)


def _export_function(args) -> VertexFunction:
    if args.elementary:
        try:
            u, v, w = (int(x) for x in args.elementary.split(","))
        except ValueError:
            raise ValueError(f"--elementary expects U,V,W, got {args.elementary!r}") from None
        f = elementary(u, v, w, args.n)
    else:
        try:
            record = json.loads(_read(args.coefficients))
        except json.JSONDecodeError as exc:
            raise ValueError(f"invalid JSON (line {exc.lineno}, column {exc.colno}): {exc.msg}") from None
        f = from_coefficients(CoefficientVector.from_record(record))
    if f.n > 6:
        raise ValueError("value tables are exported only for n <= 6")
    return f


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    started = time.perf_counter()
    table = None
    try:
        if args.command == "export":
            f = _export_function(args)
            rep = Report("export", {"n": f.n, "function": f.label})
            rep.results = suite.values_record(f)
            table = export_table(f)
        else:
            rep = _run(args)
    except MatrixFormatError as exc:
        print(f"stareigen: matrix file error: {exc}", file=sys.stderr)
        return 2
    except (SearchSpaceError, ValueError, OSError) as exc:
        print(f"stareigen: {exc}", file=sys.stderr)
        return 2
    timing = time.perf_counter() - started if args.timing else None
    data = rep.to_dict(timing)
    if table is not None and args.format == "csv":
        text = table
    else:
        text = render(data, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if rep.ok else 1


if __name__ == "__main__":
    sys.exit(main())
