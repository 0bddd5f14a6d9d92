"""Command-line interface.

Exit statuses: 0 success, 1 parse error, 2 input not doubly nonnegative,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, Sequence, TextIO

from intcp.factorizer import factor
from intcp.matrix_core import (
    Factorization,
    NotDoublyNonnegativeError,
    RankOneTerm,
    SymMat2,
    verify_factorization,
)
from intcp.number_kernel import four_square
from intcp.oracle import DEFAULT_DEPTH_CAP, min_cp_rank
from intcp.survey import iter_survey, write_csv

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_DOMAIN = 2
EXIT_VERIFY = 3


class ParseError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse's default usage-error status (2) collides with EXIT_DOMAIN
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_PARSE, f"{self.prog}: error: {message}\n")


def _ints(tokens: Sequence[str], where: str) -> list[int]:
    out = []
    for i, tok in enumerate(tokens, 1):
        try:
            out.append(int(tok))
        except ValueError:
            raise ParseError(f"{where}token {i} ({tok!r}) is not an integer") from None
    return out


def parse_matrix(text: str, where: str = "") -> SymMat2:
    vals = _ints(text.split(), where)
    if len(vals) != 3:
        raise ParseError(f"{where}expected three integers 'a b c', got {len(vals)}")
    return SymMat2(*vals)


def parse_matrix_file(text: str) -> list[SymMat2]:
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_matrix(line, f"line {lineno}, "))
    return out


def _term(k: int, t: int, where: str) -> RankOneTerm:
    if k < 0 or t < 0:
        raise ParseError(f"{where}term ({k}, {t}) has a negative coordinate")
    if k == 0 and t == 0:
        raise ParseError(f"{where}the zero term (0, 0) is not allowed")
    return RankOneTerm(k, t)


def parse_terms(text: str) -> list[RankOneTerm]:
    """Terms as JSON (a list of [k, t] pairs or a factorization object) or 'k t' lines."""
    stripped = text.lstrip()
    if stripped[:1] in ("[", "{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        pairs = data["terms"] if isinstance(data, dict) else data
        out = []
        for i, pair in enumerate(pairs, 1):
            if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(v, int) for v in pair)):
                raise ParseError(f"term {i}: expected a pair of integers, got {pair!r}")
            out.append(_term(pair[0], pair[1], f"term {i}: "))
        return out
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].replace(",", " ").strip()
        if not line:
            continue
        where = f"line {lineno}, "
        vals = _ints(line.split(), where)
        if len(vals) != 2:
            raise ParseError(f"{where}expected two integers 'k t', got {len(vals)}")
        out.append(_term(vals[0], vals[1], where))
    return out


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


@contextmanager
def _output(path: str | None) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def _matrices(args: argparse.Namespace) -> list[SymMat2]:
    if args.file is not None:
        if args.matrix:
            raise ParseError("give either an inline matrix or --file, not both")
        return parse_matrix_file(_read(args.file))
    if not args.matrix:
        raise ParseError("a matrix 'a b c' is required")
    return [parse_matrix(" ".join(args.matrix))]


def _render_terms(terms: Sequence[RankOneTerm]) -> str:
    return " + ".join(f"{r}{r}^T" for r in terms) if terms else "0"


def cmd_factor(args: argparse.Namespace, out: TextIO) -> int:
    status = EXIT_OK
    results = []
    for m in _matrices(args):
        try:
            f = factor(m, trace=args.trace)
        except NotDoublyNonnegativeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            status = EXIT_DOMAIN
            continue
        if args.format == "json":
            d = f.to_dict()
            if args.trace:
                d["trace"] = f.trace.render()
            results.append(d)
        else:
            if args.trace:
                for line in f.trace.render():
                    print(line, file=out)
            print(f"{m.text()}: {len(f)} terms", file=out)
            print(f"  {_render_terms(f.terms)}", file=out)
    if args.format == "json":
        payload = results if args.file is not None else (results[0] if results else None)
        if payload is not None:
            json.dump(payload, out, indent=2)
            out.write("\n")
    return status


def cmd_verify(args: argparse.Namespace, out: TextIO) -> int:
    if not args.matrix:
        raise ParseError("a matrix 'a b c' is required")
    m = parse_matrix(" ".join(args.matrix))
    terms = parse_terms(_read(args.terms))
    f = Factorization(m, tuple(terms), "external")
    ok = verify_factorization(f)
    res = f.residual()
    if args.format == "json":
        json.dump({"matrix": m.to_dict(), "terms": [[r.k, r.t] for r in terms],
                   "valid": ok, "residual": res.to_dict()}, out, indent=2)
        out.write("\n")
    elif ok:
        print(f"ok: {len(terms)} terms reproduce {m.text()}", file=out)
    else:
        print(f"mismatch: residual (matrix - sum of terms) a={res.a} b={res.b} c={res.c}", file=out)
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_minrank(args: argparse.Namespace, out: TextIO) -> int:
    m = _matrices(args)
    if len(m) != 1:
        raise ParseError("minrank takes exactly one matrix")
    res = min_cp_rank(m[0], args.depth_cap)
    if args.format == "json":
        json.dump({
            "matrix": m[0].to_dict(),
            "min_terms": res.min_terms,
            "status": res.status,
            "nodes_explored": res.nodes_explored,
            "witness": res.witness.to_dict() if res.witness else None,
        }, out, indent=2)
        out.write("\n")
    elif res.status == "exact":
        print(f"{m[0].text()}: min {res.min_terms} terms (exact, {res.nodes_explored} nodes)", file=out)
        print(f"  {_render_terms(res.witness.terms)}", file=out)
    else:
        print(f"{m[0].text()}: more than {args.depth_cap} terms (depth-capped, "
              f"{res.nodes_explored} nodes)", file=out)
    return EXIT_OK


def cmd_fsq(args: argparse.Namespace, out: TextIO) -> int:
    (n,) = _ints([args.n], "")
    if n < 0:
        print(f"error: {n} is negative", file=sys.stderr)
        return EXIT_DOMAIN
    q = four_square(n)
    if args.format == "json":
        json.dump({"n": n, "squares": list(q)}, out)
        out.write("\n")
    else:
        print(" ".join(map(str, q)), file=out)
    return EXIT_OK


def cmd_survey(args: argparse.Namespace, out: TextIO) -> int:
    if args.bound < 1:
        raise ParseError("--bound must be at least 1")
    rows = iter_survey(args.bound, args.with_oracle, args.depth_cap, args.workers)
    write_csv(rows, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text",
                        help="text (default) or structured JSON")
    common.add_argument("--output", "-o", metavar="PATH", help="write to PATH instead of stdout")

    matrix = argparse.ArgumentParser(add_help=False)
    matrix.add_argument("matrix", nargs="*", help="the matrix [[a, b], [b, c]] as 'a b c'")

    parser = _Parser(prog="intcp", description="Integer cp-factorization of 2x2 matrices.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("factor", parents=[common, matrix], help="factor a matrix")
    p.add_argument("--file", metavar="PATH", help="one matrix 'a b c' per line ('-' for stdin)")
    p.add_argument("--trace", action="store_true", help="show peel and reduction steps")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("verify", parents=[common, matrix], help="check a list of terms")
    p.add_argument("--terms", required=True, metavar="PATH",
                   help="'k t' lines or JSON pairs ('-' for stdin)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("minrank", parents=[common, matrix],
                       help="brute-force minimal number of terms (exponential; entries <~ 10^4)")
    p.add_argument("--file", metavar="PATH", help=argparse.SUPPRESS)
    p.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP, metavar="N")
    p.set_defaults(func=cmd_minrank)

    p = sub.add_parser("fsq", parents=[common], help="four-square decomposition of n")
    p.add_argument("n")
    p.set_defaults(func=cmd_fsq)

    p = sub.add_parser("survey", parents=[common], help="CSV statistics over all matrices up to a bound")
    p.add_argument("--bound", type=int, required=True, metavar="N")
    p.add_argument("--with-oracle", action="store_true", help="also compute the minimal term count")
    p.add_argument("--depth-cap", type=int, default=DEFAULT_DEPTH_CAP, metavar="N")
    p.add_argument("--workers", type=int, default=1, metavar="N")
    p.set_defaults(func=cmd_survey)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with _output(args.output) as out:
            return args.func(args, out)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())
