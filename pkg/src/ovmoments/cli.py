"""Command-line front end: ``ovmoments table|verify|solve``.

Exit codes: 0 pass, 1 fail, 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import genfun, oracle, published
from . import quasimod as Q
from .reports import Report, exact_str, timed
from .series import CACHE_ENV
from .verify import SUITES, Perturbation, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

MOMENT_KINDS = ("rank", "m2rank", "crank1", "crank2")
COUNT_KINDS = ("pbar", "spt1", "spt2", "sptbar", "nov", "ov", "alpha")


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# table


def _count_series(kind: str, order: int):
    if kind == "pbar":
        return genfun.overpartition_gf(order)
    if kind in ("spt1", "spt2", "sptbar"):
        return genfun.spt_series_direct(order)[("spt1", "spt2", "sptbar").index(kind)]
    if kind in ("nov", "ov"):
        return genfun.nov_ov_series(order)[kind == "ov"]
    return genfun.alpha_bar_series(order)


def _count_oracle(kind: str, n: int) -> int:
    if kind == "pbar":
        return len(oracle.enumerate_overpartitions(n))
    if kind in ("spt1", "spt2", "sptbar"):
        return oracle.spt_statistics(n)[("spt1", "spt2", "sptbar").index(kind)]
    if kind in ("nov", "ov"):
        return oracle.nov_ov(n)[kind == "ov"]
    return oracle.alpha_bar(n)


def build_table(kind: str, k: int | None, n_max: int) -> Report:
    if n_max < 0:
        raise UsageError("--n-max must be nonnegative")
    if kind in MOMENT_KINDS:
        k = 2 if k is None else k
        if k < 0:
            raise UsageError("--k must be nonnegative")
        if k % 2:
            raise UsageError(
                f"odd moments vanish: the {kind} statistic is symmetric (m and -m occur equally often), "
                f"so the k={k} moment is identically zero"
            )
        values = genfun.moment_series(kind, k, n_max + 1).series
        label = f"{genfun.PREFIX[kind]}_{k}"
        ref = (lambda n: oracle.moment(kind, k, n))
    elif kind in COUNT_KINDS:
        if k is not None:
            raise UsageError(f"--k does not apply to {kind}")
        values = _count_series(kind, n_max + 1)
        label = kind
        ref = (lambda n: _count_oracle(kind, n))
    else:
        raise UsageError(f"unknown kind {kind!r}")
    with_oracle = n_max <= oracle.ENUMERATION_CAP and n_max <= 25
    rep = Report("table", {"kind": kind, "k": k, "n_max": n_max})
    with timed(rep):
        rows = []
        for n in range(n_max + 1):
            row = [n, exact_str(values[n])]
            if with_oracle:
                expected = ref(n)
                rep.check(f"n={n}", expected, values[n])
                row.append(exact_str(expected))
            rows.append(row)
    rep.data = {"columns": ["n", label] + (["oracle"] if with_oracle else []), "rows": rows}
    return rep


def render_table(rep: Report, fmt: str) -> str:
    cols, rows = rep.data["columns"], rep.data["rows"]
    if fmt == "json":
        return rep.to_json(include_time=False)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        w.writerows(rows)
        return buf.getvalue().rstrip("\n")
    widths = [max(len(str(c)), *(len(str(r[i])) for r in rows)) for i, c in enumerate(cols)]
    lines = ["  ".join(str(c).rjust(w) for c, w in zip(cols, widths))]
    lines += ["  ".join(str(v).rjust(w) for v, w in zip(r, widths)) for r in rows]
    if len(cols) == 3:
        lines.append(rep.summary())
    return "\n".join(lines)


def cmd_table(args) -> int:
    rep = build_table(args.kind, args.k, args.n_max)
    print(render_table(rep, args.format))
    return EXIT_PASS if rep.passed else EXIT_FAIL


# --------------------------------------------------------------------------
# verify


def cmd_verify(args) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    if args.n_max is not None and SUITES[args.suite].default_n_max is None:
        raise UsageError(f"suite {args.suite} takes no --n-max")
    try:
        perturb = Perturbation.parse(args.perturb) if args.perturb else None
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rep = run_suite(args.suite, args.n_max, perturb, args.jobs)
    if args.json:
        print(rep.to_json(include_time=not args.no_time))
    else:
        print(rep.summary())
        for f in rep.failures[:10]:
            print(f"  {f.location}: expected {f.expected}, got {f.actual}")
    return EXIT_PASS if rep.passed else EXIT_FAIL


# --------------------------------------------------------------------------
# solve


def _parse_substitutions(items: list[str]) -> dict[str, str]:
    subs = {}
    for item in items:
        lhs, eq, rhs = item.partition("=")
        if not eq or not lhs or not rhs:
            raise UsageError(f"substitution must look like LABEL=NAME, got {item!r}")
        subs[lhs.strip()] = rhs.strip()
    return subs


def compare_with_published(variant: str, k: int, report: Q.RelationReport) -> list[dict]:
    """Coefficient differences between a solved relation and the stored table."""
    key = (variant, k)
    if key not in published.RELATIONS:
        raise UsageError(f"no stored coefficient table for variant={variant}, k={k}")
    target, stored = published.RELATIONS[key]
    mine = report.relation.solved_for(target)
    diff = []
    for name in sorted(set(mine) | set(stored), key=Q._name_key):
        a, b = Q._poly_trim(mine.get(name, ())), Q._poly_trim(stored.get(name, ()))
        for i in range(max(len(a), len(b))):
            x = Fraction(a[i]) if i < len(a) else Fraction(0)
            y = Fraction(b[i]) if i < len(b) else Fraction(0)
            if x != y:
                diff.append({"term": f"n^{i}*{name}", "computed": exact_str(x), "stored": exact_str(y)})
    return diff


def cmd_solve(args) -> int:
    subs = _parse_substitutions(args.substitute)
    if args.compare and subs:
        raise UsageError("stored tables are for the unsubstituted relations; drop --substitute to compare")
    try:
        report = Q.solve_relation(args.variant, args.k, substitutions=subs or None, eliminate=not args.no_eliminate)
    except Q.BasisTooSmall as exc:
        err = {"error": "basis-too-small", "k": args.k, "variant": args.variant, "message": str(exc)}
        print(json.dumps(err, indent=2), file=sys.stderr)
        return EXIT_USAGE
    except Q.QuasiModError as exc:
        err = {"error": type(exc).__name__, "k": args.k, "variant": args.variant, "message": str(exc)}
        if isinstance(exc, Q.DependentCollection):
            err["witness"] = {k: exact_str(v) for k, v in exc.witness.items()}
        print(json.dumps(err, indent=2), file=sys.stderr)
        return EXIT_USAGE
    out = report.to_dict()
    status = EXIT_PASS if report.is_member else EXIT_FAIL
    if args.modulus:
        try:
            cong = Q.congruence_reduce(report, args.modulus, args.multiplier)
        except Q.CongruenceError as exc:
            print(json.dumps({"error": "congruence", "message": str(exc)}, indent=2), file=sys.stderr)
            return EXIT_USAGE
        out["congruence"] = cong.format()
    if args.compare:
        diff = compare_with_published(args.variant, args.k, report)
        out["diff"] = diff
        if diff:
            status = EXIT_FAIL
    if args.json:
        print(json.dumps(out, indent=2))
        return status
    print(f"{report.target}: {report.status} (checked to q^{report.checked_to - 1})")
    if report.relation is not None:
        print(report.relation.format(report.solved_for))
    if "congruence" in out:
        print(out["congruence"])
    if args.compare:
        print(f"diff against stored table: {len(out['diff'])} coefficient(s) differ")
        for d in out["diff"]:
            print(f"  {d['term']}: computed {d['computed']}, stored {d['stored']}")
    return status


# --------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ovmoments", description=__doc__.splitlines()[0])
    p.add_argument("--cache-dir", help=f"expansion cache directory (default: ${CACHE_ENV})")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("table", help="moment or count table")
    t.add_argument("--kind", required=True, choices=MOMENT_KINDS + COUNT_KINDS)
    t.add_argument("--k", type=int, help="moment order (even; moment kinds only)")
    t.add_argument("--n-max", type=int, default=25)
    t.add_argument("--format", choices=("text", "json", "csv"), default="text")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=list(SUITES))
    v.add_argument("--n-max", type=int, help="sweep bound (suite default if omitted)")
    v.add_argument("--json", action="store_true", help="print the full JSON report")
    v.add_argument("--no-time", action="store_true", help="omit wall time from JSON output")
    v.add_argument("--jobs", type=int, default=1, help="run independent parts in parallel")
    v.add_argument("--perturb", metavar="TARGET:INDEX[:DELTA[:ZEXP]]", help="negative control: change one input")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve", help="solve for a rank-moment relation")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--variant", choices=genfun.RANK_VARIANTS, default="dyson")
    s.add_argument("--substitute", action="append", default=[], metavar="LABEL=NAME",
                   help='e.g. "delta_q^1(M_4)=M_2*M_4/P" (repeatable)')
    s.add_argument("--no-eliminate", action="store_true", help="keep lower rank moments")
    s.add_argument("--compare-published", "--compare-paper", dest="compare", action="store_true",
                   help="diff against the stored coefficient tables")
    s.add_argument("--modulus", type=int, choices=(3, 5, 7), help="also reduce the relation modulo p")
    s.add_argument("--multiplier", type=int, default=1, help="scale before reducing")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_solve)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.cache_dir:
        os.environ[CACHE_ENV] = args.cache_dir
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"ovmoments: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
