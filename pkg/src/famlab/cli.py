"""famlab command line.

Exit codes: 0 success / claims hold, 1 semantic negative (not isomorphic,
claim failed), 2 input error, 3 search budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from famlab import constructors, enumerator, verify
from famlab.errors import BudgetExceeded, FamilyParseError, InvalidFamilyError
from famlab.family import SetFamily, degree_summary, dumps, read_family
from famlab.isomorphism import find_isomorphism
from famlab.solver import enumerate_min_transversals, exact_tau

EXIT_OK, EXIT_NEGATIVE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _summary(f: SetFamily) -> str:
    return f"k={f.k} blocks={len(f)} vertices={len(f.vertices)}"


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _fmt(args, path: str | None) -> str:
    if args.format:
        return args.format
    return "json" if path and path.lower().endswith(".json") else "fam"


def _load(path: str, fmt: str | None = None) -> SetFamily:
    try:
        return read_family(path, fmt)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except FamilyParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def cmd_construct(args) -> int:
    try:
        if args.kind == "mk":
            fam = constructors.build_mk(_need(args.k, "--k"))
        elif args.kind == "factorization":
            k = _need(args.k, "--k")
            ts = constructors.build_one_factorization(k)
            fam = SetFamily((k + 1) // 2, tuple(t.vertices for t in ts), f"{k} disjoint transversals of M_{k}")
        elif args.kind == "degree3":
            fam = constructors.build_degree3_family(_need(args.m, "--m"))
        else:
            fam = constructors.example_family()
    except ValueError as exc:
        raise InputError(str(exc)) from None
    text = dumps(fam, _fmt(args, args.out))
    _emit(text, args.out)
    # keep stdout parseable when the family itself goes there
    stream = sys.stderr if args.out in (None, "-") else sys.stdout
    print(_summary(fam), file=stream)
    print(f"degrees={degree_summary(fam)}", file=stream)
    return EXIT_OK


def _need(value, flag):
    if value is None:
        raise InputError(f"{flag} is required for this construction")
    return value


def cmd_tau(args) -> int:
    fam = _load(args.path, args.format)
    res = exact_tau(fam, args.node_budget)
    print(f"tau={res.tau}")
    print("witness=" + " ".join(map(str, res.witness)))
    print(f"lower_bound={res.degree_lower_bound}")
    print(f"nodes={res.search_nodes}")
    if args.enumerate or args.export:
        covers = enumerate_min_transversals(fam, args.node_budget)
        if args.enumerate:
            print(f"transversals={len(covers)}")
            for c in covers:
                print("T " + " ".join(map(str, c)))
        if args.export and covers and covers[0]:
            out = SetFamily(res.tau, tuple(covers), "minimum transversals")
            Path(args.export).write_text(dumps(out, _fmt(args, args.export)), encoding="utf-8")
    return EXIT_OK


def cmd_iso(args) -> int:
    a, b = _load(args.a, args.format), _load(args.b, args.format)
    mapping = find_isomorphism(a, b)
    if mapping is None:
        print("not isomorphic")
        return EXIT_NEGATIVE
    print("isomorphic")
    print("map " + " ".join(f"{u}->{v}" for u, v in mapping.items()))
    return EXIT_OK


def _selection(raw: list[str]) -> str | list[str]:
    ids = [s for item in raw for s in item.split(",") if s]
    if not ids or "all" in ids:
        return "all"
    return ids


def cmd_verify(args) -> int:
    witness = _load(args.q3_witness) if args.q3_witness else None
    try:
        records = verify.run_suite(_selection(args.suite), workers=args.workers, q3_witness=witness)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    for r in records:
        params = " ".join(f"{k}={v}" for k, v in r.params.items())
        print(f"{r.verdict:5} {r.id} {params}".rstrip())
    s = verify.summarize(records)
    print(f"pass={s['pass']} fail={s['fail']} error={s['error']}")
    if args.report:
        Path(args.report).write_text(verify.report_json(records, timings=not args.no_timings), encoding="utf-8")
    if args.markdown:
        Path(args.markdown).write_text(verify.render_markdown(records), encoding="utf-8")
    return verify.exit_code(records)


def cmd_enumerate(args) -> int:
    min_blocks, max_blocks = args.min_blocks, args.max_blocks
    if args.blocks is not None:
        min_blocks = max_blocks = args.blocks
    if max_blocks is None:
        raise InputError("give --blocks or --max-blocks")
    min_tau, max_tau = args.min_tau, args.max_tau
    if args.tau is not None:
        min_tau = max_tau = args.tau
    try:
        c = enumerator.EnumerationConstraints(
            k=args.k,
            min_blocks=1 if min_blocks is None else min_blocks,
            max_blocks=max_blocks,
            max_vertices=args.max_vertices,
            intersecting=args.intersecting,
            min_degree=args.min_degree,
            max_degree=args.max_degree,
            exact_pairwise_intersection=args.pairwise,
            min_tau=min_tau,
            max_tau=max_tau,
            node_budget=args.node_budget,
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = enumerator.enumerate_families(c, workers=args.workers)
    print(f"classes={report.class_count}")
    if args.out:
        _emit(json.dumps(report.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="famlab",
        description="Intersecting uniform families: constructions, transversal numbers, enumeration.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", help="build a family and write it out")
    p.add_argument("kind", choices=["mk", "factorization", "degree3", "example"])
    p.add_argument("--k", type=int, help="uniformity for mk / factorization")
    p.add_argument("--m", type=int, help="exponent for degree3 (k = 2^m - 1)")
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=["fam", "json"])
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("tau", help="exact transversal number of a family file")
    p.add_argument("path")
    p.add_argument("--enumerate", action="store_true", help="list every minimum transversal")
    p.add_argument("--export", help="write the minimum transversals as a family file")
    p.add_argument("--node-budget", type=int)
    p.add_argument("--format", choices=["fam", "json"])
    p.set_defaults(func=cmd_tau)

    p = sub.add_parser("iso", help="test two family files for isomorphism")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--format", choices=["fam", "json"])
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("verify", help="run the claim reproduction suite")
    p.add_argument("--suite", action="append", default=[], help="'all' or claim ids, comma separated")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--markdown", help="write a markdown summary here")
    p.add_argument("--q3-witness", help="length-6 intersecting 3-family with tau 3 (default: Fano minus a line)")
    p.add_argument("--no-timings", action="store_true", help="omit elapsed_ms from the report")
    p.add_argument("--workers", type=int, help="concurrent claims (default: FAMLAB_THREADS or 1)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("enumerate", help="isomorph-free enumeration of small families")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--blocks", type=int, help="exact number of blocks")
    p.add_argument("--min-blocks", type=int)
    p.add_argument("--max-blocks", type=int)
    p.add_argument("--max-vertices", type=int)
    p.add_argument("--intersecting", action="store_true")
    p.add_argument("--min-degree", type=int)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--pairwise", type=int, help="required size of every pairwise intersection")
    p.add_argument("--tau", type=int)
    p.add_argument("--min-tau", type=int)
    p.add_argument("--max-tau", type=int)
    p.add_argument("--node-budget", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--out", help="write the search report JSON here")
    p.set_defaults(func=cmd_enumerate)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, InvalidFamilyError) as exc:
        print(f"famlab: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"famlab: budget exceeded: {exc} {exc.stats}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
