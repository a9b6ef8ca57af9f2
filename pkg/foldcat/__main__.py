# coding: utf-8
#
"""
python -m foldcat COMMAND

Commands:
    validate     check a presentation file against the pre-folded category axioms
    check        globularity, horizontal composition and coherence checks
    equiv        decide whether two objects are equivalent, optionally emit a certificate
    cert-verify  verify a certificate file against a presentation
    cells        cell levels of every object
    derive       arrow category or power structure of a presentation
    import       truncate a category, 2-category or graph construction into a presentation
    extract      recover the category of a category-shaped presentation

Exit codes: 0 all pass, 1 some check failed, 2 usage or input error, 3 budget exceeded.
"""

import argparse
import logging
import pathlib
import sys
import typing

from foldcat._category import emit_category, parse_category, parse_graph, parse_two_category
from foldcat._presentation import emit_presentation, parse_presentation, truncate_oracle, validate_presentation
from foldcat._proto import Budgets, EquivMode, Report, Status, Verdict
from foldcat._utils import atomic_write, budget_states, digest
from foldcat._version import __version__
from foldcat.constructions import extract_category, free_strict_on_graph, from_category, from_strict_2category
from foldcat.derived import arrow_category, cell_levels, check_globular, export_view, power_structure
from foldcat.equivalence import cert_from_json, cert_to_json, decide_equiv, extract_cert, verify_cert
from foldcat.errors import BudgetExceededError, FoldError
from foldcat.weak import AXIOMS, check_coherence, validate_mu

logger = logging.getLogger("foldcat")

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


class _Input:
    """ files read by one command, digested together """

    def __init__(self):
        self.chunks: typing.List[bytes] = []

    def read(self, path: str) -> str:
        data = pathlib.Path(path).read_bytes()
        self.chunks.append(data)
        return data.decode("utf-8")

    def digest(self) -> str:
        return digest(b"".join(self.chunks))


def write_report(report: Report, format: str = "text", destination: typing.Union[str, pathlib.Path, typing.TextIO, None] = None):
    """
    Args:
        format: "text" or "json"
        destination: file name (written atomically), open text stream, or None for stdout
    """
    text = report.to_json() if format == "json" else report.to_text()
    if destination is None:
        destination = sys.stdout
    if hasattr(destination, "write"):
        destination.write(text)
    else:
        atomic_write(destination, text)


def _budgets(args) -> Budgets:
    return Budgets(max_path_len=getattr(args, "max_path_len", 4),
                   max_arity=getattr(args, "max_arity", 3),
                   max_states=args.max_states if args.max_states is not None else budget_states(),
                   max_level=getattr(args, "max_level", 8))


def cmd_validate(args, inp: _Input, budgets: Budgets) -> Report:
    P = parse_presentation(inp.read(args.file), args.file)
    return validate_presentation(P)


def cmd_check(args, inp: _Input, budgets: Budgets) -> Report:
    P = parse_presentation(inp.read(args.file), args.file)
    axioms = [a.strip() for a in args.axioms.split(",") if a.strip()]
    report = check_globular(P)
    report.extend(validate_mu(P, max_arity=budgets.max_arity, max_states=budgets.max_states))
    report.extend(check_coherence(P, axioms=axioms, max_path_len=budgets.max_path_len,
                                  max_arity=budgets.max_arity, mode=EquivMode(args.mode),
                                  workers=args.workers, max_states=budgets.max_states))
    return report


def cmd_equiv(args, inp: _Input, budgets: Budgets) -> Report:
    P = parse_presentation(inp.read(args.file), args.file)
    report = Report()
    for x in (args.a, args.b):
        if not P.has_object(x):
            raise FoldError(f"unknown object {x}")
    relation = decide_equiv(P, EquivMode(args.mode))
    verdict = relation.verdict(args.a, args.b)
    status = {Verdict.EQUIVALENT: Status.PASS,
              Verdict.NOT_EQUIVALENT: Status.FAIL,
              Verdict.FRONTIER: Status.SKIPPED_FRONTIER}[verdict]
    report.add("equiv", status, left=args.a, right=args.b, verdict=verdict, mode=relation.mode,
               iterations=relation.iterations)
    if args.emit_cert and verdict != Verdict.NOT_EQUIVALENT:
        cert = extract_cert(P, relation, args.a, args.b)
        report.extend(verify_cert(P, cert, (args.a, args.b)))
        atomic_write(args.emit_cert, cert_to_json(cert))
        logger.info("certificate with %d nodes written to %s", len(cert.nodes), args.emit_cert)
    return report


def cmd_cert_verify(args, inp: _Input, budgets: Budgets) -> Report:
    P = parse_presentation(inp.read(args.file), args.file)
    cert = cert_from_json(inp.read(args.cert), args.cert)
    expected = tuple(args.expect) if args.expect else None
    return verify_cert(P, cert, expected)


def cmd_cells(args, inp: _Input, budgets: Budgets) -> Report:
    P = parse_presentation(inp.read(args.file), args.file)
    levels = cell_levels(P, budgets.max_level)
    report = Report()
    for x in P.objects():
        report.add("cell-level", Status.PASS, object=x, level=levels[x], lower_bound_only=not levels.is_exact(x))
    return report


def cmd_derive(args, inp: _Input, budgets: Budgets) -> Report:
    P = parse_presentation(inp.read(args.file), args.file)
    report = Report()
    if args.structure == "arrow-cat":
        view = arrow_category(P)
    else:
        view = power_structure(P, args.n, max_states=budgets.max_states)
        report.extend(view.report)
    exported = export_view(view)
    atomic_write(args.output, emit_presentation(exported))
    report.add("derive", Status.PASS, structure=args.structure, objects=len(view.objects()),
               arrows=len(view.arrows()), frontier=len(view.frontier))
    return report


_IMPORTERS = {
    "category": (parse_category, from_category),
    "two-category": (parse_two_category, from_strict_2category),
    "graph": (parse_graph, free_strict_on_graph),
}


def cmd_import(args, inp: _Input, budgets: Budgets) -> Report:
    parse, construct = _IMPORTERS[args.kind]
    oracle = construct(parse(inp.read(args.file), args.file))
    P = truncate_oracle(oracle, args.depth, args.path_budget, budgets.max_states)
    atomic_write(args.output, emit_presentation(P))
    report = Report()
    report.add("import", Status.PASS, kind=args.kind, depth=args.depth, path_budget=args.path_budget,
               objects=len(P.objects()), arrows=len(P.arrows()), frontier=len(P.frontier))
    return report


def cmd_extract(args, inp: _Input, budgets: Budgets) -> Report:
    P = parse_presentation(inp.read(args.file), args.file)
    A = extract_category(P)
    atomic_write(args.output, emit_category(A))
    report = Report()
    report.add("extract", Status.PASS, objects=len(A.objects), morphisms=len(A.morphisms))
    return report


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", metavar="FILE", help="also write the JSON report to FILE")
    common.add_argument("--debug", action="store_true", help="debug logging")
    common.add_argument("--max-states", type=int, help="state budget (default: FCAT_BUDGET_STATES or 100000)")

    parser = argparse.ArgumentParser(prog="foldcat", description="weak folded category toolkit")
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    p = sub.add_parser("validate", parents=[common], help="validate a presentation")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", parents=[common], help="globularity, horizontal composition and coherence")
    p.add_argument("file")
    p.add_argument("--axioms", default=",".join(AXIOMS), help="comma separated subset of a1,a2,b")
    p.add_argument("--max-path-len", type=int, default=4)
    p.add_argument("--max-arity", type=int, default=3)
    p.add_argument("--mode", choices=[m.value for m in EquivMode], default=EquivMode.OPTIMISTIC.value)
    p.add_argument("--workers", type=int, help="evaluate coherence instances on a thread pool")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("equiv", parents=[common], help="decide object equivalence")
    p.add_argument("file")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--mode", choices=[m.value for m in EquivMode], default=EquivMode.OPTIMISTIC.value)
    p.add_argument("--emit-cert", metavar="OUT", help="write a certificate for the pair")
    p.set_defaults(func=cmd_equiv)

    p = sub.add_parser("cert-verify", parents=[common], help="verify a certificate")
    p.add_argument("file")
    p.add_argument("cert")
    p.add_argument("--expect", nargs=2, metavar=("A", "B"), help="required root pair")
    p.set_defaults(func=cmd_cert_verify)

    p = sub.add_parser("cells", parents=[common], help="cell levels")
    p.add_argument("file")
    p.add_argument("--max-level", type=int, default=8)
    p.set_defaults(func=cmd_cells)

    p = sub.add_parser("derive", help="derived structures")
    structures = p.add_subparsers(dest="structure", metavar="STRUCTURE")
    structures.required = True
    d = structures.add_parser("arrow-cat", parents=[common])
    d.add_argument("file")
    d.add_argument("-o", "--output", required=True)
    d = structures.add_parser("power", parents=[common])
    d.add_argument("n", type=int)
    d.add_argument("file")
    d.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("import", parents=[common], help="truncate a construction into a presentation")
    p.add_argument("kind", choices=sorted(_IMPORTERS))
    p.add_argument("file")
    p.add_argument("--depth", type=int, required=True, help="tower depth")
    p.add_argument("--path-budget", type=int, default=3, help="longest generating path kept")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_import)

    p = sub.add_parser("extract", parents=[common], help="category of a category-shaped presentation")
    p.add_argument("file")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_extract)
    return parser


def run_cli(argv: typing.Optional[typing.List[str]] = None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    if args.debug:
        logging.basicConfig(level=logging.DEBUG, format="%(levelname)s %(name)s: %(message)s")
    budgets = _budgets(args)
    inp = _Input()
    try:
        report = args.func(args, inp, budgets)
    except BudgetExceededError as e:
        print("error:", e, file=sys.stderr)
        return EXIT_BUDGET
    except (FoldError, OSError, UnicodeDecodeError) as e:
        print("error:", e, file=sys.stderr)
        return EXIT_USAGE

    report.budgets.update(budgets.to_dict())
    report.input_digest = inp.digest()
    write_report(report, "text")
    if args.json:
        write_report(report, "json", args.json)
    return EXIT_OK if report.ok else EXIT_FAIL


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
