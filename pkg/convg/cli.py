"""
Command line interface.

Exit codes: 0 success or true, 1 property false or witness found, 2 bad
input, 3 a theorem-guaranteed postcondition failed.
"""

import argparse
import logging
import sys

from .compactness import (MAX_FAMILY_POINTS, noncompact_base,
                          verify_compactness_theorem)
from .constructions import coproduct, is_continuous, product, quotient, subspace
from .exceptions import FalsificationError, InputError
from .function_space import continuous_convergence, function_table
from .io import (dumps, export_dot, load_space, parse_classes, parse_map,
                 parse_set, serialize_space, witness_document)
from .search import (DEFAULT_BUDGET, PROPERTIES, SearchSpec,
                     search_counterexample)
from .spaces import (Axiom, adherence, axiom_report, check_axiom, inherence,
                     limit_modification, topological_modification)

logger = logging.getLogger(__name__)

__all__ = ["main", "build_parser"]

EXIT_OK, EXIT_FALSE, EXIT_INPUT, EXIT_FALSIFIED = 0, 1, 2, 3

MODIFICATIONS = {"topological": topological_modification,
                 "limit": limit_modification}


def _emit(args, text, payload):
    if args.json:
        sys.stdout.write(dumps(payload))
    else:
        print(text)


def _write(args, text):
    if args.output:
        with open(args.output, "w", encoding="utf-8") as f:
            f.write(text)
        logger.info("wrote %s", args.output)
    else:
        sys.stdout.write(text)


def _format_witness(witness):
    if not witness:
        return ""
    return "  " + ", ".join("{0}={1}".format(k, v)
                            for k, v in witness.items())


def cmd_check(args):
    L = load_space(args.file)
    report = axiom_report(L)
    axioms = list(Axiom) if args.axiom == "all" else [Axiom(args.axiom)]
    lines = []
    for axiom in axioms:
        verdict = report[axiom]
        lines.append("{0:<18} {1}{2}".format(
            axiom.value, "yes" if verdict else "no",
            _format_witness(verdict.witness)))
    lines.extend("note: " + note for note in report.notes())
    full = report.to_dict()
    _emit(args, "\n".join(lines), {a.value: full[a.value] for a in axioms})
    return EXIT_OK if report.holds(*axioms) else EXIT_FALSE


def cmd_modify(args):
    L = load_space(args.file)
    M = MODIFICATIONS[args.kind](L)
    M.name = "{0}:{1}".format(L.name or "unnamed", args.kind)
    _write(args, serialize_space(M))
    return EXIT_OK


def cmd_op(args):
    spaces = [load_space(path) for path in args.files]
    if args.kind in ("product", "coproduct"):
        if len(spaces) < 2:
            raise InputError("{0} needs at least two files".format(args.kind))
        build = product if args.kind == "product" else coproduct
        L = build(spaces)
        joiner = " x " if args.kind == "product" else " + "
        L.name = joiner.join(X.name or "unnamed" for X in spaces)
    else:
        if len(spaces) != 1:
            raise InputError("{0} takes one file".format(args.kind))
        X = spaces[0]
        if args.kind == "subspace":
            if args.set is None:
                raise InputError("subspace needs --set")
            L = subspace(X, parse_set(args.set, X.carrier))
        else:
            if args.classes is None:
                raise InputError("quotient needs --classes")
            L = quotient(X, parse_classes(args.classes, X.carrier))
            L.name = "{0}/~".format(X.name or "unnamed")
    _write(args, serialize_space(L))
    return EXIT_OK


def cmd_continuity(args):
    X, Y = load_space(args.source), load_space(args.target)
    f = parse_map(args.map, X, Y)
    verdict = is_continuous(f)
    text = "continuous" if verdict else "not continuous" + _format_witness(
        verdict.witness)
    _emit(args, text, {"continuous": verdict.holds,
                       "witness": verdict.witness})
    return EXIT_OK if verdict else EXIT_FALSE


def cmd_funcspace(args):
    X, Y = load_space(args.source), load_space(args.target)
    C = continuous_convergence(X, Y)
    C.name = "C({0},{1})".format(X.name or "X", Y.name or "Y")
    _write(args, serialize_space(C))
    table = function_table(C)
    if args.output:
        _emit(args, table.to_string(),
              {label: dict(row) for label, row in table.iterrows()})
    else:
        # stdout carries the document
        sys.stderr.write(table.to_string() + "\n")
    return EXIT_OK


def cmd_compact(args):
    L = load_space(args.file)
    base = noncompact_base(L)
    payload = {"compact": base is None,
               "base": None if base is None else L.carrier.labels_of(base)}
    if base is None:
        text = "compact"
    else:
        text = "not compact: {0} has no convergent refinement".format(
            L.carrier.format(base))
    if check_axiom(L, Axiom.ISOTONE) and L.size <= MAX_FAMILY_POINTS:
        report = verify_compactness_theorem(L)
        payload["convergence_systems"] = report.systems
        payload["systems_cover"] = report.systems_cover
        text += "\n{0} convergence systems, all covering: {1}".format(
            report.systems, "yes" if report.systems_cover else "no")
    _emit(args, text, payload)
    return EXIT_OK if base is None else EXIT_FALSE


def _set_operator(operator):
    def command(args):
        L = load_space(args.file)
        S = parse_set(args.set, L.carrier)
        result = operator(L, S)
        _emit(args, L.carrier.format(result.mask), list(result.labels))
        return EXIT_OK
    return command


def cmd_search(args):
    spec = SearchSpec(args.property, args.max_points, seed=args.seed,
                      budget=args.budget, min_points=args.min_points)
    w = search_counterexample(spec, progress=not args.quiet)
    if w is None:
        _emit(args, "none found", None)
        return EXIT_OK
    sys.stdout.write(dumps(witness_document(w)))
    return EXIT_FALSIFIED if w.theorem else EXIT_FALSE


def cmd_export(args):
    L = load_space(args.file)
    _write(args, export_dot(L))
    return EXIT_OK


def build_parser():
    # accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--quiet", action="store_true",
                        default=argparse.SUPPRESS,
                        help="Only report errors; no progress bars.")
    common.add_argument("--json", action="store_true",
                        default=argparse.SUPPRESS,
                        help="Machine-readable reports.")

    parser = argparse.ArgumentParser(
        prog="convg", description="Finite convergence spaces.")
    parser.add_argument("--quiet", action="store_true",
                        help="Only report errors; no progress bars.")
    parser.add_argument("--json", action="store_true",
                        help="Machine-readable reports.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common],
                       help="Check the convergence axioms.")
    p.add_argument("file")
    p.add_argument("--axiom", default="all",
                   choices=[a.value for a in Axiom] + ["all"])
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("modify", parents=[common],
                       help="Write a modification of a space.")
    p.add_argument("file")
    p.add_argument("--kind", required=True, choices=sorted(MODIFICATIONS))
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_modify)

    p = sub.add_parser("op", parents=[common],
                       help="Build a product, coproduct, subspace or "
                            "quotient.")
    p.add_argument("kind",
                   choices=["product", "coproduct", "subspace", "quotient"])
    p.add_argument("files", nargs="+")
    p.add_argument("--set", help='Points of the subspace, e.g. "a b".')
    p.add_argument("--classes", help='Partition, e.g. "a b|c".')
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_op)

    p = sub.add_parser("continuity", parents=[common],
                       help="Check that a map is continuous.")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--map", required=True, help='E.g. "a:b,b:b".')
    p.set_defaults(func=cmd_continuity)

    p = sub.add_parser("funcspace", parents=[common],
                       help="Continuous convergence on C(X, Y).")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_funcspace)

    p = sub.add_parser("compact", parents=[common], help="Check compactness.")
    p.add_argument("file")
    p.set_defaults(func=cmd_compact)

    for name, operator in (("adh", adherence), ("inh", inherence)):
        p = sub.add_parser(name, parents=[common],
                           help="{0} of a set.".format(operator.__name__))
        p.add_argument("file")
        p.add_argument("--set", required=True)
        p.set_defaults(func=_set_operator(operator))

    p = sub.add_parser("search", parents=[common],
                       help="Search for a counterexample.")
    p.add_argument("--property", required=True, choices=sorted(PROPERTIES))
    p.add_argument("--max-points", type=int, required=True)
    p.add_argument("--min-points", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("export", parents=[common],
                       help="Export the specialisation preorder.")
    p.add_argument("file")
    p.add_argument("--dot", action="store_true",
                   help="DOT output, the only format so far.")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.ERROR if args.quiet else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except FalsificationError as err:
        logger.error("falsified: %s", err)
        return EXIT_FALSIFIED
    except (InputError, OSError) as err:
        logger.error("%s", err)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
