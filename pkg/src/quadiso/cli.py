"""Command-line front end.

Exit codes: 0 positive result, 1 negative result, 2 error.
Structured output goes to stdout as JSON, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from .iso import IsoError, decide_isomorphism
from .normal import (
    NormalityError,
    chain_summary,
    falsify_completeness,
    find_normal_degree_one,
    iterative_chain,
)
from .presentation import PresentationError, load_spec, validate_presentation
from .rewrite import (
    NCPoly,
    NotConfluentError,
    RewriteError,
    check_confluence,
    format_poly,
    hilbert_table,
    normal_form,
)
from .scalar import format_rational

EXIT_OK, EXIT_NO, EXIT_ERROR = 0, 1, 2


class CliError(Exception):
    pass


def _emit(doc) -> None:
    print(json.dumps(doc, indent=2, default=_json_default))


def _json_default(x):
    from fractions import Fraction

    if isinstance(x, Fraction):
        return format_rational(x)
    raise TypeError(f"not serializable: {type(x).__name__}")


def _load(path, require_valid: bool = True):
    P = load_spec(path)
    if require_valid:
        problems = validate_presentation(P)
        if problems:
            raise CliError(f"{path}: invalid presentation: " + "; ".join(problems))
    return P


def cmd_nf(args) -> int:
    P = _load(args.algebra)
    try:
        w = P.parse_word(args.word)
    except PresentationError as exc:
        raise CliError(f"--word: {exc}") from None
    print(format_poly(P, normal_form(P, NCPoly.word(w))))
    return EXIT_OK


def cmd_iso(args) -> int:
    A, B = _load(args.left), _load(args.right)
    if A.family != B.family:
        raise CliError(f"cannot compare a {A.family} algebra with a {B.family} algebra")
    cert = decide_isomorphism(A, B, witness=True)
    doc = cert.to_json(include_matrix=args.witness)
    doc["seed"] = args.seed
    _emit(doc)
    return EXIT_OK if cert.isomorphic else EXIT_NO


def cmd_normal(args) -> int:
    P = _load(args.algebra)
    normals = find_normal_degree_one(P, args.support)
    doc: dict = {"seed": args.seed, "normal": [format_poly(P, u) for u in normals]}
    if args.chain:
        chain = iterative_chain(P, support_bound=args.support)
        doc["chain"] = [step.to_json() for step in chain]
        doc["summary"] = chain_summary(P, chain)
    if args.falsify:
        rep = falsify_completeness(P, normals, args.falsify, seed=args.seed)
        doc["falsify"] = {"trials": rep.trials, "tested": rep.tested, "seed": rep.seed,
                          "counterexamples": [format_poly(P, u) for u in rep.counterexamples]}
    print(f"seed = {args.seed}", file=sys.stderr)
    _emit(doc)
    return EXIT_OK


def cmd_hilbert(args) -> int:
    P = _load(args.algebra)
    table = hilbert_table(P, args.max_degree)
    _emit({"dims": [row["dim"] for row in table], "table": table})
    return EXIT_OK


def cmd_confluence(args) -> int:
    P = _load(args.algebra)
    report = check_confluence(P)
    _emit(report.to_json(P))
    return EXIT_OK if report.resolved else EXIT_NO


def cmd_validate(args) -> int:
    P = _load(args.algebra, require_valid=False)
    problems = validate_presentation(P)
    doc = {"family": P.family, "generators": list(P.generators), "diagnostics": problems}
    confluent = None
    if not problems:
        confluent = check_confluence(P).resolved
    doc["confluent"] = confluent
    doc["status"] = "verified" if confluent else "unverified"
    _emit(doc)
    return EXIT_OK if not problems and confluent else EXIT_NO


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="quadiso", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("nf", help="normal form of a word")
    p.add_argument("--algebra", required=True)
    p.add_argument("--word", required=True, help='space-separated generators, e.g. "x2 x1"')
    p.set_defaults(func=cmd_nf)

    p = sub.add_parser("iso", help="decide isomorphism of two algebras of one family")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--witness", action="store_true", help="include the verified map matrix")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("normal", help="degree-one normal elements and quotient chain")
    p.add_argument("--algebra", required=True)
    p.add_argument("--chain", action="store_true")
    p.add_argument("--falsify", type=int, default=0, metavar="TRIALS")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--support", type=int, choices=(1, 2), default=2)
    p.set_defaults(func=cmd_normal)

    p = sub.add_parser("hilbert", help="graded dimensions")
    p.add_argument("--algebra", required=True)
    p.add_argument("--max-degree", type=int, default=4)
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("confluence", help="overlap resolution report")
    p.add_argument("--algebra", required=True)
    p.set_defaults(func=cmd_confluence)

    p = sub.add_parser("validate", help="check a presentation")
    p.add_argument("--algebra", required=True)
    p.set_defaults(func=cmd_validate)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, PresentationError, IsoError, NormalityError,
            NotConfluentError, RewriteError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
