"""Command line: ``analyze``, ``generate`` and ``table1``.

Exit codes: 0 success, 2 bad input, 3 internal contract violation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .errors import ContractViolation, InputError
from .generate import GeneratorSpec, generate_pencil
from .io import (parse_complex, pencil_to_document, read_document, read_matrix_market_pair,
                 write_document)
from .oracle import ResidualReport
from .pipeline import AnalyzeConfig, analyze

EXIT_OK, EXIT_INPUT, EXIT_CONTRACT = 0, 2, 3


def _emit(text: str, path):
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def cmd_analyze(args) -> int:
    if args.input and (args.A or args.E):
        raise InputError("give either a JSON document or --A/--E, not both")
    if args.input:
        p, lam_doc, _ = read_document(args.input)
    elif args.A and args.E:
        p, lam_doc = read_matrix_market_pair(args.A, args.E), None
    else:
        raise InputError("analyze needs a JSON document or both --A and --E")
    if args.lambda0 is not None:
        lam = parse_complex(args.lambda0)
    else:
        lam = lam_doc if lam_doc is not None else 0.0
    if args.tol is not None and not args.tol >= 0:
        raise InputError("--tol must be nonnegative")
    if args.refine_iters < 0:
        raise InputError("--refine-iters must be nonnegative")
    cfg = AnalyzeConfig(tol=args.tol, refine_iters=args.refine_iters, verify=args.verify)
    rep = analyze(p, lam, cfg)
    _emit(json.dumps(rep.to_dict(expand_monomial=args.expand_monomial), indent=1) + "\n",
          args.output)
    return EXIT_OK


def cmd_generate(args) -> int:
    s, t = list(args.s), list(args.t)
    if len(s) == len(t) - 1:
        # the last s_k may be omitted; it is zero
        s.append(0)
    spec = GeneratorSpec(tuple(s), tuple(t), seed=args.seed, disguise=args.disguise,
                         fill=args.fill, tail=tuple(args.tail),
                         lambda0=parse_complex(args.lambda0))
    p = generate_pencil(spec)
    meta = {"s": list(spec.s), "t": list(spec.t), "seed": spec.seed,
            "disguise": spec.disguise, "fill": spec.fill, "tail": list(spec.tail)}
    doc = pencil_to_document(p, spec.lambda0, meta)
    if args.output in (None, "-"):
        sys.stdout.write(json.dumps(doc, indent=1) + "\n")
    else:
        write_document(args.output, doc)
    return EXIT_OK


def table1_rows(seeds: int, refine_iters: int = 2, start: int = 0):
    """Residual reports for ``seeds`` undisguised pencils with the 6 x 9 example pattern."""
    rows = []
    for seed in range(start, start + seeds):
        p = generate_pencil(GeneratorSpec((4, 2, 0), (5, 3, 1), seed=seed))
        rep = analyze(p, 0.0, AnalyzeConfig(refine_iters=refine_iters, left=False))
        rows.append(rep.residuals)
    return rows


def cmd_table1(args) -> int:
    if args.seeds < 0:
        raise InputError("--seeds must be nonnegative")
    rows = table1_rows(args.seeds, args.refine_iters, args.start)
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(ResidualReport.FIELDS)
    for r in rows:
        w.writerow([f"{x:.4e}" for x in r.as_row()])
    _emit(out.getvalue(), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pencilroots",
                                 description="Local eigenstructure of a matrix pencil A + lam E.")
    sub = ap.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="indices, minimal basis and root polynomials")
    a.add_argument("input", nargs="?", help="JSON pencil document")
    a.add_argument("--A", help="Matrix Market file with A")
    a.add_argument("--E", help="Matrix Market file with E")
    a.add_argument("--lambda0", help='expansion point, e.g. "0.5-2i" (default: document value or 0)')
    a.add_argument("--tol", type=float, default=None, help="absolute rank threshold")
    a.add_argument("--refine-iters", type=int, default=2)
    a.add_argument("--verify", action="store_true", help="run the block-Toeplitz oracle")
    a.add_argument("--expand-monomial", action="store_true",
                   help="report polynomial coefficients in powers of lam")
    a.add_argument("-o", "--output", help="output path (default stdout)")
    a.set_defaults(func=cmd_analyze)

    g = sub.add_parser("generate", help="random pencil with a planted staircase structure")
    g.add_argument("--s", type=int, nargs="*", default=[4, 2, 0])
    g.add_argument("--t", type=int, nargs="*", default=[5, 3, 1])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--disguise", action="store_true", help="apply random unitary equivalence")
    g.add_argument("--fill", choices=("normal", "complex"), default="normal")
    g.add_argument("--tail", type=int, nargs=2, default=[0, 0], metavar=("ROWS", "COLS"))
    g.add_argument("--lambda0", default="0", help="point carrying the planted structure")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_generate)

    t = sub.add_parser("table1", help="CSV of residual diagnostics over random seeds")
    t.add_argument("--seeds", type=int, default=10)
    t.add_argument("--start", type=int, default=0)
    t.add_argument("--refine-iters", type=int, default=2)
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_table1)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ContractViolation as exc:
        print(f"contract violation: {exc}", file=sys.stderr)
        return EXIT_CONTRACT


if __name__ == "__main__":
    sys.exit(main())
