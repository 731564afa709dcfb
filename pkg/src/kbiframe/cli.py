"""Command-line interface: ``kbiframe <subcommand> ...``.

stdout carries only the JSON document; diagnostics go to stderr. Exit
codes: 0 success / positive verdict, 2 negative verdict, 1 usage or input
error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import jsonio
from .audit import STATEMENTS, run_audit
from .certify import certify_with_claims
from .errors import KBiframeError
from .frames import BiframePair
from .instances import GALLERY_NAMES, gallery
from .operators import douglas_check
from .suite import format_table, run_suite, suite_summary
from .tolerances import Tolerances

EXIT_OK, EXIT_ERROR, EXIT_NEGATIVE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_ERROR)


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be positive: {text!r}")
    return value


def _nonneg_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative: {text!r}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kbiframe", description="Certify and audit K-biframes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_tols(p):
        p.add_argument("--herm-tol", type=_positive_float, default=None)
        p.add_argument("--bis-tol", type=_positive_float, default=None)

    def add_mode(p):
        g = p.add_mutually_exclusive_group()
        g.add_argument("--k-frame", action="store_true", help="certify (X, X) against K")
        g.add_argument("--biframe", action="store_true", help="certify (X, Y) against K = I")

    p = sub.add_parser("certify", help="certify an instance file")
    p.add_argument("--in", dest="infile", required=True)
    add_mode(p)
    add_tols(p)
    p.add_argument("--out", default=None)

    p = sub.add_parser("bounds", help="print optimal bounds")
    p.add_argument("--in", dest="infile", required=True)
    add_mode(p)
    add_tols(p)

    p = sub.add_parser("douglas", help="range inclusion R(T1) in R(T2)")
    p.add_argument("--t1", required=True, help="matrix file, or instance file (uses its t)")
    p.add_argument("--t2", required=True, help="matrix file, or instance file (uses its k)")
    add_tols(p)
    p.add_argument("--out", default=None)

    p = sub.add_parser("audit", help="audit one statement on an instance")
    p.add_argument("--statement", required=True, choices=STATEMENTS)
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--seed", type=_nonneg_int, default=0)
    p.add_argument("--trials", type=_nonneg_int, default=None)
    add_tols(p)
    p.add_argument("--out", default=None)

    p = sub.add_parser("gallery", help="write a gallery instance file")
    p.add_argument("--name", required=True, choices=GALLERY_NAMES)
    p.add_argument("--n", type=_nonneg_int, default=None)
    p.add_argument("--out", default=None)

    p = sub.add_parser("random-suite", help="run the property batteries")
    p.add_argument("--seed", type=_nonneg_int, required=True)
    p.add_argument("--trials", type=_nonneg_int, required=True)
    add_tols(p)
    return parser


def _tols(args) -> Tolerances:
    return Tolerances.from_env().with_(herm_tol=getattr(args, "herm_tol", None),
                                       bis_tol=getattr(args, "bis_tol", None))


def _emit(doc: dict, out: str | None) -> None:
    text = jsonio.dumps(doc)
    if out:
        Path(out).write_text(text, encoding="utf-8")
        print(f"wrote {out}", file=sys.stderr)
    else:
        sys.stdout.write(text)


def _load(args):
    path = Path(args.infile)
    doc = jsonio.parse_json(path.read_text(encoding="utf-8"), str(path))
    return jsonio.instance_from_dict(doc), doc


def _target(inst, args):
    if args.biframe:
        return "biframe", inst.pair, np.eye(inst.dim, dtype=np.complex128)
    if args.k_frame:
        return "k_frame", BiframePair(inst.pair.x, inst.pair.x), inst.k
    return "k_biframe", inst.pair, inst.k


def _cmd_certify(args) -> int:
    tols = _tols(args)
    inst, doc = _load(args)
    mode, pair, k = _target(inst, args)
    claimed = inst.claimed_bounds if mode == "k_biframe" else None
    cert, chk = certify_with_claims(pair, k, claimed, tols)
    out = jsonio.report_document("certificate", cert, doc, tols,
                                 extra={"mode": mode, "claimed_bounds": chk})
    _emit(out, args.out)
    for note in cert.notes:
        print(f"note: {note}", file=sys.stderr)
    return EXIT_OK if cert.is_k_biframe else EXIT_NEGATIVE


def _cmd_bounds(args) -> int:
    tols = _tols(args)
    inst, doc = _load(args)
    mode, pair, k = _target(inst, args)
    cert, _ = certify_with_claims(pair, k, None, tols)
    body = {"a_opt": cert.a_opt, "b_opt": cert.b_opt, "is_k_biframe": cert.is_k_biframe}
    _emit(jsonio.report_document("bounds", body, doc, tols, extra={"mode": mode}), None)
    return EXIT_OK


def _cmd_douglas(args) -> int:
    tols = _tols(args)
    t1 = jsonio.load_matrix(args.t1, "t")
    t2 = jsonio.load_matrix(args.t2, "k")
    rep = douglas_check(t1, t2, tols)
    inputs = {"t1": jsonio.encode_complex_array(t1), "t2": jsonio.encode_complex_array(t2)}
    _emit(jsonio.report_document("douglas", rep, inputs, tols, extra={"consistent": rep.consistent}),
          args.out)
    return EXIT_OK if rep.range_included else EXIT_NEGATIVE


def _cmd_audit(args) -> int:
    tols = _tols(args)
    inst, doc = _load(args)
    rep = run_audit(args.statement, inst, tols, seed=args.seed, trials=args.trials)
    _emit(jsonio.report_document("audit", rep, doc, tols,
                                 extra={"seed": args.seed, "trials": args.trials}), args.out)
    if not rep.claim_valid:
        w = None if rep.witness is None else np.round(rep.witness, 12).tolist()
        print(f"claim fails: {rep.witness_note}; witness {w}; margin {rep.witness_margin}",
              file=sys.stderr)
    return EXIT_OK if rep.claim_valid else EXIT_NEGATIVE


def _cmd_gallery(args) -> int:
    inst = gallery(args.name, args.n)
    _emit(jsonio.instance_to_dict(inst), args.out)
    return EXIT_OK


def _cmd_random_suite(args) -> int:
    tols = _tols(args)
    results = run_suite(args.seed, args.trials, tols)
    summary = suite_summary(args.seed, args.trials, results)
    print(format_table(results), file=sys.stderr)
    for r in results:
        for d in r.details:
            print(f"  {r.name}: {d}", file=sys.stderr)
    sys.stdout.write(jsonio.dumps(summary))
    return EXIT_OK if summary["all_passed"] else EXIT_NEGATIVE


_COMMANDS = {
    "certify": _cmd_certify,
    "bounds": _cmd_bounds,
    "douglas": _cmd_douglas,
    "audit": _cmd_audit,
    "gallery": _cmd_gallery,
    "random-suite": _cmd_random_suite,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help exits 0, usage errors 1
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except (KBiframeError, ValueError, OSError) as exc:
        print(f"kbiframe {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
