"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 failed mathematical verdict,
64 usage error. Reports are JSON on stdout; diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import operators as ops
from .controlled import (
    RESIDUAL_TOL,
    canonical_dual,
    controlled_bounds,
    dual_report,
    parsevalize,
    reconstruction_residual,
)
from .directsum import DirectSumFrame, cross_term_defect, cross_terms_vanish, dsum_controlled_bounds
from .errors import FrameError, TheoremViolation
from .frames import optimal_bounds
from .io import SpecError, load_spec, spec_dict, write_spec
from .propcheck import PASS, reports_to_json, run_suite
from .tensor import TensorControlledFrame, factorization_check, tensor_controlled_bounds, tensor_frame_operator

EXIT_OK, EXIT_INPUT, EXIT_VERDICT, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _bounds(b) -> dict:
    return {"lower": b.lower, "upper": b.upper}


def _emit(report: dict) -> None:
    print(json.dumps(report, indent=2))


def cmd_analyze(args) -> int:
    spec = load_spec(args.path)
    cf = spec.controlled
    cb = controlled_bounds(cf)
    report = {
        "quotient_dim": cf.space.dim,
        "ordinary_bounds": _bounds(optimal_bounds(cf.frame)),
        "controlled_bounds": _bounds(cb),
        "classification": cb.classification,
        "realness_defect": cb.realness_defect,
        "condition_numbers": {
            "control": ops.classify(cf.control).condition_number,
            "frame_operator": ops.classify(cf.frame_operator).condition_number,
            "controlled_operator": ops.classify(cf.controlled_operator).condition_number,
        },
    }
    _emit(report)
    return EXIT_OK if cb.is_controlled_frame else EXIT_VERDICT


def _write_or_print(data: dict, out) -> None:
    if out:
        write_spec(data, out)
    else:
        print(json.dumps(data, indent=2))


def cmd_parsevalize(args) -> int:
    spec = load_spec(args.path)
    pf = parsevalize(spec.controlled)
    b = controlled_bounds(pf)
    h = pf.frame.projected
    residual = reconstruction_residual(pf.control, h, h)
    _write_or_print(spec_dict(spec, pf.frame), args.out)
    if args.out:
        _emit({"out": args.out, "controlled_bounds": _bounds(b), "reconstruction_residual": residual})
    ok = abs(b.lower - 1) < 1e-8 and abs(b.upper - 1) < 1e-8 and residual < args.tol
    return EXIT_OK if ok else EXIT_VERDICT


def cmd_dual(args) -> int:
    spec = load_spec(args.path)
    cf = spec.controlled
    dual = canonical_dual(cf)
    rep = dual_report(cf, dual, args.tol)
    _write_or_print(spec_dict(spec, dual), args.out)
    if args.out:
        _emit({"out": args.out, "residual": rep.residual, "swapped_residual": rep.swapped_residual})
    return EXIT_OK if rep.holds else EXIT_VERDICT


def cmd_tensor(args) -> int:
    spec = load_spec(args.path, need_second=True)
    tcf = TensorControlledFrame(spec.first.frame, spec.second.frame)
    fact = factorization_check(tcf, np.random.default_rng(args.seed))
    verdicts = {"factorization": fact.holds}
    try:
        tensor_frame_operator(tcf, verify=True)
        verdicts["operator_identity"] = True
    except TheoremViolation:
        verdicts["operator_identity"] = False
    try:
        tb = tensor_controlled_bounds(tcf, verify=True)
        verdicts["bound_sandwich"] = True
    except TheoremViolation:
        tb = tensor_controlled_bounds(tcf, verify=False)
        verdicts["bound_sandwich"] = False
    report = {
        "tensor_dim": tcf.space.dim,
        "tensor_bounds": _bounds(tb),
        "classification": tb.classification,
        "components": [fact.left_classification, fact.right_classification],
        "factorization_applicable": fact.iff_applicable,
        "left_probe_bounds": fact.left_probe_bounds,
        "right_probe_bounds": fact.right_probe_bounds,
        "verdicts": verdicts,
    }
    _emit(report)
    return EXIT_OK if all(verdicts.values()) else EXIT_VERDICT


def cmd_dsum(args) -> int:
    spec = load_spec(args.path, need_second=True)
    if spec.layout == "paired":
        dsf = DirectSumFrame(spec.first.frame, spec.second.frame)
    else:
        dsf = DirectSumFrame.disjoint(spec.first.frame, spec.second.frame)
    report = {
        "layout": spec.layout,
        "dim": dsf.space.dim,
        "cross_term_defect": cross_term_defect(dsf),
        "cross_terms_vanish": cross_terms_vanish(dsf),
    }
    status = EXIT_OK
    try:
        b = dsum_controlled_bounds(dsf, verify=True)
        report.update(bounds=_bounds(b), classification=b.classification, bound_sandwich=True)
    except TheoremViolation as exc:
        report.update(bound_sandwich=False, error=str(exc))
        status = EXIT_VERDICT
    except FrameError as exc:
        report.update(error=f"{type(exc).__name__}: {exc}")
        status = EXIT_VERDICT
    _emit(report)
    return status


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    reports = run_suite(args.seed, args.trials)
    print(reports_to_json(reports))
    return EXIT_OK if all(r.status == PASS for r in reports) else EXIT_VERDICT


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="random seed (default 0)")
    common.add_argument("--tol", type=float, default=RESIDUAL_TOL, help="residual tolerance")
    common.add_argument("--out", help="output file for commands that write a spec")

    parser = _Parser(prog="nframes", description="Controlled frames in n-Hilbert spaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, func, helptext in (
        ("analyze", cmd_analyze, "bounds and classification of a controlled frame"),
        ("parsevalize", cmd_parsevalize, "write the canonical controlled Parseval frame"),
        ("dual", cmd_dual, "write the canonical dual family"),
        ("tensor", cmd_tensor, "tensor product of two blocks"),
        ("dsum", cmd_dsum, "direct sum of two blocks"),
    ):
        p = sub.add_parser(name, parents=[common], help=helptext)
        p.add_argument("path", help="frame specification JSON file")
        p.set_defaults(func=func)
    p = sub.add_parser("verify", parents=[common], help="run the randomized theorem suite")
    p.add_argument("--trials", type=int, default=50)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"nframes: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpecError as exc:
        print(f"nframes: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except FrameError as exc:
        print(f"nframes: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_VERDICT


if __name__ == "__main__":
    sys.exit(main())
