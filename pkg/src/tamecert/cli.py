"""Command line interface.

Exit codes: 0 success, 1 certificate failure, 2 input error.
"""

import argparse
import json
import sys

from .modules import CertificateError
from .pipeline import (
    ProblemError,
    decomposition_for,
    parse_problem,
    render_text_report,
    run_pipeline,
)
from .report import dumps_canonical, load_json, to_jsonable, write_report
from .verify import verify_report

EXIT_OK = 0
EXIT_CERTIFICATE = 1
EXIT_INPUT = 2


def _load_input(path):
    try:
        return load_json(path)
    except OSError as err:
        raise ProblemError(f"cannot read {path}: {err}") from None
    except json.JSONDecodeError as err:
        raise ProblemError(
            f"{path}: malformed JSON at line {err.lineno} column {err.colno}: "
            f"{err.msg}") from None


def _cmd_synth(args):
    spec = parse_problem(_load_input(args.input))
    if args.degree is not None:
        spec.degree = args.degree
    if args.nmax is not None:
        spec.n_max = args.nmax
    report = run_pipeline(spec)
    write_report(args.output, report)
    if args.text_report:
        with open(args.text_report, "w", encoding="utf-8") as fh:
            fh.write(render_text_report(report))
    print(f"report written to {args.output}")
    return EXIT_OK


def _cmd_verify(args):
    report = _load_input(args.report)
    failures = verify_report(report)
    if failures:
        print(f"verification FAILED: {len(failures)} problem(s)")
        for failure in failures:
            line = f"  [{failure['check']}]"
            if "factor" in failure:
                line += f" factor {failure['factor']}:"
            line += f" {failure['detail']}"
            if "witness" in failure:
                line += f" (witness: {failure['witness']})"
            print(line)
        return EXIT_CERTIFICATE
    print("verification passed: all certificates replay")
    return EXIT_OK


def _cmd_decompose(args):
    spec = parse_problem(_load_input(args.input))
    decomposition = decomposition_for(spec)
    payload = {
        "lattice_rank": decomposition.lattice_rank,
        "finite_factor": spec.finite_factor,
        "factors": [{
            "id": f.factor_id,
            "kind": f.kind,
            "k": f.group.k,
            "invariants": list(f.group.invariants),
            "projection": [list(r) for r in f.projection],
            "pi_star": [list(r) for r in f.pi_star],
        } for f in decomposition.factors],
        "trace": list(decomposition.trace),
    }
    sys.stdout.write(dumps_canonical(to_jsonable(payload)))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="tamecert",
        description="certified tame-module synthesis for class-2 nilpotent groups")
    sub = parser.add_subparsers(dest="command", required=True)

    synth = sub.add_parser("synth", help="run the full synthesis and write a report")
    synth.add_argument("--input", required=True, help="problem JSON file")
    synth.add_argument("--output", required=True, help="report JSON file to write")
    synth.add_argument("--text-report", help="optional plain-text narrative file")
    synth.add_argument("--degree", type=int, help="relation verification degree")
    synth.add_argument("--nmax", type=int, help="centre-action exponent bound")
    synth.set_defaults(func=_cmd_synth)

    verify = sub.add_parser("verify", help="replay all certificates in a report")
    verify.add_argument("--report", required=True, help="report JSON file")
    verify.set_defaults(func=_cmd_verify)

    decompose = sub.add_parser("decompose", help="print the factor decomposition")
    decompose.add_argument("--input", required=True, help="problem JSON file")
    decompose.set_defaults(func=_cmd_decompose)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_INPUT if err.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ProblemError as err:
        print(f"input error: {err}", file=sys.stderr)
        return EXIT_INPUT
    except CertificateError as err:
        print(f"certificate failure: {err}", file=sys.stderr)
        if err.witness is not None:
            print(f"witness: {err.witness}", file=sys.stderr)
        return EXIT_CERTIFICATE


if __name__ == "__main__":
    sys.exit(main())
