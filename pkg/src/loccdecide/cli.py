"""Command-line front end.

All results go to stdout as JSON; diagnostics go to stderr.  Exit codes are
a stable contract: 0 for convertible/certified/clean, 1 for a negative
verdict, 2 and above for operational errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import harness
from .audit import recheck_report
from .counterexamples import (
    Theorem1Instance,
    default_ek_evaluators,
    gen_prop1_instance,
    gen_theorem1_instance,
    verify_prop1,
    verify_theorem1,
)
from .errors import (
    CertificationError,
    ConditioningError,
    DimensionError,
    DomainError,
    ValidationError,
)
from .locc import (
    TwoQubitDistInstance,
    critical_mu_set,
    dist_convert_closed_form,
    dist_convert_mu,
    nielsen_convertible,
    pure_to_ensemble_convertible,
    rational_mu_grid,
)
from .lp import build_problem, lp_feasible
from .monotones import profile_from_spec
from .reports import DecisionReport
from .states import load_ensemble, load_state, schmidt_decompose


def _emit(obj) -> None:
    print(json.dumps(obj, sort_keys=True))


def _emit_report(report: DecisionReport) -> int:
    _emit(report.to_dict())
    return 0 if report.verdict else 1


def cmd_schmidt(args) -> int:
    state = load_state(args.state)
    _emit({"schmidt": list(schmidt_decompose(state).lambdas)})
    return 0


def cmd_decide(args) -> int:
    if args.what == "nielsen":
        psi = schmidt_decompose(load_state(args.inputs[0]))
        phi = schmidt_decompose(load_state(args.inputs[1]))
        return _emit_report(nielsen_convertible(psi, phi))
    if args.what == "pure-to-ensemble":
        psi = schmidt_decompose(load_state(args.inputs[0]))
        ens = load_ensemble(args.inputs[1])
        return _emit_report(pure_to_ensemble_convertible(psi, ens))
    d1 = load_ensemble(args.inputs[0])
    d2 = load_ensemble(args.inputs[1])
    if args.what == "lp" or args.method == "lp":
        return _emit_report(lp_feasible(build_problem(d1, d2)))
    inst = TwoQubitDistInstance.from_ensembles(d1, d2)
    if args.method == "closed-form":
        return _emit_report(dist_convert_closed_form(inst))
    if args.method == "mu-critical":
        return _emit_report(dist_convert_mu(inst, critical_mu_set(inst)))
    if args.method == "mu-grid":
        return _emit_report(
            dist_convert_mu(inst, rational_mu_grid(args.mu_denominator))
        )
    raise ValidationError(f"unknown method {args.method!r}")


def cmd_counterexample(args) -> int:
    if args.kind == "prop1":
        with open(args.profiles) as fh:
            try:
                specs = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ValidationError(
                    f"{args.profiles}: malformed JSON at line {exc.lineno}, "
                    f"column {exc.colno}: {exc.msg}"
                ) from exc
        if isinstance(specs, dict):
            specs = specs.get("profiles", [])
        profiles = [profile_from_spec(s) for s in specs]
        inst = gen_prop1_instance(profiles)
        report = verify_prop1(inst)
    else:
        finite_set = default_ek_evaluators(4)
        gen = gen_theorem1_instance(args.p1, args.lam, args.eta, finite_set)
        if not gen.accepted:
            report = DecisionReport(
                verdict=False,
                method="theorem1",
                certificate={"kind": "theorem1_certificate",
                             "finite_set_failures": gen.failures},
                inputs={"p1": args.p1, "lambda": args.lam, "eta": args.eta},
            )
        else:
            report = verify_theorem1(gen.instance, finite_set)
    text = report.to_json(indent=2)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
        print(text)
    else:
        print(text)
    return 0 if report.verdict else 1


def cmd_verify(args) -> int:
    if args.trials < 1:
        raise ValidationError(f"trials must be >= 1, got {args.trials}")
    tol = None
    if args.tolerance is not None:
        if not 0.0 < args.tolerance < 1e-3:
            raise ValidationError(
                f"tolerance override must lie in (0, 1e-3), got {args.tolerance}"
            )
        tol = args.tolerance
    kwargs = {} if tol is None else {"tol": tol}
    summaries = harness.run_all(args.trials, args.seed, **kwargs)
    _emit({"seed": args.seed, "trials": args.trials,
           "suites": [s.to_dict() for s in summaries],
           "clean": all(s.clean for s in summaries)})
    return 0 if all(s.clean for s in summaries) else 1


def cmd_validate(args) -> int:
    with open(args.report) as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(
                f"{args.report}: malformed JSON at line {exc.lineno}, "
                f"column {exc.colno}: {exc.msg}"
            ) from exc
    ok, detail = recheck_report(obj)
    _emit({"certificate_valid": ok, "detail": detail})
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="loccdecide",
        description="Decide local convertibility of bipartite pure-state "
        "distributions and build certified counterexamples.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("schmidt", help="Schmidt numbers of a state file")
    p.add_argument("state")
    p.set_defaults(func=cmd_schmidt)

    p = sub.add_parser("decide", help="run a convertibility decider")
    p.add_argument("what", choices=["nielsen", "pure-to-ensemble", "dist", "lp"])
    p.add_argument("inputs", nargs=2, metavar="FILE")
    p.add_argument("--method", default="closed-form",
                   choices=["closed-form", "mu-critical", "mu-grid", "lp"])
    p.add_argument("--mu-denominator", type=int, default=50)
    p.set_defaults(func=cmd_decide)

    p = sub.add_parser("counterexample", help="generate a certified counterexample")
    p.add_argument("kind", choices=["prop1", "theorem1"])
    p.add_argument("--profiles", help="profile spec JSON file (prop1)")
    p.add_argument("--p1", type=float, default=0.9)
    p.add_argument("--lambda", dest="lam", type=float, default=0.05)
    p.add_argument("--eta", type=float, default=0.4)
    p.add_argument("-o", "--output", help="also write the certificate here")
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("verify", help="randomized cross-validation of deciders")
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int,
                   default=int(os.environ.get("LOCCDECIDE_SEED", "42")))
    p.add_argument("--tolerance", type=float, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("validate", help="re-verify a decision report file")
    p.add_argument("report")
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "counterexample" and args.kind == "prop1" and not args.profiles:
        print("error: prop1 requires --profiles", file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except (ValidationError, DimensionError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConditioningError, CertificationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
