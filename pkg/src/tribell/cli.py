"""Command-line frontend.

Verbs: bound, optimize, threshold, visibility, sweep, tables, membership,
channel. Output is line-oriented key=value text, or a single JSON document
with identical fields under --json. Exit codes: 0 success, 2 invalid input,
3 numerical non-convergence / no crossing / no violation.

The default RNG seed is 1; the NL_SEED environment variable overrides it
and an explicit --seed wins over both. All angles are radians.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import channels, polytope, states, workflows
from .bell import (
    BellKind,
    MeasurementScenario,
    OptimizeOptions,
    bound_b1_b3,
    bound_b2,
    bound_b4,
    bound_b5,
    chsh_pure_max,
    ns99_mixed_bound,
    optimize_operator,
)
from .states import Family, FamilyParams

EXIT_OK = 0
EXIT_BAD_INPUT = 2
EXIT_NO_CONVERGENCE = 3


def _default_seed() -> int:
    try:
        return int(os.environ.get("NL_SEED", "1"))
    except ValueError:
        return 1


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return f"{value:.9g}"
    return str(value)


def _emit(pairs: dict, as_json: bool) -> None:
    if as_json:
        print(json.dumps(pairs, sort_keys=True))
    else:
        for key, value in pairs.items():
            if isinstance(value, (list, tuple)):
                print(f"{key}=" + ",".join(_fmt(v) for v in value))
            else:
                print(f"{key}={_fmt(value)}")


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (default NL_SEED or 1)")
    parser.add_argument("--json", action="store_true", help="emit one JSON document")


def _family_params_from_args(args) -> FamilyParams:
    lambdas = tuple(args.lambdas) if getattr(args, "lambdas", None) else None
    return FamilyParams(
        family=Family(args.family),
        eta=getattr(args, "eta", None),
        lambdas=lambdas,
        p=getattr(args, "p", None),
        k=getattr(args, "k", None),
        basis_index=getattr(args, "basis_index", None),
        sign=getattr(args, "sign", None),
    )


def _state_from_args(args) -> np.ndarray:
    if getattr(args, "state", None):
        rho = states.load_state_file(args.state)
    elif getattr(args, "family", None):
        rho = states.family_state(_family_params_from_args(args))
    else:
        raise ValueError("provide --state FILE or --family with its parameters")
    alpha = getattr(args, "alpha", None)
    if alpha is not None:
        rho = states.white_noise_mix(rho, alpha)
    return rho


def _add_state_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--state", help="JSON state file (amplitudes or density)")
    parser.add_argument("--family", choices=[f.value for f in Family], help="named family")
    parser.add_argument("--eta", type=float, help="family angle in radians")
    parser.add_argument("--lambdas", type=float, nargs=3, metavar=("L0", "L3", "L4"))
    parser.add_argument("--p", type=float, help="mixing weight")
    parser.add_argument("--k", type=int, help="rho3 integer parameter")
    parser.add_argument("--basis-index", type=int, choices=[1, 2, 3, 4],
                        help="lambda_basis index")
    parser.add_argument("--sign", type=int, choices=[1, -1], help="lambda_basis sign")
    parser.add_argument("--alpha", type=float, help="optional white-noise visibility mix")


# ---------------------------------------------------------------------------
# Subcommands


def cmd_bound(args) -> int:
    op = BellKind(args.operator)
    family = Family(args.family)
    if op is BellKind.CHSH:
        if args.c12sq is None:
            raise ValueError("chsh bound needs --c12sq")
        value = chsh_pure_max(args.c12sq)
    elif family is Family.GGHZ:
        if args.tau is None:
            raise ValueError("gghz bounds need --tau")
        value = bound_b1_b3(args.tau) if op is BellKind.NS99 else bound_b2(args.tau)
    elif family in (Family.MS, Family.EXT_S):
        if args.tau is None or args.c12sq is None:
            raise ValueError(f"{family.value} bounds need --tau and --c12sq")
        value = (
            bound_b5(args.tau, args.c12sq)
            if op is BellKind.NS99
            else bound_b4(args.tau, args.c12sq)
        )
    elif family in (Family.RHO4, Family.RHO5, Family.RHO6, Family.RHO7, Family.RHO8):
        if op is not BellKind.NS99:
            raise ValueError(f"no closed-form {op.value} bound for {family.value}")
        if args.p is None:
            raise ValueError("mixed-family bounds need --p")
        value = ns99_mixed_bound(family, args.p)
    else:
        raise ValueError(f"no closed-form bound for family {family.value}")
    _emit({"bound": value}, args.json)
    return EXIT_OK


def cmd_optimize(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    rho = _state_from_args(args)
    op = BellKind(args.operator)
    report = optimize_operator(rho, op, OptimizeOptions(restarts=args.restarts, seed=seed))
    _emit(
        {
            "operator": op.value,
            "value": report.value,
            "classical_bound": report.classical_bound,
            "violated": report.violated,
            "converged": report.converged,
            "restarts": report.restarts_used,
            "seed": seed,
            "angles_rad": [float(a) for a in report.scenario.flat()],
        },
        args.json,
    )
    return EXIT_OK if report.converged else EXIT_NO_CONVERGENCE


def cmd_threshold(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    query = workflows.ThresholdQuery(
        family=Family(args.family),
        operator=BellKind(args.operator),
        k=args.k,
        bracket=(args.bracket[0], args.bracket[1]),
        tol=args.tol,
        seed=seed,
        restarts=args.restarts,
    )
    try:
        result = workflows.threshold_bisect(query)
    except workflows.NoCrossingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    _emit(
        {
            "family": query.family.value,
            "operator": query.operator.value,
            "p_star": result.p_star,
            "bracket": list(query.bracket),
            "tol": query.tol,
            "evaluations": result.evaluations,
            "seed": seed,
        },
        args.json,
    )
    return EXIT_OK


def cmd_visibility(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.tau is not None:
        tau, c12sq = args.tau, args.c12sq or 0.0
    elif args.eta is not None:
        family = Family(args.family) if args.family else Family.GGHZ
        if family is Family.MS:
            tau, c12sq = math.sin(args.eta) ** 2, math.cos(args.eta) ** 2
        else:
            tau, c12sq = math.sin(2.0 * args.eta) ** 2, 0.0
    else:
        raise ValueError("visibility needs --tau (with optional --c12sq) or --eta")
    op = BellKind(args.operator)
    try:
        if args.confirm:
            check = workflows.visibility_check(
                op, tau, c12sq, delta=args.delta, seed=seed, restarts=args.restarts
            )
            _emit(
                {
                    "operator": op.value,
                    "tau": tau,
                    "c12sq": c12sq,
                    "threshold": check.threshold,
                    "below_value": check.below_value,
                    "below_violates": check.below_violates,
                    "above_value": check.above_value,
                    "above_violates": check.above_violates,
                    "confirmed": check.confirmed,
                },
                args.json,
            )
        else:
            from .bell import visibility_threshold_ns99, visibility_threshold_svetlichny

            fn = (
                visibility_threshold_ns99
                if op is BellKind.NS99
                else visibility_threshold_svetlichny
            )
            threshold = fn(tau, c12sq)
            if threshold is None:
                raise workflows.NoViolationError(
                    f"no violation of {op.value} for tau={tau}, C12^2={c12sq}"
                )
            _emit(
                {"operator": op.value, "tau": tau, "c12sq": c12sq, "threshold": threshold},
                args.json,
            )
    except workflows.NoViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    return EXIT_OK


def cmd_sweep(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    spec = workflows.SweepSpec(
        family=Family(args.family),
        param=args.param,
        start=getattr(args, "from"),
        stop=args.to,
        steps=args.steps,
        columns=tuple(args.columns.split(",")),
        c12sq=args.c12sq,
        k=args.k,
        seed=seed,
        restarts=args.restarts,
    )
    header, rows = workflows.run_sweep(spec)
    text = workflows.sweep_csv(header, rows)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_tables(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    rows = workflows.compute_table(
        args.which, tol=args.tol, seed=seed, restarts=args.restarts
    )
    print(workflows.format_table(rows, fmt=args.format))
    return EXIT_OK


def cmd_membership(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.behavior:
        behavior = polytope.load_behavior(args.behavior)
    else:
        rho = _state_from_args(args)
        if args.angles is not None:
            scenario = MeasurementScenario.from_flat(np.array(args.angles))
        elif args.optimize_scenario:
            op = BellKind(args.optimize_scenario)
            report = optimize_operator(
                rho, op, OptimizeOptions(restarts=args.restarts, seed=seed)
            )
            scenario = report.scenario
        else:
            raise ValueError("membership needs --angles (12 values) or --optimize-scenario OP")
        behavior = polytope.quantum_behavior(rho, scenario)
        if args.behavior_out:
            polytope.save_behavior(behavior, args.behavior_out)
    result = polytope.membership(behavior, polytope.HybridKind(args.model))
    pairs = {
        "model": result.kind.value,
        "inside": result.inside,
        "phase1_objective": result.phase1_objective,
        "iterations": result.iterations,
    }
    if result.inside:
        pairs["residual"] = result.residual
        pairs["support_size"] = int(np.sum(result.weights > 1e-12))
    _emit(pairs, args.json)
    return EXIT_OK


def cmd_channel(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    rho = _state_from_args(args)
    spec = channels.ChannelSpec(
        channels.ChannelKind(args.kind), tuple(args.strengths)
    )
    noisy = channels.apply_channel_spec(rho, spec)
    opts = OptimizeOptions(restarts=args.restarts, seed=seed)
    pairs = {"kind": spec.kind.value, "strengths": list(spec.strengths)}
    for op in (BellKind.NS99, BellKind.SVETLICHNY):
        report = optimize_operator(noisy, op, opts)
        pairs[f"kraus_{op.value}"] = report.value
        pairs[f"kraus_{op.value}_violated"] = report.violated
    if args.closed_form:
        if args.family != Family.GGHZ.value or args.eta is None:
            raise ValueError("--closed-form applies to --family gghz with --eta")
        if spec.kind is channels.ChannelKind.DEPOLARIZE:
            closed = channels.closed_form_depolarized_gghz(args.eta, *spec.strengths)
        else:
            closed = channels.closed_form_damped_gghz(args.eta, *spec.strengths)
        for op in (BellKind.NS99, BellKind.SVETLICHNY):
            report = optimize_operator(closed, op, opts)
            pairs[f"closed_form_{op.value}"] = report.value
            pairs[f"closed_form_{op.value}_violated"] = report.violated
    _emit(pairs, args.json)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tribell",
        description="Three-qubit Bell nonlocality toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", help="closed-form operator bound")
    p.add_argument("--family", required=True, choices=[f.value for f in Family])
    p.add_argument("--operator", required=True, choices=[k.value for k in BellKind])
    p.add_argument("--tau", type=float)
    p.add_argument("--c12sq", type=float)
    p.add_argument("--p", type=float)
    _add_common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("optimize", help="maximize an operator over measurement angles")
    _add_state_options(p)
    p.add_argument("--operator", required=True, choices=[k.value for k in BellKind])
    p.add_argument("--restarts", type=int, default=64)
    _add_common(p)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("threshold", help="bisect a mixed-family violation threshold")
    p.add_argument("--family", required=True,
                   choices=[f.value for f in states.MIXED_FAMILIES])
    p.add_argument("--operator", required=True,
                   choices=[BellKind.NS99.value, BellKind.SVETLICHNY.value])
    p.add_argument("--k", type=int)
    p.add_argument("--bracket", type=float, nargs=2, default=(0.55, 1.0),
                   metavar=("LO", "HI"))
    p.add_argument("--tol", type=float, default=workflows.DEFAULT_BISECT_TOL)
    p.add_argument("--restarts", type=int, default=64)
    _add_common(p)
    p.set_defaults(func=cmd_threshold)

    p = sub.add_parser("visibility", help="white-noise visibility threshold")
    p.add_argument("--family", choices=[Family.GGHZ.value, Family.MS.value, Family.EXT_S.value])
    p.add_argument("--operator", required=True,
                   choices=[BellKind.NS99.value, BellKind.SVETLICHNY.value])
    p.add_argument("--tau", type=float)
    p.add_argument("--c12sq", type=float)
    p.add_argument("--eta", type=float)
    p.add_argument("--no-confirm", dest="confirm", action="store_false",
                   help="skip the numeric confirmation at threshold -/+ delta")
    p.add_argument("--delta", type=float, default=0.01)
    p.add_argument("--restarts", type=int, default=64)
    _add_common(p)
    p.set_defaults(func=cmd_visibility)

    p = sub.add_parser("sweep", help="parameter sweep emitting CSV data")
    p.add_argument("--family", required=True, choices=[f.value for f in Family])
    p.add_argument("--param", required=True, choices=["eta", "tau", "p"])
    p.add_argument("--from", type=float, required=True)
    p.add_argument("--to", type=float, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--columns", required=True,
                   help="comma-separated subset of " + ",".join(workflows.SWEEP_COLUMNS))
    p.add_argument("--c12sq", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--output", help="write CSV here instead of stdout")
    _add_common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tables", help="recompute a published threshold table")
    p.add_argument("--which", type=int, required=True, choices=[1, 2])
    p.add_argument("--tol", type=float, default=2.5e-4)
    p.add_argument("--restarts", type=int, default=64)
    p.add_argument("--format", choices=["md", "csv"], default="md")
    _add_common(p)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("membership", help="LP membership in a hybrid local model")
    p.add_argument("--behavior", help="behavior table file (x y z a b c p rows)")
    _add_state_options(p)
    p.add_argument("--angles", type=float, nargs=12,
                   help="12 measurement angles (theta,phi pairs, radians)")
    p.add_argument("--optimize-scenario",
                   choices=[BellKind.NS99.value, BellKind.SVETLICHNY.value],
                   help="use the scenario found by maximizing this operator")
    p.add_argument("--model", required=True, choices=[k.value for k in polytope.HybridKind])
    p.add_argument("--behavior-out", help="also export the generated behavior table")
    p.add_argument("--restarts", type=int, default=64)
    _add_common(p)
    p.set_defaults(func=cmd_membership)

    p = sub.add_parser("channel", help="apply a noise channel, then optimize both operators")
    p.add_argument("--kind", required=True, choices=[k.value for k in channels.ChannelKind])
    p.add_argument("--strengths", type=float, nargs=3, required=True,
                   metavar=("S1", "S2", "S3"))
    _add_state_options(p)
    p.add_argument("--closed-form", action="store_true",
                   help="also evaluate the published closed-form matrix (gghz only)")
    p.add_argument("--restarts", type=int, default=64)
    _add_common(p)
    p.set_defaults(func=cmd_channel)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except polytope.LPNumericalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
