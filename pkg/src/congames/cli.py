"""Command line interface: generate / solve / verify / bench / oracle.

Exit codes: 0 success, 1 verification failed or no equilibrium delivered,
2 input error, 3 budget exceeded, 4 theoretical guarantee violated (defect).
All output is deterministic: identical inputs produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import replace
from fractions import Fraction
from math import factorial

from .best_response import CostModel
from .dynamics import (
    Algorithm,
    BoundsReport,
    RunConfig,
    Termination,
    bounds_report,
    default_initial_profile,
    is_approx_pne,
    run_dynamics,
)
from .errors import BudgetExceededError, DefectError, GenerationError, InputError
from .exact import format_rational, parse_rational
from .fileio import (
    load_game,
    load_genspec,
    load_profile,
    save_game,
    save_trace,
)
from .game import Game, Profile, derive_params, is_valid_profile, validate_game
from .generate import gen_game
from .oracle import (
    DEFAULT_LIMITS,
    brute_min_potential,
    verify_potential_properties,
)
from .potentials import (
    PotentialKind,
    potential_psi_hat,
    potential_upper_bounds,
    rho_star,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3
EXIT_DEFECT = 4

MAX_ITERATION_CAP = 10_000_000

BENCH_EPSILONS = (Fraction(1, 10), Fraction(1, 4), Fraction(1, 2))


def _profile_json(profile: Profile) -> str:
    return json.dumps([list(s) for s in profile])


def _fmt_opt(value: Fraction | None) -> str:
    return format_rational(value) if value is not None else "-"


def _load_valid_game(path: str) -> Game:
    game = load_game(path)
    report = validate_game(game)
    if not report.ok:
        raise InputError("invalid game: " + "; ".join(report.violations))
    return game


def _parse_epsilon(text: str) -> Fraction:
    eps = parse_rational(text)
    if not 0 < eps < 1:
        raise InputError("epsilon must lie strictly between 0 and 1")
    return eps


def _closed_form_report(game: Game, epsilon: Fraction, initial: Profile) -> BoundsReport:
    params = derive_params(game)
    hat_bound, orig_bound = potential_upper_bounds(params)
    n = params.num_players
    return bounds_report(
        params,
        epsilon,
        initial_potential=potential_psi_hat(game, initial),
        c_hat_max_bound=hat_bound / n,
        c_max_bound=orig_bound / n,
    )


def _applicable_bound(report: BoundsReport, algorithm: Algorithm) -> Fraction:
    if algorithm is Algorithm.PSI_HAT_BRD:
        return report.direct_bound
    return report.alg2_general_bound


def _print_bounds(report: BoundsReport, out) -> None:
    out.write(f"direct_bound: {format_rational(report.direct_bound)}\n")
    out.write(f"initial_gap_bound: {format_rational(report.initial_gap_bound)}\n")
    out.write(f"symmetric_log_bound: {_fmt_opt(report.symmetric_log_bound)}\n")
    out.write(f"general_log_bound: {format_rational(report.general_log_bound)}\n")
    out.write(f"alg2_symmetric_bound: {_fmt_opt(report.alg2_symmetric_bound)}\n")
    out.write(f"alg2_general_bound: {format_rational(report.alg2_general_bound)}\n")
    out.write(f"mu: {format_rational(report.mu)}\n")
    out.write(f"varpi: {format_rational(report.varpi)}\n")


def _cmd_generate(args, out) -> int:
    spec = load_genspec(args.spec)
    game = gen_game(spec)
    save_game(game, args.out)
    out.write(f"wrote {args.out}\n")
    return EXIT_OK


def _cmd_solve(args, out) -> int:
    game = _load_valid_game(args.game)
    epsilon = _parse_epsilon(args.epsilon)
    algorithm = Algorithm(args.algorithm)
    initial = default_initial_profile(game)
    report = _closed_form_report(game, epsilon, initial)
    bound = _applicable_bound(report, algorithm)
    max_iters = args.max_iters
    if max_iters is None:
        max_iters = max(1, min(MAX_ITERATION_CAP, 2 * math.ceil(bound)))
    config = RunConfig(
        algorithm=algorithm,
        epsilon=epsilon,
        max_iterations=max_iters,
        initial_profile=initial,
    )
    result = run_dynamics(game, config)

    params = derive_params(game)
    one_minus = 1 - epsilon
    out.write(f"algorithm: {algorithm.value}\n")
    out.write(f"epsilon: {format_rational(epsilon)}\n")
    out.write(f"initial_profile: {_profile_json(result.initial_profile)}\n")
    out.write(f"iterations: {result.iterations}\n")
    out.write(f"terminated: {result.terminated.value}\n")
    out.write(f"final_profile: {_profile_json(result.final_profile)}\n")
    if algorithm is Algorithm.PSI_HAT_BRD:
        out.write(f"target_ratio_surrogate: {format_rational(1 / one_minus)}\n")
        out.write(
            f"target_ratio_original: {format_rational(factorial(game.degree) / one_minus)}\n"
        )
    else:
        assert result.rho is not None
        out.write(f"rho: {format_rational(result.rho)}\n")
        out.write(f"target_ratio_original: {format_rational(result.rho / one_minus)}\n")
    converged = result.terminated is Termination.CONVERGED
    out.write(f"verified_approx_pne: {'true' if converged else 'false'}\n")
    _print_bounds(report, out)
    if args.trace:
        save_trace(result, args.trace)
    if converged:
        return EXIT_OK
    if max_iters >= bound:
        raise DefectError(
            f"run exceeded the theoretical bound {format_rational(bound)} without converging"
        )
    return EXIT_FAILED


def _cmd_verify(args, out) -> int:
    game = _load_valid_game(args.game)
    profile = load_profile(args.profile)
    if not is_valid_profile(game, profile):
        raise InputError("profile is not valid for this game")
    rho = parse_rational(args.rho)
    if rho < 1:
        raise InputError("rho must be at least 1")
    model = CostModel(args.model)
    verdict = is_approx_pne(game, profile, rho, model)
    out.write(
        f"profile is{'' if verdict else ' not'} a {format_rational(rho)}-approximate "
        f"equilibrium under {model.value} costs\n"
    )
    return EXIT_OK if verdict else EXIT_FAILED


def _cmd_oracle(args, out) -> int:
    game = _load_valid_game(args.game)
    report = verify_potential_properties(game, DEFAULT_LIMITS)
    out.write(f"potential_properties_checks: {report.checks}\n")
    out.write(f"potential_properties_ok: {'true' if report.ok else 'false'}\n")
    if not report.ok:
        out.write(f"counterexample: {report.failure}\n")
        raise DefectError(report.failure or "potential property violated")
    min_profile, min_hat = brute_min_potential(game, PotentialKind.PSI_HAT_EXACT, DEFAULT_LIMITS)
    out.write(f"min_potential_surrogate: {format_rational(min_hat)}\n")
    out.write(f"min_potential_surrogate_profile: {_profile_json(min_profile)}\n")
    min_profile2, min_phi = brute_min_potential(game, PotentialKind.RHO_APPROXIMATE, DEFAULT_LIMITS)
    out.write(f"min_potential_approx: {format_rational(min_phi)}\n")
    out.write(f"min_potential_approx_profile: {_profile_json(min_profile2)}\n")
    return EXIT_OK


def _cmd_bench(args, out) -> int:
    spec = load_genspec(args.spec)
    header = (
        "run,seed,algorithm,epsilon,iterations,terminated,direct_bound,"
        "symmetric_log_bound,general_log_bound,alg2_symmetric_bound,alg2_general_bound"
    )
    out.write(header + "\n")
    for run_idx in range(args.runs):
        run_spec = replace(spec, seed=spec.seed + run_idx)
        game = gen_game(run_spec)
        initial = default_initial_profile(game)
        for algorithm in (Algorithm.PSI_HAT_BRD, Algorithm.REFINED_BRD):
            for epsilon in BENCH_EPSILONS:
                report = _closed_form_report(game, epsilon, initial)
                bound = _applicable_bound(report, algorithm)
                config = RunConfig(
                    algorithm=algorithm,
                    epsilon=epsilon,
                    max_iterations=max(1, min(MAX_ITERATION_CAP, 2 * math.ceil(bound))),
                    initial_profile=initial,
                )
                result = run_dynamics(game, config)
                if result.terminated is not Termination.CONVERGED:
                    raise DefectError(
                        f"bench run {run_idx} ({algorithm.value}) exceeded its iteration bound"
                    )
                row = (
                    str(run_idx),
                    str(run_spec.seed),
                    algorithm.value,
                    format_rational(epsilon),
                    str(result.iterations),
                    result.terminated.value,
                    format_rational(report.direct_bound),
                    _fmt_opt(report.symmetric_log_bound),
                    format_rational(report.general_log_bound),
                    _fmt_opt(report.alg2_symmetric_bound),
                    format_rational(report.alg2_general_bound),
                )
                out.write(",".join(row) + "\n")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="congames",
        description="Approximate pure Nash equilibria of weighted congestion games",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a random instance from a spec file")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)

    p = sub.add_parser("solve", help="run a best-response dynamic to an approximate equilibrium")
    p.add_argument("--game", required=True)
    p.add_argument("--algorithm", required=True, choices=[a.value for a in Algorithm])
    p.add_argument("--epsilon", required=True)
    p.add_argument("--trace", default=None)
    p.add_argument("--max-iters", type=int, default=None)

    p = sub.add_parser("verify", help="check a profile against an approximation ratio")
    p.add_argument("--game", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--rho", required=True)
    p.add_argument("--model", required=True, choices=[m.value for m in CostModel])

    p = sub.add_parser("bench", help="generate instances and tabulate iterations vs bounds")
    p.add_argument("--spec", required=True)
    p.add_argument("--runs", type=int, required=True)

    p = sub.add_parser("oracle", help="brute-force verification of all potential properties")
    p.add_argument("--game", required=True)

    return parser


_COMMANDS = {
    "generate": _cmd_generate,
    "solve": _cmd_solve,
    "verify": _cmd_verify,
    "bench": _cmd_bench,
    "oracle": _cmd_oracle,
}


def cli_main(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return _COMMANDS[args.command](args, out)
    except (InputError, GenerationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except DefectError as exc:
        print(f"defect: {exc}", file=sys.stderr)
        return EXIT_DEFECT


def main() -> None:
    sys.exit(cli_main())
