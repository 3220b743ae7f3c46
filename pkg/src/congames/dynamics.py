"""Best-response dynamics and their certified traces.

Two dynamics are provided. ``alg1`` runs on the surrogate-cost game and stops
at a 1/(1-eps)-approximate equilibrium of it (hence a d!/(1-eps)-approximate
equilibrium of the original game). ``alg2`` runs directly on the original game
with target ratio rho = 2W(d+1)/(2W+d+1) and stops at a rho/(1-eps)-approximate
equilibrium. Every iteration is checked on the fly against the inequalities
that make the termination proofs work; a violation raises ``DefectError``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial

from .best_response import (
    BestResponse,
    CostModel,
    all_best_responses,
    best_response,
    profile_costs,
)
from .errors import DefectError, InputError
from .exact import ceil_ln
from .game import Game, GameParams, Profile, Strategy, deviate, derive_params, strategy_list
from .potentials import potential_approx, potential_psi_hat, potential_upper_bounds, rho_star

ZERO = Fraction(0)
ONE = Fraction(1)

MAX_ITERATION_CAP = 10_000_000


class Algorithm(Enum):
    PSI_HAT_BRD = "alg1"
    REFINED_BRD = "alg2"


class TraceLevel(Enum):
    FULL = "full"
    SUMMARY = "summary"


class Termination(Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"


@dataclass(frozen=True)
class RunConfig:
    algorithm: Algorithm
    epsilon: Fraction
    max_iterations: int | None = None
    initial_profile: Profile | None = None
    trace_level: TraceLevel = TraceLevel.FULL


@dataclass(frozen=True)
class TraceEntry:
    t: int
    mover: int
    old_strategy: Strategy
    new_strategy: Strategy
    mover_cost_before: Fraction
    mover_cost_after: Fraction
    potential_before: Fraction
    potential_after: Fraction
    improving_set_size: int


@dataclass(frozen=True)
class RunResult:
    algorithm: Algorithm
    epsilon: Fraction
    rho: Fraction | None
    initial_profile: Profile
    final_profile: Profile
    iterations: int
    trace: tuple[TraceEntry, ...]
    terminated: Termination


@dataclass(frozen=True)
class BoundsReport:
    """Every theoretical iteration bound, evaluated exactly for one instance.

    ``symmetric`` bounds are ``None`` unless all players share one strategy
    set. ``initial_gap_bound`` is the potential-gap form of the direct bound
    with the minimum potential replaced by its guaranteed floor of 1 (valid
    whenever all positive coefficients are at least 1).
    """

    direct_bound: Fraction
    initial_gap_bound: Fraction
    symmetric_log_bound: Fraction | None
    general_log_bound: Fraction
    alg2_symmetric_bound: Fraction | None
    alg2_general_bound: Fraction
    mu: Fraction
    varpi: Fraction


@dataclass(frozen=True)
class LemmaViolation:
    check: str
    t: int
    player: int


@dataclass(frozen=True)
class LemmaReport:
    ok: bool
    checks: int
    violations: tuple[LemmaViolation, ...]


def default_initial_profile(game: Game, max_strategies: int | None = 4096) -> Profile:
    """Each player's lexicographically smallest strategy."""
    return tuple(min(strategy_list(game, u, max_strategies)) for u in range(game.num_players))


def is_approx_pne(game: Game, profile: Profile, rho: Fraction, model: CostModel) -> bool:
    """True iff no player can cut its cost below 1/rho of the current value."""
    if rho < 1:
        raise InputError("approximation ratio must be at least 1")
    costs = profile_costs(game, profile, model)
    for u in range(game.num_players):
        if costs[u] > rho * best_response(game, profile, u, model).cost:
            return False
    return True


def _default_max_iterations(game: Game, algorithm: Algorithm, epsilon: Fraction) -> int:
    params = derive_params(game)
    hat_bound, orig_bound = potential_upper_bounds(params)
    n = params.num_players
    report = bounds_report(
        params, epsilon, initial_potential=ONE, c_hat_max_bound=hat_bound / n,
        c_max_bound=orig_bound / n,
    )
    bound = report.direct_bound if algorithm is Algorithm.PSI_HAT_BRD else report.alg2_general_bound
    return max(1, min(MAX_ITERATION_CAP, 2 * math.ceil(bound)))


def _run(game: Game, config: RunConfig) -> RunResult:
    if not ZERO < config.epsilon < ONE:
        raise InputError("epsilon must lie strictly between 0 and 1")
    eps = config.epsilon
    alg = config.algorithm
    if alg is Algorithm.PSI_HAT_BRD:
        model = CostModel.PSI_HAT
        rho = None
        move_factor = ONE
        potential = potential_psi_hat
    else:
        model = CostModel.ORIGINAL
        rho = rho_star(game.degree, derive_params(game).weight_bound)
        move_factor = rho
        potential = potential_approx

    initial = config.initial_profile
    if initial is None:
        initial = default_initial_profile(game)
    max_iters = config.max_iterations
    if max_iters is None:
        max_iters = _default_max_iterations(game, alg, eps)

    profile = initial
    pot = potential(game, profile)
    trace: list[TraceEntry] = []
    iterations = 0
    terminated = Termination.MAX_ITERATIONS
    one_minus_eps = ONE - eps

    while iterations < max_iters + 1:
        responses = all_best_responses(game, profile, model)
        costs = profile_costs(game, profile, model)
        # Player u has an improving move iff cost > (move_factor/(1-eps)) * best.
        improvers = [
            u
            for u in range(game.num_players)
            if one_minus_eps * costs[u] > move_factor * responses[u].cost
        ]
        if not improvers:
            terminated = Termination.CONVERGED
            break
        if iterations == max_iters:
            break
        mover = improvers[0]
        best_gain = costs[mover] - move_factor * responses[mover].cost
        for u in improvers[1:]:
            gain = costs[u] - move_factor * responses[u].cost
            if gain > best_gain:
                mover, best_gain = u, gain

        chosen: BestResponse = responses[mover]
        new_profile = deviate(game, profile, mover, chosen.strategy)
        new_pot = potential(game, new_profile)
        decrement = pot - new_pot
        if decrement <= 0:
            raise DefectError(f"potential failed to decrease at iteration {iterations}")
        if alg is Algorithm.PSI_HAT_BRD:
            if decrement != costs[mover] - chosen.cost:
                raise DefectError(
                    f"potential change differs from mover cost change at iteration {iterations}"
                )
            if not decrement > eps * costs[mover]:
                raise DefectError(f"decrement fell below eps * cost at iteration {iterations}")
        else:
            gain = costs[mover] - rho * chosen.cost
            if decrement < gain:
                raise DefectError(
                    f"potential drop below cost_before - rho * cost_after at iteration {iterations}"
                )
            if not gain >= eps * costs[mover]:
                raise DefectError(f"gain fell below eps * cost at iteration {iterations}")
        if config.trace_level is TraceLevel.FULL:
            trace.append(
                TraceEntry(
                    t=iterations,
                    mover=mover,
                    old_strategy=profile[mover],
                    new_strategy=chosen.strategy,
                    mover_cost_before=costs[mover],
                    mover_cost_after=chosen.cost,
                    potential_before=pot,
                    potential_after=new_pot,
                    improving_set_size=len(improvers),
                )
            )
        profile = new_profile
        pot = new_pot
        iterations += 1

    if terminated is Termination.CONVERGED:
        if alg is Algorithm.PSI_HAT_BRD:
            if not is_approx_pne(game, profile, ONE / one_minus_eps, CostModel.PSI_HAT):
                raise DefectError("surrogate-game equilibrium verification failed")
            lift = factorial(game.degree) / one_minus_eps
            if not is_approx_pne(game, profile, lift, CostModel.ORIGINAL):
                raise DefectError("original-game equilibrium verification failed")
        else:
            if not is_approx_pne(game, profile, rho / one_minus_eps, CostModel.ORIGINAL):
                raise DefectError("refined-dynamic equilibrium verification failed")

    return RunResult(
        algorithm=alg,
        epsilon=eps,
        rho=rho,
        initial_profile=initial,
        final_profile=profile,
        iterations=iterations,
        trace=tuple(trace),
        terminated=terminated,
    )


def run_alg1(game: Game, config: RunConfig) -> RunResult:
    """Largest-improvement best-response dynamic on the surrogate-cost game."""
    if config.algorithm is not Algorithm.PSI_HAT_BRD:
        raise InputError("config.algorithm must be alg1")
    return _run(game, config)


def run_alg2(game: Game, config: RunConfig) -> RunResult:
    """Refined dynamic on the original game, selecting by cost_before - rho*cost_after."""
    if config.algorithm is not Algorithm.REFINED_BRD:
        raise InputError("config.algorithm must be alg2")
    return _run(game, config)


def run_dynamics(game: Game, config: RunConfig) -> RunResult:
    return _run(game, config)


def bounds_report(
    params: GameParams,
    epsilon: Fraction,
    initial_potential: Fraction,
    c_hat_max_bound: Fraction,
    c_max_bound: Fraction,
) -> BoundsReport:
    """Evaluate all iteration bounds as exact rationals.

    ``c_hat_max_bound`` / ``c_max_bound`` must dominate the maximum player
    cost under the surrogate / original model (exact maxima on small
    instances, closed forms otherwise). Logarithmic terms are
    ``ceil_ln(N * bound)``, certified exactly.
    """
    if not ZERO < epsilon < ONE:
        raise InputError("epsilon must lie strictly between 0 and 1")
    n = params.num_players
    e = params.num_resources
    d = params.degree
    w = params.weight_bound
    a = params.ratio_bound
    mu = e * a * factorial(d + 1) * n**d * w ** (d + 1)
    varpi = e * a * (d + 1) * n**d * w ** (d + 1)
    ln_hat = ceil_ln(n * c_hat_max_bound) if n else 0
    ln_orig = ceil_ln(n * c_max_bound) if n else 0
    direct = n * c_hat_max_bound / (epsilon * params.min_positive_coeff)
    gap = initial_potential - 1
    initial_gap = max(ZERO, gap / (epsilon * params.min_positive_coeff))
    sym_alg1 = (
        n * (w + factorial(d) * w ** (d + 1)) / epsilon * ln_hat if params.symmetric else None
    )
    sym_alg2 = n * (1 + w) ** (d + 1) / epsilon * ln_orig if params.symmetric else None
    return BoundsReport(
        direct_bound=direct,
        initial_gap_bound=initial_gap,
        symmetric_log_bound=sym_alg1,
        general_log_bound=n * mu / epsilon * ln_hat,
        alg2_symmetric_bound=sym_alg2,
        alg2_general_bound=n * varpi / epsilon * ln_orig,
        mu=mu,
        varpi=varpi,
    )


def replay_profiles(result: RunResult) -> list[Profile]:
    """Profiles S(0)..S(T) reconstructed from the trace."""
    profiles = [result.initial_profile]
    current = result.initial_profile
    for entry in result.trace:
        if current[entry.mover] != entry.old_strategy:
            raise DefectError(f"trace is inconsistent at iteration {entry.t}")
        nxt = list(current)
        nxt[entry.mover] = entry.new_strategy
        current = tuple(nxt)
        profiles.append(current)
    if current != result.final_profile:
        raise DefectError("trace does not reach the final profile")
    return profiles


def check_per_step_lemmas(
    game: Game, result: RunResult, params: GameParams, epsilon: Fraction
) -> LemmaReport:
    """Audit every iteration against the per-step cost-transfer inequalities.

    For each move t and each player u the potential decrement must dominate a
    known fraction of u's current cost: eps/mu of the surrogate cost for alg1
    runs (eps/(W + d!*W^(d+1)) on symmetric instances), and for alg2 runs the
    mover's ``cost_before - rho*cost_after`` must dominate eps/varpi of u's
    original cost (eps/(1+W)^(d+1) on symmetric instances). Player costs are
    recomputed from the archived profiles, not read from the trace.
    """
    if len(result.trace) != result.iterations:
        raise InputError("a full trace is required to audit per-step inequalities")
    d = params.degree
    w = params.weight_bound
    mu = params.num_resources * params.ratio_bound * factorial(d + 1) * params.num_players**d * w ** (d + 1)
    varpi = params.num_resources * params.ratio_bound * (d + 1) * params.num_players**d * w ** (d + 1)
    sym_alg1 = w + factorial(d) * w ** (d + 1)
    sym_alg2 = (1 + w) ** (d + 1)

    profiles = replay_profiles(result)
    model = (
        CostModel.PSI_HAT if result.algorithm is Algorithm.PSI_HAT_BRD else CostModel.ORIGINAL
    )
    checks = 0
    violations: list[LemmaViolation] = []
    for entry, profile in zip(result.trace, profiles):
        costs = profile_costs(game, profile, model)
        if result.algorithm is Algorithm.PSI_HAT_BRD:
            decrement = entry.mover_cost_before - entry.mover_cost_after
            checks += 1
            if entry.potential_before - entry.potential_after != decrement:
                violations.append(LemmaViolation("potential_equals_cost_change", entry.t, entry.mover))
            for u in range(game.num_players):
                checks += 1
                if not decrement >= epsilon / mu * costs[u]:
                    violations.append(LemmaViolation("general_cost_transfer", entry.t, u))
                if params.symmetric:
                    checks += 1
                    if not decrement >= epsilon / sym_alg1 * costs[u]:
                        violations.append(LemmaViolation("symmetric_cost_transfer", entry.t, u))
        else:
            assert result.rho is not None
            gain = entry.mover_cost_before - result.rho * entry.mover_cost_after
            checks += 1
            if entry.potential_before - entry.potential_after < gain:
                violations.append(LemmaViolation("potential_dominates_gain", entry.t, entry.mover))
            for u in range(game.num_players):
                checks += 1
                if not gain >= epsilon / varpi * costs[u]:
                    violations.append(LemmaViolation("general_cost_transfer", entry.t, u))
                if params.symmetric:
                    checks += 1
                    if not gain >= epsilon / sym_alg2 * costs[u]:
                        violations.append(LemmaViolation("symmetric_cost_transfer", entry.t, u))
    return LemmaReport(not violations, checks, tuple(violations))
