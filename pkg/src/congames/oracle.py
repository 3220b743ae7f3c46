"""Brute-force ground truth on small instances.

Deliberately naive: direct exponent-vector summation, exhaustive profile
enumeration, and exhaustive deviation checks. Budgets are enforced by refusal
(a distinct error), never by silent truncation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Iterator

from .best_response import CostModel
from .errors import BudgetExceededError, DefectError, InputError
from .game import (
    Game,
    Profile,
    Strategy,
    deviate,
    derive_params,
    player_cost,
    strategy_list,
)
from .potentials import PotentialKind, potential_approx, potential_psi_hat, rho_star
from .psi import psi_hat_player_cost

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class OracleLimits:
    max_profiles: int = 200_000
    max_strategies_per_player: int = 4096


DEFAULT_LIMITS = OracleLimits()


@dataclass(frozen=True)
class PropertyReport:
    ok: bool
    checks: int
    failure: str | None = None


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    """All nonnegative integer vectors of length ``parts`` summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def psi_by_enumeration(
    k: int, weights: Iterable[Fraction], max_terms: int = 2_000_000
) -> Fraction:
    """Direct summation over exponent vectors; the independent check for the DP."""
    if k < 0:
        raise InputError("order k must be nonnegative")
    ws = list(weights)
    if k == 0:
        return ONE
    if not ws:
        return ZERO
    n_terms = comb(k + len(ws) - 1, len(ws) - 1)
    if n_terms > max_terms:
        raise BudgetExceededError(f"{n_terms} exponent vectors exceed the budget {max_terms}")
    total = ZERO
    for exponents in _compositions(k, len(ws)):
        term = ONE
        for w, r in zip(ws, exponents):
            if r:
                term *= w**r
        total += term
    return factorial(k) * total


def effective_strategy_lists(
    game: Game, limits: OracleLimits = DEFAULT_LIMITS
) -> list[tuple[Strategy, ...]]:
    """Each player's strategies as a sorted, duplicate-free explicit list."""
    out = []
    for u in range(game.num_players):
        strategies = strategy_list(game, u, limits.max_strategies_per_player)
        out.append(tuple(sorted(set(strategies))))
    return out


def profile_space_size(game: Game, limits: OracleLimits = DEFAULT_LIMITS) -> int:
    size = 1
    for strategies in effective_strategy_lists(game, limits):
        size *= len(strategies)
    return size


def enumerate_profiles(game: Game, limits: OracleLimits = DEFAULT_LIMITS) -> Iterator[Profile]:
    """Every profile exactly once, in lexicographic order."""
    lists = effective_strategy_lists(game, limits)
    size = 1
    for strategies in lists:
        size *= len(strategies)
    if size > limits.max_profiles:
        raise BudgetExceededError(f"{size} profiles exceed the budget {limits.max_profiles}")
    return itertools.product(*lists)


def brute_min_potential(
    game: Game, kind: PotentialKind, limits: OracleLimits = DEFAULT_LIMITS
) -> tuple[Profile, Fraction]:
    """Global minimizer (first in lexicographic order) and minimum of a potential."""
    evaluate = potential_psi_hat if kind is PotentialKind.PSI_HAT_EXACT else potential_approx
    best_profile: Profile | None = None
    best_value: Fraction | None = None
    for profile in enumerate_profiles(game, limits):
        value = evaluate(game, profile)
        if best_value is None or value < best_value:
            best_profile, best_value = profile, value
    if best_profile is None or best_value is None:
        raise InputError("game has no profiles")
    if kind is PotentialKind.PSI_HAT_EXACT:
        if not brute_verify_approx_pne(game, best_profile, ONE, CostModel.PSI_HAT, limits):
            raise DefectError("minimizer of the exact potential is not an equilibrium")
    return best_profile, best_value


def brute_max_player_cost(
    game: Game, model: CostModel, limits: OracleLimits = DEFAULT_LIMITS
) -> Fraction:
    """Exact maximum player cost over all profiles, under the chosen model."""
    cost = psi_hat_player_cost if model is CostModel.PSI_HAT else player_cost
    best = ZERO
    for profile in enumerate_profiles(game, limits):
        for u in range(game.num_players):
            c = cost(game, profile, u)
            if c > best:
                best = c
    return best


def brute_verify_approx_pne(
    game: Game,
    profile: Profile,
    rho: Fraction,
    model: CostModel,
    limits: OracleLimits = DEFAULT_LIMITS,
) -> bool:
    """Check every player against every alternative strategy directly."""
    if rho < 1:
        raise InputError("approximation ratio must be at least 1")
    cost = psi_hat_player_cost if model is CostModel.PSI_HAT else player_cost
    lists = effective_strategy_lists(game, limits)
    for u in range(game.num_players):
        current = cost(game, profile, u)
        for alternative in lists[u]:
            if current > rho * cost(game, deviate(game, profile, u, alternative), u):
                return False
    return True


def verify_potential_properties(
    game: Game, limits: OracleLimits = DEFAULT_LIMITS
) -> PropertyReport:
    """Exhaustively verify the potential identities over all unilateral deviations.

    Checks, for every (profile, player, alternative) triple:
      (i)  the surrogate potential changes by exactly the deviator's surrogate
           cost change;
      (ii) the approximate potential drops by at least
           ``cost_before - rho_star * cost_after``;
      (iii) original cost <= surrogate cost <= d! * original cost.
    Stops at the first counterexample.
    """
    params = derive_params(game)
    rho = rho_star(game.degree, params.weight_bound)
    d_fact = factorial(game.degree)
    lists = effective_strategy_lists(game, limits)

    profiles = list(enumerate_profiles(game, limits))
    phi_hat: dict[Profile, Fraction] = {}
    phi: dict[Profile, Fraction] = {}
    costs: dict[Profile, list[Fraction]] = {}
    hat_costs: dict[Profile, list[Fraction]] = {}
    for profile in profiles:
        phi_hat[profile] = potential_psi_hat(game, profile)
        phi[profile] = potential_approx(game, profile)
        costs[profile] = [player_cost(game, profile, u) for u in range(game.num_players)]
        hat_costs[profile] = [
            psi_hat_player_cost(game, profile, u) for u in range(game.num_players)
        ]

    checks = 0
    for profile in profiles:
        for u in range(game.num_players):
            c_u = costs[profile][u]
            hc_u = hat_costs[profile][u]
            checks += 1
            if not (c_u <= hc_u <= d_fact * c_u):
                return PropertyReport(
                    False, checks, f"cost sandwich violated at profile {profile}, player {u}"
                )
            for alternative in lists[u]:
                if alternative == profile[u]:
                    continue
                other = deviate(game, profile, u, alternative)
                checks += 1
                if phi_hat[other] - phi_hat[profile] != hat_costs[other][u] - hc_u:
                    return PropertyReport(
                        False,
                        checks,
                        f"exact-potential identity violated at {profile} -> {other}, player {u}",
                    )
                if phi[profile] - phi[other] < c_u - rho * costs[other][u]:
                    return PropertyReport(
                        False,
                        checks,
                        f"approximate-potential bound violated at {profile} -> {other}, player {u}",
                    )
    return PropertyReport(True, checks)
