"""Potential functions: the exact potential of the surrogate game and the
approximate potential of the original game, plus their closed-form bounds."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial

from .errors import InputError
from .game import Game, GameParams, Profile, resource_loads
from .psi import resource_tables

ZERO = Fraction(0)


class PotentialKind(Enum):
    PSI_HAT_EXACT = "psihat"
    RHO_APPROXIMATE = "approx"


@dataclass(frozen=True)
class PotentialValue:
    value: Fraction
    kind: PotentialKind


def potential_psi_hat(game: Game, profile: Profile) -> Fraction:
    """Exact potential of the surrogate game.

    Each resource contributes ``sum_k coeffs[k]/(k+1) * psi_{k+1}(users)``;
    a unilateral deviation changes this by exactly the deviator's surrogate
    cost change.
    """
    tables = resource_tables(game, profile, game.degree + 1)
    total = ZERO
    for e in range(game.num_resources):
        values = tables[e].values
        for k, a in enumerate(game.latencies[e].coeffs):
            if a:
                total += a * values[k + 1] / (k + 1)
    return total


def potential_approx(game: Game, profile: Profile) -> Fraction:
    """Approximate potential of the original game.

    Each resource with load x contributes
    ``a0*x + sum_{k>=1} a_k*(x**(k+1)/(k+1) + x**k/2)``.
    """
    loads = resource_loads(game, profile)
    total = ZERO
    for e in range(game.num_resources):
        x = loads[e]
        if x == 0:
            continue
        coeffs = game.latencies[e].coeffs
        total += coeffs[0] * x
        power = x
        for k in range(1, len(coeffs)):
            a = coeffs[k]
            if a:
                total += a * (power * x / (k + 1) + power / 2)
            power *= x
    return total


def evaluate_potential(game: Game, profile: Profile, kind: PotentialKind) -> PotentialValue:
    if kind is PotentialKind.PSI_HAT_EXACT:
        return PotentialValue(potential_psi_hat(game, profile), kind)
    return PotentialValue(potential_approx(game, profile), kind)


def rho_star(d: int, weight_bound: Fraction) -> Fraction:
    """Approximation ratio target of the refined dynamic: 2W(d+1)/(2W+d+1)."""
    if d < 1:
        raise InputError("degree must be at least 1")
    if weight_bound < 1:
        raise InputError("weight bound must be at least 1")
    return 2 * weight_bound * (d + 1) / (2 * weight_bound + d + 1)


def potential_upper_bounds(params: GameParams) -> tuple[Fraction, Fraction]:
    """Closed-form upper bounds on the two potentials.

    Returns ``(N**(d+1) * W**(d+1) * E * (d+1)! * a_max,
               N**(d+1) * W**(d+1) * E * (d+1) * a_max)``.
    Both also dominate N times the corresponding maximum player cost, which is
    how the solver feeds the logarithmic iteration bounds.
    """
    n = params.num_players
    d = params.degree
    a_max = params.ratio_bound * params.min_positive_coeff
    base = n ** (d + 1) * params.weight_bound ** (d + 1) * params.num_resources * a_max
    return base * factorial(d + 1), base * (d + 1)
