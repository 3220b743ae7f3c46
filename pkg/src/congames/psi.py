"""Scaled complete homogeneous symmetric functions over weight multisets.

``psi(k, M)`` is k! times the sum of all degree-k monomials in the elements of
the multiset M (so ``psi(1, M)`` is the plain load). These values define the
surrogate latencies that turn a weighted congestion game into a potential
game; they are maintained per resource in incremental tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import comb, factorial
from typing import Iterable

from .errors import InputError
from .exact import exact_kth_root, kth_root_interval
from .game import Game, Profile

ZERO = Fraction(0)
ONE = Fraction(1)


def _insert_in_place(values: list[Fraction], b: Fraction) -> None:
    # One-element extension: new[k] = old[k] + k*b*new[k-1], ascending in k so
    # that index k-1 already holds the extended value.
    for k in range(1, len(values)):
        values[k] += k * b * values[k - 1]


def psi_values(weights: Iterable[Fraction], max_k: int) -> tuple[Fraction, ...]:
    """Values for k = 0..max_k, built by inserting one element at a time."""
    values = [ONE] + [ZERO] * max_k
    for b in weights:
        _insert_in_place(values, b)
    return tuple(values)


def psi(k: int, weights: Iterable[Fraction]) -> Fraction:
    """k! times the complete homogeneous symmetric polynomial of degree k."""
    if k < 0:
        raise InputError("order k must be nonnegative")
    return psi_values(weights, k)[k]


@dataclass(frozen=True)
class PsiTable:
    """Cached values of one resource's weight multiset, orders 0..len(values)-1."""

    values: tuple[Fraction, ...]
    element_count: int


def empty_table(max_k: int) -> PsiTable:
    return PsiTable((ONE,) + (ZERO,) * max_k, 0)


def table_for(weights: Iterable[Fraction], max_k: int) -> PsiTable:
    ws = list(weights)
    return PsiTable(psi_values(ws, max_k), len(ws))


def psi_insert(table: PsiTable, b: Fraction) -> PsiTable:
    """Table for the multiset with one copy of ``b`` added."""
    values = list(table.values)
    _insert_in_place(values, b)
    return PsiTable(tuple(values), table.element_count + 1)


def psi_remove(table: PsiTable, b: Fraction) -> PsiTable:
    """Table for the multiset with one copy of ``b`` removed.

    The caller is responsible for only removing weights actually present.
    """
    if table.element_count == 0:
        raise InputError("cannot remove a weight from an empty table")
    old = table.values
    values = [old[0]]
    for k in range(1, len(old)):
        values.append(old[k] - k * b * old[k - 1])
    return PsiTable(tuple(values), table.element_count - 1)


def resource_tables(game: Game, profile: Profile, max_k: int | None = None) -> list[PsiTable]:
    """Per-resource tables for ``profile``; order reaches ``max_k`` (default degree+1)."""
    from .game import resource_weight_lists

    if max_k is None:
        max_k = game.degree + 1
    return [table_for(ws, max_k) for ws in resource_weight_lists(game, profile)]


def psi_hat_resource_latency(game: Game, e: int, table: PsiTable) -> Fraction:
    """Surrogate latency of resource ``e``: coefficients dotted with table orders 0..d."""
    if not 0 <= e < game.num_resources:
        raise InputError(f"unknown resource id {e}")
    coeffs = game.latencies[e].coeffs
    total = ZERO
    for k, a in enumerate(coeffs):
        if a:
            total += a * table.values[k]
    return total


def psi_hat_player_cost(game: Game, profile: Profile, u: int) -> Fraction:
    """Player cost under the surrogate latencies."""
    if not 0 <= u < game.num_players:
        raise InputError(f"unknown player id {u}")
    from .game import resource_weight_lists

    users = resource_weight_lists(game, profile)
    total = ZERO
    for e in profile[u]:
        table = table_for(users[e], game.degree)
        total += psi_hat_resource_latency(game, e, table)
    return game.weights[u] * total


def psi_hat_total_cost(game: Game, profile: Profile) -> Fraction:
    """Sum of all players' surrogate costs."""
    tables = resource_tables(game, profile, game.degree)
    latencies = [psi_hat_resource_latency(game, e, tables[e]) for e in range(game.num_resources)]
    total = ZERO
    for u, strategy in enumerate(profile):
        total += game.weights[u] * sum((latencies[e] for e in strategy), ZERO)
    return total


class RootBoundResult(Enum):
    HOLDS = "holds"
    FAILS = "fails"
    UNDECIDED = "undecided"


def check_insertion_root_bound(
    k: int, weights: Iterable[Fraction], b: Fraction, max_digits: int = 160
) -> RootBoundResult:
    """Certified check that inserting ``b`` grows psi_k at most like a k-th-root sum.

    The bound compared against is ``(psi(k,{b})**(1/k) + psi(k,M)**(1/k))**k``,
    expanded binomially so each addend is a rational to the power 1/k. When
    every k-th root is rational the comparison is exact; otherwise the roots
    are bracketed by shrinking rational intervals until the direction is
    certified. UNDECIDED is returned only if ``max_digits`` precision cannot
    separate the sides.
    """
    if k < 1:
        raise InputError("order k must be at least 1")
    ws = list(weights)
    lhs = psi(k, ws + [b])
    psi_m = psi(k, ws)
    kfact = factorial(k)
    terms: list[tuple[int, Fraction]] = []
    for j in range(k + 1):
        terms.append((comb(k, j), kfact**j * b ** (j * k) * psi_m ** (k - j)))

    roots = [exact_kth_root(t, k) for _, t in terms]
    if all(r is not None for r in roots):
        rhs = sum((c * r for (c, _), r in zip(terms, roots)), ZERO)
        return RootBoundResult.HOLDS if lhs <= rhs else RootBoundResult.FAILS

    digits = 20
    while digits <= max_digits:
        lo_sum = ZERO
        hi_sum = ZERO
        for (c, t), r in zip(terms, roots):
            if r is not None:
                lo_sum += c * r
                hi_sum += c * r
            else:
                lo, hi = kth_root_interval(t, k, digits)
                lo_sum += c * lo
                hi_sum += c * hi
        if lhs <= lo_sum:
            return RootBoundResult.HOLDS
        if lhs > hi_sum:
            return RootBoundResult.FAILS
        digits *= 2
    return RootBoundResult.UNDECIDED
