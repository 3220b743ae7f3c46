"""Shared builders for small hand-checked games and the random test corpus."""

from __future__ import annotations

from fractions import Fraction

import pytest

from congames import ExplicitStrategies, Game, GenSpec, LatencyPoly, gen_random_game


def F(x) -> Fraction:
    return Fraction(x)


def poly(*coeffs) -> LatencyPoly:
    return LatencyPoly(tuple(Fraction(c) for c in coeffs))


def explicit(*strategies) -> ExplicitStrategies:
    return ExplicitStrategies(tuple(tuple(sorted(s)) for s in strategies))


def make_game(weights, latencies, strategy_sets, degree=None, W=None, A=None) -> Game:
    latencies = tuple(latencies)
    if degree is None:
        degree = max(len(p.coeffs) for p in latencies) - 1
    padded = tuple(
        LatencyPoly(p.coeffs + (Fraction(0),) * (degree + 1 - len(p.coeffs))) for p in latencies
    )
    return Game(
        weights=tuple(Fraction(w) for w in weights),
        latencies=padded,
        strategy_sets=tuple(strategy_sets),
        degree=degree,
        weight_bound=Fraction(W) if W is not None else None,
        ratio_bound=Fraction(A) if A is not None else None,
    )


def two_player_parallel_links() -> Game:
    """Two unit players, two identical linear resources, singleton strategies."""
    sset = explicit([0], [1])
    return make_game([1, 1], [poly(0, 1), poly(0, 1)], [sset, sset], W=1, A=1)


def corpus_specs(count: int, base_seed: int) -> list[GenSpec]:
    """Deterministic mix of small instances: N <= 4, E <= 5, d <= 3, W <= 3."""
    specs = []
    for i in range(count):
        num_resources = 2 + (i + 1) % 4
        specs.append(
            GenSpec(
                seed=base_seed + i,
                num_players=2 + i % 3,
                num_resources=num_resources,
                degree=1 + i % 3,
                weight_bound=Fraction(1 + (i // 2) % 3),
                ratio_bound=Fraction(1 + i % 4),
                symmetric=i % 2 == 0,
                strategies_per_player=2 + i % 3,
                strategy_size_range=(1, min(3, num_resources)),
            )
        )
    return specs


def small_corpus(count: int, base_seed: int = 20_240_501) -> list[Game]:
    return [gen_random_game(spec) for spec in corpus_specs(count, base_seed)]


@pytest.fixture(scope="session")
def corpus20() -> list[Game]:
    return small_corpus(20)
