"""Seeded generation of random explicit-strategy and network congestion games.

Every generated game satisfies the model conditions for the declared weight
and coefficient-ratio bounds, deterministically in the seed. The PRNG and the
exact draw order are specified in docs/FORMATS.md.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DefectError, GenerationError, InputError
from .game import (
    ExplicitStrategies,
    Game,
    LatencyPoly,
    Network,
    PathStrategies,
    Strategy,
    path_exists,
    validate_game,
)
from .rng import SplitMix64

ONE = Fraction(1)

# Positive coefficients are drawn from [2, 2A]. Keeping them >= 2 guarantees
# both potentials are >= 1 on every generated profile, which the logarithmic
# iteration bounds rely on.
POSITIVE_COEFF_MIN = Fraction(2)
MAX_DENOMINATOR = 8
ZERO_COEFF_CHANCE = 2  # a coefficient is zero with probability 1/2

OD_SHARED = "shared"
OD_DISTINCT = "distinct"


@dataclass(frozen=True)
class NetworkSpec:
    node_count: int
    edge_probability: Fraction
    od_policy: str = OD_SHARED


@dataclass(frozen=True)
class GenSpec:
    seed: int
    num_players: int
    num_resources: int
    degree: int
    weight_bound: Fraction
    ratio_bound: Fraction
    symmetric: bool
    strategies_per_player: int
    strategy_size_range: tuple[int, int]
    network: NetworkSpec | None = None


def _check_spec(spec: GenSpec) -> None:
    lo, hi = spec.strategy_size_range
    if spec.num_players < 1 or spec.degree < 1:
        raise InputError("need at least one player and degree at least 1")
    if spec.weight_bound < 1 or spec.ratio_bound < 1:
        raise InputError("weight and ratio bounds must be at least 1")
    if spec.strategies_per_player < 1:
        raise InputError("strategies_per_player must be at least 1")
    if spec.network is None:
        if spec.num_resources < 1:
            raise InputError("need at least one resource")
        if not 1 <= lo <= hi <= spec.num_resources:
            raise InputError("strategy size range must fit inside the resource set")
    else:
        net = spec.network
        if net.node_count < 2:
            raise InputError("a network needs at least two nodes")
        if not 0 < net.edge_probability <= 1:
            raise InputError("edge probability must lie in (0, 1]")
        if net.od_policy not in (OD_SHARED, OD_DISTINCT):
            raise InputError(f"unknown od policy {net.od_policy!r}")


def _fraction_in(rng: SplitMix64, lo: Fraction, hi: Fraction) -> Fraction:
    """Random fraction in [lo, hi] with denominator at most MAX_DENOMINATOR."""
    den = rng.int_in(1, MAX_DENOMINATOR)
    lo_num = math.ceil(lo * den)
    hi_num = math.floor(hi * den)
    if hi_num < lo_num:
        return lo
    return Fraction(rng.int_in(lo_num, hi_num), den)


def _latency(rng: SplitMix64, degree: int, ratio_bound: Fraction) -> LatencyPoly:
    hi = POSITIVE_COEFF_MIN * ratio_bound
    coeffs = []
    for _ in range(degree + 1):
        if rng.below(ZERO_COEFF_CHANCE) == 0:
            coeffs.append(Fraction(0))
        else:
            coeffs.append(_fraction_in(rng, POSITIVE_COEFF_MIN, hi))
    if all(c == 0 for c in coeffs):
        coeffs[rng.int_in(0, degree)] = _fraction_in(rng, POSITIVE_COEFF_MIN, hi)
    return LatencyPoly(tuple(coeffs))


def _sample_subset(rng: SplitMix64, universe: int, size: int) -> Strategy:
    # Partial Fisher-Yates: the first `size` slots of a shuffled range.
    items = list(range(universe))
    for i in range(size):
        j = rng.int_in(i, universe - 1)
        items[i], items[j] = items[j], items[i]
    return tuple(sorted(items[:size]))


def _strategy_set(rng: SplitMix64, spec: GenSpec) -> ExplicitStrategies:
    lo, hi = spec.strategy_size_range
    strategies: list[Strategy] = []
    seen = set()
    attempts = 0
    while len(strategies) < spec.strategies_per_player and attempts < 64 * spec.strategies_per_player:
        attempts += 1
        size = rng.int_in(lo, hi)
        s = _sample_subset(rng, spec.num_resources, size)
        if s not in seen:
            seen.add(s)
            strategies.append(s)
    return ExplicitStrategies(tuple(strategies))


def gen_random_game(spec: GenSpec) -> Game:
    """Explicit-strategy instance drawn deterministically from the seed."""
    _check_spec(spec)
    if spec.network is not None:
        raise InputError("spec requests a network game; use gen_network_game")
    rng = SplitMix64(spec.seed)
    weights = tuple(_fraction_in(rng, ONE, spec.weight_bound) for _ in range(spec.num_players))
    latencies = tuple(
        _latency(rng, spec.degree, spec.ratio_bound) for _ in range(spec.num_resources)
    )
    if spec.symmetric:
        shared = _strategy_set(rng, spec)
        strategy_sets = tuple(shared for _ in range(spec.num_players))
    else:
        strategy_sets = tuple(_strategy_set(rng, spec) for _ in range(spec.num_players))
    game = Game(
        weights=weights,
        latencies=latencies,
        strategy_sets=strategy_sets,
        degree=spec.degree,
        weight_bound=spec.weight_bound,
        ratio_bound=spec.ratio_bound,
    )
    report = validate_game(game)
    if not report.ok:
        raise DefectError(f"generated game failed validation: {report.violations}")
    return game


def _sample_edges(rng: SplitMix64, net: NetworkSpec) -> tuple[tuple[int, int, int], ...]:
    p = net.edge_probability
    edges = []
    for tail in range(net.node_count):
        for head in range(net.node_count):
            if tail == head:
                continue
            if rng.below(p.denominator) < p.numerator:
                edges.append((tail, head, len(edges)))
    return tuple(edges)


def _sample_od(rng: SplitMix64, node_count: int) -> tuple[int, int]:
    origin = rng.int_in(0, node_count - 1)
    destination = rng.int_in(0, node_count - 1)
    while destination == origin:
        destination = rng.int_in(0, node_count - 1)
    return origin, destination


def gen_network_game(spec: GenSpec, max_attempts: int = 64) -> Game:
    """Network instance: resources are the edges of a random directed graph.

    Edge sets are redrawn until every player's origin-destination pair is
    connected; after ``max_attempts`` failures a :class:`GenerationError`
    is raised.
    """
    _check_spec(spec)
    net = spec.network
    if net is None:
        raise InputError("spec has no network section; use gen_random_game")
    rng = SplitMix64(spec.seed)
    for _ in range(max_attempts):
        edges = _sample_edges(rng, net)
        if not edges:
            continue
        if net.od_policy == OD_SHARED:
            pair = _sample_od(rng, net.node_count)
            od_pairs = [pair] * spec.num_players
        else:
            od_pairs = [_sample_od(rng, net.node_count) for _ in range(spec.num_players)]
        network = Network(net.node_count, edges)
        if all(path_exists(network, o, t) for o, t in od_pairs):
            weights = tuple(
                _fraction_in(rng, ONE, spec.weight_bound) for _ in range(spec.num_players)
            )
            latencies = tuple(
                _latency(rng, spec.degree, spec.ratio_bound) for _ in range(len(edges))
            )
            game = Game(
                weights=weights,
                latencies=latencies,
                strategy_sets=tuple(PathStrategies(o, t) for o, t in od_pairs),
                degree=spec.degree,
                weight_bound=spec.weight_bound,
                ratio_bound=spec.ratio_bound,
                network=network,
            )
            report = validate_game(game)
            if not report.ok:
                raise DefectError(f"generated game failed validation: {report.violations}")
            return game
    raise GenerationError(
        f"could not connect all origin-destination pairs within {max_attempts} attempts"
    )


def gen_game(spec: GenSpec) -> Game:
    return gen_network_game(spec) if spec.network is not None else gen_random_game(spec)
