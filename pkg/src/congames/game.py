"""Weighted congestion game model: players, resources, strategies, exact costs.

All quantities (weights, latency coefficients, costs) are `fractions.Fraction`
values, so every comparison made by the solvers and verifiers is exact.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceededError, InputError

Strategy = tuple[int, ...]
Profile = tuple[Strategy, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def canonical_strategy(resources) -> Strategy:
    """Canonical form of a strategy: sorted, duplicate-free resource-id tuple."""
    return tuple(sorted({int(r) for r in resources}))


@dataclass(frozen=True)
class LatencyPoly:
    """Polynomial latency; ``coeffs[k]`` multiplies ``load**k``."""

    coeffs: tuple[Fraction, ...]

    def value_at(self, x: Fraction) -> Fraction:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc


@dataclass(frozen=True)
class ExplicitStrategies:
    """A player's strategies given as an explicit list of resource subsets."""

    strategies: tuple[Strategy, ...]


@dataclass(frozen=True)
class PathStrategies:
    """A player's strategies are the simple origin->destination paths of the game network."""

    origin: int
    destination: int


StrategySet = ExplicitStrategies | PathStrategies


@dataclass(frozen=True)
class Network:
    """Directed multigraph whose edges are exactly the game's resources."""

    node_count: int
    edges: tuple[tuple[int, int, int], ...]  # (tail, head, resource-id)


@dataclass(frozen=True)
class Game:
    """A weighted congestion game with polynomial latencies.

    ``weight_bound`` and ``ratio_bound`` are the declared constants bounding
    player weights and positive-coefficient ratios; when absent, the tightest
    values from :func:`derive_params` stand in.
    """

    weights: tuple[Fraction, ...]
    latencies: tuple[LatencyPoly, ...]
    strategy_sets: tuple[StrategySet, ...]
    degree: int
    weight_bound: Fraction | None = None
    ratio_bound: Fraction | None = None
    network: Network | None = None

    @property
    def num_players(self) -> int:
        return len(self.weights)

    @property
    def num_resources(self) -> int:
        return len(self.latencies)


@dataclass(frozen=True)
class GameParams:
    """Instance constants the iteration bounds are expressed in."""

    num_players: int
    num_resources: int
    degree: int
    weight_bound: Fraction
    ratio_bound: Fraction
    min_positive_coeff: Fraction
    symmetric: bool


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


# -- network helpers ---------------------------------------------------------


def resource_to_edge(network: Network) -> dict[int, tuple[int, int]]:
    mapping: dict[int, tuple[int, int]] = {}
    for tail, head, res in network.edges:
        mapping[res] = (tail, head)
    return mapping


def out_edges(network: Network) -> dict[int, list[tuple[int, int]]]:
    """Adjacency as ``tail -> [(head, resource), ...]`` sorted ascending."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for tail, head, res in network.edges:
        adj.setdefault(tail, []).append((head, res))
    for lst in adj.values():
        lst.sort()
    return adj


def in_edges(network: Network) -> dict[int, list[tuple[int, int]]]:
    """Reverse adjacency as ``head -> [(tail, resource), ...]`` sorted ascending."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for tail, head, res in network.edges:
        adj.setdefault(head, []).append((tail, res))
    for lst in adj.values():
        lst.sort()
    return adj


def path_exists(network: Network, origin: int, destination: int) -> bool:
    adj = out_edges(network)
    seen = {origin}
    queue = deque([origin])
    while queue:
        node = queue.popleft()
        if node == destination:
            return True
        for head, _ in adj.get(node, ()):
            if head not in seen:
                seen.add(head)
                queue.append(head)
    return False


def path_strategy_nodes(
    network: Network, origin: int, destination: int, strategy
) -> tuple[int, ...] | None:
    """Node sequence if ``strategy`` is the edge set of a simple origin->destination path."""
    edge_of = resource_to_edge(network)
    step: dict[int, int] = {}
    for res in strategy:
        if res not in edge_of:
            return None
        tail, head = edge_of[res]
        if tail in step:
            return None
        step[tail] = head
    node = origin
    visited = {origin}
    seq = [origin]
    for _ in range(len(step)):
        if node not in step:
            return None
        node = step[node]
        if node in visited:
            return None
        visited.add(node)
        seq.append(node)
    if node != destination or len(seq) < 2:
        return None
    return tuple(seq)


def enumerate_simple_paths(
    network: Network, origin: int, destination: int, max_paths: int | None = None
) -> list[Strategy]:
    """All simple origin->destination paths as resource sets.

    Emitted in lexicographic order of the node sequence (parallel edges by
    ascending resource id). Raises :class:`BudgetExceededError` when more than
    ``max_paths`` paths exist.
    """
    adj = out_edges(network)
    found: list[Strategy] = []
    on_path: set[int] = {origin}
    resources: list[int] = []

    def visit(node: int) -> None:
        if node == destination:
            found.append(tuple(sorted(resources)))
            if max_paths is not None and len(found) > max_paths:
                raise BudgetExceededError(
                    f"more than {max_paths} simple paths from {origin} to {destination}"
                )
            return
        for head, res in adj.get(node, ()):
            if head in on_path:
                continue
            on_path.add(head)
            resources.append(res)
            visit(head)
            resources.pop()
            on_path.remove(head)

    if origin != destination:
        visit(origin)
    return found


# -- core operations ---------------------------------------------------------


def _check_player(game: Game, u: int) -> None:
    if not 0 <= u < game.num_players:
        raise InputError(f"unknown player id {u}")


def _check_resource(game: Game, e: int) -> None:
    if not 0 <= e < game.num_resources:
        raise InputError(f"unknown resource id {e}")


def resource_loads(game: Game, profile: Profile) -> list[Fraction]:
    loads = [ZERO] * game.num_resources
    for u, strategy in enumerate(profile):
        w = game.weights[u]
        for e in strategy:
            loads[e] += w
    return loads


def resource_load(game: Game, profile: Profile, e: int) -> Fraction:
    """Total weight of players using resource ``e`` in ``profile``."""
    _check_resource(game, e)
    total = ZERO
    for u, strategy in enumerate(profile):
        if e in strategy:
            total += game.weights[u]
    return total


def resource_weight_lists(game: Game, profile: Profile) -> list[list[Fraction]]:
    """Per-resource multiset (as a list) of the weights of its users."""
    users: list[list[Fraction]] = [[] for _ in range(game.num_resources)]
    for u, strategy in enumerate(profile):
        w = game.weights[u]
        for e in strategy:
            users[e].append(w)
    return users


def player_cost(game: Game, profile: Profile, u: int) -> Fraction:
    """Weight times the summed latencies of the player's resources."""
    _check_player(game, u)
    loads = resource_loads(game, profile)
    total = ZERO
    for e in profile[u]:
        total += game.latencies[e].value_at(loads[e])
    return game.weights[u] * total


def total_cost(game: Game, profile: Profile) -> Fraction:
    """Sum of player costs; cross-checked against the per-resource expansion."""
    loads = resource_loads(game, profile)
    latencies = [game.latencies[e].value_at(loads[e]) for e in range(game.num_resources)]
    by_player = ZERO
    for u, strategy in enumerate(profile):
        by_player += game.weights[u] * sum((latencies[e] for e in strategy), ZERO)
    by_resource = sum((loads[e] * latencies[e] for e in range(game.num_resources)), ZERO)
    if by_player != by_resource:
        raise AssertionError("total cost expansions disagree")
    return by_player


def is_strategy_of(game: Game, u: int, strategy: Strategy) -> bool:
    _check_player(game, u)
    sset = game.strategy_sets[u]
    if isinstance(sset, ExplicitStrategies):
        return strategy in sset.strategies
    if game.network is None:
        return False
    return path_strategy_nodes(game.network, sset.origin, sset.destination, strategy) is not None


def is_valid_profile(game: Game, profile: Profile) -> bool:
    if len(profile) != game.num_players:
        return False
    return all(is_strategy_of(game, u, s) for u, s in enumerate(profile))


def deviate(game: Game, profile: Profile, u: int, s_new) -> Profile:
    """Profile equal to ``profile`` except player ``u`` plays ``s_new``."""
    _check_player(game, u)
    strategy = canonical_strategy(s_new)
    if not is_strategy_of(game, u, strategy):
        raise InputError(f"strategy {strategy} is not available to player {u}")
    out = list(profile)
    out[u] = strategy
    return tuple(out)


def strategy_list(game: Game, u: int, max_strategies: int | None = None) -> tuple[Strategy, ...]:
    """The player's strategies, expanding path-based sets into explicit subsets."""
    _check_player(game, u)
    sset = game.strategy_sets[u]
    if isinstance(sset, ExplicitStrategies):
        return sset.strategies
    if game.network is None:
        raise InputError("path-based strategy set without a network")
    return tuple(
        enumerate_simple_paths(game.network, sset.origin, sset.destination, max_strategies)
    )


def _canonical_set(game: Game, sset: StrategySet):
    if isinstance(sset, ExplicitStrategies):
        return tuple(sorted(set(sset.strategies)))
    return ("path", sset.origin, sset.destination)


def _positive_coeffs(game: Game) -> list[Fraction]:
    return [c for poly in game.latencies for c in poly.coeffs if c > 0]


def derive_params(game: Game) -> GameParams:
    """Tightest instance constants: max weight, max coefficient ratio, min positive coefficient."""
    positives = _positive_coeffs(game)
    if not positives:
        raise InputError("game has no positive latency coefficient")
    a_min = min(positives)
    a_max = max(positives)
    weight_bound = max(game.weights) if game.weights else ONE
    sets = {_canonical_set(game, s) for s in game.strategy_sets}
    return GameParams(
        num_players=game.num_players,
        num_resources=game.num_resources,
        degree=game.degree,
        weight_bound=weight_bound,
        ratio_bound=a_max / a_min,
        min_positive_coeff=a_min,
        symmetric=len(sets) <= 1,
    )


def validate_game(game: Game) -> ValidationReport:
    """Collect every violated model condition; an empty report means valid."""
    problems: list[str] = []
    if game.degree < 1:
        problems.append(f"degree must be at least 1, got {game.degree}")
    for u, w in enumerate(game.weights):
        if w < 1:
            problems.append(f"player {u} weight {w} is below 1")
        if game.weight_bound is not None and w > game.weight_bound:
            problems.append(f"player {u} weight {w} exceeds declared bound {game.weight_bound}")
    for e, poly in enumerate(game.latencies):
        if len(poly.coeffs) != game.degree + 1:
            problems.append(
                f"resource {e} has {len(poly.coeffs)} coefficients, expected {game.degree + 1}"
            )
        if any(c < 0 for c in poly.coeffs):
            problems.append(f"resource {e} has a negative coefficient")
        if sum(poly.coeffs, ZERO) <= 0:
            problems.append(f"resource {e} has no positive coefficient")
    positives = _positive_coeffs(game)
    if positives and game.ratio_bound is not None:
        ratio = max(positives) / min(positives)
        if ratio > game.ratio_bound:
            problems.append(
                f"coefficient ratio {ratio} exceeds declared bound {game.ratio_bound}"
            )
    if game.ratio_bound is not None and game.ratio_bound <= 0:
        problems.append("declared coefficient ratio bound must be positive")
    if game.network is not None:
        seen = sorted(res for _, _, res in game.network.edges)
        if seen != list(range(game.num_resources)):
            problems.append("network edges must carry each resource id exactly once")
        for tail, head, res in game.network.edges:
            if not (0 <= tail < game.network.node_count and 0 <= head < game.network.node_count):
                problems.append(f"edge for resource {res} references an unknown node")
    for u, sset in enumerate(game.strategy_sets):
        if isinstance(sset, ExplicitStrategies):
            if not sset.strategies:
                problems.append(f"player {u} has an empty strategy set")
            for s in sset.strategies:
                if not s:
                    problems.append(f"player {u} has an empty strategy")
                elif any(not 0 <= e < game.num_resources for e in s):
                    problems.append(f"player {u} strategy {s} references an unknown resource")
                elif tuple(sorted(set(s))) != s:
                    problems.append(f"player {u} strategy {s} is not sorted and duplicate-free")
        else:
            if game.network is None:
                problems.append(f"player {u} has a path strategy set but the game has no network")
                continue
            n = game.network.node_count
            if not (0 <= sset.origin < n and 0 <= sset.destination < n):
                problems.append(f"player {u} origin/destination outside the node range")
            elif sset.origin == sset.destination:
                problems.append(f"player {u} origin equals destination")
            elif not path_exists(game.network, sset.origin, sset.destination):
                problems.append(
                    f"player {u} has no path from {sset.origin} to {sset.destination}"
                )
    return ValidationReport(tuple(problems))
