"""Best responses under either cost model: enumeration for explicit strategy
sets, nonnegative-weight shortest path for path-based sets."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import InputError
from .game import (
    ExplicitStrategies,
    Game,
    PathStrategies,
    Profile,
    Strategy,
    in_edges,
    out_edges,
    resource_loads,
    resource_weight_lists,
)
from .psi import PsiTable, psi_insert, psi_remove, table_for

ZERO = Fraction(0)


class CostModel(Enum):
    ORIGINAL = "original"
    PSI_HAT = "psihat"


@dataclass(frozen=True)
class BestResponse:
    strategy: Strategy
    cost: Fraction


@dataclass(frozen=True)
class DeviationState:
    """Per-profile caches shared by all deviation-cost queries against it."""

    model: CostModel
    profile: Profile
    loads: tuple[Fraction, ...] | None
    tables: tuple[PsiTable, ...] | None


def deviation_state(game: Game, profile: Profile, model: CostModel) -> DeviationState:
    if model is CostModel.ORIGINAL:
        return DeviationState(model, profile, tuple(resource_loads(game, profile)), None)
    tables = tuple(table_for(ws, game.degree) for ws in resource_weight_lists(game, profile))
    return DeviationState(model, profile, None, tables)


def _edge_cost(game: Game, state: DeviationState, u: int, e: int) -> Fraction:
    """Player u's cost share on resource e after joining it (others fixed)."""
    w = game.weights[u]
    uses = e in state.profile[u]
    if state.model is CostModel.ORIGINAL:
        base = state.loads[e] - w if uses else state.loads[e]
        return w * game.latencies[e].value_at(base + w)
    table = state.tables[e] if uses else psi_insert(state.tables[e], w)
    total = ZERO
    for k, a in enumerate(game.latencies[e].coeffs):
        if a:
            total += a * table.values[k]
    return w * total


def deviation_cost(game: Game, state: DeviationState, u: int, strategy: Strategy) -> Fraction:
    """Player u's cost after unilaterally switching to ``strategy``."""
    total = ZERO
    for e in strategy:
        total += _edge_cost(game, state, u, e)
    return total


def profile_costs(game: Game, profile: Profile, model: CostModel) -> list[Fraction]:
    """Current cost of every player under the chosen model."""
    state = deviation_state(game, profile, model)
    return [deviation_cost(game, state, u, profile[u]) for u in range(game.num_players)]


def best_response_explicit(
    game: Game,
    profile: Profile,
    u: int,
    model: CostModel,
    state: DeviationState | None = None,
) -> BestResponse:
    """Cheapest deviation over an explicit strategy set.

    Cost ties are broken toward the lexicographically smallest strategy
    (compared as sorted resource-id tuples).
    """
    sset = game.strategy_sets[u]
    if not isinstance(sset, ExplicitStrategies):
        raise InputError(f"player {u} does not have an explicit strategy set")
    if state is None:
        state = deviation_state(game, profile, model)
    best: BestResponse | None = None
    for strategy in sset.strategies:
        cost = deviation_cost(game, state, u, strategy)
        if (
            best is None
            or cost < best.cost
            or (cost == best.cost and strategy < best.strategy)
        ):
            best = BestResponse(strategy, cost)
    if best is None:
        raise InputError(f"player {u} has an empty strategy set")
    return best


def best_response_path(
    game: Game,
    profile: Profile,
    u: int,
    model: CostModel,
    state: DeviationState | None = None,
) -> BestResponse:
    """Cheapest origin->destination path, edge-weighted by the player's marginal cost.

    Every edge weight is strictly positive (each latency has a positive
    coefficient and the joining player's load is at least 1), so shortest
    walks are simple. Cost ties are broken toward the lexicographically
    smallest node sequence, then the smallest resource id on parallel edges.
    """
    sset = game.strategy_sets[u]
    if not isinstance(sset, PathStrategies):
        raise InputError(f"player {u} does not have a path-based strategy set")
    if game.network is None:
        raise InputError("path-based strategy set without a network")
    if state is None:
        state = deviation_state(game, profile, model)
    net = game.network
    weight = {res: _edge_cost(game, state, u, res) for _, _, res in net.edges}

    # Backward Dijkstra: exact distance from every node to the destination.
    rev = in_edges(net)
    dist: dict[int, Fraction] = {sset.destination: ZERO}
    heap: list[tuple[Fraction, int]] = [(ZERO, sset.destination)]
    while heap:
        d, node = heapq.heappop(heap)
        if d > dist.get(node, d):
            continue
        for tail, res in rev.get(node, ()):
            nd = d + weight[res]
            if tail not in dist or nd < dist[tail]:
                dist[tail] = nd
                heapq.heappush(heap, (nd, tail))
    if sset.origin not in dist:
        raise InputError(f"no path from {sset.origin} to {sset.destination}")
    total = dist[sset.origin]

    # Walk forward along tight edges, taking the smallest (head, resource).
    adj = out_edges(net)
    node = sset.origin
    acc = ZERO
    resources: list[int] = []
    while node != sset.destination:
        step = None
        for head, res in adj.get(node, ()):
            if head in dist and acc + weight[res] + dist[head] == total:
                step = (head, res)
                break
        if step is None:
            raise AssertionError("tight-edge walk lost the shortest path")
        node, res = step
        acc += weight[res]
        resources.append(res)
    return BestResponse(tuple(sorted(resources)), total)


def best_response(
    game: Game,
    profile: Profile,
    u: int,
    model: CostModel,
    state: DeviationState | None = None,
) -> BestResponse:
    if isinstance(game.strategy_sets[u], ExplicitStrategies):
        return best_response_explicit(game, profile, u, model, state)
    return best_response_path(game, profile, u, model, state)


def all_best_responses(game: Game, profile: Profile, model: CostModel) -> list[BestResponse]:
    """Best responses of all players against one shared snapshot of the profile."""
    state = deviation_state(game, profile, model)
    return [best_response(game, profile, u, model, state) for u in range(game.num_players)]
