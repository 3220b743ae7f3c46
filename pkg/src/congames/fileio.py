"""File formats: JSON game/spec/profile documents and CSV traces.

Rationals are always serialized as "num/den" strings; floating point never
appears in any file. The schemas are documented in docs/FORMATS.md.
"""

from __future__ import annotations

import io
import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .dynamics import RunResult
from .errors import InputError
from .exact import format_rational, parse_rational
from .game import (
    ExplicitStrategies,
    Game,
    LatencyPoly,
    Network,
    PathStrategies,
    Profile,
    Strategy,
    canonical_strategy,
    derive_params,
)
from .generate import GenSpec, NetworkSpec


def _require(obj: dict, key: str, kind, where: str):
    if key not in obj:
        raise InputError(f"{where}: missing required key {key!r}")
    value = obj[key]
    if kind is int and isinstance(value, bool):
        raise InputError(f"{where}: key {key!r} must be an integer")
    if not isinstance(value, kind):
        raise InputError(f"{where}: key {key!r} has the wrong type")
    return value


def _strategy_from_json(item: Any, where: str) -> Strategy:
    if not isinstance(item, list) or not all(isinstance(e, int) for e in item):
        raise InputError(f"{where}: a strategy must be a list of resource ids")
    return canonical_strategy(item)


# -- games --------------------------------------------------------------------


def game_to_dict(game: Game) -> dict:
    params = None
    if game.weight_bound is None or game.ratio_bound is None:
        params = derive_params(game)
    weight_bound = game.weight_bound if game.weight_bound is not None else params.weight_bound
    ratio_bound = game.ratio_bound if game.ratio_bound is not None else params.ratio_bound
    players = []
    for u in range(game.num_players):
        entry: dict[str, Any] = {"weight": format_rational(game.weights[u])}
        sset = game.strategy_sets[u]
        if isinstance(sset, ExplicitStrategies):
            entry["strategies"] = [list(s) for s in sset.strategies]
        else:
            entry["strategies"] = {"od": [sset.origin, sset.destination]}
        players.append(entry)
    doc = {
        "d": game.degree,
        "W": format_rational(weight_bound),
        "A": format_rational(ratio_bound),
        "players": players,
        "resources": [
            {"coeffs": [format_rational(c) for c in poly.coeffs]} for poly in game.latencies
        ],
    }
    if game.network is not None:
        doc["graph"] = {
            "nodes": game.network.node_count,
            "edges": [list(edge) for edge in game.network.edges],
        }
    return doc


def game_from_dict(doc: Any) -> Game:
    if not isinstance(doc, dict):
        raise InputError("game document must be a JSON object")
    degree = _require(doc, "d", int, "game")
    weight_bound = parse_rational(_require(doc, "W", str, "game"))
    ratio_bound = parse_rational(_require(doc, "A", str, "game"))
    resources = _require(doc, "resources", list, "game")
    latencies = []
    for e, entry in enumerate(resources):
        if not isinstance(entry, dict):
            raise InputError(f"resource {e}: must be an object")
        coeffs = _require(entry, "coeffs", list, f"resource {e}")
        parsed = tuple(parse_rational(c) if isinstance(c, str) else _bad_coeff(e) for c in coeffs)
        if len(parsed) < degree + 1:
            parsed = parsed + (Fraction(0),) * (degree + 1 - len(parsed))
        latencies.append(LatencyPoly(parsed))

    network = None
    if "graph" in doc and doc["graph"] is not None:
        graph = doc["graph"]
        if not isinstance(graph, dict):
            raise InputError("graph must be an object")
        nodes = _require(graph, "nodes", int, "graph")
        raw_edges = _require(graph, "edges", list, "graph")
        edges = []
        for item in raw_edges:
            if (
                not isinstance(item, list)
                or len(item) != 3
                or not all(isinstance(x, int) for x in item)
            ):
                raise InputError("graph edges must be [tail, head, resource] triples")
            edges.append((item[0], item[1], item[2]))
        network = Network(nodes, tuple(edges))

    players = _require(doc, "players", list, "game")
    weights = []
    strategy_sets = []
    for u, entry in enumerate(players):
        if not isinstance(entry, dict):
            raise InputError(f"player {u}: must be an object")
        weights.append(parse_rational(_require(entry, "weight", str, f"player {u}")))
        strategies = entry.get("strategies")
        if isinstance(strategies, dict):
            od = _require(strategies, "od", list, f"player {u}")
            if len(od) != 2 or not all(isinstance(x, int) for x in od):
                raise InputError(f"player {u}: od must be a [origin, destination] pair")
            strategy_sets.append(PathStrategies(od[0], od[1]))
        elif isinstance(strategies, list):
            strategy_sets.append(
                ExplicitStrategies(
                    tuple(_strategy_from_json(s, f"player {u}") for s in strategies)
                )
            )
        else:
            raise InputError(f"player {u}: strategies must be a list or an od object")

    return Game(
        weights=tuple(weights),
        latencies=tuple(latencies),
        strategy_sets=tuple(strategy_sets),
        degree=degree,
        weight_bound=weight_bound,
        ratio_bound=ratio_bound,
        network=network,
    )


def _bad_coeff(e: int):
    raise InputError(f"resource {e}: coefficients must be 'num/den' strings")


# -- profiles ------------------------------------------------------------------


def profile_to_dict(profile: Profile) -> dict:
    return {"strategies": [list(s) for s in profile]}


def profile_from_dict(doc: Any) -> Profile:
    if not isinstance(doc, dict):
        raise InputError("profile document must be a JSON object")
    strategies = _require(doc, "strategies", list, "profile")
    return tuple(_strategy_from_json(s, "profile") for s in strategies)


# -- generator specs -----------------------------------------------------------


def genspec_to_dict(spec: GenSpec) -> dict:
    doc: dict[str, Any] = {
        "seed": spec.seed,
        "N": spec.num_players,
        "E": spec.num_resources,
        "d": spec.degree,
        "W": format_rational(spec.weight_bound),
        "A": format_rational(spec.ratio_bound),
        "symmetric": spec.symmetric,
        "strategies_per_player": spec.strategies_per_player,
        "strategy_size_range": list(spec.strategy_size_range),
        "network": None,
    }
    if spec.network is not None:
        doc["network"] = {
            "nodes": spec.network.node_count,
            "edge_probability": format_rational(spec.network.edge_probability),
            "od_policy": spec.network.od_policy,
        }
    return doc


def genspec_from_dict(doc: Any) -> GenSpec:
    if not isinstance(doc, dict):
        raise InputError("spec document must be a JSON object")
    size_range = _require(doc, "strategy_size_range", list, "spec")
    if len(size_range) != 2 or not all(isinstance(x, int) for x in size_range):
        raise InputError("spec: strategy_size_range must be [min, max]")
    network = None
    if doc.get("network") is not None:
        raw = doc["network"]
        if not isinstance(raw, dict):
            raise InputError("spec: network must be an object or null")
        network = NetworkSpec(
            node_count=_require(raw, "nodes", int, "spec network"),
            edge_probability=parse_rational(
                _require(raw, "edge_probability", str, "spec network")
            ),
            od_policy=raw.get("od_policy", "shared"),
        )
    return GenSpec(
        seed=_require(doc, "seed", int, "spec"),
        num_players=_require(doc, "N", int, "spec"),
        num_resources=_require(doc, "E", int, "spec"),
        degree=_require(doc, "d", int, "spec"),
        weight_bound=parse_rational(_require(doc, "W", str, "spec")),
        ratio_bound=parse_rational(_require(doc, "A", str, "spec")),
        symmetric=_require(doc, "symmetric", bool, "spec"),
        strategies_per_player=_require(doc, "strategies_per_player", int, "spec"),
        strategy_size_range=(size_range[0], size_range[1]),
        network=network,
    )


# -- load/save wrappers ---------------------------------------------------------


def _dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def load_game(path: str | Path) -> Game:
    return game_from_dict(load_json(path))


def save_game(game: Game, path: str | Path) -> None:
    Path(path).write_text(_dump_json(game_to_dict(game)))


def load_profile(path: str | Path) -> Profile:
    return profile_from_dict(load_json(path))


def save_profile(profile: Profile, path: str | Path) -> None:
    Path(path).write_text(_dump_json(profile_to_dict(profile)))


def load_genspec(path: str | Path) -> GenSpec:
    return genspec_from_dict(load_json(path))


def save_genspec(spec: GenSpec, path: str | Path) -> None:
    Path(path).write_text(_dump_json(genspec_to_dict(spec)))


# -- traces ----------------------------------------------------------------------

TRACE_COLUMNS = (
    "t",
    "mover",
    "old_strategy",
    "new_strategy",
    "cost_before",
    "cost_after",
    "potential_before",
    "potential_after",
    "improving_set_size",
)


def _strategy_cell(strategy: Strategy) -> str:
    return " ".join(str(e) for e in strategy)


def trace_to_csv(result: RunResult) -> str:
    """Render a run's trace as CSV; rationals as num/den, strategies id-lists."""
    out = io.StringIO()
    out.write(",".join(TRACE_COLUMNS) + "\n")
    for entry in result.trace:
        row = (
            str(entry.t),
            str(entry.mover),
            _strategy_cell(entry.old_strategy),
            _strategy_cell(entry.new_strategy),
            format_rational(entry.mover_cost_before),
            format_rational(entry.mover_cost_after),
            format_rational(entry.potential_before),
            format_rational(entry.potential_after),
            str(entry.improving_set_size),
        )
        out.write(",".join(row) + "\n")
    return out.getvalue()


def save_trace(result: RunResult, path: str | Path) -> None:
    Path(path).write_text(trace_to_csv(result))
