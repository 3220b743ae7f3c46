"""Approximate pure Nash equilibria for weighted congestion games.

Exact-arithmetic solvers based on best-response dynamics, with brute-force
oracles, certified iteration bounds, seeded instance generation, and a CLI.
"""

from .best_response import (
    BestResponse,
    CostModel,
    best_response,
    best_response_explicit,
    best_response_path,
    profile_costs,
)
from .dynamics import (
    Algorithm,
    BoundsReport,
    LemmaReport,
    RunConfig,
    RunResult,
    Termination,
    TraceEntry,
    TraceLevel,
    bounds_report,
    check_per_step_lemmas,
    default_initial_profile,
    is_approx_pne,
    run_alg1,
    run_alg2,
    run_dynamics,
)
from .errors import BudgetExceededError, DefectError, GenerationError, InputError
from .game import (
    ExplicitStrategies,
    Game,
    GameParams,
    LatencyPoly,
    Network,
    PathStrategies,
    Profile,
    Strategy,
    ValidationReport,
    deviate,
    derive_params,
    player_cost,
    resource_load,
    total_cost,
    validate_game,
)
from .generate import GenSpec, NetworkSpec, gen_game, gen_network_game, gen_random_game
from .oracle import (
    OracleLimits,
    PropertyReport,
    brute_max_player_cost,
    brute_min_potential,
    brute_verify_approx_pne,
    enumerate_profiles,
    psi_by_enumeration,
    verify_potential_properties,
)
from .potentials import (
    PotentialKind,
    PotentialValue,
    evaluate_potential,
    potential_approx,
    potential_psi_hat,
    potential_upper_bounds,
    rho_star,
)
from .psi import (
    PsiTable,
    RootBoundResult,
    check_insertion_root_bound,
    psi,
    psi_hat_player_cost,
    psi_hat_resource_latency,
    psi_hat_total_cost,
    psi_insert,
    psi_remove,
)

__version__ = "0.1.0"
