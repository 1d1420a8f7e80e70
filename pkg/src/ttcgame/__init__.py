"""Competition between LLM providers over test-time compute.

Providers pick a compute level per task; users split between providers by
perfect or logit (bounded-rational) choice on quality minus price. The
package covers the resulting game (utilities, welfare, potential, Nash
checks, exhaustive search, better-response dynamics, price of anarchy) and
the second-price auction that restores efficiency.
"""
from .auction import (
    AuctionOutcome,
    Bid,
    DominanceReport,
    auction_equilibrium,
    dominant_bid,
    run_auction,
    verify_dominant_strategy,
)
from .dynamics import Converged, DynamicsConfig, DynamicsStep, DynamicsTrace, Mode, run, step
from .errors import (
    BudgetExceededError,
    DomainError,
    GameError,
    InvalidArgumentError,
    ParseError,
    TieWarning,
    ValidationError,
    ValidationWarning,
)
from .game import (
    NASH_TOL,
    DominantPrediction,
    EquilibriumWitness,
    GameInstance,
    PotentialConfig,
    best_response,
    default_potential_config,
    is_nash,
    min_value_gap,
    potential,
    rational_equilibrium_prediction,
    social_welfare,
    utilities,
    utility,
)
from .ingestion import BuildConfig, build_game, fixture_path, load_evaluation_csv, load_pricing_json
from .provider import (
    ComputeLevel,
    ProviderProfile,
    ValidationMode,
    max_user_value,
    profit,
    user_value,
    validate_profile,
    welfare_contribution,
    welfare_optimal_level,
)
from .search import enumerate_equilibria, max_social_welfare
from .shares import (
    PERFECT,
    ShareVector,
    shares,
    softmax_concentration_bound,
    softmax_weighted_lower_bound,
)
from .welfare import BoundReport, PoAReport, SweepRow, beta_sweep, poa_lower_bound, price_of_anarchy

__version__ = "0.1.0"
