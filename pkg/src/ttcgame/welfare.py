"""Price of anarchy, its leading-order lower bound, and rationality sweeps."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .dynamics import DynamicsConfig, run
from .errors import DomainError, InvalidArgumentError
from .game import GameInstance, _ranked_alternatives, is_nash, social_welfare
from .provider import welfare_optimal_level
from .search import max_social_welfare
from .shares import check_beta

__all__ = [
    "PoAReport",
    "BoundReport",
    "SweepRow",
    "price_of_anarchy",
    "poa_lower_bound",
    "beta_sweep",
]


@dataclass(frozen=True)
class PoAReport:
    poa: float
    welfare_at_equilibrium: float
    max_welfare: float
    welfare_maximizer: tuple
    equilibrium: tuple

    @property
    def inefficiency(self) -> float:
        return self.poa - 1.0


def price_of_anarchy(game: GameInstance, equilibrium, budget=None, workers=None) -> PoAReport:
    """Exact ratio of maximum welfare to welfare at ``equilibrium``."""
    eq = game.check_profile(equilibrium)
    witness = is_nash(game, eq)
    if not witness:
        raise InvalidArgumentError(
            f"{eq} is not a Nash equilibrium: provider {witness.violating_provider} "
            f"gains {witness.gain:.3g} by moving to level {witness.improving_level}"
        )
    sw = social_welfare(game, eq)
    if not sw > 0:
        raise DomainError(f"welfare at equilibrium is {sw}; the ratio is undefined")
    best, max_sw = max_social_welfare(game, budget, workers)
    return PoAReport(max_sw / sw, sw, max_sw, best, eq)


@dataclass(frozen=True)
class BoundReport:
    """Leading term ``1 + delta_sw / w_star`` of the PoA lower bound.

    ``delta_v`` is the smaller of the top-two value gaps at the welfare-optimal
    profile and at the equilibrium; the neglected corrections decay like
    ``exp(-beta * delta_v)``.
    """

    leading_bound: float
    delta_sw: float
    w_star: float
    delta_v: float
    welfare_optimal_profile: tuple
    top_at_optimum: int
    top_at_equilibrium: int

    def correction_scale(self, beta) -> float:
        return math.exp(-beta * self.delta_v) if math.isfinite(beta) else 0.0


def _top_two(game, profile):
    alts = _ranked_alternatives(game, game.values_at(profile))
    if len(alts) > 1 and alts[0][0] == alts[1][0]:
        raise DomainError(f"value tie at the top of {profile}")
    providers = [a for a in alts if a[1] is not None]
    gap = alts[0][0] - alts[1][0] if len(alts) > 1 else math.inf
    return providers[0][1], gap


def poa_lower_bound(game: GameInstance, equilibrium) -> BoundReport:
    eq = game.check_profile(equilibrium)
    if not is_nash(game, eq):
        raise InvalidArgumentError(f"{eq} is not a Nash equilibrium")
    star = tuple(welfare_optimal_level(p)[0].ordinal for p in game.providers)
    top_star, gap_star = _top_two(game, star)
    top_eq, gap_eq = _top_two(game, eq)
    w_star = float(game.providers[top_star].welfare[star[top_star]])
    w_eq = float(game.providers[top_eq].welfare[eq[top_eq]])
    if not w_star > 0:
        raise DomainError(f"top welfare contribution at the optimum is {w_star}")
    delta_sw = w_star - w_eq
    return BoundReport(
        leading_bound=1.0 + delta_sw / w_star,
        delta_sw=delta_sw,
        w_star=w_star,
        delta_v=min(gap_star, gap_eq),
        welfare_optimal_profile=star,
        top_at_optimum=top_star,
        top_at_equilibrium=top_eq,
    )


@dataclass(frozen=True)
class SweepRow:
    beta: float
    inefficiency: float
    converged: bool
    iterations: int
    equilibrium: tuple | None


def beta_sweep(game: GameInstance, betas, config: DynamicsConfig = DynamicsConfig()) -> list:
    """Run the dynamics at each ``beta`` and report ``PoA - 1`` at the endpoint.

    Non-converged runs and equilibria with non-positive welfare report
    ``nan`` and ``inf`` respectively.
    """
    rows = []
    for beta in betas:
        g = game.replace(beta=check_beta(beta))
        trace = run(g, config)
        if trace.converged:
            ineff = trace.final.inefficiency
        else:
            ineff = float("nan")
        rows.append(SweepRow(g.beta, ineff, trace.converged, trace.iterations, trace.equilibrium))
    return rows
