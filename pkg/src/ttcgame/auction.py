"""Reverse second-price scoring auction for serving a user's task.

Each provider bids ``(quality, price)`` for one of its compute levels. The
bid with the highest offered value ``quality - price`` wins, and the user
pays the winner its quality minus the runner-up's offered value. The payment
does not depend on the winner's own price, so bidding the welfare-optimal
level at cost is a dominant strategy.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, InvalidArgumentError
from .game import GameInstance
from .provider import ProviderProfile, welfare_optimal_level

__all__ = [
    "Bid",
    "AuctionOutcome",
    "dominant_bid",
    "run_auction",
    "auction_equilibrium",
    "DominanceReport",
    "verify_dominant_strategy",
]


@dataclass(frozen=True)
class Bid:
    provider: int
    level: int
    quality: float
    price: float

    def __post_init__(self):
        if self.quality < 0 or self.price < 0:
            raise InvalidArgumentError(f"bid of provider {self.provider}: quality and price must be >= 0")

    @property
    def value(self) -> float:
        return self.quality - self.price


@dataclass(frozen=True)
class AuctionOutcome:
    winner: int
    payment: float
    winner_utility: float
    user_net_value: float
    welfare: float
    ordering: tuple
    winner_price: float = field(default=float("nan"))

    def utility(self, provider) -> float:
        return self.winner_utility if provider == self.winner else 0.0


def dominant_bid(profile: ProviderProfile, provider: int = 0) -> Bid:
    """Welfare-optimal level, bid at its generation cost."""
    level, _ = welfare_optimal_level(profile)
    k = level.ordinal
    return Bid(provider, k, float(profile.quality[k]), float(profile.cost[k]))


def run_auction(bids: Sequence[Bid], costs: Sequence[float]) -> AuctionOutcome:
    """Allocate to the best offered value; charge the second price.

    ``costs[j]`` is the generation cost behind ``bids[j]``.
    """
    bids = list(bids)
    if len(bids) < 2:
        raise InvalidArgumentError("auction requires at least 2 bids")
    if len(costs) != len(bids):
        raise InvalidArgumentError("one cost per bid is required")
    values = np.array([b.value for b in bids])
    order = tuple(int(j) for j in np.argsort(-values, kind="stable"))
    first, second = order[0], order[1]
    if values[first] == values[second]:
        tied = [bids[j].provider for j in np.flatnonzero(values == values[first])]
        raise DomainError(f"offered-value tie between providers {tied}")
    win = bids[first]
    second_value = float(values[second])
    payment = win.quality - second_value
    cost = float(costs[first])
    return AuctionOutcome(
        winner=win.provider,
        payment=payment,
        winner_utility=payment - cost,
        # q - payment in exact arithmetic
        user_net_value=second_value,
        welfare=win.quality - cost,
        ordering=tuple(bids[j].provider for j in order),
        winner_price=win.price,
    )


def auction_equilibrium(game: GameInstance):
    """Dominant bids of every provider and the resulting outcome."""
    if game.n < 2:
        raise InvalidArgumentError("auction requires ≥ 2 providers")
    bids = [dominant_bid(p, i) for i, p in enumerate(game.providers)]
    costs = [game.providers[b.provider].cost[b.level] for b in bids]
    return bids, run_auction(bids, costs)


@dataclass
class DominanceReport:
    provider: int
    checked: int = 0
    skipped_ties: int = 0
    counterexamples: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def _opponent_bid(j, value):
    # any (q, p) with q - p = value; only the offered value matters to the bidder
    q = max(value, 0.0) + 1.0
    return Bid(j, 0, q, q - value)


def _utility(bids, costs, i):
    try:
        out = run_auction(bids, costs)
    except DomainError:
        return None
    return out.utility(i)


def price_grid(cost, eps=1e-3, points=5):
    """Price deviations around ``cost``: below, just below, at, just above, above."""
    if points != 5:
        return np.linspace(0.0, 2.0 * cost, points)
    return np.array([0.5 * cost, cost - eps, cost, cost + eps, 1.5 * cost]).clip(min=0.0)


def verify_dominant_strategy(
    game: GameInstance, i: int, opponent_values: Sequence[float], eps=1e-3, points=5, tol=1e-12
) -> DominanceReport:
    """Check the dominant bid of provider ``i`` against every deviation.

    Opponents' bids range over the product of ``opponent_values`` (one
    offered value per opponent). Provider ``i`` deviates over all its levels
    times a price grid around each level's cost. Configurations where a bid
    ties with an opponent are skipped, since the payment rule is undefined.
    """
    if not 0 <= i < game.n:
        raise InvalidArgumentError(f"provider index {i} out of range")
    if game.n < 2:
        raise InvalidArgumentError("auction requires ≥ 2 providers")
    me = game.providers[i]
    best = dominant_bid(me, i)
    best_cost = float(me.cost[best.level])
    report = DominanceReport(i)
    others = [j for j in range(game.n) if j != i]
    for combo in itertools.product(opponent_values, repeat=len(others)):
        opp = [_opponent_bid(j, v) for j, v in zip(others, combo)]
        opp_costs = [b.price for b in opp]
        u_star = _utility([best] + opp, [best_cost] + opp_costs, i)
        if u_star is None:
            report.skipped_ties += 1
            continue
        for k in range(len(me)):
            for p in price_grid(float(me.cost[k]), eps, points):
                dev = Bid(i, k, float(me.quality[k]), float(p))
                u = _utility([dev] + opp, [float(me.cost[k])] + opp_costs, i)
                if u is None:
                    report.skipped_ties += 1
                    continue
                report.checked += 1
                if u > u_star + tol:
                    report.counterexamples.append(
                        {"opponents": combo, "level": k, "price": float(p),
                         "utility": u, "dominant_utility": u_star}
                    )
    return report
