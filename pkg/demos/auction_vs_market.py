#!/usr/bin/env python3
"""Compare the pay-for-compute market with a reverse second-price auction.

In the auction each provider bids its welfare-maximizing level priced at
cost; the best value wins and is paid quality minus the runner-up's value.
Truthful bidding is dominant, so the most efficient offer is served.
"""
import numpy as np

from ttcgame import (
    DynamicsConfig,
    auction_equilibrium,
    fixture_path,
    max_social_welfare,
    run,
    verify_dominant_strategy,
)
from ttcgame.ingestion import BuildConfig, build_game, load_evaluation_csv, load_pricing_json
from ttcgame.serialize import market_summary


def main():
    records = load_evaluation_csv(fixture_path("worked_example.csv"))
    pricing = load_pricing_json(fixture_path("worked_example_pricing.json"))
    game = build_game(records, pricing, BuildConfig(0.02))

    bids, out = auction_equilibrium(game)
    for b in bids:
        print(f"bid from {game.providers[b.provider].id}: level "
              f"{game.providers[b.provider].levels[b.level].label}, q={b.quality:.4f}, "
              f"p={b.price:.4f}, value={b.value:.4f}")
    print(f"winner {game.providers[out.winner].id}, paid {out.payment:.4f}, "
          f"profit {out.winner_utility:.4f}, user keeps {out.user_net_value:.4f}")

    trace = run(game, DynamicsConfig())
    market = market_summary(game, trace.equilibrium)
    _, best = max_social_welfare(game)
    print(f"\n{'':<18}{'market':>10}{'auction':>10}")
    auction_side = {
        "user_value": out.user_net_value,
        "price": out.payment,
        "provider_utility": out.winner_utility,
        "social_welfare": out.welfare,
    }
    for key, val in auction_side.items():
        print(f"{key:<18}{market[key]:>10.4f}{val:>10.4f}")
    print(f"{'PoA':<18}{best / market['social_welfare']:>10.4f}{best / out.welfare:>10.4f}")

    # spot-check that no deviation beats the truthful bid
    grid = np.linspace(-0.5, 1.5, 9)
    reports = [verify_dominant_strategy(game, i, grid) for i in range(game.n)]
    print(f"\n{sum(r.checked for r in reports)} deviating bids checked, "
          f"{sum(len(r.counterexamples) for r in reports)} beat the truthful bid")


if __name__ == "__main__":
    main()
