#!/usr/bin/env python3
"""Walk through the two-provider, two-level market by hand.

Provider 1 is cheap to run and decent at Low compute; provider 2 is expensive
at High. Users pick the best value (quality minus price). The walkthrough
shows why provider 1 moves to High even though that lowers welfare.
"""
import numpy as np

from ttcgame import (
    enumerate_equilibria,
    fixture_path,
    max_social_welfare,
    potential,
    price_of_anarchy,
    social_welfare,
    utilities,
)
from ttcgame.ingestion import BuildConfig, build_game, load_evaluation_csv, load_pricing_json


def load():
    records = load_evaluation_csv(fixture_path("worked_example.csv"))
    pricing = load_pricing_json(fixture_path("worked_example_pricing.json"))
    return build_game(records, pricing, BuildConfig(0.02))


def main():
    game = load()
    print("Offers (quality, price, cost, value) per level:")
    for p in game.providers:
        for lv, q, pr, c, v in zip(p.levels, p.quality, p.price, p.cost, p.values):
            print(f"  {p.id:<12} {lv.label:<5} q={q:.4f} p={pr:.4f} c={c:.4f} V={v:+.4f}")

    print("\nEvery profile:")
    for prof in np.ndindex(*game.shape):
        u = utilities(game, prof)
        print(f"  {game.labels(prof)}  utilities={np.round(u, 4).tolist()}  "
              f"SW={social_welfare(game, prof):.4f}  potential={potential(game, prof):.4f}")

    best, sw = max_social_welfare(game)
    eqs = enumerate_equilibria(game)
    print(f"\nWelfare is highest at {game.labels(best)} (SW = {sw:.4f}).")
    print("Pure equilibria:", [game.labels(e) for e in eqs])
    rep = price_of_anarchy(game, eqs[0])
    print(f"At {game.labels(eqs[0])} welfare drops to {rep.welfare_at_equilibrium:.4f}; PoA = {rep.poa:.4f}.")
    print("Provider 1 earns more per query at High, so it raises compute even though")
    print("the extra compute costs more than it adds in quality.")


if __name__ == "__main__":
    main()
