#!/usr/bin/env python3
"""How inefficiency changes as users get more price/quality sensitive.

Runs the dynamics once per rationality level and reports the welfare gap at
the equilibrium reached. Small beta means noisy choices; large beta means
users almost always take the best offer.
"""
import argparse

import numpy as np

from ttcgame import DynamicsConfig, beta_sweep, fixture_path
from ttcgame.ingestion import BuildConfig, build_game, load_evaluation_csv, load_pricing_json


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fixture", default="worked_example", choices=["worked_example", "synthetic_9x7"])
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    records = load_evaluation_csv(fixture_path(f"{args.fixture}.csv"))
    pricing = load_pricing_json(fixture_path(f"{args.fixture}_pricing.json"))
    if args.fixture == "worked_example":
        cfg = BuildConfig(0.02, v0=0.0)
        betas = np.geomspace(1.0, 1e5, 11)
    else:
        cfg = BuildConfig.for_dataset("gsm8k", v0=0.0)
        betas = [100.0, 300.0, 1000.0, 3000.0]  # each point scans every profile for max welfare
    game = build_game(records, pricing, cfg)

    rows = beta_sweep(game, betas, DynamicsConfig(seed=args.seed))
    print(f"{'beta':>10}  {'inefficiency':>12}  iters  equilibrium")
    for r in rows:
        eq = game.labels(r.equilibrium) if r.converged else "not converged"
        print(f"{r.beta:>10.4g}  {r.inefficiency:>12.4%}  {r.iterations:>5}  {eq}")


if __name__ == "__main__":
    main()
