#!/usr/bin/env python3
"""Better-response dynamics on the synthetic nine-model market.

Starting from everyone at the lowest compute level, one provider at a time
steps toward its best response. The potential rises on every profitable
move, so the process settles at a pure equilibrium.
"""
import argparse

from ttcgame import DynamicsConfig, fixture_path, run
from ttcgame.ingestion import BuildConfig, build_game, load_evaluation_csv, load_pricing_json


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--beta", type=float, default=1000.0)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--mode", choices=["paper_step", "strict_best_response"], default="paper_step")
    args = ap.parse_args()

    records = load_evaluation_csv(fixture_path("synthetic_9x7.csv"))
    pricing = load_pricing_json(fixture_path("synthetic_9x7_pricing.json"))
    game = build_game(records, pricing, BuildConfig.for_dataset("gsm8k", v0=0.0, beta=args.beta))

    trace = run(game, DynamicsConfig(mode=args.mode, seed=args.seed))
    names = [p.id for p in game.providers]
    print(f"{'t':>3}  {'mover':<14} {'potential':>12} {'welfare':>9} {'ineff':>8}")
    for t, s in enumerate(trace.steps):
        mover = names[s.mover] if s.mover is not None else "-"
        print(f"{t:>3}  {mover:<14} {s.potential:>12.4f} {s.welfare:>9.4f} {s.inefficiency:>8.4f}")

    if trace.converged:
        final = trace.final
        print(f"\nConverged after {trace.iterations} moves.")
        for name, p, k in zip(names, game.providers, trace.equilibrium):
            print(f"  {name:<14} {p.levels[k].label}")
        print(f"Equilibrium welfare {final.welfare:.4f} vs best {trace.max_welfare:.4f} "
              f"({100 * final.inefficiency:.2f}% inefficiency)")
    else:
        print(f"\nNo equilibrium within {trace.iterations} moves.")


if __name__ == "__main__":
    main()
