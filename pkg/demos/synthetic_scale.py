#!/usr/bin/env python3
"""Exhaustive search over the full nine-provider, seven-level market.

There are 7**9 = 40,353,607 profiles. The search is vectorized in chunks
and can spread over processes (``--workers`` or TTCGAME_WORKERS).
"""
import argparse
import time
from collections import Counter

from ttcgame import enumerate_equilibria, fixture_path, max_social_welfare
from ttcgame.ingestion import BuildConfig, build_game, load_evaluation_csv, load_pricing_json


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--beta", type=float, default=1000.0)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()

    records = load_evaluation_csv(fixture_path("synthetic_9x7.csv"))
    pricing = load_pricing_json(fixture_path("synthetic_9x7_pricing.json"))
    game = build_game(records, pricing, BuildConfig.for_dataset("gsm8k", v0=0.0, beta=args.beta))
    print(f"{game.n} providers, {game.n_profiles:,} profiles")

    t0 = time.perf_counter()
    best, sw = max_social_welfare(game, workers=args.workers)
    t1 = time.perf_counter()
    print(f"max welfare {sw:.4f} at {game.labels(best)} ({t1 - t0:.1f} s)")

    eqs = enumerate_equilibria(game, workers=args.workers)
    t2 = time.perf_counter()
    print(f"{len(eqs):,} pure equilibria ({t2 - t1:.1f} s)")
    # at high beta losing providers barely sell, so their level hardly matters
    for i, p in enumerate(game.providers):
        used = Counter(e[i] for e in eqs)
        print(f"  {p.id:<14} levels used: {sorted(used)}")


if __name__ == "__main__":
    main()
