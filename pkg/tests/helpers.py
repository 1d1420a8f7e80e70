"""Shared test fixtures: game generators and independent reference oracles.

The oracles re-derive shares, utilities, welfare and the potential from the
model definitions in high precision (mpmath), without touching the package's
vectorized kernels.
"""
import itertools
import math

import mpmath
import numpy as np

from ttcgame import GameInstance, ProviderProfile, build_game, fixture_path
from ttcgame.ingestion import BuildConfig, load_evaluation_csv, load_pricing_json

mpmath.mp.dps = 50

WORKED_Q = [[1.4, 1.8], [1.0, 1.9]]
WORKED_P = [[0.3125, 1.25], [0.625, 12.5]]
WORKED_C = [[0.25, 1.0], [0.5, 10.0]]


def worked_example_game(v0=None, beta=math.inf):
    providers = tuple(
        ProviderProfile(f"provider-{i + 1}", q, p, c, levels=("Low", "High"))
        for i, (q, p, c) in enumerate(zip(WORKED_Q, WORKED_P, WORKED_C))
    )
    return GameInstance(providers, v0=v0, beta=beta)


def fixture_game(name, **kw):
    cfg = {"worked_example": 0.02, "single_provider": 0.02}
    records = load_evaluation_csv(fixture_path(f"{name}.csv"))
    pricing = load_pricing_json(fixture_path(f"{name}_pricing.json"))
    if name in cfg:
        config = BuildConfig(value_per_accuracy_point=cfg[name], **kw)
    else:
        config = BuildConfig.for_dataset("gsm8k", **kw)
    return build_game(records, pricing, config)


def random_strict_profile(rng, k, name="p"):
    """Quality non-decreasing, cost positive, profit strictly increasing."""
    cost = np.sort(rng.uniform(0.05, 1.0, k))
    while np.any(np.diff(cost) <= 1e-6):
        cost = np.sort(rng.uniform(0.05, 1.0, k))
    margin = rng.uniform(0.1, 0.6)
    quality = np.sort(rng.uniform(0.3, 2.5, k))
    return ProviderProfile(name, quality, cost * (1 + margin), cost)


def random_strict_game(rng, n_max=3, k_max=4, v0=None, beta=math.inf, n_min=1, min_gap=0.0):
    """Random strict-mode game; retried until cross-provider values differ by ``min_gap``."""
    from ttcgame import min_value_gap

    while True:
        n = int(rng.integers(n_min, n_max + 1))
        providers = tuple(
            random_strict_profile(rng, int(rng.integers(1, k_max + 1)), f"p{i}") for i in range(n)
        )
        g = GameInstance(providers, v0=v0, beta=beta)
        if n == 1 or min_value_gap(g) > max(min_gap, 0.0):
            return g


def profiles(game):
    return itertools.product(*(range(k) for k in game.shape))


# --- high-precision reference model -----------------------------------------

def ref_values(game, prof):
    return [mpmath.mpf(float(p.quality[k])) - mpmath.mpf(float(p.price[k]))
            for p, k in zip(game.providers, prof)]


def ref_shares(game, prof):
    """(provider shares, abstention share) as mpf."""
    v = ref_values(game, prof)
    v0 = None if game.v0 is None else mpmath.mpf(game.v0)
    n = len(v)
    if math.isinf(game.beta):
        top = max(v)
        if v0 is not None and v0 > top:
            return [mpmath.mpf(0)] * n, mpmath.mpf(1)
        win = min(i for i in range(n) if v[i] == top)
        return [mpmath.mpf(1 if i == win else 0) for i in range(n)], mpmath.mpf(0)
    b = mpmath.mpf(game.beta)
    alts = list(v) + ([v0] if v0 is not None else [])
    m = max(alts)
    e = [mpmath.exp(b * (x - m)) for x in alts]
    z = mpmath.fsum(e)
    s = [x / z for x in e]
    return s[:n], (s[n] if v0 is not None else mpmath.mpf(0))


def ref_utilities(game, prof):
    s, _ = ref_shares(game, prof)
    return [s[i] * (mpmath.mpf(float(p.price[k])) - mpmath.mpf(float(p.cost[k])))
            for i, (p, k) in enumerate(zip(game.providers, prof))]


def ref_welfare(game, prof):
    s, s0 = ref_shares(game, prof)
    sw = mpmath.fsum(s[i] * (mpmath.mpf(float(p.quality[k])) - mpmath.mpf(float(p.cost[k])))
                     for i, (p, k) in enumerate(zip(game.providers, prof)))
    if game.v0 is not None:
        sw += s0 * mpmath.mpf(game.v0)
    return sw


def ref_best_gain(game, prof, i):
    """Largest utility gain provider ``i`` can get by a unilateral move."""
    u0 = ref_utilities(game, prof)[i]
    best = mpmath.mpf(0)
    for k in range(game.shape[i]):
        alt = list(prof)
        alt[i] = k
        best = max(best, ref_utilities(game, alt)[i] - u0)
    return best


def ref_max_welfare(game):
    return max(ref_welfare(game, prof) for prof in profiles(game))
