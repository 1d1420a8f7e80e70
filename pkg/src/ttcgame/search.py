"""Exhaustive scans over the strategy space.

Profiles are visited in lexicographic order (provider 0 most significant).
The scan runs over the levels of providers ``0..N-2`` in chunks and
broadcasts over the last provider, so each chunk costs one pass over the
prefix plus an ``(M, K_last)`` block. For equilibria, the last provider's
best-response condition prunes candidates before the full deviation check.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import _kernels
from .errors import BudgetExceededError
from .game import NASH_TOL, GameInstance, social_welfare

__all__ = ["DEFAULT_BUDGET", "enumerate_equilibria", "max_social_welfare", "resolve_budget"]

DEFAULT_BUDGET = 10**8
CHUNK = 1 << 16
# loose pre-filter; the exact NASH_TOL test is re-applied on every candidate
_PREFILTER = 1e-9


def resolve_budget(budget=None) -> int:
    if budget is None:
        budget = int(float(os.environ.get("TTCGAME_BUDGET", DEFAULT_BUDGET)))
    return int(budget)


def resolve_workers(workers=None) -> int:
    if workers is None:
        workers = int(os.environ.get("TTCGAME_WORKERS", 1))
    return max(1, int(workers))


def _check_budget(game, budget):
    budget = resolve_budget(budget)
    if game.n_profiles > budget:
        raise BudgetExceededError(game.n_profiles, budget)


def _prefix_shape(game):
    return game.shape[:-1]


def _scan_equilibria(game, start, stop, tol):
    t = game.tables
    shape = _prefix_shape(game)
    kl = game.shape[-1]
    found = []
    for lo in range(start, stop, CHUNK):
        hi = min(lo + CHUNK, stop)
        prefix = _kernels.digits(lo, hi, shape)
        u, _ = _kernels.last_provider_scan(t, prefix)
        near = u >= u.max(axis=1, keepdims=True) - _PREFILTER
        rows, ks = np.nonzero(near)
        if rows.size == 0:
            continue
        L = np.concatenate([prefix[rows], ks[:, None]], axis=1)
        ok = _kernels.nash_mask(t, L, tol)
        found.append(L[ok])
    if not found:
        return np.empty((0, game.n), dtype=np.int64)
    return np.concatenate(found)


def _scan_welfare(game, start, stop):
    t = game.tables
    shape = _prefix_shape(game)
    kl = game.shape[-1]
    best_val, best_idx = -math.inf, None
    for lo in range(start, stop, CHUNK):
        hi = min(lo + CHUNK, stop)
        prefix = _kernels.digits(lo, hi, shape)
        _, sw = _kernels.last_provider_scan(t, prefix)
        flat = int(np.argmax(sw))
        val = float(sw.flat[flat])
        if val > best_val:
            r, k = divmod(flat, kl)
            best_val, best_idx = val, tuple(int(x) for x in prefix[r]) + (int(k),)
    return best_val, best_idx


def _ranges(total, workers):
    step = -(-total // workers)
    return [(lo, min(lo + step, total)) for lo in range(0, total, step)]


def _run(fn, game, workers, *extra):
    total = math.prod(_prefix_shape(game))
    workers = min(resolve_workers(workers), total)
    if workers == 1:
        return [fn(game, 0, total, *extra)]
    parts = _ranges(total, workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, game, lo, hi, *extra) for lo, hi in parts]
        return [f.result() for f in futures]


def enumerate_equilibria(game: GameInstance, budget=None, workers=None, tol=NASH_TOL) -> list:
    """All pure Nash equilibria, lexicographically ordered."""
    _check_budget(game, budget)
    chunks = _run(_scan_equilibria, game, workers, tol)
    return [tuple(int(x) for x in row) for part in chunks for row in part]


def max_social_welfare(game: GameInstance, budget=None, workers=None):
    """``(profile, welfare)`` maximizing welfare; first in lexicographic order on ties."""
    _check_budget(game, budget)
    best_val, best_idx = -math.inf, None
    for val, idx in _run(_scan_welfare, game, workers):
        if val > best_val:
            best_val, best_idx = val, idx
    return best_idx, social_welfare(game, best_idx)
