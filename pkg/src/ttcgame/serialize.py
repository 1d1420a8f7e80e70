"""JSON and CSV encodings of traces, sweeps, equilibria and auction outcomes.

JSON has no infinities or NaN, so non-finite floats are written as ``null``.
An infinite ``beta`` (perfectly rational users) is written as the string
``"inf"``. CSV cells use the shortest round-trip float repr, so values read
back bit-exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math
from importlib import resources

import numpy as np

from . import _kernels
from .game import GameInstance

__all__ = [
    "SWEEP_COLUMNS",
    "COMPARISON_ROWS",
    "clean",
    "schema",
    "dumps",
    "csv_text",
    "game_header",
    "trace_to_dict",
    "trace_columns",
    "trace_rows",
    "sweep_rows",
    "equilibria_to_dict",
    "market_summary",
    "auction_to_dict",
]

SWEEP_COLUMNS = ("beta", "inefficiency", "converged", "iterations", "equilibrium_levels")
COMPARISON_ROWS = ("user_value", "price", "provider_utility", "social_welfare")


def clean(obj):
    """Plain JSON-ready structure; non-finite floats become ``None``."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def schema(name) -> dict:
    """Bundled JSON schema for an output document (trace, summary, ...)."""
    text = (resources.files("ttcgame") / "schemas" / f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def dumps(obj) -> str:
    return json.dumps(clean(obj), indent=2, allow_nan=False, ensure_ascii=False) + "\n"


def _cell(x):
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return repr(float(x))
    return str(x)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def _beta(beta):
    return "inf" if math.isinf(beta) else float(beta)


def game_header(game: GameInstance) -> dict:
    return {
        "providers": [p.id for p in game.providers],
        "levels": [[lv.label for lv in p.levels] for p in game.providers],
        "beta": _beta(game.beta),
        "v0": game.v0,
    }


def trace_to_dict(game: GameInstance, trace) -> dict:
    out = game_header(game)
    out.update(
        converged=trace.converged,
        iterations=trace.iterations,
        equilibrium=trace.equilibrium,
        max_welfare=trace.max_welfare,
        welfare_maximizer=trace.welfare_maximizer,
        steps=[
            {
                "t": s.t,
                "mover": s.mover,
                "profile": s.profile,
                "shares": s.shares.provider_shares,
                "abstention_share": s.shares.abstention_share,
                "utilities": s.utilities,
                "potential": s.potential,
                "welfare": s.welfare,
                "inefficiency": s.inefficiency,
            }
            for s in trace.steps
        ],
    )
    return out


def trace_columns(n) -> list:
    return (
        ["t", "mover"]
        + [f"level_{i}" for i in range(n)]
        + [f"share_{i}" for i in range(n)]
        + ["abstention_share"]
        + [f"utility_{i}" for i in range(n)]
        + ["potential", "welfare", "inefficiency"]
    )


def trace_rows(trace):
    for s in trace.steps:
        yield (
            [s.t, s.mover, *s.profile]
            + [float(x) for x in s.shares.provider_shares]
            + [float(s.shares.abstention_share)]
            + [float(u) for u in s.utilities]
            + [s.potential, s.welfare, s.inefficiency]
        )


def sweep_rows(rows):
    for r in rows:
        levels = "" if r.equilibrium is None else ";".join(str(k) for k in r.equilibrium)
        yield [r.beta, r.inefficiency, r.converged, r.iterations, levels]


def equilibria_to_dict(game: GameInstance, equilibria, max_welfare, maximizer) -> dict:
    """Per-equilibrium shares, utilities, welfare and PoA, computed in bulk."""
    t = game.tables
    L = np.array(equilibria, dtype=np.int64).reshape(-1, game.n)
    s, s0 = _kernels.shares(t, L)
    u = _kernels.utilities(t, L)
    sw = _kernels.welfare(t, L)
    with np.errstate(divide="ignore", invalid="ignore"):
        poa = np.where(sw > 0, max_welfare / np.where(sw > 0, sw, 1.0), np.inf)
    out = game_header(game)
    out.update(
        count=len(L),
        max_welfare=max_welfare,
        welfare_maximizer=maximizer,
        equilibria=[
            {
                "profile": L[r],
                "shares": s[r],
                "abstention_share": s0[r],
                "utilities": u[r],
                "welfare": sw[r],
                "poa": poa[r],
            }
            for r in range(len(L))
        ],
    )
    return out


def market_summary(game: GameInstance, profile) -> dict:
    """Share-weighted user value, price, total provider utility and welfare."""
    prof = game.check_profile(profile)
    s = game.shares_at(prof)
    w = np.asarray(s.provider_shares, dtype=float)
    idx = list(enumerate(prof))
    value = sum(w[i] * game.providers[i].values[k] for i, k in idx)
    price = sum(w[i] * game.providers[i].price[k] for i, k in idx)
    util = sum(w[i] * game.providers[i].profits[k] for i, k in idx)
    sw = sum(w[i] * game.providers[i].welfare[k] for i, k in idx)
    if game.v0 is not None:
        value += s.abstention_share * game.v0
        sw += s.abstention_share * game.v0
    return {
        "user_value": float(value),
        "price": float(price),
        "provider_utility": float(util),
        "social_welfare": float(sw),
    }


def auction_to_dict(game: GameInstance, bids, outcome, game_equilibrium=None) -> dict:
    best = max(float(p.welfare.max()) for p in game.providers)
    side = {
        "user_value": outcome.user_net_value,
        "price": outcome.payment,
        "provider_utility": outcome.winner_utility,
        "social_welfare": outcome.welfare,
    }
    out = game_header(game)
    out.update(
        bids=[
            {"provider": b.provider, "level": b.level, "quality": b.quality,
             "price": b.price, "offered_value": b.value}
            for b in bids
        ],
        outcome={
            "winner": outcome.winner,
            "payment": outcome.payment,
            "winner_utility": outcome.winner_utility,
            "user_net_value": outcome.user_net_value,
            "welfare": outcome.welfare,
            "ordering": outcome.ordering,
        },
        max_welfare_contribution=best,
        auction_poa=best / outcome.welfare if outcome.welfare > 0 else math.inf,
        game_equilibrium=game_equilibrium,
        comparison={
            "game": market_summary(game, game_equilibrium) if game_equilibrium is not None else None,
            "auction": side,
        },
    )
    return out
