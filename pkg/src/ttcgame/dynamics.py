"""Sequential better-response dynamics.

Every iteration collects the providers that are not best-responding, picks
one uniformly at random with a seeded SplitMix64 stream and moves it:

* ``paper_step``: one ordinal towards its best response;
* ``strict_best_response``: straight to its best response.

The first mode reproduces the published protocol; a single step need not
raise the mover's utility, so convergence is only guaranteed for the
second mode. Both are capped by ``max_iterations``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, InvalidArgumentError
from .game import (
    NASH_TOL,
    GameInstance,
    PotentialConfig,
    default_potential_config,
    is_nash,
    potential,
    social_welfare,
    utilities,
)
from .rng import SplitMix64
from .search import max_social_welfare
from .shares import ShareVector

__all__ = [
    "Mode",
    "DynamicsConfig",
    "DynamicsStep",
    "DynamicsTrace",
    "Converged",
    "initial_profile",
    "improving_providers",
    "step",
    "run",
]


class Mode(str, enum.Enum):
    PAPER_STEP = "paper_step"
    STRICT_BEST_RESPONSE = "strict_best_response"


@dataclass(frozen=True)
class DynamicsConfig:
    mode: Mode = Mode.PAPER_STEP
    seed: int = 0
    max_iterations: int = 10_000
    potential_config: PotentialConfig | None = None
    budget: int | None = None
    workers: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        if int(self.max_iterations) < 1:
            raise InvalidArgumentError("max_iterations must be at least 1")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidArgumentError("seed must be an unsigned 64-bit integer")


@dataclass(frozen=True, eq=False)
class DynamicsStep:
    """State at iteration ``t``.

    ``mover`` is the provider that moves next from ``profile``; it is
    ``None`` on the last recorded step.
    """

    t: int
    mover: int | None
    profile: tuple
    shares: ShareVector
    utilities: np.ndarray
    potential: float
    welfare: float
    inefficiency: float


@dataclass(frozen=True, eq=False)
class DynamicsTrace:
    steps: list
    converged: bool
    equilibrium: tuple | None
    max_welfare: float
    welfare_maximizer: tuple

    @property
    def iterations(self) -> int:
        return len(self.steps) - 1

    @property
    def final(self) -> DynamicsStep:
        return self.steps[-1]


class _ConvergedType:
    def __repr__(self):
        return "Converged"


#: returned by :func:`step` at a Nash equilibrium
Converged = _ConvergedType()


def initial_profile(game: GameInstance) -> tuple:
    return (0,) * game.n


def improving_providers(game: GameInstance, profile, tol=NASH_TOL):
    """Providers whose best response beats their current utility by more than ``tol``.

    Returns a list of ``(provider, best_level)`` in index order.
    """
    prof = game.check_profile(profile)
    L = np.array([prof], dtype=np.int64)
    out = []
    for i, u in _kernels.deviation_utilities(game.tables, L).items():
        u = u[0]
        k = int(np.argmax(u))
        if u[k] - u[prof[i]] > tol:
            out.append((i, k))
    return out


def step(game: GameInstance, profile, config: DynamicsConfig, rng: SplitMix64):
    """Advance one iteration; ``(new_profile, mover)`` or :data:`Converged`.

    ``rng`` is advanced in place.
    """
    prof = game.check_profile(profile)
    movers = improving_providers(game, prof)
    if not movers:
        return Converged
    i, target = movers[rng.below(len(movers))]
    new = list(prof)
    if config.mode is Mode.STRICT_BEST_RESPONSE:
        new[i] = target
    else:
        new[i] += 1 if target > prof[i] else -1
    return tuple(new), i


def _inefficiency(max_sw, sw):
    if sw <= 0:
        return float("inf")
    return max_sw / sw - 1.0


def _record(game, t, mover, prof, pcfg, max_sw):
    sw = social_welfare(game, prof)
    pot = float("nan") if game.perfect and pcfg is None else potential(game, prof, pcfg)
    return DynamicsStep(
        t=t,
        mover=mover,
        profile=prof,
        shares=game.shares_at(prof),
        utilities=utilities(game, prof),
        potential=pot,
        welfare=sw,
        inefficiency=_inefficiency(max_sw, sw),
    )


def run(game: GameInstance, config: DynamicsConfig = DynamicsConfig(), start=None) -> DynamicsTrace:
    """Iterate :func:`step` from the all-lowest profile (or ``start``)."""
    best_profile, max_sw = max_social_welfare(game, config.budget, config.workers)
    pcfg = config.potential_config
    if pcfg is None and game.perfect:
        try:
            pcfg = default_potential_config(game)
        except DomainError:
            # value ties: the perfect-rationality potential is undefined, record NaN
            pcfg = None
    rng = SplitMix64(config.seed)
    prof = game.check_profile(start) if start is not None else initial_profile(game)
    steps = []
    converged = False
    for t in range(config.max_iterations + 1):
        res = step(game, prof, config, rng) if t < config.max_iterations else None
        if res is Converged:
            converged = True
            steps.append(_record(game, t, None, prof, pcfg, max_sw))
            break
        if res is None:
            # iteration cap reached without checking further
            converged = bool(is_nash(game, prof))
            steps.append(_record(game, t, None, prof, pcfg, max_sw))
            break
        new, mover = res
        steps.append(_record(game, t, mover, prof, pcfg, max_sw))
        prof = new
    return DynamicsTrace(
        steps=steps,
        converged=converged,
        equilibrium=prof if converged else None,
        max_welfare=max_sw,
        welfare_maximizer=best_profile,
    )
