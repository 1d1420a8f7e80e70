"""The compute-level game: utilities, welfare, potential and Nash checks.

A strategy profile is a tuple of level ordinals, one per provider.
"""
from __future__ import annotations

import dataclasses
import math
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import _kernels
from .errors import DomainError, InvalidArgumentError, ValidationError, ValidationWarning
from .provider import ProviderProfile, ValidationMode, validate_profile
from .shares import PERFECT, ShareVector, check_beta, log_partition, shares

__all__ = [
    "NASH_TOL",
    "GameInstance",
    "PotentialConfig",
    "EquilibriumWitness",
    "DominantPrediction",
    "utility",
    "utilities",
    "social_welfare",
    "potential",
    "default_potential_config",
    "min_value_gap",
    "is_nash",
    "best_response",
    "rational_equilibrium_prediction",
]

NASH_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class GameInstance:
    """Providers plus the user model.

    ``v0`` is the abstention value (``None`` disables abstention) and
    ``beta`` the users' inverse temperature (``math.inf`` for perfectly
    rational users).
    """

    providers: tuple
    v0: float | None = None
    beta: float = PERFECT
    validation: ValidationMode = ValidationMode.STRICT

    def __post_init__(self):
        providers = tuple(self.providers)
        if not providers:
            raise InvalidArgumentError("a game needs at least one provider")
        for p in providers:
            if not isinstance(p, ProviderProfile):
                raise InvalidArgumentError(f"expected ProviderProfile, got {type(p).__name__}")
        object.__setattr__(self, "providers", providers)
        object.__setattr__(self, "beta", check_beta(self.beta))
        object.__setattr__(self, "validation", ValidationMode(self.validation))
        if self.v0 is not None:
            v0 = float(self.v0)
            if not math.isfinite(v0):
                raise InvalidArgumentError("v0 must be finite; use None to disable abstention")
            object.__setattr__(self, "v0", v0)
        errors = []
        for p in providers:
            for f in validate_profile(p, self.validation):
                if f.severity == "error":
                    errors.append(f"{p.id}: {f.message}")
                else:
                    warnings.warn(f"{p.id}: {f.message}", ValidationWarning, stacklevel=3)
        if errors:
            raise ValidationError("; ".join(errors))
        if len(providers) > 1 and min_value_gap(self, include_abstention=False) == 0:
            warnings.warn(
                "two providers offer exactly the same value at some levels", ValidationWarning,
                stacklevel=3,
            )

    @property
    def n(self) -> int:
        return len(self.providers)

    @property
    def shape(self) -> tuple:
        return tuple(len(p) for p in self.providers)

    @property
    def n_profiles(self) -> int:
        return math.prod(self.shape)

    @property
    def perfect(self) -> bool:
        return math.isinf(self.beta)

    @cached_property
    def tables(self):
        return _kernels.Tables(self.providers, self.v0, self.beta)

    def replace(self, **changes) -> "GameInstance":
        return dataclasses.replace(self, **changes)

    def check_profile(self, profile) -> tuple:
        prof = tuple(int(k) for k in profile)
        if len(prof) != self.n:
            raise InvalidArgumentError(f"profile has {len(prof)} entries, game has {self.n} providers")
        for i, (k, size) in enumerate(zip(prof, self.shape)):
            if not 0 <= k < size:
                raise InvalidArgumentError(f"provider {i} has no level {k}")
        return prof

    def values_at(self, profile) -> np.ndarray:
        prof = self.check_profile(profile)
        return np.array([p.values[k] for p, k in zip(self.providers, prof)])

    def shares_at(self, profile) -> ShareVector:
        return shares(self.values_at(profile), self.v0, self.beta)

    def labels(self, profile) -> list:
        prof = self.check_profile(profile)
        return [p.levels[k].label for p, k in zip(self.providers, prof)]


def _check_index(game, i):
    if not (isinstance(i, (int, np.integer)) and 0 <= i < game.n):
        raise InvalidArgumentError(f"provider index {i!r} out of range for {game.n} providers")
    return int(i)


def utility(game: GameInstance, profile, i: int) -> float:
    """Market share times profit of provider ``i``."""
    i = _check_index(game, i)
    prof = game.check_profile(profile)
    s = game.shares_at(prof).provider_shares[i]
    return float(s * game.providers[i].profits[prof[i]])


def utilities(game: GameInstance, profile) -> np.ndarray:
    prof = game.check_profile(profile)
    s = game.shares_at(prof).provider_shares
    return s * np.array([p.profits[k] for p, k in zip(game.providers, prof)])


def social_welfare(game: GameInstance, profile) -> float:
    """Share-weighted ``q - c`` plus the abstention term; prices cancel."""
    prof = game.check_profile(profile)
    sv = game.shares_at(prof)
    w = np.array([p.welfare[k] for p, k in zip(game.providers, prof)])
    sw = float(np.dot(sv.provider_shares, w))
    if game.v0 is not None:
        sw += sv.abstention_share * game.v0
    return sw


@dataclass(frozen=True)
class PotentialConfig:
    """Constants of the perfect-rationality potential.

    ``c`` weighs the runner-up value against the winner's log-profit. It has
    to exceed ``(log u_max - log u_min) / delta_min`` for every
    utility-improving takeover to raise the potential.
    """

    u_max: float
    delta_min: float
    c: float
    u_min: float | None = None

    def __post_init__(self):
        if not self.delta_min > 0:
            raise DomainError(f"delta_min must be positive, got {self.delta_min}")
        if not self.c > 0:
            raise InvalidArgumentError(f"C must be positive, got {self.c}")
        if not self.u_max > 0 or (self.u_min is not None and not self.u_min > 0):
            raise DomainError("profit bounds must be positive")

    @property
    def log_u_min(self) -> float:
        return math.log(self.u_min if self.u_min is not None else self.u_max)

    @property
    def sufficient(self) -> bool:
        """Whether ``c`` is large enough for the takeover argument to go through."""
        spread = max(math.log(self.u_max) - self.log_u_min, 0.0)
        return self.c > spread / self.delta_min if math.isfinite(self.delta_min) else True


def min_value_gap(game: GameInstance, include_abstention=True) -> float:
    """Smallest ``|V_i(a) - V_j(b)|`` over distinct owners ``i != j``.

    The abstention value counts as its own owner when enabled. ``inf`` when
    there is a single owner.
    """
    vals, owners = [], []
    for i, p in enumerate(game.providers):
        vals.append(p.values)
        owners.append(np.full(len(p), i))
    if include_abstention and game.v0 is not None:
        vals.append(np.array([game.v0]))
        owners.append(np.array([-1]))
    v = np.concatenate(vals)
    o = np.concatenate(owners)
    order = np.argsort(v, kind="stable")
    v, o = v[order], o[order]
    # the closest cross-owner pair is adjacent in sorted order
    gaps = np.diff(v)[o[1:] != o[:-1]]
    return float(gaps.min()) if gaps.size else math.inf


def default_potential_config(game: GameInstance) -> PotentialConfig:
    profits = np.concatenate([p.profits for p in game.providers])
    u_max, u_min = float(profits.max()), float(profits.min())
    if not u_min > 0:
        raise DomainError("potential needs strictly positive profits")
    delta = min_value_gap(game)
    if delta == 0:
        raise DomainError("cross-provider value tie: minimum value gap is zero")
    spread = max(math.log(u_max) - math.log(u_min), 0.0)
    c = spread / delta + 1.0 if math.isfinite(delta) else 1.0
    return PotentialConfig(u_max=u_max, delta_min=delta, c=c, u_min=u_min)


def _ranked_alternatives(game, values):
    """(value, provider index or None) sorted best first; providers win ties by index."""
    alts = [(float(v), i) for i, v in enumerate(values)]
    if game.v0 is not None:
        alts.append((game.v0, None))
    alts.sort(key=lambda a: (-a[0], 0 if a[1] is not None else 1, a[1] or 0))
    return alts


def potential(game: GameInstance, profile, config: PotentialConfig | None = None) -> float:
    """Generalized ordinal potential of the game at ``profile``.

    Perfect rationality: log-profit of the winner plus ``C`` times the
    runner-up value, where abstention competes as an alternative (its
    "log-profit" is ``log u_min``; a missing runner-up counts as 0).
    Logit users: sum of log-profits plus ``beta`` times the sum of values
    minus the log partition function.
    """
    prof = game.check_profile(profile)
    profits = np.array([p.profits[k] for p, k in zip(game.providers, prof)])
    values = game.values_at(prof)
    if game.perfect:
        if config is None:
            config = default_potential_config(game)
        alts = _ranked_alternatives(game, values)
        top = alts[0][1]
        if top is None:
            head = config.log_u_min
        else:
            if not profits[top] > 0:
                raise DomainError(f"provider {top} has non-positive profit")
            head = math.log(profits[top])
        runner_up = alts[1][0] if len(alts) > 1 else 0.0
        return head + config.c * runner_up
    if np.any(profits <= 0):
        raise DomainError("potential needs strictly positive profits")
    return float(
        np.sum(np.log(profits)) + game.beta * np.sum(values)
        - log_partition(values, game.v0, game.beta)
    )


@dataclass(frozen=True)
class EquilibriumWitness:
    profile: tuple
    is_equilibrium: bool
    violating_provider: int | None = None
    improving_level: int | None = None
    gain: float = 0.0

    def __bool__(self):
        return self.is_equilibrium


def deviation_utilities(game: GameInstance, profile, i=None):
    """Utilities of provider ``i`` (or every provider) at each of its levels, others fixed."""
    prof = game.check_profile(profile)
    L = np.array([prof], dtype=np.int64)
    providers = None if i is None else [_check_index(game, i)]
    rows = _kernels.deviation_utilities(game.tables, L, providers)
    if i is not None:
        return rows[int(i)][0]
    return [rows[j][0] for j in range(game.n)]


def is_nash(game: GameInstance, profile, tol: float = NASH_TOL) -> EquilibriumWitness:
    """Check every unilateral deviation; report the first strict improvement.

    Scan order is provider ascending, then ordinal ascending. Gains of at
    most ``tol`` do not count.
    """
    prof = game.check_profile(profile)
    for i, u in enumerate(deviation_utilities(game, prof)):
        gain = u - u[prof[i]]
        hits = np.flatnonzero(gain > tol)
        if hits.size:
            k = int(hits[0])
            return EquilibriumWitness(prof, False, i, k, float(gain[k]))
    return EquilibriumWitness(prof, True)


def best_response(game: GameInstance, profile, i: int):
    """``(level, utility_gain)`` of provider ``i``'s best response.

    The level is the lowest ordinal attaining the maximum utility.
    """
    prof = game.check_profile(profile)
    u = deviation_utilities(game, prof, i)
    k = int(np.argmax(u))
    return k, float(u[k] - u[prof[i]])


@dataclass(frozen=True)
class DominantPrediction:
    """Equilibrium structure predicted for perfectly rational users.

    ``provider`` has the largest attainable value; at any equilibrium it
    serves everyone at ``level``. ``runner_up`` is the best value anyone else
    (or abstention) can offer; ``threshold`` is the value some other
    alternative must beat to keep the dominant provider from undercutting.
    """

    provider: int
    level: int
    runner_up: float
    threshold: float

    def level_matches(self, game, profile) -> bool:
        prof = game.check_profile(profile)
        sv = game.shares_at(prof)
        return prof[self.provider] == self.level and sv.provider_shares[self.provider] == 1.0

    def competition_holds(self, game, profile) -> bool:
        if self.threshold == -math.inf:
            return True
        prof = game.check_profile(profile)
        values = game.values_at(prof)
        rivals = [v for j, v in enumerate(values) if j != self.provider]
        if game.v0 is not None:
            rivals.append(game.v0)
        return any(v > self.threshold for v in rivals)


def rational_equilibrium_prediction(game: GameInstance) -> DominantPrediction:
    if not game.perfect:
        raise InvalidArgumentError("the dominant-provider prediction needs perfectly rational users")
    vstar = np.array([p.values.max() for p in game.providers])
    order = np.argsort(-vstar, kind="stable")
    dom = int(order[0])
    if game.n > 1 and vstar[order[0]] == vstar[order[1]]:
        raise DomainError(f"providers {int(order[0])} and {int(order[1])} tie on maximum value")
    rivals = [vstar[j] for j in order[1:]]
    if game.v0 is not None:
        rivals.append(game.v0)
    runner_up = float(max(rivals)) if rivals else -math.inf
    p = game.providers[dom]
    ok = np.flatnonzero(p.values > runner_up)
    if ok.size == 0:
        raise DomainError(f"provider {dom} cannot beat the runner-up value {runner_up}")
    # profit-maximizing qualifying level; equals the highest one when profit increases with level
    best = ok[p.profits[ok] == p.profits[ok].max()]
    level = int(best.max())
    undercut = (p.values < runner_up) & (p.profits > p.profits[level])
    threshold = float(p.values[undercut].max()) if undercut.any() else -math.inf
    return DominantPrediction(dom, level, runner_up, threshold)
