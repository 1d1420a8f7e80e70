"""Providers, their compute-level menus and per-level economics.

A provider offers a finite, totally ordered menu of compute levels. At each
level it has an average output quality ``q``, a price ``p`` charged to the
user and a generation cost ``c``, all in USD per query.
"""
from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import InvalidArgumentError, TieWarning

__all__ = [
    "ComputeLevel",
    "ProviderProfile",
    "ValidationMode",
    "Finding",
    "user_value",
    "welfare_contribution",
    "profit",
    "max_user_value",
    "welfare_optimal_level",
    "validate_profile",
]


@dataclass(frozen=True, order=True)
class ComputeLevel:
    ordinal: int
    label: str = field(default="", compare=False)

    def __str__(self):
        return self.label or str(self.ordinal)


class ValidationMode(str, enum.Enum):
    STRICT = "strict"
    LENIENT = "lenient"


def _frozen_array(values, name):
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise InvalidArgumentError(f"{name} must be one-dimensional")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ProviderProfile:
    """Quality, price and cost of one provider over its ordered levels.

    ``levels`` may be omitted, in which case levels ``0..K-1`` are created
    with labels equal to their ordinal.
    """

    id: str
    quality: np.ndarray
    price: np.ndarray
    cost: np.ndarray
    levels: tuple = ()

    def __post_init__(self):
        q = _frozen_array(self.quality, "quality")
        p = _frozen_array(self.price, "price")
        c = _frozen_array(self.cost, "cost")
        if not (len(q) == len(p) == len(c)):
            raise InvalidArgumentError(
                f"provider {self.id!r}: quality/price/cost lengths differ "
                f"({len(q)}, {len(p)}, {len(c)})"
            )
        levels = self.levels
        if not levels:
            levels = tuple(ComputeLevel(k, str(k)) for k in range(len(q)))
        else:
            # bare labels take their position as ordinal
            levels = tuple(
                lv if isinstance(lv, ComputeLevel) else ComputeLevel(k, str(lv))
                for k, lv in enumerate(levels)
            )
        if len(levels) != len(q):
            raise InvalidArgumentError(
                f"provider {self.id!r}: {len(levels)} levels but {len(q)} quality entries"
            )
        if [lv.ordinal for lv in levels] != list(range(len(levels))):
            raise InvalidArgumentError(
                f"provider {self.id!r}: level ordinals must be 0..{len(levels) - 1} in order"
            )
        if not (np.all(np.isfinite(q)) and np.all(np.isfinite(p)) and np.all(np.isfinite(c))):
            raise InvalidArgumentError(f"provider {self.id!r}: non-finite amounts")
        object.__setattr__(self, "quality", q)
        object.__setattr__(self, "price", p)
        object.__setattr__(self, "cost", c)
        object.__setattr__(self, "levels", levels)

    def __len__(self):
        return len(self.levels)

    def __repr__(self):
        return f"ProviderProfile(id={self.id!r}, levels={len(self)})"

    @property
    def values(self) -> np.ndarray:
        """User value ``q - p`` at every level."""
        return self.quality - self.price

    @property
    def profits(self) -> np.ndarray:
        return self.price - self.cost

    @property
    def welfare(self) -> np.ndarray:
        """Welfare contribution ``q - c`` at every level."""
        return self.quality - self.cost

    def ordinal(self, level) -> int:
        """Resolve a ComputeLevel, ordinal or label to an ordinal."""
        if isinstance(level, ComputeLevel):
            k = level.ordinal
            if 0 <= k < len(self) and self.levels[k].label == level.label:
                return k
            if 0 <= k < len(self) and not level.label:
                return k
            raise InvalidArgumentError(f"level {level!r} does not belong to provider {self.id!r}")
        if isinstance(level, str):
            for lv in self.levels:
                if lv.label == level:
                    return lv.ordinal
            raise InvalidArgumentError(f"provider {self.id!r} has no level labelled {level!r}")
        k = int(level)
        if k != level or not 0 <= k < len(self):
            raise InvalidArgumentError(f"provider {self.id!r} has no level {level!r}")
        return k


def user_value(profile: ProviderProfile, level) -> float:
    k = profile.ordinal(level)
    return float(profile.quality[k] - profile.price[k])


def welfare_contribution(profile: ProviderProfile, level) -> float:
    k = profile.ordinal(level)
    return float(profile.quality[k] - profile.cost[k])


def profit(profile: ProviderProfile, level) -> float:
    k = profile.ordinal(level)
    return float(profile.price[k] - profile.cost[k])


def _argmax_lowest(values, what, provider_id):
    if len(values) == 0:
        raise InvalidArgumentError(f"provider {provider_id!r} has no levels")
    best = float(np.max(values))
    hits = np.flatnonzero(values == best)
    if len(hits) > 1:
        warnings.warn(
            f"provider {provider_id!r}: {what} tied at levels {hits.tolist()}; using {hits[0]}",
            TieWarning,
            stacklevel=3,
        )
    return int(hits[0]), best


def max_user_value(profile: ProviderProfile):
    """Level offering the highest user value, and that value.

    Ties go to the lowest ordinal and raise a :class:`TieWarning`.
    """
    k, v = _argmax_lowest(profile.values, "user value", profile.id)
    return profile.levels[k], v


def welfare_optimal_level(profile: ProviderProfile):
    """Level maximizing ``q - c`` (lowest ordinal on ties), and the maximum."""
    k, w = _argmax_lowest(profile.welfare, "welfare contribution", profile.id)
    return profile.levels[k], w


@dataclass(frozen=True)
class Finding:
    severity: str  # "error" or "warning"
    code: str
    message: str
    level: int | None = None


def validate_profile(profile: ProviderProfile, mode=ValidationMode.STRICT) -> list:
    """Check the economic invariants of a profile.

    Positive cost and positive profit are always errors. Non-decreasing
    quality and strictly increasing profit are errors in strict mode and
    warnings in lenient mode. Nothing is raised; findings are returned.
    """
    mode = ValidationMode(mode)
    soft = "error" if mode is ValidationMode.STRICT else "warning"
    out = []
    for k in range(len(profile)):
        c, p = profile.cost[k], profile.price[k]
        if not c > 0:
            out.append(Finding("error", "nonpositive_cost", f"cost {c} <= 0 at level {k}", k))
        if not p > c:
            out.append(
                Finding("error", "nonpositive_profit", f"price {p} <= cost {c} at level {k}", k)
            )
    for k in range(1, len(profile)):
        if profile.quality[k] < profile.quality[k - 1]:
            out.append(
                Finding(
                    soft,
                    "quality_decreasing",
                    f"quality drops from {profile.quality[k - 1]} to {profile.quality[k]} "
                    f"between levels {k - 1} and {k}",
                    k,
                )
            )
        if not profile.profits[k] > profile.profits[k - 1]:
            out.append(
                Finding(
                    soft,
                    "profit_not_increasing",
                    f"profit {profile.profits[k]} at level {k} does not exceed "
                    f"{profile.profits[k - 1]} at level {k - 1}",
                    k,
                )
            )
    return out
