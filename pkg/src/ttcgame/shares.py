"""Market-share functions: perfect rationality (argmax) and logit (softmax).

Rationality is encoded by the inverse temperature ``beta``; ``math.inf``
means perfectly rational users. The abstention option is a value ``v0``;
``None`` disables it (equivalent to ``v0 = -inf``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import InvalidArgumentError

__all__ = [
    "PERFECT",
    "ShareVector",
    "check_beta",
    "shares",
    "perfect_winner",
    "softmax_concentration_bound",
    "softmax_weighted_lower_bound",
]

PERFECT = math.inf


def check_beta(beta) -> float:
    beta = float(beta)
    if math.isnan(beta) or beta <= 0:
        raise InvalidArgumentError(f"beta must be positive, got {beta}")
    return beta


@dataclass(frozen=True, eq=False)
class ShareVector:
    provider_shares: np.ndarray
    abstention_share: float
    tie: bool = False

    def __iter__(self):
        yield from self.provider_shares
        yield self.abstention_share

    def as_array(self) -> np.ndarray:
        return np.append(self.provider_shares, self.abstention_share)


def _check_values(values):
    v = np.asarray(values, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise InvalidArgumentError("values must be a non-empty sequence")
    if not np.all(np.isfinite(v)):
        raise InvalidArgumentError("values must be finite")
    return v


def perfect_winner(values, v0=None):
    """Index of the winning provider under perfect rationality.

    Returns ``(winner, tie)``; ``winner`` is ``None`` when abstention wins.
    Among tied providers the lowest index wins; abstention wins only when
    ``v0`` is strictly above every provider value.
    """
    v = np.asarray(values, dtype=float)
    best = int(np.argmax(v))
    top = v[best]
    tie = int(np.count_nonzero(v == top)) > 1
    if v0 is not None:
        if v0 > top:
            return None, tie
        tie = tie or v0 == top
    return best, tie


def shares(values: Sequence[float], v0=None, beta=PERFECT) -> ShareVector:
    """Fraction of demand going to each provider and to abstention."""
    v = _check_values(values)
    beta = check_beta(beta)
    if v0 is not None:
        v0 = float(v0)
        if not math.isfinite(v0):
            raise InvalidArgumentError("v0 must be finite (use None to disable abstention)")
    if math.isinf(beta):
        out = np.zeros(v.size)
        winner, tie = perfect_winner(v, v0)
        if winner is None:
            return ShareVector(out, 1.0, tie)
        out[winner] = 1.0
        return ShareVector(out, 0.0, tie)
    logits = beta * v
    if v0 is not None:
        logits = np.append(logits, beta * v0)
    m = logits.max()
    e = np.exp(logits - m)
    s = e / e.sum()
    if v0 is None:
        return ShareVector(s, 0.0)
    return ShareVector(s[:-1], float(s[-1]))


def softmax_concentration_bound(values, beta) -> float:
    """``(N-1) * exp(-beta * (x1 - x2))`` for the top two entries ``x1 > x2``.

    Bounds how far each softmax entry is from the argmax indicator.
    """
    v = _check_values(values)
    beta = check_beta(beta)
    if v.size == 1:
        return 0.0
    if np.unique(v).size != v.size:
        raise InvalidArgumentError("values must be pairwise distinct")
    x = np.sort(v)[::-1]
    return float((v.size - 1) * math.exp(-beta * (x[0] - x[1])))


def softmax_weighted_lower_bound(values, weights, beta) -> float:
    """Lower bound on ``sum_i y_i softmax_i`` for distinct ``x`` and positive ``y``.

    ``y_(1) - exp(-beta (x_(1) - x_(2))) * sum_{i>=2} (y_(i) + y_(1))``
    where entries are ordered by decreasing ``x``.
    """
    v = _check_values(values)
    y = np.asarray(weights, dtype=float)
    beta = check_beta(beta)
    if y.shape != v.shape:
        raise InvalidArgumentError("weights must match values")
    if np.unique(v).size != v.size:
        raise InvalidArgumentError("values must be pairwise distinct")
    order = np.argsort(-v, kind="stable")
    x, y = v[order], y[order]
    if v.size == 1:
        return float(y[0])
    return float(y[0] - math.exp(-beta * (x[0] - x[1])) * np.sum(y[1:] + y[0]))


def log_partition(values, v0=None, beta=1.0) -> float:
    """``log(exp(beta v0) + sum_i exp(beta v_i))`` computed stably."""
    logits = beta * np.asarray(values, dtype=float)
    if v0 is not None:
        logits = np.append(logits, beta * v0)
    return float(logsumexp(logits))
