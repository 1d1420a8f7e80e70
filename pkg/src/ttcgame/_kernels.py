"""Batched utility/share/welfare evaluation over many strategy profiles.

All functions take ``L``, an integer array of shape ``(M, N)`` holding one
strategy profile per row, and the lookup tables of a game. Logit shares are
evaluated in the log domain so that ``beta * value`` of order 1e6 neither
overflows nor collapses every share to 0/0.
"""
import math

import numpy as np
from scipy.special import expit


class Tables:
    """Per-(provider, level) lookup tables padded to a common width."""

    def __init__(self, providers, v0, beta):
        self.n = len(providers)
        self.sizes = tuple(len(p) for p in providers)
        kmax = max(self.sizes)
        self.values = np.full((self.n, kmax), np.nan)
        self.profits = np.full((self.n, kmax), np.nan)
        self.welfare = np.full((self.n, kmax), np.nan)
        self.prices = np.full((self.n, kmax), np.nan)
        for i, p in enumerate(providers):
            k = len(p)
            self.values[i, :k] = p.values
            self.profits[i, :k] = p.profits
            self.welfare[i, :k] = p.welfare
            self.prices[i, :k] = p.price
        for arr in (self.values, self.profits, self.welfare, self.prices):
            arr.setflags(write=False)
        self.v0 = v0
        self.beta = beta
        self.perfect = math.isinf(beta)

    def gather(self, table, L):
        return table[np.arange(self.n)[None, :], L]


def _logits(t, L):
    x = t.beta * t.gather(t.values, L)
    if t.v0 is not None:
        x = np.concatenate([x, np.full((len(L), 1), t.beta * t.v0)], axis=1)
    return x


def shares(t, L):
    """Provider shares ``(M, N)`` and abstention share ``(M,)``."""
    m = len(L)
    if t.perfect:
        vc = t.gather(t.values, L)
        win = np.argmax(vc, axis=1)
        top = vc[np.arange(m), win]
        s = np.zeros((m, t.n))
        served = np.ones(m, dtype=bool) if t.v0 is None else top >= t.v0
        s[np.arange(m)[served], win[served]] = 1.0
        return s, (~served).astype(float)
    x = _logits(t, L)
    e = np.exp(x - x.max(axis=1, keepdims=True))
    s = e / e.sum(axis=1, keepdims=True)
    if t.v0 is None:
        return s, np.zeros(m)
    return s[:, :-1], s[:, -1]


def welfare(t, L):
    s, s0 = shares(t, L)
    sw = np.einsum("ij,ij->i", s, t.gather(t.welfare, L))
    if t.v0 is not None:
        sw = sw + s0 * t.v0
    return sw


def _log_rest(t, L):
    """``log`` of the logit partition function without provider ``i``, for every i.

    Shape ``(M, N)``; ``-inf`` where nothing else is on offer.
    """
    x = _logits(t, L)
    m, width = x.shape
    if width == 1:
        return np.full((m, 1), -np.inf)
    rows = np.arange(m)
    arg1 = np.argmax(x, axis=1)
    top1 = x[rows, arg1]
    e1 = np.exp(x - top1[:, None])
    s1 = e1.sum(axis=1)
    xm = x.copy()
    xm[rows, arg1] = -np.inf
    top2 = xm.max(axis=1)
    s2 = np.exp(xm - top2[:, None]).sum(axis=1)
    with np.errstate(divide="ignore"):
        # s1 - e1 >= 1 whenever i is not the argmax, so no cancellation issue
        out = top1[:, None] + np.log(s1[:, None] - e1[:, : t.n])
    own = arg1 < t.n
    out[rows[own], arg1[own]] = top2[own] + np.log(s2[own])
    return out


def _rivals_perfect(t, L):
    """For each i: strongest rival value below and above i's index (ties favour lower index)."""
    vc = t.gather(t.values, L)
    m = len(L)
    ninf = np.full((m, 1), -np.inf)
    pre = np.maximum.accumulate(np.concatenate([ninf, vc[:, :-1]], axis=1), axis=1)
    suf = np.maximum.accumulate(
        np.concatenate([ninf, vc[:, :0:-1]], axis=1), axis=1
    )[:, ::-1]
    if t.v0 is not None:
        suf = np.maximum(suf, t.v0)
    return pre, suf


def deviation_utilities(t, L, providers=None):
    """Utility of provider ``i`` at every one of its levels, others fixed.

    Returns a dict ``i -> (M, K_i)`` array.
    """
    if providers is None:
        providers = range(t.n)
    out = {}
    if t.perfect:
        pre, suf = _rivals_perfect(t, L)
        for i in providers:
            k = t.sizes[i]
            v = t.values[i, :k][None, :]
            wins = (v > pre[:, i : i + 1]) & (v >= suf[:, i : i + 1])
            out[i] = np.where(wins, t.profits[i, :k][None, :], 0.0)
        return out
    rest = _log_rest(t, L)
    for i in providers:
        k = t.sizes[i]
        a = t.beta * t.values[i, :k][None, :] - rest[:, i : i + 1]
        out[i] = t.profits[i, :k][None, :] * expit(a)
    return out


def utilities(t, L):
    """Utility of every provider at the profile itself, ``(M, N)``."""
    s, _ = shares(t, L)
    return s * t.gather(t.profits, L)


def nash_mask(t, L, tol, providers=None):
    """True where no provider in ``providers`` has a deviation gaining more than ``tol``."""
    ok = np.ones(len(L), dtype=bool)
    rows = np.arange(len(L))
    for i, u in deviation_utilities(t, L, providers).items():
        cur = u[rows, L[:, i]]
        ok &= u.max(axis=1) - cur <= tol
    return ok


def digits(start, stop, shape):
    """Rows ``start..stop-1`` of the lexicographic enumeration of ``prod(range(s) for s in shape)``."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((len(idx), len(shape)), dtype=np.int64)
    for col in range(len(shape) - 1, -1, -1):
        idx, out[:, col] = np.divmod(idx, shape[col])
    return out


def last_provider_scan(t, prefix):
    """Utilities and welfare for every level of the last provider given the others.

    ``prefix`` holds the levels of providers ``0..N-2`` (shape ``(M, N-1)``).
    Returns ``(U_last, SW)``, both ``(M, K_last)``.
    """
    n = t.n
    kl = t.sizes[-1]
    m = len(prefix)
    vl = t.values[n - 1, :kl]
    wl = t.welfare[n - 1, :kl]
    pl = t.profits[n - 1, :kl]
    idx = np.arange(n - 1)[None, :]
    vp = t.values[idx, prefix]
    wp = t.welfare[idx, prefix]
    if t.perfect:
        if n > 1:
            win = np.argmax(vp, axis=1)
            top = vp[np.arange(m), win]
            wtop = wp[np.arange(m), win]
        else:
            top = np.full(m, -np.inf)
            wtop = np.zeros(m)
        last_wins = vl[None, :] > top[:, None]
        if t.v0 is not None:
            last_wins &= vl[None, :] >= t.v0
        u = np.where(last_wins, pl[None, :], 0.0)
        if t.v0 is None:
            other = wtop[:, None]
        else:
            other = np.where(top >= t.v0, wtop, t.v0)[:, None]
        sw = np.where(last_wins, wl[None, :], other)
        return u, sw
    x = t.beta * vp
    y = wp
    if t.v0 is not None:
        x = np.concatenate([x, np.full((m, 1), t.beta * t.v0)], axis=1)
        y = np.concatenate([y, np.full((m, 1), t.v0)], axis=1)
    if x.shape[1] == 0:
        u = np.broadcast_to(pl[None, :], (m, kl)).copy()
        sw = np.broadcast_to(wl[None, :], (m, kl)).copy()
        return u, sw
    top = x.max(axis=1)
    e = np.exp(x - top[:, None])
    b = e.sum(axis=1)[:, None]
    a = np.einsum("ij,ij->i", e, y)[:, None]
    d = t.beta * vl[None, :] - top[:, None]
    u = pl[None, :] * expit(d - np.log(b))
    # scale numerator and denominator by whichever of exp(d), exp(-d) is <= 1
    g_lo = np.exp(np.minimum(d, 0.0))
    g_hi = np.exp(-np.maximum(d, 0.0))
    sw = np.where(
        d <= 0,
        (a + wl[None, :] * g_lo) / (b + g_lo),
        (a * g_hi + wl[None, :]) / (b * g_hi + 1.0),
    )
    return u, sw
