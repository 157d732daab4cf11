"""Changepoint mixture alternative and e-confidence regions for the break location.

The alternative draws a changepoint ``n`` uniformly from ``1..N-1`` and
independent uniform success probabilities before and after it, giving

    Q(z) = 1/(N-1) * sum_n B(k1+1, n-k1+1) * B(k2+1, N-n-k2+1)

with ``k1``/``k2`` the numbers of ones up to and after ``n``. Everything is
summed in log space.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .errors import AlphaRangeError, HorizonError, TauRangeError
from .numerics import LN10, LogValue, log_beta_int, logsumexp_array
from .seqtypes import BinarySequence

# Rounding slack on the log threshold, so E_tau == 1/alpha counts as a member.
_LOG_TOL = 1e-12


@dataclass(frozen=True)
class ChangepointSummary:
    tau: int
    K0: int
    K1: int


@dataclass(frozen=True)
class ConfidenceRegion:
    alpha: float
    members: tuple[int, ...]
    evalues: dict[int, float] = field(repr=False)  # tau -> log10 E_tau


def _split_log_terms(z: BinarySequence) -> np.ndarray:
    """ln of the Beta-Beta term for every split ``n = 1..N-1`` (index n-1)."""
    n_total = z.N
    prefix = np.cumsum(z.bits, dtype=np.int64)
    n = np.arange(1, n_total)
    k1 = prefix[:-1]
    k2 = prefix[-1] - k1
    return log_beta_int(k1, n - k1) + log_beta_int(k2, n_total - n - k2)


def cp_mixture_logprob(z: BinarySequence) -> LogValue:
    return LogValue(logsumexp_array(_split_log_terms(z)) - math.log(z.N - 1))


def _log_class_mass(n_total: int, n1: int) -> float:
    """ln Q(#ones = n1), via C(n,k) B(k+1, n-k+1) = 1/(n+1)."""
    n = np.arange(1, n_total)
    feasible = np.minimum(n, n1) - np.maximum(0, n1 - (n_total - n)) + 1
    return math.log(math.fsum(feasible / ((n + 1.0) * (n_total - n + 1.0)))) - math.log(n_total - 1)


def _log_binom(n, k) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def cp_evalue(z: BinarySequence) -> LogValue:
    """C(N, N1) * Q(z) / Q(class of z): the changepoint exchangeability e-value."""
    n1 = int(z.bits.sum())
    log_q = logsumexp_array(_split_log_terms(z)) - math.log(z.N - 1)
    return LogValue(_log_binom(z.N, n1) + log_q - _log_class_mass(z.N, n1))


def _check_tau(n_total: int, tau: int) -> None:
    if not 1 <= tau <= n_total - 1:
        raise TauRangeError(f"tau must lie in 1..{n_total - 1}, got {tau}")


def cp_summary(z: BinarySequence, tau: int) -> ChangepointSummary:
    _check_tau(z.N, tau)
    k0 = int(z.bits[:tau].sum())
    return ChangepointSummary(tau, k0, int(z.bits[tau:].sum()))


class _LogFactorials:
    """ln k! for k = 0..N+1, with ``-inf`` binomials outside their range."""

    def __init__(self, n_total: int):
        self.lf = gammaln(np.arange(n_total + 2, dtype=np.float64) + 1.0)

    def binom(self, n, k):
        n = np.asarray(n)
        k = np.asarray(k)
        ok = (k >= 0) & (k <= n)
        kk = np.where(ok, k, 0)
        nk = np.where(ok, n - k, 0)
        return np.where(ok, self.lf[n] - self.lf[kk] - self.lf[nk], -np.inf)

    def beta(self, a, b):
        ok = (a >= 0) & (b >= 0)
        a = np.where(ok, a, 0)
        b = np.where(ok, b, 0)
        return np.where(ok, self.lf[a] + self.lf[b] - self.lf[a + b + 1], -np.inf)


def _log_block_mass(n_total: int, tau: int, k0: int, k1: int, lf: _LogFactorials) -> float:
    """ln of sum over the block {z': K0(z')=k0, K1(z')=k1} of the split terms, n != tau.

    For a split left of tau, ``j`` ones fall in 1..n and ``k0-j`` in n+1..tau;
    for a split right of tau, ``j`` ones fall in tau+1..n and ``k1-j`` after n.
    The constant 1/(N-2) is omitted (it cancels).
    """
    parts = []
    if tau > 1:
        n = np.arange(1, tau)[:, None]
        j = np.arange(k0 + 1)[None, :]
        ones_after = k0 - j + k1
        parts.append(
            lf.binom(n, j)
            + lf.binom(tau - n, k0 - j)
            + lf.binom(n_total - tau, k1)
            + lf.beta(j, n - j)
            + lf.beta(ones_after, n_total - n - ones_after)
        )
    if tau < n_total - 1:
        n = np.arange(tau + 1, n_total)[:, None]
        j = np.arange(k1 + 1)[None, :]
        ones_before = k0 + j
        parts.append(
            lf.binom(tau, k0)
            + lf.binom(n - tau, j)
            + lf.binom(n_total - n, k1 - j)
            + lf.beta(ones_before, n - ones_before)
            + lf.beta(k1 - j, n_total - n - k1 + j)
        )
    return logsumexp_array(np.concatenate([p.ravel() for p in parts]))


def _tau_log_evalues(z: BinarySequence, taus) -> dict[int, float]:
    n_total = z.N
    if n_total < 3:
        raise HorizonError("changepoint e-values need N >= 3")
    terms = _split_log_terms(z)
    prefix = np.cumsum(z.bits, dtype=np.int64)
    total = int(prefix[-1])
    lf = _LogFactorials(n_total)
    out = {}
    for tau in taus:
        _check_tau(n_total, tau)
        k0 = int(prefix[tau - 1])
        k1 = total - k0
        num = logsumexp_array(np.delete(terms, tau - 1))
        log_e = (
            _log_binom(tau, k0)
            + _log_binom(n_total - tau, k1)
            + num
            - _log_block_mass(n_total, tau, k0, k1, lf)
        )
        out[tau] = log_e
    return out


def cp_tau_evalue(z: BinarySequence, tau: int) -> LogValue:
    """E-value against the null "the only structure is a break at tau"."""
    if z.N < 3:
        raise HorizonError("changepoint e-values need N >= 3")
    _check_tau(z.N, tau)
    return LogValue(_tau_log_evalues(z, [tau])[tau])


def cp_confidence_region(z: BinarySequence, alpha: float) -> ConfidenceRegion:
    """All tau whose e-value does not exceed 1/alpha."""
    if not 0 < alpha <= 1:
        raise AlphaRangeError(f"alpha must lie in (0, 1], got {alpha}")
    logs = _tau_log_evalues(z, range(1, z.N))
    threshold = -math.log(alpha)
    members = tuple(t for t, v in logs.items() if v <= threshold + _LOG_TOL)
    return ConfidenceRegion(alpha, members, {t: v / LN10 for t, v in logs.items()})
