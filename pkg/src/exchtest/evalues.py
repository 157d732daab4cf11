"""E-values for exchangeability against the uniformly mixed Markov alternative.

Everything is computed from the Markov type of the data. The core routines
operate on numpy arrays of counts so the Monte Carlo runner can evaluate whole
batches; the public per-sequence functions wrap them and return ``LogValue``.

Under the alternative, ``pi01`` and ``pi10`` are independent uniforms, the
first bit is a fair coin, and the chain then runs with those transition
probabilities. A single sequence of Markov type ``(F, N00, N01, N10, N11, L)``
has probability ``(1/2) N00! N01! N10! N11! / ((N0*+1)! (N1*+1)!)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Hashable, Mapping, Optional

import numpy as np

from .errors import DegenerateTypeError, ParamError, UndefinedEPowerError
from .numerics import LN10, LogValue, log_binomial_array, log_factorial_array
from .seqtypes import BinarySequence, ExchType, MarkovType, exch_type, markov_type

LN2 = math.log(2.0)

# Slack, in log10 units, when checking the UMM/ELB ratio bounds in floating point.
BOUND_TOL_LOG10 = 1e-9


# --------------------------------------------------------------------------
# vectorised kernels over count arrays


def _as_int(x) -> np.ndarray:
    return np.asarray(x, dtype=np.int64)


def log_alt_prob(n00, n01, n10, n11) -> np.ndarray:
    """ln Q(z) under the UMM alternative, from transition counts."""
    n00, n01, n10, n11 = map(_as_int, (n00, n01, n10, n11))
    lf = log_factorial_array
    return (
        -LN2
        + lf(n00) + lf(n01) + lf(n10) + lf(n11)
        - lf(n00 + n01 + 1)
        - lf(n10 + n11 + 1)
    )


def algorithm_sum(n0, n1) -> np.ndarray:
    """The four-case sum over Markov types compatible with ``(N0, N1)``.

    Equals twice the alternative's mass on the exchangeability class. Each case
    term is an exact integer ratio; the four are added in floating point. Only
    meaningful where both counts are positive.
    """
    n0 = _as_int(n0)
    n1 = _as_int(n1)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.minimum(n0 - 1, n1)
        t00 = np.where(n0 >= 2, (a * (a + 1)) / (2 * n0 * n1 * (n1 + 1)), 0.0)
        b = np.minimum(n0, n1)
        t01 = (b * (b + 1)) / (2 * n0 * (n0 + 1) * n1)
        t10 = (b * (b + 1)) / (2 * n0 * n1 * (n1 + 1))
        c = np.minimum(n0, n1 - 1)
        t11 = np.where(n1 >= 2, (c * (c + 1)) / (2 * n0 * (n0 + 1) * n1), 0.0)
    return t00 + t01 + t10 + t11


def log_summary_mass(n0, n1) -> np.ndarray:
    """ln of the alternative's mass on the class with ``N1`` ones."""
    n0 = _as_int(n0)
    n1 = _as_int(n1)
    both = (n0 > 0) & (n1 > 0)
    with np.errstate(divide="ignore", invalid="ignore"):
        mixed = np.log(algorithm_sum(np.where(both, n0, 1), np.where(both, n1, 1))) - LN2
    return np.where(both, mixed, -np.log(2.0 * (n0 + n1)))


def log_statistics(n00, n01, n10, n11, last, stationary=None) -> dict[str, np.ndarray]:
    """Natural-log ELB, LB, UMM (and UB if ``stationary`` is given) for a batch.

    ``stationary`` is a pair ``(pi0, pi1)`` of scalars or arrays.
    """
    n00, n01, n10, n11, last = map(_as_int, (n00, n01, n10, n11, last))
    n0 = n00 + n01 + (last == 0)
    n1 = n10 + n11 + (last == 1)
    n = n0 + n1
    alt = log_alt_prob(n00, n01, n10, n11)
    elb = alt + log_binomial_array(n, n1)
    with np.errstate(divide="ignore", invalid="ignore"):
        ml = np.where(n0 > 0, n0 * np.log(n0 / n), 0.0) + np.where(n1 > 0, n1 * np.log(n1 / n), 0.0)
    lb = alt - ml
    both = (n0 > 0) & (n1 > 0)
    umm = np.where(both, elb - log_summary_mass(n0, n1), 0.0)
    out = {"elb": elb, "lb": lb, "umm": umm}
    if stationary is not None:
        pi0, pi1 = (np.asarray(p, dtype=np.float64) for p in stationary)
        with np.errstate(divide="ignore"):
            ub = alt - np.where(n0 > 0, n0 * np.log(pi0), 0.0) - np.where(n1 > 0, n1 * np.log(pi1), 0.0)
        out["ub"] = ub
    return out


# --------------------------------------------------------------------------
# per-sequence API


def _counts(mt: MarkovType):
    return mt.N00, mt.N01, mt.N10, mt.N11


def umm_alternative_logprob(mt: MarkovType) -> LogValue:
    """Probability of one sequence of Markov type ``mt`` under the UMM alternative."""
    return LogValue(float(log_alt_prob(*_counts(mt))))


def elb(z: BinarySequence) -> LogValue:
    """Exchangeability lower benchmark: C(N, N1) times the alternative probability."""
    mt = markov_type(z)
    return LogValue(float(log_alt_prob(*_counts(mt)) + log_binomial_array(z.N, mt.N1)))


def lb(z: BinarySequence, strict: bool = False) -> LogValue:
    """Lower benchmark: alternative probability over the IID maximum likelihood.

    For a constant sequence the ML factor is taken as 1 (``0**0 == 1``); pass
    ``strict=True`` to raise :class:`DegenerateTypeError` instead.
    """
    mt = markov_type(z)
    if strict and (mt.N0 == 0 or mt.N1 == 0):
        raise DegenerateTypeError("lower benchmark undefined for a constant sequence")
    stats = log_statistics(*_counts(mt), mt.L)
    return LogValue(float(stats["lb"]))


def _check_stationary(stationary, mt: Optional[MarkovType] = None) -> tuple[float, float]:
    try:
        pi0, pi1 = (float(p) for p in stationary)
    except (TypeError, ValueError) as exc:
        raise ParamError("stationary must be a pair of probabilities") from exc
    if not (0.0 <= pi0 <= 1.0 and 0.0 <= pi1 <= 1.0) or abs(pi0 + pi1 - 1.0) > 1e-12:
        raise ParamError(f"stationary probabilities must sum to 1, got ({pi0}, {pi1})")
    if mt is not None and ((pi0 == 0 and mt.N0 > 0) or (pi1 == 0 and mt.N1 > 0)):
        raise ParamError("zero stationary probability for a symbol that occurs")
    return pi0, pi1


def ub(z: BinarySequence, stationary) -> LogValue:
    """Upper benchmark: alternative probability over one fixed IID likelihood."""
    mt = markov_type(z)
    pi0, pi1 = _check_stationary(stationary, mt)
    stats = log_statistics(*_counts(mt), mt.L, stationary=(pi0, pi1))
    return LogValue(float(stats["ub"]))


def umm_summary_mass(N0: int, N1: int) -> LogValue:
    if N0 < 0 or N1 < 0 or N0 + N1 < 2:
        raise ValueError("need N0, N1 >= 0 with N0 + N1 >= 2")
    return LogValue(float(log_summary_mass(N0, N1)))


def _elb_unhalved(mt: MarkovType) -> float:
    """Algorithm-internal ELB, without the leading 1/2."""
    return float(log_alt_prob(*_counts(mt)) + LN2 + log_binomial_array(mt.N, mt.N1))


def umm(z: BinarySequence) -> LogValue:
    """The UMM exchangeability e-value, in O(N).

    Returns 1 for constant sequences; otherwise the unhalved ELB divided by
    the four-case sum.
    """
    n1 = int(np.count_nonzero(z.bits))
    n0 = z.N - n1
    if n0 == 0 or n1 == 0:
        return LogValue.one()
    mt = markov_type(z)
    return LogValue(_elb_unhalved(mt) - math.log(float(algorithm_sum(n0, n1))))


@dataclass(frozen=True)
class EValueReport:
    log10_umm: float
    log10_elb: float
    log10_lb: float
    log10_ub: Optional[float]
    exch: ExchType
    markov: MarkovType

    @property
    def degenerate(self) -> bool:
        """True when the sequence is constant (LB uses the 0**0 = 1 convention)."""
        return self.exch.N0 == 0 or self.exch.N1 == 0


def evaluate(z: BinarySequence, stationary=None) -> EValueReport:
    """All four quantities for one sequence, as decimal logarithms."""
    mt = markov_type(z)
    st = _check_stationary(stationary, mt) if stationary is not None else None
    stats = log_statistics(*_counts(mt), mt.L, stationary=st)
    return EValueReport(
        log10_umm=umm(z).log10,
        log10_elb=float(stats["elb"]) / LN10,
        log10_lb=float(stats["lb"]) / LN10,
        log10_ub=float(stats["ub"]) / LN10 if st is not None else None,
        exch=exch_type(z),
        markov=mt,
    )


@dataclass(frozen=True)
class BoundCheck:
    ratio_log10: float
    loose_ok: bool
    tight_applicable: bool
    tight_ok: bool


def check_bounds(z: BinarySequence) -> BoundCheck:
    """Check 1 <= UMM/ELB <= 2N, and <= N for non-constant sequences."""
    ratio = umm(z).log10 - elb(z).log10
    n = z.N
    n1 = int(np.count_nonzero(z.bits))
    lower = ratio >= -BOUND_TOL_LOG10
    loose = lower and ratio <= math.log10(2 * n) + BOUND_TOL_LOG10
    applicable = 0 < n1 < n
    tight = lower and ratio <= math.log10(n) + BOUND_TOL_LOG10
    return BoundCheck(ratio, loose, applicable, tight)


# --------------------------------------------------------------------------
# e-power on enumerable sample spaces


def _mass_table(q) -> Mapping[tuple, float]:
    return getattr(q, "mass", q)


def ep(e: Callable[[BinarySequence], LogValue], q) -> float:
    """Expected natural log of ``e`` under the finite measure ``q``.

    ``q`` maps 0/1 tuples to probabilities (an ``EnumeratedMeasure`` works).
    Zero-probability sequences are skipped.
    """
    total = math.fsum(
        float(p) * _checked_log(e, key) for key, p in _mass_table(q).items() if p > 0
    )
    return total


def _checked_log(e, key) -> float:
    v = e(BinarySequence(key))
    if v.is_zero:
        raise UndefinedEPowerError(f"e-variable is zero on {''.join(map(str, key))}")
    return v.log


def _entropy(probs) -> float:
    return -math.fsum(p * math.log(p) for p in probs if p > 0)


def mep(t: Callable[[BinarySequence], Hashable], q) -> float:
    """Maximum e-power of ``q`` against the compression model ``t``, in nats.

    Expected log class size plus H(t_* q) minus H(q), with class sizes found by
    enumerating the whole sample space ``{0,1}^N``.
    """
    table = _mass_table(q)
    keys = list(table)
    n = len(keys[0])
    sizes: dict = {}
    for idx in range(2**n):
        key = tuple((idx >> (n - 1 - i)) & 1 for i in range(n))
        s = t(BinarySequence(key))
        sizes[s] = sizes.get(s, 0) + 1
    pushed: dict = {}
    for key, p in table.items():
        if p > 0:
            s = t(BinarySequence(key))
            pushed[s] = pushed.get(s, 0) + p
    probs = [float(p) for p in table.values()]
    count_term = math.fsum(float(p) * math.log(sizes[s]) for s, p in pushed.items())
    return count_term + _entropy(float(p) for p in pushed.values()) - _entropy(probs)


def exchangeability_summary(z: BinarySequence) -> int:
    """Number of ones; the exchangeability model's summarising statistic."""
    return int(np.count_nonzero(z.bits))


# --------------------------------------------------------------------------
# asymptotic e-power per observation under the UMM alternative


def part_a() -> float:
    """Expected per-step log Beta-mixture term: (2/3)ln2 + (2/3)ln^2 2 - pi^2/9 - 1/6."""
    return (2 / 3) * LN2 + (2 / 3) * LN2**2 - math.pi**2 / 9 - 1 / 6


def part_b() -> float:
    """Expected per-step log class size: 2 ln2 - pi^2/12."""
    return 2 * LN2 - math.pi**2 / 12


def mep_asymptotic_constant() -> float:
    return (8 / 3) * LN2 + (2 / 3) * LN2**2 - (7 / 36) * math.pi**2 - 1 / 6
