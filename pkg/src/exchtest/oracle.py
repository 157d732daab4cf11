"""Exhaustive-enumeration reference implementations.

Every measure here is built by visiting all of ``{0,1}^N`` and evaluating the
defining formulas in exact rational arithmetic, so these routines share no
code path with the closed forms they check. They are only usable at small N.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Hashable, Optional

from .errors import HorizonError
from .numerics import LogValue
from .seqtypes import BinarySequence, MarkovType

UMM_MAX_N = 16
CP_MAX_N = 14

Key = tuple  # a 0/1 tuple


@dataclass
class EnumeratedMeasure:
    N: int
    mass: dict = field(repr=False)  # Key -> Fraction

    def total(self):
        return sum(self.mass.values())

    def log_mass(self, key) -> LogValue:
        return _log_fraction(Fraction(self.mass[tuple(key)]))

    def items(self):
        return self.mass.items()


def _log_fraction(x: Fraction) -> LogValue:
    if x == 0:
        return LogValue.zero()
    return LogValue(math.log(x.numerator) - math.log(x.denominator))


def all_sequences(n: int):
    return itertools.product((0, 1), repeat=n)


def _key(z) -> Key:
    if isinstance(z, BinarySequence):
        return tuple(z)
    return tuple(int(b) for b in z)


def _transitions(key: Key) -> tuple[int, int, int, int]:
    c = [0, 0, 0, 0]
    for a, b in zip(key, key[1:]):
        c[2 * a + b] += 1
    return tuple(c)


def _key_markov_type(key: Key) -> MarkovType:
    return MarkovType(key[0], *_transitions(key), key[-1])


def _beta_exact(a: int, b: int) -> Fraction:
    """B(a+1, b+1) for nonnegative integers."""
    return Fraction(math.factorial(a) * math.factorial(b), math.factorial(a + b + 1))


def umm_prob_exact(key: Key) -> Fraction:
    """Probability of one sequence under the uniform Markov mixture, exactly."""
    n00, n01, n10, n11 = _transitions(key)
    return Fraction(1, 2) * _beta_exact(n00, n01) * _beta_exact(n10, n11)


def _check_n(n: int, cap: int) -> None:
    if n < 2:
        raise HorizonError("horizon must be at least 2")
    if n > cap:
        raise HorizonError(f"enumeration capped at N = {cap}, got {n}")


@lru_cache(maxsize=None)
def _umm_table(n: int) -> dict:
    return {key: umm_prob_exact(key) for key in all_sequences(n)}


def enumerate_umm(N: int) -> EnumeratedMeasure:
    _check_n(N, UMM_MAX_N)
    return EnumeratedMeasure(N, dict(_umm_table(N)))


@lru_cache(maxsize=None)
def _umm_classes(n: int) -> tuple[dict, dict]:
    """Per number of ones: exact alternative mass and class size."""
    mass: dict = defaultdict(Fraction)
    size: Counter = Counter()
    for key, p in _umm_table(n).items():
        k = sum(key)
        mass[k] += p
        size[k] += 1
    return dict(mass), dict(size)


def brute_umm_exact(z) -> Fraction:
    """|class| * Q(z) / Q(class) with everything enumerated exactly."""
    key = _key(z)
    _check_n(len(key), UMM_MAX_N)
    mass, size = _umm_classes(len(key))
    k = sum(key)
    return size[k] * _umm_table(len(key))[key] / mass[k]


def brute_umm(z) -> LogValue:
    return _log_fraction(brute_umm_exact(z))


def brute_summary_mass(N0: int, N1: int) -> Fraction:
    _check_n(N0 + N1, UMM_MAX_N)
    return _umm_classes(N0 + N1)[0][N1]


def brute_type_count(mt: MarkovType, N: int) -> int:
    _check_n(N, UMM_MAX_N)
    return sum(1 for key in all_sequences(N) if _key_markov_type(key) == mt)


@lru_cache(maxsize=None)
def binary_type_census(n: int) -> dict:
    """Markov type -> number of length-n sequences having it."""
    return dict(Counter(_key_markov_type(key) for key in all_sequences(n)))


def general_type_census(alphabet_size: int, length: int) -> dict:
    """(source, sink, dart-count matrix) -> number of strings, over all strings."""
    out: Counter = Counter()
    m = alphabet_size
    for s in itertools.product(range(m), repeat=length):
        counts = [[0] * m for _ in range(m)]
        for u, v in zip(s, s[1:]):
            counts[u][v] += 1
        out[(s[0], s[-1], tuple(map(tuple, counts)))] += 1
    return dict(out)


@dataclass
class EVariableReport:
    class_means: dict
    max_mean: float
    passed: bool


def verify_evariable(
    e: Callable[[BinarySequence], LogValue],
    t: Callable[[BinarySequence], Hashable],
    N: int,
    threshold: float = 1 + 1e-9,
) -> EVariableReport:
    """Average ``e`` over every summary class of ``t`` and compare to 1."""
    _check_n(N, UMM_MAX_N)
    groups: dict = defaultdict(list)
    for key in all_sequences(N):
        z = BinarySequence(key)
        v = e(z)
        groups[t(z)].append(math.exp(v.log) if not v.is_zero else 0.0)
    means = {s: math.fsum(vals) / len(vals) for s, vals in groups.items()}
    worst = max(means.values())
    return EVariableReport(means, worst, worst <= threshold)


# --------------------------------------------------------------------------
# changepoint alternative


def _cp_split_terms(key: Key) -> list[Fraction]:
    n_total = len(key)
    total = sum(key)
    terms = []
    k1 = 0
    for n in range(1, n_total):
        k1 += key[n - 1]
        k2 = total - k1
        terms.append(_beta_exact(k1, n - k1) * _beta_exact(k2, n_total - n - k2))
    return terms


@lru_cache(maxsize=None)
def _cp_terms_table(n: int) -> dict:
    return {key: _cp_split_terms(key) for key in all_sequences(n)}


def enumerate_cp(N: int) -> EnumeratedMeasure:
    _check_n(N, CP_MAX_N)
    return EnumeratedMeasure(
        N, {key: sum(terms) / (N - 1) for key, terms in _cp_terms_table(N).items()}
    )


@lru_cache(maxsize=None)
def _cp_classes(n: int) -> dict:
    mass: dict = defaultdict(Fraction)
    for key, terms in _cp_terms_table(n).items():
        mass[sum(key)] += sum(terms) / (n - 1)
    return dict(mass)


def brute_cp_evalue_exact(z) -> Fraction:
    key = _key(z)
    n = len(key)
    _check_n(n, CP_MAX_N)
    k = sum(key)
    q = sum(_cp_terms_table(n)[key]) / (n - 1)
    return math.comb(n, k) * q / _cp_classes(n)[k]


def brute_cp_evalue(z) -> LogValue:
    return _log_fraction(brute_cp_evalue_exact(z))


@lru_cache(maxsize=None)
def _cp_tau_blocks(n: int, tau: int) -> dict:
    """(K0, K1) -> sum of Q_tau over the block (without the 1/(N-2))."""
    mass: dict = defaultdict(Fraction)
    for key, terms in _cp_terms_table(n).items():
        mass[(sum(key[:tau]), sum(key[tau:]))] += sum(terms) - terms[tau - 1]
    return dict(mass)


def brute_cp_tau_evalue_exact(z, tau: int) -> Fraction:
    key = _key(z)
    n = len(key)
    _check_n(n, CP_MAX_N)
    if n < 3 or not 1 <= tau <= n - 1:
        raise HorizonError("need N >= 3 and 1 <= tau <= N-1")
    terms = _cp_terms_table(n)[key]
    k0, k1 = sum(key[:tau]), sum(key[tau:])
    q_tau = sum(terms) - terms[tau - 1]
    return math.comb(tau, k0) * math.comb(n - tau, k1) * q_tau / _cp_tau_blocks(n, tau)[(k0, k1)]


def brute_cp_tau_evalue(z, tau: int) -> LogValue:
    return _log_fraction(brute_cp_tau_evalue_exact(z, tau))


# --------------------------------------------------------------------------
# full validation suite (drives the CLI ``oracle`` subcommand)


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    detail: str = ""


@dataclass
class OracleReport:
    max_n: int
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def _rel_err(fast: LogValue, exact: Fraction) -> float:
    """|fast/exact - 1| computed in log space."""
    return abs(math.expm1(fast.log - _log_fraction(exact).log))


def run_suite(max_n: int = 10, umm_impl: Optional[Callable] = None) -> OracleReport:
    """Compare every fast closed form against enumeration for N <= max_n.

    ``umm_impl`` replaces the UMM implementation under test (fault injection).
    """
    from . import changepoint, combinatorics, evalues

    if max_n > UMM_MAX_N:
        raise HorizonError(f"oracle suite is capped at N = {UMM_MAX_N}")
    if max_n < 2:
        raise HorizonError("max_n must be at least 2")
    umm_fn = umm_impl or evalues.umm
    report = OracleReport(max_n)

    worst, where = 0.0, ""
    for n in range(2, max_n + 1):
        for key in all_sequences(n):
            err = _rel_err(umm_fn(BinarySequence(key)), brute_umm_exact(key))
            if err > worst:
                worst, where = err, "".join(map(str, key))
    report.checks.append(CheckResult("umm_vs_enumeration", worst <= 1e-9, worst, where))

    worst_umm = worst_elb = 0.0
    for n in range(2, max_n + 1):
        r = verify_evariable(umm_fn, evalues.exchangeability_summary, n)
        worst_umm = max(worst_umm, max(abs(m - 1) for m in r.class_means.values()))
        worst_elb = max(worst_elb, verify_evariable(evalues.elb, evalues.exchangeability_summary, n).max_mean)
    report.checks.append(CheckResult("umm_class_means_equal_1", worst_umm <= 1e-9, worst_umm))
    report.checks.append(CheckResult("elb_class_means_at_most_1", worst_elb <= 1 + 1e-9, worst_elb))

    worst = 0.0
    for n in range(2, max_n + 1):
        for k in range(n + 1):
            worst = max(worst, _rel_err(evalues.umm_summary_mass(n - k, k), brute_summary_mass(n - k, k)))
    report.checks.append(CheckResult("summary_mass_vs_enumeration", worst <= 1e-9, worst))

    bad = 0
    for n in range(2, min(max_n, 14) + 1):
        for mt, count in binary_type_census(n).items():
            g = combinatorics.MarkovGraph.from_markov_type(mt)
            if not (combinatorics.binary_type_count(mt) == count == combinatorics.eulerian_path_count(g)):
                bad += 1
    report.checks.append(CheckResult("binary_type_count", bad == 0, float(bad)))

    bad = 0
    for m in (1, 2, 3):
        for length in range(1, min(max_n, 9) + 1):
            for (src, snk, counts), count in general_type_census(m, length).items():
                g = combinatorics.MarkovGraph(m, counts, src, snk)
                if combinatorics.eulerian_path_count(g) != count:
                    bad += 1
    report.checks.append(CheckResult("best_matrix_tree_vs_enumeration", bad == 0, float(bad)))

    cp_n = min(max_n, 12)
    worst_norm = worst_e = worst_tau = 0.0
    for n in range(2, cp_n + 1):
        worst_norm = max(worst_norm, abs(math.fsum(
            math.exp(changepoint.cp_mixture_logprob(BinarySequence(k)).log) for k in all_sequences(n)) - 1))
        for key in all_sequences(n):
            z = BinarySequence(key)
            worst_e = max(worst_e, _rel_err(changepoint.cp_evalue(z), brute_cp_evalue_exact(key)))
            if n >= 3:
                for tau, log_e in changepoint._tau_log_evalues(z, range(1, n)).items():
                    worst_tau = max(worst_tau, _rel_err(LogValue(log_e), brute_cp_tau_evalue_exact(key, tau)))
    report.checks.append(CheckResult("cp_mixture_normalised", worst_norm <= 1e-10, worst_norm))
    report.checks.append(CheckResult("cp_evalue_vs_enumeration", worst_e <= 1e-9, worst_e))
    report.checks.append(CheckResult("cp_tau_evalue_vs_enumeration", worst_tau <= 1e-9, worst_tau))
    return report
