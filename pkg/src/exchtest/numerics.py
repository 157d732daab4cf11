"""Log-domain arithmetic.

All probabilities, weights and e-values are carried as natural logarithms so
that values such as ``10**3575`` stay representable. ``LogValue`` is a thin
immutable wrapper; hot vectorised paths work on plain float arrays of logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np
from scipy.special import gammaln

LN10 = math.log(10.0)

# Linear values are only materialised when |log| stays below this.
MAX_LINEAR_LOG = 700.0


@dataclass(frozen=True, order=True)
class LogValue:
    """A nonnegative real stored as its natural log; ``-inf`` is exact zero."""

    log: float

    def __post_init__(self):
        if math.isnan(self.log) or self.log == math.inf:
            raise ValueError(f"invalid log value {self.log!r}")

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(-math.inf)

    @classmethod
    def one(cls) -> "LogValue":
        return cls(0.0)

    @classmethod
    def from_value(cls, x: float) -> "LogValue":
        if x < 0:
            raise ValueError("LogValue represents nonnegative numbers only")
        return cls(math.log(x)) if x > 0 else cls.zero()

    @property
    def is_zero(self) -> bool:
        return self.log == -math.inf

    @property
    def log10(self) -> float:
        return self.log / LN10

    @property
    def value(self) -> float:
        """Linear value; raises OverflowError when it would not fit a float."""
        if self.log > MAX_LINEAR_LOG:
            raise OverflowError(f"exp({self.log}) exceeds the linear output range")
        return math.exp(self.log)

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.is_zero or other.is_zero:
            return LogValue.zero()
        return LogValue(self.log + other.log)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.is_zero:
            raise ZeroDivisionError("division by LogValue zero")
        if self.is_zero:
            return LogValue.zero()
        return LogValue(self.log - other.log)

    def __float__(self) -> float:
        return self.value

    def __repr__(self) -> str:
        return f"LogValue(log={self.log!r})"


def log_factorial(n: int) -> float:
    """ln(n!) via the log-gamma function."""
    if n < 0:
        raise ValueError("factorial of a negative number")
    return math.lgamma(n + 1)


def log_factorial_array(n) -> np.ndarray:
    """Elementwise ln(n!) for an integer array."""
    return gammaln(np.asarray(n, dtype=np.float64) + 1.0)


def log_binomial(n: int, k: int) -> LogValue:
    if n < 0 or k < 0 or k > n:
        return LogValue.zero()
    return LogValue(math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1))


def log_binomial_array(n, k) -> np.ndarray:
    """Elementwise ln C(n, k); ``-inf`` where k is out of range."""
    n = np.asarray(n, dtype=np.float64)
    k = np.asarray(k, dtype=np.float64)
    valid = (k >= 0) & (k <= n) & (n >= 0)
    nn = np.where(valid, n, 0.0)
    kk = np.where(valid, k, 0.0)
    out = gammaln(nn + 1) - gammaln(kk + 1) - gammaln(nn - kk + 1)
    return np.where(valid, out, -np.inf)


def log_beta_int(a, b):
    """ln B(a+1, b+1) = ln(a! b! / (a+b+1)!) for nonnegative integers (arrays ok)."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return gammaln(a + 1) + gammaln(b + 1) - gammaln(a + b + 2)


def logsumexp_array(logs) -> float:
    """ln Σ exp(logs) with max shift; empty or all ``-inf`` gives ``-inf``."""
    arr = np.asarray(logs, dtype=np.float64)
    if arr.size == 0:
        return -math.inf
    m = float(np.max(arr))
    if m == -math.inf:
        return -math.inf
    return m + math.log(float(np.sum(np.exp(arr - m))))


def log_sum(values: Iterable[LogValue]) -> LogValue:
    return LogValue(logsumexp_array([v.log for v in values]))
