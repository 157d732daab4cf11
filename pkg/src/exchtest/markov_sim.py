"""Binary data generators: fixed Markov chains, the UMM mixture, IID Bernoulli.

Each replication owns an independent random stream keyed by
``(seed, replication_index)``, so a replication's data never depends on how
replications are batched or distributed across workers.

Per replication the stream is consumed as ``u = rng.random(N + 2)``:
``u[0], u[1]`` are the mixture's ``pi01, pi10`` (unused otherwise), ``u[2]``
decides the first bit and ``u[3:]`` drive the transitions. For IID data bit
``t`` is ``u[2 + t] < p``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigError, ReducibleChainError
from .seqtypes import BinarySequence

GENERATOR_NAME = "numpy.PCG64 seeded by SeedSequence(seed, spawn_key=(replication_index,))"


@dataclass(frozen=True)
class MarkovParams:
    pi01: float
    pi10: float

    def __post_init__(self):
        if not (0.0 <= self.pi01 <= 1.0 and 0.0 <= self.pi10 <= 1.0):
            raise ConfigError(f"transition probabilities must lie in [0, 1]: {self}")

    @property
    def pi00(self) -> float:
        return 1.0 - self.pi01

    @property
    def pi11(self) -> float:
        return 1.0 - self.pi10

    @property
    def pi0(self) -> float:
        return stationary(self)[0]

    @property
    def pi1(self) -> float:
        return stationary(self)[1]


def stationary(params: MarkovParams) -> tuple[float, float]:
    s = params.pi01 + params.pi10
    if s == 0:
        raise ReducibleChainError("pi01 = pi10 = 0 has no unique stationary distribution")
    return params.pi10 / s, params.pi01 / s


class GeneratorKind(str, enum.Enum):
    FIXED_MARKOV = "markov"
    UMM_MIXTURE = "umm"
    IID_BERNOULLI = "iid"


@dataclass(frozen=True)
class GeneratorSpec:
    kind: GeneratorKind
    N: int
    seed: int = 0
    params: Optional[MarkovParams] = None
    p: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", GeneratorKind(self.kind))
        if self.N < 2:
            raise ConfigError("horizon N must be at least 2")
        if not (0 <= self.seed < 2**64):
            raise ConfigError("seed must be a 64-bit unsigned integer")
        if self.kind is GeneratorKind.FIXED_MARKOV and self.params is None:
            raise ConfigError("FIXED_MARKOV needs params")
        if self.kind is GeneratorKind.IID_BERNOULLI:
            if self.p is None or not 0.0 <= self.p <= 1.0:
                raise ConfigError("IID_BERNOULLI needs p in [0, 1]")

    def to_dict(self) -> dict:
        d = {"kind": self.kind.value, "N": self.N, "seed": self.seed}
        if self.params is not None:
            d["pi01"] = self.params.pi01
            d["pi10"] = self.params.pi10
        if self.p is not None:
            d["p"] = self.p
        return d


def replication_rng(seed: int, index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(index,))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass
class Batch:
    """Sequences for replications ``start .. start + len - 1`` (rows)."""

    start: int
    bits: np.ndarray  # (R, N) uint8
    pi01: np.ndarray  # (R,) transition parameters actually used
    pi10: np.ndarray


def generate_batch(spec: GeneratorSpec, start: int, count: int) -> Batch:
    n = spec.N
    u = np.empty((count, n + 2))
    for r in range(count):
        u[r] = replication_rng(spec.seed, start + r).random(n + 2)

    if spec.kind is GeneratorKind.IID_BERNOULLI:
        bits = (u[:, 2:] < spec.p).astype(np.uint8)
        nan = np.full(count, np.nan)
        return Batch(start, bits, nan, nan)

    if spec.kind is GeneratorKind.UMM_MIXTURE:
        p01, p10 = u[:, 0].copy(), u[:, 1].copy()
    else:
        p01 = np.full(count, spec.params.pi01)
        p10 = np.full(count, spec.params.pi10)

    first = u[:, 2] < 0.5
    return Batch(start, _markov_paths(first, u[:, 3:], p01, p10), p01, p10)


def _markov_paths(first: np.ndarray, steps: np.ndarray, p01: np.ndarray, p10: np.ndarray) -> np.ndarray:
    """Chains where step t moves 0 -> (u_t < pi01) and 1 -> (u_t >= pi10).

    A step whose two targets agree resets the state; otherwise it either keeps
    or flips it. Each bit is the value at the last reset XOR the parity of
    flips since, so no per-step loop is needed.
    """
    count, n_steps = steps.shape
    from0 = steps < p01[:, None]
    from1 = steps >= p10[:, None]
    flips = np.cumsum(from0 & ~from1, axis=1, dtype=np.int64)
    pos = np.arange(n_steps)
    last = np.maximum.accumulate(np.where(from0 == from1, pos, -1), axis=1)
    rows = np.arange(count)[:, None]
    clipped = np.maximum(last, 0)
    base = np.where(last >= 0, from0[rows, clipped], first[:, None])
    since = flips - np.where(last >= 0, flips[rows, clipped], 0)
    out = np.empty((count, n_steps + 1), dtype=np.uint8)
    out[:, 0] = first
    out[:, 1:] = base ^ (since & 1).astype(bool)
    return out


def generate(spec: GeneratorSpec, replication_index: int) -> BinarySequence:
    return BinarySequence(generate_batch(spec, replication_index, 1).bits[0])
