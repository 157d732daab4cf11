"""Counting Eulerian paths in Markov graphs (BEST + matrix-tree), exactly.

A Markov graph over the alphabet ``{0, ..., m-1}`` is given by the dart counts
``N[u][v]`` (how many times ``uv`` occurs as a substring) together with the
first (source) and last (sink) letters. The number of strings with that Markov
type equals the number of Eulerian source-to-sink paths with parallel darts
identified.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial, prod
from typing import Sequence

from .seqtypes import MarkovType


@dataclass(frozen=True)
class MarkovGraph:
    alphabet_size: int
    counts: tuple[tuple[int, ...], ...]
    source: int
    sink: int

    def __post_init__(self):
        m = self.alphabet_size
        if m < 1:
            raise ValueError("alphabet_size must be >= 1")
        counts = tuple(tuple(int(c) for c in row) for row in self.counts)
        if len(counts) != m or any(len(row) != m for row in counts):
            raise ValueError(f"counts must be a {m}x{m} matrix")
        if any(c < 0 for row in counts for c in row):
            raise ValueError("dart counts must be nonnegative")
        if not (0 <= self.source < m and 0 <= self.sink < m):
            raise ValueError("source and sink must be vertices of the alphabet")
        object.__setattr__(self, "counts", counts)

    @classmethod
    def from_string(cls, s: Sequence[int], alphabet_size: int) -> "MarkovGraph":
        if len(s) < 1:
            raise ValueError("need a nonempty string")
        counts = [[0] * alphabet_size for _ in range(alphabet_size)]
        for u, v in zip(s, s[1:]):
            counts[u][v] += 1
        return cls(alphabet_size, tuple(map(tuple, counts)), s[0], s[-1])

    @classmethod
    def from_markov_type(cls, mt: MarkovType) -> "MarkovGraph":
        return cls(2, ((mt.N00, mt.N01), (mt.N10, mt.N11)), mt.F, mt.L)

    def out_degree(self, v: int) -> int:
        return sum(self.counts[v])

    def in_degree(self, v: int) -> int:
        return sum(row[v] for row in self.counts)

    def vertices(self) -> list[int]:
        """Letters touched by some dart, plus the source and sink."""
        return [
            v
            for v in range(self.alphabet_size)
            if v in (self.source, self.sink) or self.out_degree(v) + self.in_degree(v) > 0
        ]

    def is_balanced(self) -> bool:
        for v in range(self.alphabet_size):
            want = (v == self.source) - (v == self.sink)
            if self.out_degree(v) - self.in_degree(v) != want:
                return False
        return True


def bareiss_determinant(matrix: Sequence[Sequence[int]]) -> int:
    """Determinant of an integer matrix by fraction-free Gaussian elimination."""
    a = [list(map(int, row)) for row in matrix]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def spanning_out_trees(g: MarkovGraph) -> int:
    """Number of spanning out-trees rooted at the source.

    Builds the matrix with off-diagonal entries ``-N[u][v]``, sets the diagonal
    so every column sums to zero, and takes the cofactor of the source entry.
    Disconnected graphs give 0.
    """
    verts = g.vertices()
    a = [[-g.counts[u][v] if u != v else 0 for v in verts] for u in verts]
    for j in range(len(verts)):
        a[j][j] = -sum(a[i][j] for i in range(len(verts)) if i != j)
    r = verts.index(g.source)
    minor = [row[:r] + row[r + 1:] for i, row in enumerate(a) if i != r]
    return bareiss_determinant(minor)


def eulerian_path_count(g: MarkovGraph) -> int:
    """Number of distinct strings whose Markov graph is ``g``.

    A dart sink -> source is added conceptually, turning paths into tours; BEST
    then gives ``T * out(sink)! * prod_{v != sink} (out(v) - 1)!`` labelled
    paths, and dividing by ``prod N[u][v]!`` identifies parallel darts.
    Unbalanced graphs give 0.
    """
    if not g.is_balanced():
        return 0
    trees = spanning_out_trees(g)
    if trees == 0:
        return 0
    num = trees
    for v in g.vertices():
        out = g.out_degree(v)
        if v == g.sink:
            num *= factorial(out)
        else:
            if out == 0:
                return 0
            num *= factorial(out - 1)
    den = prod(factorial(c) for row in g.counts for c in row)
    q, r = divmod(num, den)
    assert r == 0, "BEST count must be an integer"
    return q


def binary_type_count(mt: MarkovType) -> int:
    """Closed form for the number of binary strings with Markov type ``mt``.

    ``N_{F,1-F} (N0-1)! (N1-1)! / (N00! N01! N10! N11!)`` when both letters
    occur, else 1. Inconsistent types give 0.
    """
    if not mt.is_consistent():
        return 0
    n0, n1 = mt.N0, mt.N1
    if n0 == 0 or n1 == 0:
        return 1
    cross = mt.N01 if mt.F == 0 else mt.N10
    num = cross * factorial(n0 - 1) * factorial(n1 - 1)
    den = factorial(mt.N00) * factorial(mt.N01) * factorial(mt.N10) * factorial(mt.N11)
    q, r = divmod(num, den)
    assert r == 0
    return q
