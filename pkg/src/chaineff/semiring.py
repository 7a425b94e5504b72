"""Idempotent semirings and the degree-d permutation-problem abstraction.

A permutation problem asks for the semiring sum, over all permutations
sigma of [N], of a product of local costs f_j.  Each f_j sees the prefix
set {sigma_1,...,sigma_j} and a window of the last min(d, j) placed
elements.  Elements are 0-indexed throughout; prefix sets are bitmasks.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import InvalidInstance, InvalidPermutation

INF = float("inf")

MAX_DEGREE = 4


@dataclass(frozen=True)
class Semiring:
    """An (add, mul) semiring over plain Python payloads.

    ``zero`` is the additive identity and annihilates ``mul``; ``one`` is
    the multiplicative identity.
    """

    kind: str
    add: Callable
    mul: Callable
    zero: object
    one: object
    idempotent: bool

    def add_many(self, values):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc


MIN_PLUS = Semiring(
    kind="min-plus",
    add=min,
    mul=lambda a, b: a + b,
    zero=INF,
    one=0,
    idempotent=True,
)

BOOLEAN = Semiring(
    kind="boolean",
    add=lambda a, b: a or b,
    mul=lambda a, b: a and b,
    zero=False,
    one=True,
    idempotent=True,
)

# Non-idempotent sum-product semiring.  Held-Karp accepts it; the
# chain-tradeoff solver must reject it.
SUM_PRODUCT = Semiring(
    kind="sum-product",
    add=lambda a, b: a + b,
    mul=lambda a, b: a * b,
    zero=0,
    one=1,
    idempotent=False,
)


@dataclass(frozen=True)
class PermutationProblem:
    """A degree-d permutation problem over ``semiring``.

    ``cost_fn(prefix_mask, window)`` must be pure.  ``window`` is the
    tuple of the last min(d, j) placed elements where j is the popcount
    of ``prefix_mask`` (the prefix includes the element just placed).
    """

    n: int
    degree: int
    semiring: Semiring
    cost_fn: Callable[[int, tuple], object]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInstance("need at least one element")
        if not 1 <= self.degree <= MAX_DEGREE:
            raise InvalidInstance(f"degree must be in [1, {MAX_DEGREE}]")


@dataclass(frozen=True)
class TspInstance:
    """N cities with an integer (or INF) weight matrix; diagonal ignored."""

    n: int
    weights: tuple

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence]) -> "TspInstance":
        n = len(rows)
        if n < 2:
            raise InvalidInstance("TSP needs at least 2 cities")
        for row in rows:
            if len(row) != n:
                raise InvalidInstance("weight matrix must be square")
            for w in row:
                if w != INF and (not isinstance(w, int) or w < 0):
                    raise InvalidInstance(f"weights must be nonnegative integers or inf, got {w!r}")
        return cls(n, tuple(tuple(row) for row in rows))


@dataclass(frozen=True)
class DfasInstance:
    """Digraph for directed feedback arc set; parallel arcs allowed."""

    n: int
    arcs: tuple

    @classmethod
    def from_arcs(cls, n: int, arcs) -> "DfasInstance":
        if n < 1:
            raise InvalidInstance("DFAS needs at least one vertex")
        arcs = tuple((int(u), int(v)) for u, v in arcs)
        for u, v in arcs:
            if u == v:
                raise InvalidInstance("self-loops are not allowed")
            if not (0 <= u < n and 0 <= v < n):
                raise InvalidInstance("arc endpoint out of range")
        return cls(n, arcs)


def tsp_as_permutation_problem(inst: TspInstance) -> PermutationProblem:
    """Encode TSP as a min-plus problem of degree 2 over cities 1..N-1.

    Tours are anchored at city 0: element e stands for city e+1, the
    opening edge is charged at j=1 and the closing edge at j=N-1, so the
    minimum over all permutations is the optimal tour length.
    """
    n = inst.n
    w = inst.weights
    last_pos = n - 1

    def cost(prefix_mask: int, window: tuple):
        j = bin(prefix_mask).count("1")
        city = window[-1] + 1
        if j == 1:
            c = w[0][city]
        else:
            c = w[window[-2] + 1][city]
        if j == last_pos:
            c = c + w[city][0]
        return c

    return PermutationProblem(n=n - 1, degree=2, semiring=MIN_PLUS, cost_fn=cost)


def dfas_as_permutation_problem(inst: DfasInstance) -> PermutationProblem:
    """Encode DFAS as a degree-1 min-plus problem.

    Placing vertex v after S charges one unit per arc from v back into
    S, so the optimum over permutations is the minimum number of arcs
    whose removal makes the digraph acyclic.
    """
    out: list[Counter] = [Counter() for _ in range(inst.n)]
    for u, v in inst.arcs:
        out[u][v] += 1

    def cost(prefix_mask: int, window: tuple):
        v = window[-1]
        earlier = prefix_mask & ~(1 << v)
        return sum(mult for u, mult in out[v].items() if (earlier >> u) & 1)

    return PermutationProblem(n=inst.n, degree=1, semiring=MIN_PLUS, cost_fn=cost)


def evaluate_permutation(problem: PermutationProblem, sigma: Sequence[int]):
    """Product of the local costs of ``sigma``; the brute-force oracle."""
    n = problem.n
    if len(sigma) != n or set(sigma) != set(range(n)):
        raise InvalidPermutation(f"not a permutation of range({n}): {sigma!r}")
    d = problem.degree
    sr = problem.semiring
    acc = sr.one
    mask = 0
    for j in range(1, n + 1):
        mask |= 1 << sigma[j - 1]
        window = tuple(sigma[max(0, j - d):j])
        acc = sr.mul(acc, problem.cost_fn(mask, window))
    return acc


def brute_force_optimum(problem: PermutationProblem):
    """Semiring sum of evaluate_permutation over all of S_n (reference oracle)."""
    from itertools import permutations

    sr = problem.semiring
    return sr.add_many(
        evaluate_permutation(problem, sigma) for sigma in permutations(range(problem.n))
    )
