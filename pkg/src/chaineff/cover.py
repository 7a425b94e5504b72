"""Permutation covers: families F such that for every permutation pi some
pi' in F sends pi to a maximal chain of the set system.

Composition is fixed as (pi' . pi)(i) = pi'(pi(i)) throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from math import ceil, factorial, log

from .errors import (
    DimensionMismatch,
    InvalidInstance,
    NoChains,
    ResourceLimit,
)
from .setsystem import SetSystem, chain_correspondence, count_maximal_chains

GREEDY_MAX_N = 7
VERIFY_MAX_N = 8


@dataclass(frozen=True)
class PermutationCover:
    n: int
    perms: tuple
    certified: bool
    note: str = ""

    def __len__(self):
        return len(self.perms)


def compose(outer, inner):
    """(outer . inner)(i) = outer(inner(i))."""
    return tuple(outer[v] for v in inner)


def invert(pi):
    inv = [0] * len(pi)
    for i, v in enumerate(pi):
        inv[v] = i
    return tuple(inv)


def chain_permutations(a: SetSystem):
    """All permutations whose every prefix set is a member of A."""
    n = a.n
    if 0 not in a:
        return []
    out = []
    stack = [(0, ())]
    while stack:
        mask, prefix = stack.pop()
        if len(prefix) == n:
            out.append(prefix)
            continue
        for v in range(n):
            bit = 1 << v
            if mask & bit:
                continue
            if (mask | bit) in a:
                stack.append((mask | bit, prefix + (v,)))
    return out


def cover_size_bound(n: int, chains: int) -> float:
    """Greedy guarantee: (n!/c(A)) * (n ln n)^2."""
    return factorial(n) / chains * (n * log(n)) ** 2


def greedy_cover(a: SetSystem) -> PermutationCover:
    """Certified cover by greedy set cover over the universe S_n.

    Each candidate pi' covers S(pi') = {pi : pi'.pi is a chain of A}
    = {pi'^-1 . c : c a chain permutation}.  Ties break toward the
    lexicographically smallest pi' for reproducibility.
    """
    n = a.n
    if n > GREEDY_MAX_N:
        raise ResourceLimit(f"greedy cover materializes S_n; capped at n = {GREEDY_MAX_N}")
    chains = chain_permutations(a)
    if not chains:
        raise NoChains("set system has no maximal chain")
    all_perms = list(permutations(range(n)))
    index = {pi: i for i, pi in enumerate(all_perms)}
    candidates = []
    for outer in all_perms:
        inv = invert(outer)
        covered = frozenset(index[compose(inv, c)] for c in chains)
        candidates.append((outer, covered))
    uncovered = set(range(len(all_perms)))
    chosen = []
    while uncovered:
        best = None
        best_gain = -1
        for outer, covered in candidates:
            gain = len(covered & uncovered)
            if gain > best_gain:
                best, best_gain = (outer, covered), gain
        chosen.append(best[0])
        uncovered -= best[1]
    return PermutationCover(n=n, perms=tuple(chosen), certified=True, note="greedy")


# ---------------------------------------------------------------------------
# Seeded random permutations: splitmix64 feeding Fisher-Yates, so covers are
# bit-reproducible across platforms.

_MASK64 = (1 << 64) - 1


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def below(self, bound: int) -> int:
        # rejection sampling keeps the draw unbiased
        limit = _MASK64 - (_MASK64 + 1) % bound
        while True:
            v = self.next_u64()
            if v <= limit:
                return v % bound


def random_permutation(n: int, rng: SplitMix64) -> tuple:
    out = list(range(n))
    for i in range(n - 1, 0, -1):
        j = rng.below(i + 1)
        out[i], out[j] = out[j], out[i]
    return tuple(out)


def randomized_cover(a: SetSystem, seed: int, size_factor: float = 1.0) -> PermutationCover:
    """size_factor * (n!/c) * n ln n seeded uniform permutations.

    Certification is attempted only when the universe is small enough to
    enumerate; otherwise the probabilistic size rationale is recorded.
    """
    n = a.n
    chains = count_maximal_chains(a)
    if chains == 0:
        raise NoChains("set system has no maximal chain")
    count = max(1, ceil(size_factor * factorial(n) / chains * n * log(n)))
    rng = SplitMix64(seed)
    perms = tuple(random_permutation(n, rng) for _ in range(count))
    cover = PermutationCover(
        n=n,
        perms=perms,
        certified=False,
        note=f"random(seed={seed}, factor={size_factor}, samples={count})",
    )
    if n <= GREEDY_MAX_N and verify_cover(a, cover):
        cover = PermutationCover(n=n, perms=perms, certified=True, note=cover.note)
    return cover


def verify_cover(a: SetSystem, cover: PermutationCover) -> bool:
    """True iff every permutation of [n] is sent to a chain by some member."""
    if cover.n != a.n:
        raise DimensionMismatch(f"cover over {cover.n} elements, system over {a.n}")
    if a.n > VERIFY_MAX_N:
        raise ResourceLimit(f"verification enumerates S_n; capped at n = {VERIFY_MAX_N}")
    chain_set = set(chain_permutations(a))
    if not chain_set:
        return False
    for pi in permutations(range(a.n)):
        if not any(compose(outer, pi) in chain_set for outer in cover.perms):
            return False
    return True


# ---------------------------------------------------------------------------
# Text format: line 1 "n k"; then k lines of space-separated images.


def cover_to_text(cover: PermutationCover) -> str:
    lines = [f"{cover.n} {len(cover.perms)}"]
    lines += [" ".join(map(str, pi)) for pi in cover.perms]
    return "\n".join(lines) + "\n"


def cover_from_text(text: str) -> PermutationCover:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidInstance("empty cover file")
    try:
        n, k = map(int, lines[0].split())
        perms = tuple(tuple(map(int, ln.split())) for ln in lines[1 : k + 1])
    except ValueError as exc:
        raise InvalidInstance(f"malformed cover file: {exc}") from exc
    if len(perms) != k:
        raise InvalidInstance("cover file truncated")
    return PermutationCover(n=n, perms=perms, certified=False, note="file")
