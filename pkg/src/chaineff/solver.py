"""Exact solvers for permutation problems.

Three routes: full-subset dynamic programming (Held-Karp style), a
polynomial-space divide-and-conquer for TSP, and the chain-tradeoff
solver that restricts the subset DP to a chain-efficient set system and
sweeps a product of permutation covers.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations, permutations, product
from math import ceil

from .cover import PermutationCover, greedy_cover, randomized_cover
from .errors import (
    InvalidInstance,
    InvalidSetSystem,
    ResourceLimit,
    UnsupportedSemiring,
)
from .poset import DEFAULT_MEMORY_BUDGET
from .semiring import INF, PermutationProblem, Semiring, TspInstance
from .setsystem import SetSystem, cartesian_power


@dataclass
class SolveStats:
    peak_resident_entries: int = 0
    total_dp_updates: int = 0
    cover_product_size: int = 1
    wall_time: float = 0.0


@dataclass
class SolveResult:
    value: object
    witness: tuple | None
    stats: SolveStats


@dataclass(frozen=True)
class SolverConfig:
    algorithm: str = "chain-tradeoff"
    set_system: SetSystem | None = None
    g: int = 1
    cover_strategy: str = "greedy"  # or "random"
    seed: int = 0
    size_factor: float = 2.0
    memory_budget: int = DEFAULT_MEMORY_BUDGET


# ---------------------------------------------------------------------------
# Shared restricted subset DP
#
# Table entries g(X, window) follow the degree-d recurrence: the window is
# the ordered tuple of the last min(d, |X|) placed elements, every prefix
# of a contributing order must be admissible, and a state whose parent
# mask is inadmissible contributes the additive identity.


def _subset_dp(
    n: int,
    degree: int,
    sr: Semiring,
    cost_fn,
    masks_by_popcount,
    is_admissible,
    budget: int,
    stats: SolveStats,
    want_parents: bool,
):
    """Run the DP; returns (table, parents).

    ``masks_by_popcount`` lists admissible masks per cardinality;
    ``table[mask]`` maps window tuples to semiring values.  Entries equal
    to the additive identity are not stored.
    """
    d = degree
    table: dict[int, dict[tuple, object]] = {}
    parents: dict[tuple, int | None] = {}
    resident = 0

    def store(mask, window, value, parent):
        nonlocal resident
        if value == sr.zero:
            return
        row = table.setdefault(mask, {})
        if window not in row:
            resident += 1
            if resident > budget:
                raise ResourceLimit("DP table exceeds the memory budget")
        row[window] = value
        if want_parents:
            parents[(mask, window)] = parent

    # base layers: |X| <= d, window is the full ordering of X
    for k in range(1, min(d, n) + 1):
        for mask in masks_by_popcount[k]:
            elems = []
            rest = mask
            while rest:
                elems.append((rest & -rest).bit_length() - 1)
                rest &= rest - 1
            for sigma in permutations(elems):
                prefix = 0
                value = sr.one
                ok = True
                for j, v in enumerate(sigma, start=1):
                    prefix |= 1 << v
                    if not is_admissible(prefix):
                        ok = False
                        break
                    value = sr.mul(value, cost_fn(prefix, sigma[:j]))
                    stats.total_dp_updates += 1
                if ok:
                    store(mask, sigma, value, None)

    for k in range(d + 1, n + 1):
        for mask in masks_by_popcount[k]:
            cost_cache = {}
            elems = []
            rest = mask
            while rest:
                elems.append((rest & -rest).bit_length() - 1)
                rest &= rest - 1
            for last in elems:
                prev_mask = mask & ~(1 << last)
                prev_row = table.get(prev_mask)
                if prev_row is None:
                    continue
                for pwindow, pvalue in prev_row.items():
                    window = pwindow[1:] + (last,)
                    if last in pwindow:
                        continue
                    step = cost_cache.get(window)
                    if step is None:
                        step = cost_fn(mask, window)
                        cost_cache[window] = step
                    cand = sr.mul(pvalue, step)
                    stats.total_dp_updates += 1
                    row = table.get(mask)
                    current = row.get(window) if row else None
                    if current is None:
                        store(mask, window, cand, pwindow[0] if want_parents else None)
                    else:
                        merged = sr.add(current, cand)
                        if want_parents and merged == cand and merged != current:
                            store(mask, window, merged, pwindow[0])
                        else:
                            row[window] = merged
    stats.peak_resident_entries = max(stats.peak_resident_entries, resident)
    return table, parents


def _final_value(table, full_mask, sr):
    row = table.get(full_mask)
    if not row:
        return sr.zero, None
    best_val = sr.zero
    best_win = None
    for window, value in row.items():
        merged = sr.add(best_val, value)
        if best_win is None or (merged == value and merged != best_val):
            best_win = window
        best_val = merged
    return best_val, best_win


def _reconstruct(table, parents, full_mask, window, sr):
    """Walk parent pointers back to a base state; the base window is the
    full prefix ordering."""
    mask = full_mask
    suffix = []
    while (mask, window) in parents and parents[(mask, window)] is not None:
        prev_elem = parents[(mask, window)]
        last = window[-1]
        suffix.append(last)
        mask &= ~(1 << last)
        window = (prev_elem,) + window[:-1]
    suffix.extend(reversed(window))
    return tuple(reversed(suffix))


# ---------------------------------------------------------------------------
# Held-Karp


def solve_held_karp(
    problem: PermutationProblem, memory_budget: int = DEFAULT_MEMORY_BUDGET
) -> SolveResult:
    """Full subset DP over all 2^N prefix sets; works for any semiring."""
    n = problem.n
    stats = SolveStats()
    t0 = time.monotonic()
    masks_by_popcount = [[] for _ in range(n + 1)]
    for mask in range(1 << n):
        masks_by_popcount[bin(mask).count("1")].append(mask)
    table, parents = _subset_dp(
        n,
        problem.degree,
        problem.semiring,
        problem.cost_fn,
        masks_by_popcount,
        lambda _mask: True,
        memory_budget,
        stats,
        want_parents=True,
    )
    value, window = _final_value(table, (1 << n) - 1, problem.semiring)
    witness = None
    if window is not None and value != problem.semiring.zero:
        witness = _reconstruct(table, parents, (1 << n) - 1, window, problem.semiring)
    stats.wall_time = time.monotonic() - t0
    return SolveResult(value=value, witness=witness, stats=stats)


# ---------------------------------------------------------------------------
# Divide-and-conquer TSP in polynomial space


class _TableAccountant:
    def __init__(self):
        self.current = 0
        self.peak = 0

    def alloc(self, size):
        self.current += size
        self.peak = max(self.peak, self.current)

    def free(self, size):
        self.current -= size


def _path_table(cities, w, acct, stats):
    """dict (s, t) -> min length of an s-t path visiting exactly ``cities``."""
    k = len(cities)
    table = {}
    if k == 1:
        table[(cities[0], cities[0])] = 0
    elif k <= 3:
        for sigma in permutations(cities):
            cost = 0
            for a, b in zip(sigma, sigma[1:]):
                cost += w[a][b]
                stats.total_dp_updates += 1
            key = (sigma[0], sigma[-1])
            if cost < table.get(key, INF):
                table[key] = cost
    else:
        half = ceil(k / 2)
        for left_sel in combinations(cities, half):
            left = list(left_sel)
            right = [c for c in cities if c not in left_sel]
            t_left = _path_table(left, w, acct, stats)
            t_right = _path_table(right, w, acct, stats)
            for (s, u), cost_l in t_left.items():
                for (v, t), cost_r in t_right.items():
                    cand = cost_l + w[u][v] + cost_r
                    stats.total_dp_updates += 1
                    if cand < table.get((s, t), INF):
                        table[(s, t)] = cand
            acct.free(len(t_left))
            acct.free(len(t_right))
    acct.alloc(len(table))
    return table


def solve_gurevich_shelah(inst: TspInstance) -> SolveResult:
    """Optimal tour in 4^N-style time and polynomial space.

    Recursively splits the city set in halves, combining all-pairs path
    tables; anchoring matches tsp_as_permutation_problem (tours start at
    city 0), so the optimum equals the adapter's permutation optimum.
    """
    if inst.n < 2:
        raise InvalidInstance("TSP needs at least 2 cities")
    stats = SolveStats()
    t0 = time.monotonic()
    acct = _TableAccountant()
    table = _path_table(list(range(inst.n)), inst.weights, acct, stats)
    acct.free(len(table))
    best = INF
    for (s, t), cost in table.items():
        if s == 0 and t != 0:
            best = min(best, cost + inst.weights[t][0])
    stats.peak_resident_entries = acct.peak + len(table)
    stats.wall_time = time.monotonic() - t0
    return SolveResult(value=best, witness=None, stats=stats)


# ---------------------------------------------------------------------------
# Chain-tradeoff solver


def _padded_cost_fn(problem: PermutationProblem, n_padded: int):
    """Extend the cost oracle to the padded size.

    Positions beyond the original size accept only the identity placement;
    any earlier appearance of a padding element is rejected through the
    additive identity, which annihilates the product.
    """
    n = problem.n
    sr = problem.semiring
    clean = (1 << n) - 1

    def padded(mask, window):
        j = bin(mask).count("1")
        if j > n:
            return sr.one if window[-1] == j - 1 else sr.zero
        if mask & ~clean:
            return sr.zero
        return problem.cost_fn(mask, window)

    return padded


def _group_chunk_filter(perm, system: SetSystem):
    """Chunks c (over one group) whose permuted image lies in the system."""
    ok = set()
    for chunk in range(1 << system.n):
        image = 0
        rest = chunk
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            image |= 1 << perm[v]
        if image in system:
            ok.add(chunk)
    return ok


def _build_cover(system: SetSystem, cfg: SolverConfig) -> PermutationCover:
    if cfg.cover_strategy == "greedy":
        return greedy_cover(system)
    if cfg.cover_strategy == "random":
        return randomized_cover(system, cfg.seed, cfg.size_factor)
    raise InvalidInstance(f"unknown cover strategy {cfg.cover_strategy!r}")


def solve_chain_tradeoff(problem: PermutationProblem, cfg: SolverConfig) -> SolveResult:
    """Sweep cover tuples, running the restricted subset DP for each.

    The instance is padded to a multiple of the group size, one certified
    cover is built for the g-th power of the system and shared by all
    groups through the group bijections, and the per-tuple results are
    combined with the idempotent addition.
    """
    sr = problem.semiring
    if not sr.idempotent:
        raise UnsupportedSemiring("chain-tradeoff requires idempotent addition")
    base = cfg.set_system
    if base is None:
        raise InvalidSetSystem("chain-tradeoff needs a set system")
    if not base.admits_chains():
        raise InvalidSetSystem("set system must contain the empty and full set")
    system = cartesian_power(base, cfg.g) if cfg.g > 1 else base
    gn = system.n
    n = problem.n
    s = ceil(n / gn)
    n_padded = gn * s
    cover = _build_cover(system, cfg)
    if not cover.certified:
        raise ResourceLimit("cover could not be certified")

    stats = SolveStats()
    stats.cover_product_size = len(cover) ** s
    t0 = time.monotonic()
    padded_cost = _padded_cost_fn(problem, n_padded)
    chunk_mask = (1 << gn) - 1

    chunk_filters = {perm: _group_chunk_filter(perm, system) for perm in cover.perms}

    def run_tuple(perm_tuple, want_parents):
        filters = [chunk_filters[perm] for perm in perm_tuple]

        def admissible(mask):
            for i in range(s):
                if (mask >> (i * gn)) & chunk_mask not in filters[i]:
                    return False
            return True

        # admissible masks = products of allowed chunks per group
        masks = [0]
        for i in range(s):
            shift = i * gn
            allowed = sorted(filters[i])
            masks = [m | (c << shift) for m in masks for c in allowed]
        masks_by_popcount = [[] for _ in range(n_padded + 1)]
        for m in masks:
            masks_by_popcount[bin(m).count("1")].append(m)
        table, parents = _subset_dp(
            n_padded,
            problem.degree,
            sr,
            padded_cost,
            masks_by_popcount,
            admissible,
            cfg.memory_budget,
            stats,
            want_parents=want_parents,
        )
        return table, parents

    best_value = sr.zero
    best_tuple = None
    for perm_tuple in product(cover.perms, repeat=s):
        table, _ = run_tuple(perm_tuple, want_parents=False)
        value, _ = _final_value(table, (1 << n_padded) - 1, sr)
        merged = sr.add(best_value, value)
        if best_tuple is None or (merged == value and merged != best_value):
            best_tuple = perm_tuple
        best_value = merged

    witness = None
    if best_value != sr.zero and best_tuple is not None:
        # re-run the winning tuple with parent tracking; keeps the sweep's
        # peak space free of parent pointers
        table, parents = run_tuple(best_tuple, want_parents=True)
        value, window = _final_value(table, (1 << n_padded) - 1, sr)
        if window is not None:
            padded_sigma = _reconstruct(table, parents, (1 << n_padded) - 1, window, sr)
            witness = tuple(v for v in padded_sigma[:n])
    stats.wall_time = time.monotonic() - t0
    return SolveResult(value=best_value, witness=witness, stats=stats)
