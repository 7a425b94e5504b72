"""Posets, constructions, and exact counting of ideals and linear extensions.

Elements are integers 0..n-1 and subsets are machine-word bitmasks, so n
is capped at 64.  Several independent counting algorithms are provided;
tests require them to agree bit-for-bit wherever more than one applies.
"""

from __future__ import annotations

from itertools import permutations
from math import factorial

import numpy as np

from .efficiency import EfficiencyReport, make_report
from .errors import (
    InvalidInstance,
    InvalidOffset,
    InvalidSize,
    MethodMismatch,
    ResourceLimit,
)

MAX_ELEMENTS = 64

#: Default cap on resident DP entries / enumerated ideals.
DEFAULT_MEMORY_BUDGET = 1 << 28

IDEAL_METHODS = ("lattice", "bipartite-sum", "circulant-transfer")
EXTENSION_METHODS = ("brute", "ideal-dp", "bipartite-fst", "orbit")


class Poset:
    """Partial order given by its cover relation (a Hasse-diagram DAG)."""

    def __init__(self, n: int, covers):
        if not 1 <= n <= MAX_ELEMENTS:
            raise InvalidSize(f"element count must be in [1, {MAX_ELEMENTS}]")
        covers = tuple(sorted({(int(u), int(v)) for u, v in covers}))
        for u, v in covers:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise InvalidInstance(f"bad cover pair ({u}, {v})")
        self.n = n
        self.covers = covers
        self._build_masks()

    def _build_masks(self):
        n = self.n
        up = [0] * n  # direct cover successors
        down = [0] * n
        for u, v in self.covers:
            up[u] |= 1 << v
            down[v] |= 1 << u
        # Longest-path layering doubles as the cycle check.
        indeg = [bin(down[v]).count("1") for v in range(n)]
        order = [v for v in range(n) if indeg[v] == 0]
        seen = 0
        succ = [0] * n
        for v in order:
            seen += 1
            m = up[v]
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                indeg[w] -= 1
                if indeg[w] == 0:
                    order.append(w)
        if seen != n:
            raise InvalidInstance("cover relation contains a cycle")
        for v in reversed(order):
            m = up[v]
            s = m
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                s |= succ[w]
            succ[v] = s
        pred = [0] * n
        for v in range(n):
            m = succ[v]
            while m:
                w = (m & -m).bit_length() - 1
                m &= m - 1
                pred[w] |= 1 << v
        self.succ_mask = tuple(succ)  # strict successors in the closure
        self.pred_mask = tuple(pred)  # strict predecessors in the closure
        self.cover_up = tuple(up)
        self.cover_down = tuple(down)

    def __eq__(self, other):
        return isinstance(other, Poset) and (self.n, self.covers) == (other.n, other.covers)

    def __hash__(self):
        return hash((self.n, self.covers))

    def __repr__(self):
        return f"Poset(n={self.n}, covers={len(self.covers)})"

    def bipartition(self):
        """(X, Y) with all covers from X to Y, or MethodMismatch.

        X is the set of minimal elements; isolated elements land in X.
        """
        n = self.n
        x_side = [v for v in range(n) if self.pred_mask[v] == 0]
        in_x = set(x_side)
        for u, v in self.covers:
            if u not in in_x or v in in_x:
                raise MethodMismatch("poset is not bipartite (height > 2)")
        y_side = [v for v in range(n) if v not in in_x]
        return x_side, y_side


class CirculantBipartitePoset(Poset):
    """Bipartite poset on parts of size m with (x_i, y_j) iff (i-j) mod m in D.

    Elements 0..m-1 are x_0..x_{m-1}; elements m..2m-1 are y_0..y_{m-1}.
    """

    def __init__(self, m: int, offsets):
        offsets = frozenset(int(d) for d in offsets)
        if not offsets:
            raise InvalidOffset("offset set must be nonempty")
        if any(d < 0 or d >= m for d in offsets):
            raise InvalidOffset(f"offsets must lie in [0, {m})")
        if 2 * m > MAX_ELEMENTS:
            raise InvalidSize(f"2m = {2 * m} exceeds {MAX_ELEMENTS} elements")
        covers = [
            (i, m + j)
            for i in range(m)
            for j in range(m)
            if (i - j) % m in offsets
        ]
        super().__init__(2 * m, covers)
        self.m = m
        self.offsets = offsets

    def __repr__(self):
        return f"CirculantBipartitePoset(m={self.m}, D={sorted(self.offsets)})"


def make_circulant(m: int, offsets) -> CirculantBipartitePoset:
    return CirculantBipartitePoset(m, offsets)


def make_matching_complement(m: int) -> CirculantBipartitePoset:
    """Complete bipartite order on two m-sets minus a perfect matching."""
    if m < 2:
        raise InvalidSize("matching complement needs m >= 2")
    return make_circulant(m, range(1, m))


def make_counterexample() -> Poset:
    """34-element poset whose ideal family beats the tower of 17-cubes.

    Base part: circulant m=16, D={0,...,6}; plus dummy elements d_0=32,
    d_1=33 with extra covers (x_0, y_8), (y_8, d_0), (y_15, d_1).
    """
    m = 16
    base = [(i, m + j) for i in range(m) for j in range(m) if (i - j) % m in range(7)]
    extra = [(0, m + 8), (m + 8, 32), (m + 15, 33)]
    return Poset(34, base + extra)


def make_bucket_order(t: int, k: int) -> Poset:
    """k consecutive buckets of size t; everything in bucket i precedes bucket i+1."""
    if t < 1 or k < 1:
        raise InvalidSize("bucket order needs t, k >= 1")
    if t * k > MAX_ELEMENTS:
        raise InvalidSize(f"{t * k} elements exceeds {MAX_ELEMENTS}")
    covers = []
    for b in range(k - 1):
        for u in range(b * t, (b + 1) * t):
            for v in range((b + 1) * t, (b + 2) * t):
                covers.append((u, v))
    return Poset(t * k, covers)


def make_chain(n: int) -> Poset:
    return Poset(n, [(i, i + 1) for i in range(n - 1)])


def make_antichain(n: int) -> Poset:
    return Poset(n, [])


# ---------------------------------------------------------------------------
# Ideal enumeration and counting


def enumerate_ideals(p: Poset, memory_budget: int = DEFAULT_MEMORY_BUDGET):
    """All ideals of p as bitmasks, sorted by (popcount, value)."""
    n = p.n
    pred = p.pred_mask
    full = (1 << n) - 1
    layers = [[0]]
    total = 1
    current = [0]
    while current:
        nxt = set()
        for ideal in current:
            free = full & ~ideal
            while free:
                v = (free & -free).bit_length() - 1
                free &= free - 1
                if pred[v] & ~ideal == 0:
                    nxt.add(ideal | (1 << v))
        total += len(nxt)
        if total > memory_budget:
            raise ResourceLimit(f"ideal lattice exceeds budget of {memory_budget} entries")
        current = sorted(nxt)
        if current:
            layers.append(current)
    out = []
    for layer in layers:
        out.extend(layer)
    return out


def _or_closure_sum(neighbor_masks, other_side_size):
    """Sum over all subsets S of 2^(K - |union of neighbor masks over S|).

    Pure-Python for small sides, numpy (split high/low halves plus
    popcount) for larger ones.
    """
    s = len(neighbor_masks)
    k = other_side_size
    if s <= 18:
        ors = [0]
        for nb in neighbor_masks:
            ors += [v | nb for v in ors]
        return sum(1 << (k - bin(v).count("1")) for v in ors)
    if s > 34:
        raise ResourceLimit(f"bipartite-sum side of {s} elements is too large")
    lo = s // 2
    lo_arr = np.zeros(1, dtype=np.int64)
    for nb in neighbor_masks[:lo]:
        lo_arr = np.concatenate([lo_arr, lo_arr | np.int64(nb)])
    hi_list = [0]
    for nb in neighbor_masks[lo:]:
        hi_list += [v | nb for v in hi_list]
    total = 0
    pc = np.empty_like(lo_arr)
    for hv in hi_list:
        merged = lo_arr | np.int64(hv)
        np.bitwise_count(merged, out=pc, casting="same_kind")
        total += int(np.sum(np.int64(1) << (np.int64(k) - pc), dtype=object))
    return total


def _count_ideals_bipartite_sum(p: Poset) -> int:
    x_side, y_side = p.bipartition()
    # Iterate over the smaller side; the formula is symmetric: fixing the
    # chosen side's ideal part forces nothing, fixing the co-ideal part of
    # X (equivalently the ideal part of Y) leaves the rest free.
    y_index = {v: i for i, v in enumerate(y_side)}
    x_index = {v: i for i, v in enumerate(x_side)}
    if len(x_side) <= len(y_side):
        # sum over X' subseteq X of 2^{|Y \ N(X')|}
        masks = []
        for x in x_side:
            nb = 0
            for y in y_side:
                if p.cover_up[x] >> y & 1:
                    nb |= 1 << y_index[y]
            masks.append(nb)
        return _or_closure_sum(masks, len(y_side))
    # sum over Y' subseteq Y of 2^{|X| - |N(Y')|}: members of Y' force
    # their predecessors into the ideal, the remaining X part is free.
    masks = []
    for y in y_side:
        nb = 0
        for x in x_side:
            if p.cover_down[y] >> x & 1:
                nb |= 1 << x_index[x]
        masks.append(nb)
    return _or_closure_sum(masks, len(x_side))


_FLOAT_SAFE_BITS = 52


def _transfer_trace(m: int, offsets) -> int:
    """Ideal count of a circulant poset as the trace of a transfer matrix.

    State = membership bits of the last w = max(D) processed x-elements.
    Appending the next membership bit closes the window of one y, which
    contributes weight 2 when every x it needs is present and 1 otherwise.
    Cyclic closure = closed walks of length m, i.e. trace of M^m.
    """
    w = max(offsets)
    nstates = 1 << w
    need = 0  # bit w-d of the (w+1)-bit window must be set for each d in D
    for d in offsets:
        need |= 1 << (w - d)

    def window_weight(v):
        return 2 if v & need == need else 1

    if nstates <= 1 << 9:
        # exact integer DP per start state
        total = 0
        mask = nstates - 1
        for s0 in range(nstates):
            vec = {s0: 1}
            for _ in range(m):
                nxt = {}
                for s, val in vec.items():
                    for b in (0, 1):
                        v = (s << 1) | b
                        s2 = v & mask
                        nxt[s2] = nxt.get(s2, 0) + val * window_weight(v)
                vec = nxt
            total += vec.get(s0, 0)
        return total

    if 2 * m - w > _FLOAT_SAFE_BITS:
        raise ResourceLimit(
            "transfer-matrix entries would exceed exact float64 range; "
            "use another counting method"
        )
    from scipy import sparse

    # M[s, s'] with s' = ((s << 1) | b) & mask; build M^T in csr form.
    mask = nstates - 1
    s = np.arange(nstates, dtype=np.int64)
    rows, cols, vals = [], [], []
    for b in (0, 1):
        v = (s << 1) | b
        s2 = v & mask
        wgt = np.where((v & need) == need, 2.0, 1.0)
        rows.append(s2)
        cols.append(s)
        vals.append(wgt)
    mt = sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(nstates, nstates),
    )
    block = min(nstates, max(1, (1 << 26) // nstates))
    trace = 0.0
    for start in range(0, nstates, block):
        stop = min(start + block, nstates)
        b_mat = np.zeros((nstates, stop - start))
        b_mat[np.arange(start, stop), np.arange(stop - start)] = 1.0
        for _ in range(m):
            b_mat = mt @ b_mat
        trace += float(b_mat[np.arange(start, stop), np.arange(stop - start)].sum())
    if trace >= float(1 << _FLOAT_SAFE_BITS):
        raise ResourceLimit("transfer trace exceeds exact float64 range")
    return int(round(trace))


def count_ideals(
    p: Poset, method: str = "lattice", memory_budget: int = DEFAULT_MEMORY_BUDGET
) -> int:
    """Exact number of ideals (down-sets) of p."""
    if method == "lattice":
        return len(enumerate_ideals(p, memory_budget))
    if method == "bipartite-sum":
        return _count_ideals_bipartite_sum(p)
    if method == "circulant-transfer":
        if not isinstance(p, CirculantBipartitePoset):
            raise MethodMismatch("circulant-transfer needs a CirculantBipartitePoset")
        return _transfer_trace(p.m, p.offsets)
    raise MethodMismatch(f"unknown ideal-counting method {method!r}")


# ---------------------------------------------------------------------------
# Linear extensions


def _count_extensions_brute(p: Poset) -> int:
    if p.n > 10:
        raise ResourceLimit("brute-force extension counting is capped at n = 10")
    n = p.n
    constraints = [(u, v) for u, v in p.covers]
    count = 0
    for sigma in permutations(range(n)):
        pos = [0] * n
        for i, v in enumerate(sigma):
            pos[v] = i
        if all(pos[u] < pos[v] for u, v in constraints):
            count += 1
    return count


def _count_extensions_ideal_dp(p: Poset, memory_budget: int) -> int:
    ideals = enumerate_ideals(p, memory_budget)
    succ = p.succ_mask
    lam = {0: 1}
    for ideal in ideals[1:]:
        acc = 0
        rest = ideal
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            if succ[v] & ideal == 0:  # v maximal in the ideal
                acc += lam[ideal & ~(1 << v)]
        lam[ideal] = acc
    return lam[ideals[-1]]


def _bipartite_neighbor_masks(p: Poset):
    """Neighbor masks of each y over X-indices, for a bipartite poset."""
    x_side, y_side = p.bipartition()
    x_index = {v: i for i, v in enumerate(x_side)}
    y_needs = []
    for y in y_side:
        nb = 0
        for x in x_side:
            if p.cover_down[y] >> x & 1:
                nb |= 1 << x_index[x]
        y_needs.append(nb)
    return len(x_side), len(y_side), y_needs


def _count_extensions_bipartite_fst(p: Poset, memory_budget: int) -> int:
    """F(S, t) recurrence over subsets S of the lower side.

    F(S, t) counts partial extensions whose first |S| + t positions use
    exactly S from X and t eligible elements of Y, with
    F(S, t) = sum_{x not in S} F(S + x, t) + (e(S) - t) F(S, t + 1)
    and boundary F(X, t) = (|Y| - t)!.
    """
    nx, ny, y_needs = _bipartite_neighbor_masks(p)
    if 1 << nx > memory_budget:
        raise ResourceLimit(f"2^{nx} subset table exceeds the memory budget")
    size = 1 << nx
    e = bytearray(size)
    for nb in y_needs:
        # add 1 to every superset of nb
        free = ((size - 1) & ~nb)
        sub = free
        while True:
            e[nb | sub] += 1
            if sub == 0:
                break
            sub = (sub - 1) & free
    full = size - 1
    f_by_mask = {full: [factorial(ny - t) for t in range(ny + 1)]}
    by_pop = [[] for _ in range(nx + 1)]
    for mask in range(size):
        by_pop[bin(mask).count("1")].append(mask)
    for k in range(nx - 1, -1, -1):
        new = {}
        for mask in by_pop[k]:
            e_s = e[mask]
            row = [0] * (e_s + 1)
            for t in range(e_s, -1, -1):
                acc = 0
                rest = full & ~mask
                while rest:
                    x = rest & -rest
                    rest &= rest - 1
                    acc += f_by_mask[mask | x][t]
                if t < e_s:
                    acc += (e_s - t) * row[t + 1]
                row[t] = acc
            new[mask] = row
        f_by_mask = new
    return f_by_mask[0][0]


def _canonical_rotation(arr, m):
    """Lexicographically minimal cyclic rotation of each m-bit mask."""
    full = np.int64((1 << m) - 1)
    best = arr.copy()
    for s in range(1, m):
        rot = ((arr << s) | (arr >> (m - s))) & full
        np.minimum(best, rot, out=best)
    return best


def _count_extensions_orbit(p: CirculantBipartitePoset, memory_budget: int) -> int:
    """F(S, t) recurrence compressed by rotation classes of S.

    The circulant poset is invariant under simultaneous rotation of both
    sides, so F(S, t) depends only on the rotation class of S.  Layers
    are processed by |S| descending, keeping two layers resident.
    """
    m = p.m
    if m > 32:
        raise ResourceLimit("orbit method supports side size up to 32")
    offsets = sorted(p.offsets)
    full = (1 << m) - 1
    # y_j needs x_{(j+d) mod m}: the needs-mask of y_0, rotated per j.
    need0 = 0
    for d in offsets:
        need0 |= 1 << (d % m)
    needs = np.array(
        [((need0 << j) | (need0 >> (m - j))) & full if j else need0 for j in range(m)],
        dtype=np.int64,
    )

    masks = np.array([full], dtype=np.int64)
    f_rows = [[factorial(m - t) for t in range(m + 1)]]
    budget = memory_budget

    for k in range(m - 1, -1, -1):
        # generate canonical size-k masks by deleting one bit from layer k+1
        parts = []
        for x in range(m):
            bit = np.int64(1 << x)
            sel = masks[(masks & bit) != 0]
            if sel.size:
                parts.append(_canonical_rotation(sel & ~bit, m))
        new_masks = np.unique(np.concatenate(parts))
        if new_masks.size + masks.size > budget:
            raise ResourceLimit("orbit layer exceeds the memory budget")
        # eligible-y counts
        e_arr = np.zeros(new_masks.size, dtype=np.int64)
        for j in range(m):
            e_arr += ((new_masks & needs[j]) == needs[j]).astype(np.int64)
        # neighbor sums G[i][t] = sum_x F(S + x, t)
        g_rows = [[0] * (int(e) + 1) for e in e_arr]
        for x in range(m):
            bit = np.int64(1 << x)
            sel = np.nonzero((new_masks & bit) == 0)[0]
            if sel.size == 0:
                continue
            sup = _canonical_rotation(new_masks[sel] | bit, m)
            idx = np.searchsorted(masks, sup)
            for i, j in zip(sel.tolist(), idx.tolist()):
                row = g_rows[i]
                src = f_rows[j]
                for t in range(len(row)):
                    row[t] += src[t]
        # close the t-recurrence per class
        for i, row in enumerate(g_rows):
            e_s = len(row) - 1
            for t in range(e_s - 1, -1, -1):
                row[t] += (e_s - t) * row[t + 1]
        masks = new_masks
        f_rows = g_rows
    return f_rows[0][0]


def count_linear_extensions(
    p: Poset, method: str = "ideal-dp", memory_budget: int = DEFAULT_MEMORY_BUDGET
) -> int:
    """Exact number of linear extensions of p."""
    if method == "brute":
        return _count_extensions_brute(p)
    if method == "ideal-dp":
        return _count_extensions_ideal_dp(p, memory_budget)
    if method == "bipartite-fst":
        return _count_extensions_bipartite_fst(p, memory_budget)
    if method == "orbit":
        if not isinstance(p, CirculantBipartitePoset):
            raise MethodMismatch("orbit method needs a CirculantBipartitePoset")
        return _count_extensions_orbit(p, memory_budget)
    raise MethodMismatch(f"unknown extension-counting method {method!r}")


def closed_form_matching_complement(m: int):
    """(ideal count, linear extension count) of the matching complement."""
    if m < 2:
        raise InvalidSize("matching complement needs m >= 2")
    return (1 << (m + 1)) + m - 1, factorial(m - 1) * factorial(m) * (m + 1)


def default_count_methods(p: Poset):
    """(ideal method, extension method) poset_efficiency would pick."""
    if isinstance(p, CirculantBipartitePoset):
        ideal_method = "circulant-transfer"
        ext_method = "bipartite-fst" if p.m <= 22 else "orbit"
    else:
        ideal_method = "lattice"
        ext_method = "ideal-dp"
    return ideal_method, ext_method


def poset_efficiency(
    p: Poset,
    memory_budget: int = DEFAULT_MEMORY_BUDGET,
    alpha: int | None = None,
    lam: int | None = None,
) -> EfficiencyReport:
    """Exact alpha, lambda, and 1/eta of the poset.

    Precomputed counts can be passed in to avoid recounting.
    """
    ideal_method, ext_method = default_count_methods(p)
    if alpha is None:
        alpha = count_ideals(p, ideal_method, memory_budget)
    if lam is None:
        lam = count_linear_extensions(p, ext_method, memory_budget)
    return make_report(p.n, alpha, lam, method=f"ideals:{ideal_method},extensions:{ext_method}")


# ---------------------------------------------------------------------------
# Text format: line 1 "n m"; then m lines "u v" of 0-indexed cover pairs.


def poset_to_text(p: Poset) -> str:
    lines = [f"{p.n} {len(p.covers)}"]
    lines += [f"{u} {v}" for u, v in p.covers]
    return "\n".join(lines) + "\n"


def poset_from_text(text: str) -> Poset:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise InvalidInstance("empty poset file")
    try:
        n, m = map(int, lines[0].split())
        covers = [tuple(map(int, ln.split())) for ln in lines[1 : m + 1]]
    except ValueError as exc:
        raise InvalidInstance(f"malformed poset file: {exc}") from exc
    if len(covers) != m:
        raise InvalidInstance("poset file truncated")
    return Poset(n, covers)
