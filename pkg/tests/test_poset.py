"""Poset counting: ideals and linear extensions, all methods cross-checked."""

import random
from itertools import permutations

import pytest

from chaineff.errors import InvalidInstance, MethodMismatch
from chaineff.poset import (
    Poset,
    closed_form_matching_complement,
    count_ideals,
    count_linear_extensions,
    enumerate_ideals,
    make_antichain,
    make_bucket_order,
    make_chain,
    make_circulant,
    make_counterexample,
    make_matching_complement,
    poset_efficiency,
    poset_from_text,
    poset_to_text,
)

IDEAL_METHODS = ("lattice", "bipartite-sum", "circulant-transfer")
EXT_METHODS = ("brute", "ideal-dp", "bipartite-fst", "orbit")


def brute_ideals(p):
    """Independent oracle: test all 2^n subsets for downward closure."""
    count = 0
    for mask in range(1 << p.n):
        ok = True
        for v in range(p.n):
            if mask & (1 << v) and (p.pred_mask[v] & mask) != p.pred_mask[v]:
                ok = False
                break
        count += ok
    return count


def brute_extensions(p):
    count = 0
    for sigma in permutations(range(p.n)):
        pos = {v: i for i, v in enumerate(sigma)}
        if all(pos[u] < pos[v] for u, v in p.covers):
            count += 1
    return count


def random_poset(rng, n):
    covers = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < 0.3:
                covers.append((i, j))
    return Poset(n, covers)


class TestConstruction:
    def test_rejects_cycle(self):
        with pytest.raises(InvalidInstance):
            Poset(3, [(0, 1), (1, 2), (2, 0)])

    def test_chain_counts(self):
        p = make_chain(6)
        assert count_ideals(p) == 7
        assert count_linear_extensions(p) == 1

    def test_antichain_counts(self):
        p = make_antichain(5)
        assert count_ideals(p) == 32
        assert count_linear_extensions(p) == 120

    def test_bucket_order_ideals(self):
        # two buckets of 13: alpha = 2^14 - 1
        p = make_bucket_order(13, 2)
        assert count_ideals(p, "lattice") == 2**14 - 1

    def test_text_roundtrip(self):
        p = random_poset(random.Random(3), 7)
        q = poset_from_text(poset_to_text(p))
        assert q.n == p.n and set(q.covers) == set(p.covers)


class TestIdealCounting:
    @pytest.mark.parametrize("seed", range(15))
    def test_lattice_matches_brute(self, seed):
        p = random_poset(random.Random(seed), 7)
        assert count_ideals(p, "lattice") == brute_ideals(p)

    @pytest.mark.parametrize("m", [2, 3, 4, 5])
    def test_bipartite_methods_agree(self, m):
        p = make_matching_complement(m)
        values = {count_ideals(p, meth) for meth in IDEAL_METHODS}
        assert len(values) == 1

    @pytest.mark.parametrize(
        "m,offsets", [(3, (0,)), (5, (0, 1)), (7, (0, 1, 3)), (9, (0, 2, 3))]
    )
    def test_circulant_methods_agree(self, m, offsets):
        p = make_circulant(m, offsets)
        values = {count_ideals(p, meth) for meth in IDEAL_METHODS}
        assert len(values) == 1

    def test_transfer_requires_circulant(self):
        with pytest.raises(MethodMismatch):
            count_ideals(make_chain(4), "circulant-transfer")

    def test_ideal_enumeration_is_lattice(self):
        p = random_poset(random.Random(42), 6)
        ideals = enumerate_ideals(p)
        assert len(ideals) == brute_ideals(p)
        assert 0 in ideals and (1 << p.n) - 1 in ideals


class TestExtensionCounting:
    @pytest.mark.parametrize("seed", range(15))
    def test_ideal_dp_matches_brute(self, seed):
        p = random_poset(random.Random(200 + seed), 7)
        assert count_linear_extensions(p, "ideal-dp") == brute_extensions(p)

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_bipartite_methods_agree(self, m):
        p = make_matching_complement(m)
        ref = count_linear_extensions(p, "brute")
        for meth in EXT_METHODS[1:]:
            assert count_linear_extensions(p, meth) == ref

    @pytest.mark.parametrize("m,offsets", [(7, (0, 1, 3)), (9, (0, 1, 3)), (11, (0, 1, 3))])
    def test_circulant_methods_agree(self, m, offsets):
        p = make_circulant(m, offsets)
        a = count_linear_extensions(p, "ideal-dp")
        b = count_linear_extensions(p, "bipartite-fst")
        c = count_linear_extensions(p, "orbit")
        assert a == b == c


class TestMatchingComplement:
    @pytest.mark.parametrize("m", range(2, 8))
    def test_closed_forms(self, m):
        alpha, lam = closed_form_matching_complement(m)
        p = make_matching_complement(m)
        from math import factorial

        assert alpha == 2 ** (m + 1) + m - 1
        assert lam == factorial(m - 1) * factorial(m) * (m + 1)
        assert count_ideals(p, "lattice") == alpha
        ref = (
            count_linear_extensions(p, "brute")
            if 2 * m <= 10
            else count_linear_extensions(p, "ideal-dp")
        )
        assert lam == ref

    def test_m13_efficiency(self):
        alpha, lam = closed_form_matching_complement(13)
        report = poset_efficiency(make_matching_complement(13), alpha=alpha, lam=lam)
        assert abs(report.inv_eta_float - 3.9161) < 0.0005


class TestCounterexample:
    def test_shape(self):
        p = make_counterexample()
        assert p.n == 34


class TestEfficiencyBridge:
    def test_inv_eta_on_small_circulant(self):
        p = make_circulant(5, (0, 1))
        report = poset_efficiency(p)
        # definition cross-check: (alpha^2 * n! / lambda)^(1/n)
        import math

        alpha = count_ideals(p)
        lam = count_linear_extensions(p)
        expect = (alpha**2 * math.factorial(p.n) / lam) ** (1 / p.n)
        assert abs(report.inv_eta_float - expect) < 1e-9
