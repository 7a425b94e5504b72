"""Solver equivalence, witnesses, and space accounting."""

import random
from math import ceil, log2

import pytest

from chaineff.errors import InvalidInstance, UnsupportedSemiring
from chaineff.poset import make_matching_complement
from chaineff.semiring import (
    INF,
    SUM_PRODUCT,
    DfasInstance,
    PermutationProblem,
    TspInstance,
    brute_force_optimum,
    dfas_as_permutation_problem,
    evaluate_permutation,
    tsp_as_permutation_problem,
)
from chaineff.setsystem import from_poset_ideals, full_power_set, tower_of_cubes
from chaineff.solver import (
    SolverConfig,
    solve_chain_tradeoff,
    solve_gurevich_shelah,
    solve_held_karp,
)

FOUR_CITY = [[0, 1, 2, 3], [1, 0, 4, 5], [2, 4, 0, 6], [3, 5, 6, 0]]


def random_tsp(rng, n):
    w = [[0 if i == j else rng.randint(0, 99) for j in range(n)] for i in range(n)]
    return TspInstance.from_matrix(w)


def random_dfas(rng, n):
    arcs = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < 0.4]
    return DfasInstance.from_arcs(n, arcs)


class TestHeldKarp:
    def test_four_city(self):
        prob = tsp_as_permutation_problem(TspInstance.from_matrix(FOUR_CITY))
        res = solve_held_karp(prob)
        assert res.value == 14
        assert evaluate_permutation(prob, res.witness) == 14

    def test_dfas_three_cycle(self):
        prob = dfas_as_permutation_problem(DfasInstance.from_arcs(3, [(0, 1), (1, 2), (2, 0)]))
        assert solve_held_karp(prob).value == 1

    def test_single_element(self):
        from chaineff.semiring import MIN_PLUS

        prob = PermutationProblem(n=1, degree=1, semiring=MIN_PLUS, cost_fn=lambda m, w: 5)
        res = solve_held_karp(prob)
        assert res.value == 5 and res.witness == (0,)

    def test_sum_product_accepted(self):
        # full-power-set DP does not need idempotency
        prob = PermutationProblem(
            n=4, degree=1, semiring=SUM_PRODUCT, cost_fn=lambda m, w: 2.0
        )
        res = solve_held_karp(prob)
        assert res.value == pytest.approx(24 * 16.0)


class TestGurevichShelah:
    def test_four_city(self):
        assert solve_gurevich_shelah(TspInstance.from_matrix(FOUR_CITY)).value == 14

    def test_two_city(self):
        inst = TspInstance.from_matrix([[0, 3], [5, 0]])
        assert solve_gurevich_shelah(inst).value == 8

    def test_rejects_single_city(self):
        with pytest.raises(InvalidInstance):
            solve_gurevich_shelah(TspInstance.from_matrix([[0]]))

    @pytest.mark.parametrize("seed", range(12))
    def test_matches_held_karp(self, seed):
        rng = random.Random(300 + seed)
        inst = random_tsp(rng, rng.randint(4, 9))
        prob = tsp_as_permutation_problem(inst)
        assert solve_gurevich_shelah(inst).value == solve_held_karp(prob).value

    @pytest.mark.parametrize("n", [4, 6, 8, 10, 12])
    def test_space_accounting(self, n):
        rng = random.Random(n)
        inst = random_tsp(rng, n)
        res = solve_gurevich_shelah(inst)
        assert res.stats.peak_resident_entries <= 8 * n * n * (ceil(log2(n)) + 1)


class TestChainTradeoff:
    def systems(self):
        return [
            full_power_set(4),
            tower_of_cubes(2, 2),
            from_poset_ideals(make_matching_complement(2)),
        ]

    @pytest.mark.parametrize("seed", range(8))
    def test_tsp_equivalence(self, seed):
        rng = random.Random(400 + seed)
        inst = random_tsp(rng, rng.randint(4, 9))
        prob = tsp_as_permutation_problem(inst)
        ref = brute_force_optimum(prob)
        for a in self.systems():
            res = solve_chain_tradeoff(prob, SolverConfig(set_system=a, g=1))
            assert res.value == ref
            assert evaluate_permutation(prob, res.witness) == ref

    @pytest.mark.parametrize("seed", range(8))
    def test_dfas_equivalence(self, seed):
        rng = random.Random(500 + seed)
        inst = random_dfas(rng, rng.randint(4, 8))
        prob = dfas_as_permutation_problem(inst)
        ref = brute_force_optimum(prob)
        for a in self.systems():
            res = solve_chain_tradeoff(prob, SolverConfig(set_system=a, g=1))
            assert res.value == ref

    def test_g2_matches(self):
        rng = random.Random(77)
        inst = random_tsp(rng, 7)
        prob = tsp_as_permutation_problem(inst)
        a = full_power_set(3)
        res = solve_chain_tradeoff(prob, SolverConfig(set_system=a, g=2))
        assert res.value == brute_force_optimum(prob)

    def test_randomized_cover_strategy(self):
        rng = random.Random(88)
        inst = random_tsp(rng, 6)
        prob = tsp_as_permutation_problem(inst)
        res = solve_chain_tradeoff(
            prob,
            SolverConfig(set_system=tower_of_cubes(2, 2), cover_strategy="random", seed=9),
        )
        assert res.value == brute_force_optimum(prob)

    def test_space_accounting(self):
        rng = random.Random(99)
        inst = random_tsp(rng, 9)
        prob = tsp_as_permutation_problem(inst)
        a = tower_of_cubes(2, 2)
        res = solve_chain_tradeoff(prob, SolverConfig(set_system=a, g=1))
        s = ceil(prob.n / a.n)
        n_padded = a.n * s
        assert res.stats.peak_resident_entries <= len(a.members) ** s * n_padded**prob.degree
        assert res.stats.cover_product_size >= 1

    def test_rejects_non_idempotent(self):
        prob = PermutationProblem(
            n=4, degree=1, semiring=SUM_PRODUCT, cost_fn=lambda m, w: 1.0
        )
        with pytest.raises(UnsupportedSemiring):
            solve_chain_tradeoff(prob, SolverConfig(set_system=full_power_set(2)))

    def test_rejects_chainless_system(self):
        from chaineff.errors import InvalidSetSystem
        from chaineff.setsystem import SetSystem

        prob = tsp_as_permutation_problem(TspInstance.from_matrix(FOUR_CITY))
        with pytest.raises(InvalidSetSystem):
            solve_chain_tradeoff(
                prob, SolverConfig(set_system=SetSystem(3, [0b1, 0b111]))
            )

    def test_inf_only_tours(self):
        w = [[0, INF, 1], [1, 0, INF], [INF, 1, 0]]
        inst = TspInstance.from_matrix(w)
        prob = tsp_as_permutation_problem(inst)
        res = solve_held_karp(prob)
        assert res.value == brute_force_optimum(prob)
