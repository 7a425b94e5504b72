"""Bound evaluations: entropy helpers, upper bounds, sandwich checks."""

import random

import pytest

from chaineff.bounds import (
    basic_upper_bound,
    binary_entropy,
    improved_upper_bound,
    inverse_binary_entropy,
    regular_bipartite_bounds,
    regular_bipartite_efficiency_limit,
)
from chaineff.errors import InvalidDegree, InvalidSize
from chaineff.poset import make_circulant, make_matching_complement, poset_efficiency


class TestEntropy:
    def test_symmetry_and_half(self):
        rng = random.Random(1)
        for _ in range(1000):
            p = rng.random()
            assert abs(float(binary_entropy(p) - binary_entropy(1 - p))) < 1e-12
        assert float(binary_entropy(0.5)) == 1.0

    def test_inverse(self):
        rng = random.Random(2)
        for _ in range(200):
            p = rng.random()
            back = float(inverse_binary_entropy(binary_entropy(p)))
            assert abs(back - min(p, 1 - p)) < 1e-9


class TestBasicBound:
    def test_rejects_small_n(self):
        with pytest.raises(InvalidSize):
            basic_upper_bound(2)

    def test_n3_vacuous(self):
        report = basic_upper_bound(3)
        assert abs(float(report.auxiliaries["explicit"]) - 3 * 2.718281828459045 / 3) < 1e-9

    def test_large_n_approaches_third(self):
        assert abs(basic_upper_bound(10**7).value_float - 1 / 3) < 1e-3

    def test_reports_tighter_form(self):
        report = basic_upper_bound(1000)
        explicit = float(report.auxiliaries["explicit"])
        simplified = float(report.auxiliaries["simplified"])
        assert report.value_float == min(explicit, simplified)
        # the explicit form is the tighter one for all moderate n
        assert explicit <= simplified

    def test_monotone_decreasing(self):
        values = [basic_upper_bound(n).value_float for n in (10, 100, 1000, 10000)]
        assert values == sorted(values, reverse=True)


class TestImprovedBound:
    def test_paper_constants(self):
        report = improved_upper_bound()
        delta = float(report.auxiliaries["delta"])
        gamma = float(report.auxiliaries["gamma"])
        assert abs(delta - 0.41069) < 1e-4
        assert gamma <= 0.3261
        assert report.value_float <= 0.331644
        assert 1 / report.value_float > 3.015

    def test_gamma_dominates_both_branches(self):
        report = improved_upper_bound()
        delta = float(report.auxiliaries["delta"])
        assert float(binary_entropy(delta)) / 3 <= 0.3261
        assert float(binary_entropy((1 - 2 * delta) / 3)) <= 0.3261

    def test_improved_beats_basic(self):
        improved = improved_upper_bound().value_float
        for n in (3, 10, 100, 10**6):
            assert improved < basic_upper_bound(n).value_float


class TestRegularBipartite:
    def test_rejects_bad_degree(self):
        with pytest.raises(InvalidDegree):
            regular_bipartite_bounds(5, 6)

    def test_bucket_collapse(self):
        # d = m: the lower bound collapses to 2^{m+1} - 1
        report = regular_bipartite_bounds(13, 13)
        assert abs(float(report.auxiliaries["alpha_lower"]) - (2**14 - 1)) < 1e-3

    def test_m29_respects_construction(self):
        report = regular_bipartite_bounds(29, 6)
        assert float(report.auxiliaries["inv_eta_lower"]) <= 3.7492 + 0.0005

    @pytest.mark.parametrize("m", [3, 4, 5, 6])
    def test_sandwich_on_exact_circulants(self, m):
        # d-regular circulants: exact efficiency below the bound
        for d in range(1, m + 1):
            offsets = tuple(range(d))
            p = make_circulant(m, offsets)
            exact = 1 / poset_efficiency(p).inv_eta_float
            bound = regular_bipartite_bounds(m, d).value_float
            assert exact <= bound + 1e-9


class TestEfficiencyLimit:
    @pytest.mark.parametrize("d", range(1, 9))
    def test_exceeds_3_6(self, d):
        assert regular_bipartite_efficiency_limit(d).value_float > 3.6

    def test_d6_maximizer(self):
        report = regular_bipartite_efficiency_limit(6)
        assert abs(float(report.auxiliaries["q"]) - 0.9750364898053781) < 1e-6

    def test_d7_maximizer(self):
        report = regular_bipartite_efficiency_limit(7)
        assert abs(float(report.auxiliaries["q"]) - 0.99) < 5e-3
