"""Efficiency reports: formula, precision, and edge cases."""

from math import factorial

import mpmath

from chaineff.efficiency import EfficiencyReport, inv_eta_string, make_report


class TestInvEta:
    def test_power_set(self):
        # |A| = 2^n, c = n!: 1/eta = 2^2 exactly
        for n in (3, 5, 8):
            assert abs(float(inv_eta_string(n, 2**n, factorial(n))) - 4.0) < 1e-11

    def test_no_chains_is_inf(self):
        assert inv_eta_string(4, 10, 0) == "inf"

    def test_twelve_significant_digits(self):
        s = inv_eta_string(5, 33, 7)
        digits = s.replace(".", "").lstrip("0").rstrip("0")
        assert len(s.replace(".", "").lstrip("0")) >= 12

    def test_matches_high_precision_reference(self):
        n, size, chains = 7, 130, 91
        with mpmath.workprec(300):
            ref = mpmath.power(
                mpmath.mpf(size) ** 2 * mpmath.factorial(n) / chains, mpmath.mpf(1) / n
            )
            got = float(inv_eta_string(n, size, chains))
            # 12 significant digits: half-ulp of the last reported digit
            assert abs(got - float(ref)) <= abs(float(ref)) * 5e-12

    def test_report_fields(self):
        rep = make_report(4, 16, 24, "test")
        assert isinstance(rep, EfficiencyReport)
        assert rep.inv_eta_float > 0
        assert not rep.no_chains
