"""Chain-efficiency reports computed from exact integer counts.

The root (c / (size^2 n!))^(1/n) is evaluated through high-precision
logarithms of the exact integers, never through floating factorials.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial

import mpmath

# 1/eta is reported to >= 8 significant digits; 160 bits of working
# precision leaves ample headroom for the log magnitudes involved.
WORKING_PRECISION_BITS = 160
REPORT_DIGITS = 12


@dataclass(frozen=True)
class EfficiencyReport:
    """Exact counts plus the derived inverse efficiency 1/eta."""

    n: int
    size: int
    chains: int
    inv_eta: str  # decimal string, REPORT_DIGITS significant digits; "inf" when chains == 0
    method: str

    @property
    def inv_eta_float(self) -> float:
        return float(self.inv_eta)

    @property
    def no_chains(self) -> bool:
        return self.chains == 0


def inv_eta_string(n: int, size: int, chains: int) -> str:
    """1/eta = (size^2 * n! / chains)^(1/n) as a decimal string."""
    if chains == 0:
        return "inf"
    with mpmath.workprec(WORKING_PRECISION_BITS):
        log_ratio = (
            2 * mpmath.log(mpmath.mpf(size))
            + mpmath.log(mpmath.mpf(factorial(n)))
            - mpmath.log(mpmath.mpf(chains))
        )
        value = mpmath.exp(log_ratio / n)
        return mpmath.nstr(value, REPORT_DIGITS, strip_zeros=False)


def make_report(n: int, size: int, chains: int, method: str) -> EfficiencyReport:
    return EfficiencyReport(
        n=n, size=size, chains=chains, inv_eta=inv_eta_string(n, size, chains), method=method
    )
