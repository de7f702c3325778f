"""Counting functions and exact verification of non-vanishing bounds.

All verdicts are exact: a claim like Z > sqrt(X)/c is decided as the integer
comparison (c Z)^2 > X, and the closed-form chain bounds are evaluated as
rationals with the square root floored at 30 decimal digits (the interesting
margins are around 1e-5, so the 1e-30 floor error cannot flip a verdict,
and flooring only ever weakens a lower bound). Counts use n in [0, X]
inclusive, so zero_count + nonzero_count = X + 1; densities are quoted
against the X + 1 sample points for the same reason.

Verified bound families, keyed by the power r:

  sqrt-count     zero_count(X) > sqrt(X)/c for X past a validity threshold;
                 constants c: 119 (r=5), 505 (r=7), 15 (r=15) with
                 thresholds 790377629, 10^10, 96183.
  linear         nonzero_count(X) >= ratio * X, ratio 84047/84051 (r=7)
                 and 52/53 (r=15), valid for all X >= 1.
  refined        nonzero_count(X) >= X - sqrt(X)/c, with (c, threshold)
                 (125, 27699) for r=7 and (14, 25214) for r=15.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Sequence

from .engine import STATUS_CANDIDATE, STATUS_CERTIFIED, ScanReport

__all__ = [
    "CS_CONSTANT",
    "CS_THRESHOLD",
    "ONO_LINEAR_RATIO",
    "ONO_REFINED",
    "CountReport",
    "DensityRow",
    "chain_count_lower_bound",
    "cs_bound_check",
    "lacunarity_density",
    "ono_bound_check",
    "zero_count",
]

CS_CONSTANT = {5: 119, 7: 505, 15: 15}
CS_THRESHOLD = {5: 790377629, 7: 10**10, 15: 96183}
ONO_LINEAR_RATIO = {7: Fraction(84047, 84051), 15: Fraction(52, 53)}
ONO_REFINED = {7: (125, 27699), 15: (14, 25214)}

CS_BOUND_NAME = "sqrt_zero_count"
ONO_BOUND_NAME = "linear_nonzero"

# chain discriminants behind the closed-form lower bounds
_CHAIN_FORM = {5: (24, 5, 37445, 3), 7: (24, 7, 672415, 3)}

_SQRT_SCALE = 10**30


def _floor_sqrt(value: Fraction) -> Fraction:
    """Largest multiple of 1/(denominator * 1e30) below sqrt(value)."""
    if value < 0:
        raise ValueError("negative radicand")
    num, den = value.numerator, value.denominator
    return Fraction(isqrt(num * den * _SQRT_SCALE * _SQRT_SCALE), den * _SQRT_SCALE)


def chain_count_lower_bound(r: int, x: int) -> Fraction:
    """Closed-form lower bound for the number of chain zeros up to x.

    The first chain of eta^r contributes one zero for each admissible
    multiplier l with n_0 l^2 + r (l^2 - 1)/24 <= x; counting the l gives
    sqrt((24x + r)/D0)/3 - 1 for r in {5, 7} and, with the denser odd-l rule,
    sqrt((8x + 5)/1716) - 1/2 for r = 15. Flooring keeps the value a true
    lower bound. Values <= 0 simply mean the range holds no guaranteed zero.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    if r in _CHAIN_FORM:
        scale, shift, d0, divisor = _CHAIN_FORM[r]
        root = _floor_sqrt(Fraction(scale * x + shift, d0))
        return root / divisor - 1
    if r == 15:
        return _floor_sqrt(Fraction(8 * x + 5, 1716)) - Fraction(1, 2)
    raise ValueError("no closed-form chain bound for r=%d" % r)


def _certified_zero_prefix(r: int, x: int, scan_data: ScanReport) -> list[int]:
    if scan_data.r != r:
        raise ValueError("scan data is for r=%d, not r=%d" % (scan_data.r, r))
    if scan_data.n_max < x:
        raise ValueError(
            "scan covers n <= %d but the count needs %d" % (scan_data.n_max, x)
        )
    unresolved = [
        rec.n
        for rec in scan_data.records
        if rec.status == STATUS_CANDIDATE and rec.n <= x
    ]
    if unresolved:
        raise ValueError(
            "zero count is undecidable: unresolved candidates %s" % unresolved[:5]
        )
    return [
        rec.n
        for rec in scan_data.records
        if rec.status == STATUS_CERTIFIED and rec.n <= x
    ]


def zero_count(r: int, x: int, scan_data: ScanReport) -> int:
    """|{0 <= n <= x : a_r(n) = 0}| from certified scan records."""
    return len(_certified_zero_prefix(r, x, scan_data))


@dataclass(frozen=True)
class CountReport:
    r: int
    x: int
    zero_count: int
    nonzero_count: int
    ratio: Fraction
    bound_name: str
    bound_value: Fraction
    satisfied: bool
    threshold_met: bool
    refined_bound_value: Fraction | None = None
    refined_satisfied: bool | None = None
    refined_threshold_met: bool | None = None

    def to_json_dict(self) -> dict:
        out = {
            "r": str(self.r),
            "x": str(self.x),
            "zero_count": str(self.zero_count),
            "nonzero_count": str(self.nonzero_count),
            "ratio": str(self.ratio),
            "bound_name": self.bound_name,
            "bound_value": str(self.bound_value),
            "satisfied": self.satisfied,
            "threshold_met": self.threshold_met,
        }
        if self.refined_bound_value is not None:
            out["refined_bound_value"] = str(self.refined_bound_value)
            out["refined_satisfied"] = self.refined_satisfied
            out["refined_threshold_met"] = self.refined_threshold_met
        return out


def cs_bound_check(r: int, x: int, scan_data: ScanReport) -> CountReport:
    """Check zero_count(x) > sqrt(x)/c, reported as (c Z)^2 > x exactly.

    Below the validity threshold the comparison is still reported but
    `satisfied` stays false. The closed-form chain bound must never exceed
    the actual count; that cross-check guards both modules at once.
    """
    if r not in CS_CONSTANT:
        raise ValueError("no sqrt-count constant for r=%d" % r)
    zeros = _certified_zero_prefix(r, x, scan_data)
    z = len(zeros)
    lower = chain_count_lower_bound(r, x)
    if lower > z:
        raise ArithmeticError(
            "chain lower bound %s exceeds the certified count %d" % (lower, z)
        )
    c = CS_CONSTANT[r]
    threshold_met = x >= CS_THRESHOLD[r]
    return CountReport(
        r=r,
        x=x,
        zero_count=z,
        nonzero_count=x + 1 - z,
        ratio=Fraction(z * z, x),
        bound_name=CS_BOUND_NAME,
        bound_value=Fraction(1, c * c),
        satisfied=bool(threshold_met and (c * z) ** 2 > x),
        threshold_met=threshold_met,
    )


def ono_bound_check(r: int, x: int, scan_data: ScanReport) -> CountReport:
    """Check the linear and refined non-vanishing lower bounds.

    Linear: nonzero_count >= ratio * x (valid for every x >= 1). Refined:
    nonzero_count >= x - sqrt(x)/c once x reaches the threshold, decided as
    (c (x - nonzero))^2 <= x.
    """
    if r not in ONO_LINEAR_RATIO:
        raise ValueError("no non-vanishing ratio for r=%d" % r)
    z = len(_certified_zero_prefix(r, x, scan_data))
    nz = x + 1 - z
    ratio_bound = ONO_LINEAR_RATIO[r]
    linear_ok = nz * ratio_bound.denominator >= ratio_bound.numerator * x
    c, threshold = ONO_REFINED[r]
    refined_met = x >= threshold
    gap = x - nz
    refined_ok = bool(refined_met and (gap <= 0 or (c * gap) ** 2 <= x))
    return CountReport(
        r=r,
        x=x,
        zero_count=z,
        nonzero_count=nz,
        ratio=Fraction(nz, x),
        bound_name=ONO_BOUND_NAME,
        bound_value=ratio_bound,
        satisfied=bool(linear_ok),
        threshold_met=True,
        refined_bound_value=1 - Fraction(1, c * max(isqrt(x), 1)),
        refined_satisfied=refined_ok,
        refined_threshold_met=refined_met,
    )


@dataclass(frozen=True)
class DensityRow:
    n: int
    zero_count: int
    nonzero_count: int
    density: Fraction

    def to_json_dict(self) -> dict:
        return {
            "n": str(self.n),
            "zero_count": str(self.zero_count),
            "nonzero_count": str(self.nonzero_count),
            "density": str(self.density),
        }


def lacunarity_density(
    r: int, n_grid: Sequence[int], scan_data: ScanReport
) -> list[DensityRow]:
    """Nonzero-coefficient density over [0, n] for each grid point."""
    if not n_grid or list(n_grid) != sorted(set(n_grid)):
        raise ValueError("n_grid must be strictly increasing and nonempty")
    zeros = _certified_zero_prefix(r, n_grid[-1], scan_data)
    rows = []
    for n in n_grid:
        z = sum(1 for m in zeros if m <= n)
        rows.append(
            DensityRow(
                n=n,
                zero_count=z,
                nonzero_count=n + 1 - z,
                density=Fraction(n + 1 - z, n + 1),
            )
        )
    return rows
