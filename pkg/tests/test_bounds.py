"""Tests for counting functions and the exact bound verdicts."""

from fractions import Fraction

import pytest

from etazeros.bounds import (
    CountReport,
    chain_count_lower_bound,
    cs_bound_check,
    lacunarity_density,
    ono_bound_check,
    zero_count,
)
from etazeros.engine import ScanJob, ScanReport, ZeroRecord, scan_zeros


@pytest.fixture(scope="module")
def scan_r15_25214():
    return scan_zeros(ScanJob(r=15, n_max=25214, threads=1))


@pytest.fixture(scope="module")
def scan_r7_30000():
    return scan_zeros(ScanJob(r=7, n_max=30000, threads=1))


@pytest.fixture(scope="module")
def scan_r2_10000():
    return scan_zeros(ScanJob(r=2, n_max=10_000, threads=1))


# ---------------------------------------------------------------------------
# zero_count


def test_zero_count_r15_examples(scan_r15_25214):
    assert zero_count(15, 52, scan_r15_25214) == 0
    assert zero_count(15, 53, scan_r15_25214) == 1
    assert zero_count(15, 500, scan_r15_25214) == 2
    assert zero_count(15, 25214, scan_r15_25214) == 11


def test_zero_count_r7_examples(scan_r7_30000):
    assert zero_count(7, 28016, scan_r7_30000) == 0
    assert zero_count(7, 30000, scan_r7_30000) == 1


def test_zero_count_errors(scan_r15_25214):
    with pytest.raises(ValueError):
        zero_count(15, 30_000, scan_r15_25214)  # beyond coverage
    with pytest.raises(ValueError):
        zero_count(7, 100, scan_r15_25214)  # wrong power
    shaky = ScanReport(
        r=15,
        n_max=100,
        prime_basket=(7, 11),
        algorithm=scan_r15_25214.algorithm,
        records=[ZeroRecord(15, 53, "candidate", witness_primes=(7, 11))],
    )
    with pytest.raises(ValueError):
        zero_count(15, 100, shaky)


# ---------------------------------------------------------------------------
# closed-form chain bound


def test_chain_bound_r15_tight_margin():
    v = chain_count_lower_bound(15, 96183)
    assert isinstance(v, Fraction)
    assert v > 0
    assert (15 * v) ** 2 > 96183  # the sqrt comparison, exactly
    assert v < 21  # the true count at this x


def test_chain_bound_r5_below_first_zero():
    assert chain_count_lower_bound(5, 1559) <= 0
    assert chain_count_lower_bound(5, 1560) <= 0  # single zero gives -2/3
    assert chain_count_lower_bound(5, 10**6) > 0


def test_chain_bound_r7_large_x_exact_comparison():
    v = chain_count_lower_bound(7, 10**10)
    assert v > Fraction(10**5, 505)


def test_chain_bound_never_exceeds_certified_count(scan_r15_25214):
    for x in (53, 500, 5000, 25214):
        v = chain_count_lower_bound(15, x)
        assert v <= zero_count(15, x, scan_r15_25214)


def test_chain_bound_rejects_unknown_r():
    with pytest.raises(ValueError):
        chain_count_lower_bound(9, 100)
    with pytest.raises(ValueError):
        chain_count_lower_bound(15, 0)


# ---------------------------------------------------------------------------
# sqrt-count check


def test_cs_check_below_threshold_still_reports(scan_r15_25214):
    report = cs_bound_check(15, 2627, scan_r15_25214)
    assert report.zero_count == 4
    assert report.nonzero_count == 2627 + 1 - 4
    assert not report.threshold_met  # 2627 < 96183
    assert not report.satisfied
    assert report.ratio == Fraction(16, 2627)
    assert report.bound_value == Fraction(1, 225)


def test_cs_check_flags_inconsistent_scan_data():
    # records claim zero zeros up to 96183; the chain bound knows better
    empty = ScanReport(
        r=15, n_max=96183, prime_basket=(7,), algorithm=None, records=[]
    )
    with pytest.raises(ArithmeticError):
        cs_bound_check(15, 96183, empty)


def test_cs_check_rejects_unsupported_r(scan_r2_10000):
    with pytest.raises(ValueError):
        cs_bound_check(2, 1000, scan_r2_10000)


# ---------------------------------------------------------------------------
# non-vanishing checks


def test_ono_check_r15_boundary(scan_r15_25214):
    report = ono_bound_check(15, 25214, scan_r15_25214)
    assert report.zero_count == 11
    assert report.nonzero_count == 25204
    assert report.satisfied  # 25204/25214 >= 52/53
    assert report.threshold_met
    assert report.refined_threshold_met  # x == 25214 exactly
    assert report.refined_satisfied  # (14 * 10)^2 = 19600 <= 25214
    assert report.ratio == Fraction(25204, 25214)


def test_ono_check_r7(scan_r7_30000):
    report = ono_bound_check(7, 30000, scan_r7_30000)
    assert report.zero_count == 1
    assert report.satisfied
    assert report.refined_satisfied
    assert report.refined_threshold_met  # 30000 >= 27699


def test_ono_check_below_refined_threshold(scan_r15_25214):
    report = ono_bound_check(15, 20000, scan_r15_25214)
    assert report.satisfied  # the linear ratio holds everywhere
    assert not report.refined_threshold_met
    assert not report.refined_satisfied


def test_count_report_serialization(scan_r15_25214):
    report = ono_bound_check(15, 25214, scan_r15_25214)
    d = report.to_json_dict()
    assert d["ratio"] == "12602/12607"  # 25204/25214 reduced
    assert d["bound_value"] == "52/53"
    assert d["satisfied"] is True
    assert Fraction(d["ratio"]) == report.ratio


# ---------------------------------------------------------------------------
# densities


def test_lacunarity_r2_decays(scan_r2_10000):
    # the density tends to 0 but very slowly; these exact values are frozen
    # from a full expansion over [0, 10^4]
    rows = lacunarity_density(2, [1000, 10_000], scan_r2_10000)
    assert rows[0].density == Fraction(482, 1001)
    assert rows[-1].density == Fraction(4020, 10001)
    assert rows[-1].density < rows[0].density < Fraction(1, 2)
    for row in rows:
        assert row.zero_count + row.nonzero_count == row.n + 1


def test_lacunarity_r12_stays_at_one():
    scan = scan_zeros(ScanJob(r=12, n_max=1000, threads=1))
    rows = lacunarity_density(12, [1000], scan)
    assert rows[0].density == 1


def test_lacunarity_r1_pentagonal_thinness():
    scan = scan_zeros(ScanJob(r=1, n_max=2000, threads=1))
    rows = lacunarity_density(1, [2000], scan)
    assert rows[0].nonzero_count <= 74
    assert rows[0].density <= Fraction(74, 2001)


def test_lacunarity_rejects_bad_grid(scan_r2_10000):
    with pytest.raises(ValueError):
        lacunarity_density(2, [], scan_r2_10000)
    with pytest.raises(ValueError):
        lacunarity_density(2, [100, 100], scan_r2_10000)
