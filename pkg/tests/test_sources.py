"""Tests for source/chain classification.

Discriminant factorizations are frozen from independent factoring, and chain
predictions are cross-checked against exact-arithmetic zero sets.
"""

import pytest

from etazeros.primes import factorize
from etazeros.series import EXACT, eta_power
from etazeros.sources import (
    CHAIN_RULE_COPRIME_SIX,
    CHAIN_RULE_ODD,
    census,
    chain_indices,
    chain_rule_for,
    classify_zeros,
    discriminant,
    is_admissible_discriminant,
    is_descendant,
    is_refined_source,
)

R5_ZEROS_3000 = [1560, 1802, 1838, 2318, 2690]
R15_ZEROS_7000 = [53, 482, 1340, 2627, 4343, 6488]


# ---------------------------------------------------------------------------
# discriminants and admissibility


def test_discriminant_values_and_factorizations():
    assert discriminant(5, 1560) == 37445
    assert factorize(37445) == {5: 1, 7489: 1}
    assert discriminant(7, 28017) == 672415
    assert factorize(672415) == {5: 1, 181: 1, 743: 1}
    assert discriminant(15, 53) == 1287
    assert factorize(1287) == {3: 2, 11: 1, 13: 1}


def test_admissibility_ignores_powers_of_two_and_three():
    assert is_admissible_discriminant(1287)  # 3^2 * 11 * 13
    assert is_admissible_discriminant(37445)
    assert is_admissible_discriminant(672415)
    assert is_admissible_discriminant(24 * 3)
    assert not is_admissible_discriminant(1325)  # 5^2 * 53
    assert not is_admissible_discriminant(147)  # 3 * 7^2
    with pytest.raises(ValueError):
        is_admissible_discriminant(0)


def test_refined_requires_three_dividing_r_and_27_coprime():
    assert is_refined_source(15, 1287)
    assert not is_refined_source(5, 37445)
    assert not is_refined_source(15, 135)  # 27 | 135
    assert is_refined_source(9, 33)


def test_chain_rule_selection():
    assert chain_rule_for(15, 53) == CHAIN_RULE_ODD
    assert chain_rule_for(5, 1560) == CHAIN_RULE_COPRIME_SIX
    assert chain_rule_for(15, 5) == CHAIN_RULE_COPRIME_SIX  # D0 = 135 = 27*5
    with pytest.raises(ValueError):
        chain_rule_for(4, 10)


# ---------------------------------------------------------------------------
# chains


def test_chain_for_r5_source_1560():
    assert chain_indices(5, 1560, 100_000) == [1560, 39005, 76450]
    assert chain_indices(5, 1560, 39004) == [1560]


def test_chain_for_refined_r15_source_53():
    assert chain_indices(15, 53, 2000) == [53, 482, 1340]
    assert chain_indices(15, 53, 7000) == R15_ZEROS_7000


def test_chain_respects_coprime_six_rule():
    # D0 = 135 is divisible by 27, so l = 3 is excluded even though 3 | 15
    assert chain_indices(15, 5, 300) == [5, 140, 275]


def test_chain_members_are_exact_zeros():
    series = eta_power(15, 1500, EXACT)
    for n in chain_indices(15, 53, 1499):
        assert series.coefficient(n) == 0


def test_descendant_predicate():
    assert is_descendant(5, 39005, 1560)
    assert is_descendant(5, 76450, 1560)
    assert not is_descendant(5, 1802, 1560)
    assert not is_descendant(5, 1560, 1560)
    assert is_descendant(15, 482, 53)  # l = 3, allowed by the refined rule
    # l = 3 with quotient 9 exists arithmetically but the rule forbids it
    assert discriminant(15, 50) == 9 * discriminant(15, 5)
    assert not is_descendant(15, 50, 5)


# ---------------------------------------------------------------------------
# classification


def test_classify_r15_finds_single_source():
    report = classify_zeros(15, R15_ZEROS_7000, n_max=7000)
    assert report.source_indices == [53]
    src = report.sources[0]
    assert src.members == tuple(R15_ZEROS_7000)
    assert src.refined and src.chain_rule == CHAIN_RULE_ODD
    assert src.admissible
    assert report.anomalies == []


def test_classify_r5_small_range_all_sources():
    report = classify_zeros(5, R5_ZEROS_3000, n_max=3000)
    assert report.source_indices == R5_ZEROS_3000
    assert all(s.admissible for s in report.sources)
    assert all(s.members == (s.n0,) for s in report.sources)
    assert report.anomalies == []


def test_classify_flags_inadmissible_source():
    # 24*5 + 5 = 125 = 5^3; synthetic zero list exercising the advisory path
    report = classify_zeros(5, [5], n_max=10)
    assert report.source_indices == [5]
    assert not report.sources[0].admissible
    assert report.sources[0].anomalous
    assert len(report.anomalies) == 1


def test_classify_flags_missing_chain_members():
    report = classify_zeros(15, [53, 482, 2627], n_max=3000)
    assert report.source_indices == [53]
    assert report.sources[0].missing_members == (1340,)
    assert any("1340" in a for a in report.anomalies)


def test_classify_rejects_even_r_and_index_zero():
    with pytest.raises(ValueError):
        classify_zeros(4, [10])
    with pytest.raises(ValueError):
        classify_zeros(5, [0, 5])


# ---------------------------------------------------------------------------
# census


def test_census_counts_by_threshold():
    report, rows = census(5, R5_ZEROS_3000, thresholds=(1000, 2000, 3000))
    assert [r.source_count for r in rows] == [0, 3, 5]
    assert [r.zero_count for r in rows] == [0, 3, 5]
    assert [r.anomaly_count for r in rows] == [0, 0, 0]
    assert report.source_indices == R5_ZEROS_3000


def test_census_single_chain_counts_sources_once():
    _, rows = census(15, R15_ZEROS_7000, thresholds=(100, 7000))
    assert [r.source_count for r in rows] == [1, 1]
    assert [r.zero_count for r in rows] == [1, 6]


def test_census_anomaly_attribution_respects_threshold():
    # missing member 1340 must not taint the row at threshold 1000
    _, rows = census(15, [53, 482, 2627], thresholds=(1000, 3000))
    assert [r.anomaly_count for r in rows] == [0, 1]


def test_census_rejects_bad_thresholds():
    with pytest.raises(ValueError):
        census(5, [], thresholds=())
    with pytest.raises(ValueError):
        census(5, [], thresholds=(100, 100))
