"""Tests for the scan/certification engine.

Expected zero sets are frozen from exact-arithmetic runs and cross-checked
here against the exact series, which exercises a disjoint code path from the
modular scan pipeline.
"""

import json

import pytest

from etazeros.engine import (
    DEFAULT_BASKET,
    STATUS_CANDIDATE,
    STATUS_CERTIFIED,
    STATUS_REFUTED,
    ScanJob,
    ScanReport,
    ZeroRecord,
    certify_zero,
    coefficient_bound,
    nonvanishing_sweep,
    scan_zeros,
)
from etazeros.primes import is_prime
from etazeros.series import EXACT, eta_power

R5_ZEROS_3000 = [1560, 1802, 1838, 2318, 2690]
R15_ZEROS_1000 = [53, 482]


def exact_zero_set(r, precision):
    series = eta_power(r, precision, EXACT)
    return [n for n in series.zero_indices() if n >= 1]


# ---------------------------------------------------------------------------
# basket and bound


def test_default_basket_is_eight_large_primes():
    assert len(DEFAULT_BASKET) == 8
    assert len(set(DEFAULT_BASKET)) == 8
    for p in DEFAULT_BASKET:
        assert is_prime(p)
        assert p < 1 << 61
        assert p > (1 << 61) - 10_000


def test_coefficient_bound_dominates_true_coefficients():
    for r, precision in ((5, 400), (15, 300), (24, 300)):
        series = eta_power(r, precision, EXACT)
        for n in range(precision):
            assert abs(series.coefficient(n)) < 1 << coefficient_bound(r, n)


def test_coefficient_bound_monotone_and_positive():
    assert coefficient_bound(5, 0) == 1
    prev = 0
    for n in range(0, 5000, 97):
        b = coefficient_bound(7, n)
        assert b >= 1
        assert b >= prev
        prev = b
    assert coefficient_bound(15, 1000) >= coefficient_bound(5, 1000)


def test_coefficient_bound_rejects_bad_input():
    with pytest.raises(ValueError):
        coefficient_bound(0, 10)
    with pytest.raises(ValueError):
        coefficient_bound(5, -1)


# ---------------------------------------------------------------------------
# single-index certification


def test_certify_known_zero():
    rec = certify_zero(15, 53)
    assert rec.status == STATUS_CERTIFIED
    assert rec.crt_bits > rec.bound_bits
    assert rec.n == 53 and rec.r == 15


def test_certify_refutes_nonzero_neighbor():
    rec = certify_zero(15, 54)
    assert rec.status == STATUS_REFUTED
    assert rec.first_nonzero_prime == DEFAULT_BASKET[0]


def test_certify_constant_term_is_nonzero():
    rec = certify_zero(24, 0)
    assert rec.status == STATUS_REFUTED
    assert rec.first_nonzero_prime == DEFAULT_BASKET[0]


def test_certify_without_extension_reports_shortfall():
    rec = certify_zero(15, 53, primes=(11, 7), extend=False)
    assert rec.status == STATUS_CANDIDATE
    assert rec.witness_primes == (11, 7)
    assert rec.bound_bits > 0


def test_certify_small_primes_with_extension_succeeds():
    rec = certify_zero(15, 53, primes=(11, 7), extend=True)
    assert rec.status == STATUS_CERTIFIED
    assert rec.crt_bits > rec.bound_bits


# ---------------------------------------------------------------------------
# staged scans


def test_scan_r15_matches_exact_series():
    report = scan_zeros(ScanJob(r=15, n_max=1000, threads=1))
    assert report.zeros == R15_ZEROS_1000
    assert report.zeros == exact_zero_set(15, 1001)
    assert report.unresolved == []
    for rec in report.records:
        assert rec.status == STATUS_CERTIFIED
        assert rec.crt_bits > rec.bound_bits


def test_scan_r5_matches_exact_series():
    report = scan_zeros(ScanJob(r=5, n_max=3000, threads=1))
    assert report.zeros == R5_ZEROS_3000
    assert report.zeros == exact_zero_set(5, 3001)


def test_scan_r1_zero_set_is_complement_of_pentagonal_numbers():
    n_max = 120
    pent = set()
    m = 0
    while m * (3 * m - 1) // 2 <= n_max:
        pent.add(m * (3 * m - 1) // 2)
        pent.add(m * (3 * m + 1) // 2)
        m += 1
    expected = sorted(set(range(1, n_max + 1)) - pent)
    report = scan_zeros(ScanJob(r=1, n_max=n_max, threads=1))
    assert report.zeros == expected
    assert report.unresolved == []


def test_scan_r3_zero_set_is_complement_of_triangular_numbers():
    n_max = 120
    tri = {m * (m + 1) // 2 for m in range(0, 20)}
    expected = sorted(set(range(1, n_max + 1)) - tri)
    report = scan_zeros(ScanJob(r=3, n_max=n_max, threads=1))
    assert report.zeros == expected


def test_scan_small_basket_refutes_false_candidates():
    job = ScanJob(r=5, n_max=400, prime_basket=(11, 7), threads=1)
    report = scan_zeros(job)
    assert report.zeros == []
    assert report.unresolved == []
    assert all(rec.status == STATUS_REFUTED for rec in report.records)
    # mod 11 admits false candidates, so stages 2-3 must have done real work
    assert len(report.records) > 10


def test_scan_small_basket_without_extension_reports_candidates():
    # n = 53 is a true zero of eta^15, so it survives every prime; the tiny
    # basket cannot reach the certification bound and must say so
    job = ScanJob(
        r=15, n_max=100, prime_basket=(11, 7), extend_basket=False, threads=1
    )
    report = scan_zeros(job)
    assert report.zeros == []
    assert 53 in report.unresolved
    for rec in report.records:
        if rec.status == STATUS_CANDIDATE:
            assert rec.witness_primes == (11, 7)
            assert rec.bound_bits is not None


def test_scan_thread_count_does_not_change_records():
    one = scan_zeros(ScanJob(r=15, n_max=800, threads=1))
    four = scan_zeros(ScanJob(r=15, n_max=800, threads=4))
    assert one.records == four.records


def test_scan_rejects_bad_jobs():
    with pytest.raises(ValueError):
        ScanJob(r=0, n_max=10)
    with pytest.raises(ValueError):
        ScanJob(r=5, n_max=0)
    with pytest.raises(ValueError):
        ScanJob(r=5, n_max=10, prime_basket=(7, 7))


# ---------------------------------------------------------------------------
# checkpoint and resume


def test_scan_resume_after_truncation_gives_identical_records(tmp_path):
    path = tmp_path / "scan.ckpt"
    job = ScanJob(r=15, n_max=600, checkpoint_path=path, threads=1)
    full = scan_zeros(job)
    assert not full.resumed
    lines = path.read_text().splitlines(keepends=True)
    assert len(lines) >= 2
    path.write_text("".join(lines[:1]))
    resumed = scan_zeros(job)
    assert resumed.resumed
    assert resumed.records == full.records


def test_scan_resume_discards_corrupt_tail(tmp_path):
    path = tmp_path / "scan.ckpt"
    job = ScanJob(r=15, n_max=600, checkpoint_path=path, threads=1)
    full = scan_zeros(job)
    lines = path.read_text().splitlines(keepends=True)
    tampered = lines[1][:-10] + 'corrupted"\n'
    path.write_text(lines[0] + tampered + "not json at all\n")
    resumed = scan_zeros(job)
    assert resumed.records == full.records
    # the corrupt tail must have been compacted away on load
    for raw in path.read_text().splitlines():
        d = json.loads(raw)
        assert "sha256" in d


def test_scan_checkpoint_rejects_other_job(tmp_path):
    path = tmp_path / "scan.ckpt"
    scan_zeros(ScanJob(r=15, n_max=400, checkpoint_path=path, threads=1))
    with pytest.raises(ValueError):
        scan_zeros(ScanJob(r=7, n_max=400, checkpoint_path=path, threads=1))


def test_scan_segmented_by_memory_budget(tmp_path):
    path = tmp_path / "scan.ckpt"
    job = ScanJob(
        r=15,
        n_max=600,
        checkpoint_path=path,
        threads=1,
        memory_budget=112 * 150,
    )
    segmented = scan_zeros(job)
    plain = scan_zeros(ScanJob(r=15, n_max=600, threads=1))
    assert segmented.records == plain.records
    kinds = [json.loads(ln)["kind"] for ln in path.read_text().splitlines()]
    assert kinds.count("segment") >= 3


def test_scan_resume_mid_segment(tmp_path):
    path = tmp_path / "scan.ckpt"
    job = ScanJob(
        r=15,
        n_max=600,
        checkpoint_path=path,
        threads=1,
        memory_budget=112 * 150,
    )
    full = scan_zeros(job)
    lines = path.read_text().splitlines(keepends=True)
    path.write_text("".join(lines[:2]))
    resumed = scan_zeros(job)
    assert resumed.resumed
    assert resumed.records == full.records


# ---------------------------------------------------------------------------
# reports and sweeps


def test_report_jsonl_round_trip(tmp_path):
    report = scan_zeros(ScanJob(r=15, n_max=600, threads=1))
    path = tmp_path / "scan.jsonl"
    report.write_jsonl(path)
    back = ScanReport.read_jsonl(path)
    assert back.records == report.records
    assert back.r == 15 and back.n_max == 600
    assert back.prime_basket == report.prime_basket
    # integers travel as decimal strings
    for raw in path.read_text().splitlines():
        d = json.loads(raw)
        for key in ("r", "n", "n_max", "bound_bits", "crt_bits"):
            if key in d:
                assert isinstance(d[key], str)


def test_record_round_trip_all_statuses():
    records = [
        ZeroRecord(5, 1560, STATUS_CERTIFIED, bound_bits=100, crt_bits=480),
        ZeroRecord(5, 7, STATUS_REFUTED, first_nonzero_prime=11),
        ZeroRecord(5, 9, STATUS_CANDIDATE, bound_bits=5, witness_primes=(7, 11)),
    ]
    for rec in records:
        assert ZeroRecord.from_json_dict(rec.to_json_dict()) == rec


def test_nonvanishing_sweep_even_powers():
    rows = nonvanishing_sweep([12, 16, 24], 500, threads=1)
    assert [row.r for row in rows] == [12, 16, 24]
    for row in rows:
        assert row.empty
        assert row.zeros == [] and row.unresolved == []


def test_sweep_row_flags_nonempty_rows():
    rows = nonvanishing_sweep([15], 600, threads=1)
    assert rows[0].empty is False
    assert rows[0].zeros == [53, 482]
