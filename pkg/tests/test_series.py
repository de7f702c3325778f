"""Series-core tests.

The independent oracle here expands prod (1-q^n)^r by literal repeated
polynomial multiplication, sharing no code with the package. Frozen values
below were produced by that oracle (and, for tau, match the classical table).
"""

from __future__ import annotations

import random

import numpy as np
import pytest

from etazeros.series import (
    EXACT,
    CoeffSeries,
    EtaAlgorithm,
    ModPrime,
    _kron_mul_exact,
    _kron_mul_np,
    _schoolbook_list,
    eta_power,
    euler_series,
    jacobi_series,
    multiply,
    sigma1_table,
)

ALL_ALGORITHMS = (
    EtaAlgorithm.SPARSE_POWER,
    EtaAlgorithm.BINARY_POW,
    EtaAlgorithm.SIGMA_RECURRENCE,
)


def naive_eta_power(r: int, precision: int) -> list[int]:
    """Oracle: expand prod_{n=1}^{precision-1} (1-q^n)^r term by term."""
    out = [0] * precision
    out[0] = 1
    for _ in range(r):
        for n in range(1, precision):
            # multiply by (1 - q^n): subtract the series shifted by n
            for i in range(precision - 1, n - 1, -1):
                out[i] -= out[i - n]
    return out


# frozen oracle outputs (naive_eta_power(5, 12) and (7, 10), computed once)
NAIVE_R5_12 = [1, -5, 5, 10, -15, -6, -5, 25, 15, -20, 9, -45]
NAIVE_R7_10 = [1, -7, 14, 7, -49, 21, 35, 41, -49, -133]

# classical Ramanujan tau values tau(1)..tau(9); a_24(n) = tau(n+1)
TAU_HEAD = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643]


def test_oracle_self_consistency() -> None:
    assert naive_eta_power(5, 12) == NAIVE_R5_12
    assert naive_eta_power(7, 10) == NAIVE_R7_10


def test_euler_series_frozen_head() -> None:
    assert euler_series(8).to_list() == [1, -1, -1, 0, 0, 1, 0, 1]
    assert euler_series(13)[12] == -1
    assert euler_series(8).valuation_num == 1


def test_jacobi_series_frozen_head() -> None:
    assert jacobi_series(7).to_list() == [1, -3, 0, 5, 0, 0, -7]
    assert jacobi_series(7).valuation_num == 3


def test_multiply_frozen_product_and_valuation() -> None:
    prod = multiply(euler_series(3), jacobi_series(3))
    assert prod.to_list() == [1, -4, 2]
    assert prod.valuation_num == 4
    assert prod.precision == 3


def test_multiply_truncates_to_min_precision() -> None:
    prod = multiply(euler_series(50), jacobi_series(20))
    assert prod.precision == 20


def test_sigma1_table_values() -> None:
    sig = sigma1_table(11)
    assert sig == [0, 1, 3, 4, 7, 6, 12, 8, 15, 13, 18]
    assert sig[6] == 12 and sig[7] == 8


def test_euler_cube_equals_jacobi_identity() -> None:
    cube = eta_power(3, 400, EXACT, EtaAlgorithm.BINARY_POW)
    assert cube.to_list() == jacobi_series(400).to_list()


@pytest.mark.parametrize("r", [1, 2, 3, 4, 5, 6, 7, 8, 11, 12, 24])
def test_eta_power_matches_naive_oracle(r: int) -> None:
    expect = naive_eta_power(r, 60)
    for algo in ALL_ALGORITHMS:
        assert eta_power(r, 60, EXACT, algo).to_list() == expect, algo


def test_tau_values() -> None:
    s = eta_power(24, 9)
    assert s.to_list() == TAU_HEAD
    assert s[1] == -24


@pytest.mark.parametrize("algo", ALL_ALGORITHMS)
def test_eta_power_valuation(algo: EtaAlgorithm) -> None:
    assert eta_power(10, 20, EXACT, algo).valuation_num == 10


@pytest.mark.parametrize(
    "p,precision",
    [(127, 100), (2_147_483_647, 200), ((1 << 61) - 1, 150)],
)
def test_three_algorithms_agree_mod_p(p: int, precision: int) -> None:
    ring = ModPrime(p)
    outs = [eta_power(9, precision, ring, a).to_list() for a in ALL_ALGORITHMS]
    assert outs[0] == outs[1] == outs[2]


def test_mod_p_reduction_commutes_with_exact() -> None:
    rng = random.Random(20260814)
    primes = [5, 7, 101, 65537, 2_147_483_647, (1 << 61) - 1]
    for _ in range(25):
        r = rng.randrange(1, 30)
        p = rng.choice(primes)
        precision = rng.randrange(5, 80)
        exact = eta_power(r, precision, EXACT)
        modp = eta_power(r, precision, ModPrime(p))
        assert [c % p for c in exact.to_list()] == modp.to_list()


def test_sigma_recurrence_requires_large_prime() -> None:
    with pytest.raises(ValueError):
        eta_power(5, 200, ModPrime(127), EtaAlgorithm.SIGMA_RECURRENCE)


def test_eta_power_rejects_bad_power() -> None:
    with pytest.raises(ValueError):
        eta_power(0, 10)
    with pytest.raises(ValueError):
        eta_power(-3, 10)


def test_ring_mismatch_raises() -> None:
    with pytest.raises(ValueError):
        multiply(euler_series(10, ModPrime(7)), jacobi_series(10, ModPrime(11)))
    with pytest.raises(ValueError):
        multiply(euler_series(10), jacobi_series(10, ModPrime(7)))


def test_modprime_validation() -> None:
    with pytest.raises(ValueError):
        ModPrime(9)
    with pytest.raises(ValueError):
        ModPrime(3)
    with pytest.raises(ValueError):
        ModPrime(2)


def test_residue_range_enforced() -> None:
    with pytest.raises(ValueError):
        CoeffSeries(ring=ModPrime(7), valuation_num=1, coeffs=[0, 9], precision=2)
    with pytest.raises(ValueError):
        CoeffSeries(
            ring=ModPrime(7),
            valuation_num=1,
            coeffs=np.array([0, -1], dtype=np.int64),
            precision=2,
        )


def test_zero_indices() -> None:
    s = euler_series(8)
    assert s.zero_indices() == [3, 4, 6]
    sm = euler_series(8, ModPrime(9973))
    assert sm.zero_indices() == [3, 4, 6]


def test_kronecker_kernel_matches_schoolbook_mod_p() -> None:
    rng = random.Random(99)
    p = 2_000_000_011
    n = 1500
    a = [rng.randrange(p) for _ in range(n)]
    b = [rng.randrange(p) for _ in range(n)]
    ref = _schoolbook_list(a, b, n, p)
    got = _kron_mul_np(
        np.array(a, dtype=np.int64), np.array(b, dtype=np.int64), n, p
    )
    assert [int(x) for x in got] == ref


def test_kronecker_kernel_matches_schoolbook_exact_signed() -> None:
    rng = random.Random(7)
    n = 600
    a = [rng.randrange(-(10**9), 10**9) for _ in range(n)]
    b = [rng.randrange(-(10**9), 10**9) for _ in range(n)]
    assert _kron_mul_exact(a, b, n) == _schoolbook_list(a, b, n, None)


def test_large_precision_strategy_agrees_across_algorithms() -> None:
    # precision above the kronecker threshold, exact ring
    x = eta_power(15, 1200, EXACT, EtaAlgorithm.SPARSE_POWER)
    y = eta_power(15, 1200, EXACT, EtaAlgorithm.BINARY_POW)
    assert x.to_list() == y.to_list()
