"""Truncated q-series arithmetic for integer powers of the Dedekind eta function.

A series object represents q^(valuation_num/24) * sum_{n<precision} c_n q^n
with exact coefficients: arbitrary-precision integers (ExactInt) or canonical
residues in [0, p) modulo an odd prime (ModPrime). The eta function has
valuation numerator 1, its cube 3, and eta^r has r; after the fractional
power is factored out, index n of eta^r is the coefficient usually written
a_r(n). Nothing in this module rounds or approximates.

Three independent routes compute eta^r:

  SPARSE_POWER      factor r = 3s + t and multiply s cube-series copies
                    (Jacobi's identity, coefficients +-(2m+1) at triangular
                    indices) with t copies of the pentagonal-number series.
  BINARY_POW        square-and-multiply on the pentagonal-number series.
  SIGMA_RECURRENCE  n*a(n) = -r * sum_{k=1..n} sigma1(k) * a(n-k), the
                    logarithmic-derivative recurrence. Over ModPrime this is
                    only valid when p > precision (divisions by n <= precision
                    must be invertible), which eta_power enforces.

Dense products route through one of three internal strategies chosen by a
deterministic rule (never affecting results): sparse folding when one operand
has few nonzero terms, Kronecker substitution through GMP for large products,
schoolbook otherwise.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Union

import gmpy2
import numpy as np
from gmpy2 import mpz

from .primes import is_prime

__all__ = [
    "EXACT",
    "CoeffSeries",
    "EtaAlgorithm",
    "ExactInt",
    "ModPrime",
    "euler_series",
    "jacobi_series",
    "eta_power",
    "multiply",
    "sigma1_table",
]

# Residue arrays for primes below this bound are stored as numpy int64 and
# multiplied with pure-vector reductions; larger primes use Python integers.
_NUMPY_PRIME_BOUND = 1 << 31
_MAX_PRIME = 1 << 62


class ExactInt:
    """Ring marker for arbitrary-precision signed integers."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "ExactInt"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ExactInt)

    def __hash__(self) -> int:
        return hash("ExactInt")


EXACT = ExactInt()


@dataclass(frozen=True)
class ModPrime:
    """Ring marker for residues modulo an odd prime p, 3 < p < 2^62."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or self.p <= 3 or self.p >= _MAX_PRIME:
            raise ValueError("ModPrime needs an odd prime p with 3 < p < 2^62")
        if self.p % 2 == 0 or not is_prime(self.p):
            raise ValueError("ModPrime modulus %d is not an odd prime" % self.p)


Ring = Union[ExactInt, ModPrime]


class EtaAlgorithm(enum.Enum):
    SPARSE_POWER = "sparse_power"
    SIGMA_RECURRENCE = "sigma_recurrence"
    BINARY_POW = "binary_pow"


def _uses_numpy(ring: Ring) -> bool:
    return isinstance(ring, ModPrime) and ring.p < _NUMPY_PRIME_BOUND


@dataclass
class CoeffSeries:
    """Truncated series: q^(valuation_num/24) * sum coeffs[n] q^n.

    coeffs is a numpy int64 array for ModPrime rings with p < 2^31 and a
    list of Python ints otherwise. precision is the number of stored
    coefficients (indices 0..precision-1).
    """

    ring: Ring
    valuation_num: int
    coeffs: object
    precision: int

    def __post_init__(self) -> None:
        if self.precision < 1:
            raise ValueError("precision must be >= 1")
        if len(self.coeffs) != self.precision:
            raise ValueError("coefficient storage does not match precision")
        if isinstance(self.ring, ModPrime):
            p = self.ring.p
            if isinstance(self.coeffs, np.ndarray):
                if self.coeffs.dtype != np.int64:
                    raise ValueError("numpy coefficient arrays must be int64")
                if self.precision and (
                    int(self.coeffs.min()) < 0 or int(self.coeffs.max()) >= p
                ):
                    raise ValueError("residue out of range [0, p)")
            else:
                if any(c < 0 or c >= p for c in self.coeffs):
                    raise ValueError("residue out of range [0, p)")

    def coefficient(self, n: int) -> int:
        if n < 0 or n >= self.precision:
            raise IndexError("coefficient index %d outside truncation" % n)
        return int(self.coeffs[n])

    def __getitem__(self, n: int) -> int:
        return self.coefficient(n)

    def to_list(self) -> list[int]:
        if isinstance(self.coeffs, np.ndarray):
            return [int(x) for x in self.coeffs]
        return [int(x) for x in self.coeffs]

    def zero_indices(self) -> list[int]:
        """Indices n < precision with coefficient exactly 0 (in the ring)."""
        if isinstance(self.coeffs, np.ndarray):
            return [int(i) for i in np.nonzero(self.coeffs == 0)[0]]
        return [i for i, c in enumerate(self.coeffs) if c == 0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CoeffSeries):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.valuation_num == other.valuation_num
            and self.precision == other.precision
            and self.to_list() == other.to_list()
        )


# ----------------------------------------------------------------------------
# generating series


def pentagonal_terms(precision: int) -> list[tuple[int, int]]:
    """Nonzero terms (exponent, coefficient) of prod (1-q^n) below precision.

    Exponents are the generalized pentagonal numbers m(3m+-1)/2 with
    coefficient (-1)^m.
    """
    terms = [(0, 1)]
    m = 1
    while True:
        lo = (3 * m * m - m) // 2
        if lo >= precision:
            break
        c = 1 if m % 2 == 0 else -1
        terms.append((lo, c))
        hi = (3 * m * m + m) // 2
        if hi < precision:
            terms.append((hi, c))
        m += 1
    terms.sort()
    return terms


def triangular_terms(precision: int) -> list[tuple[int, int]]:
    """Nonzero terms of prod (1-q^n)^3 below precision.

    Exponents are triangular numbers m(m+1)/2 with coefficient (-1)^m (2m+1).
    """
    terms = []
    m = 0
    while m * (m + 1) // 2 < precision:
        c = (2 * m + 1) * (1 if m % 2 == 0 else -1)
        terms.append((m * (m + 1) // 2, c))
        m += 1
    return terms


def _dense_from_terms(
    terms: Iterable[tuple[int, int]], precision: int, ring: Ring
) -> object:
    if _uses_numpy(ring):
        out = np.zeros(precision, dtype=np.int64)
        p = ring.p
        for e, c in terms:
            out[e] = c % p
        return out
    out = [0] * precision
    if isinstance(ring, ModPrime):
        p = ring.p
        for e, c in terms:
            out[e] = c % p
    else:
        for e, c in terms:
            out[e] = c
    return out


def euler_series(precision: int, ring: Ring = EXACT) -> CoeffSeries:
    """Truncation of prod_{n>=1} (1-q^n); valuation numerator 1 (eta)."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    coeffs = _dense_from_terms(pentagonal_terms(precision), precision, ring)
    return CoeffSeries(ring=ring, valuation_num=1, coeffs=coeffs, precision=precision)


def jacobi_series(precision: int, ring: Ring = EXACT) -> CoeffSeries:
    """Truncation of prod_{n>=1} (1-q^n)^3; valuation numerator 3 (eta^3)."""
    if precision < 1:
        raise ValueError("precision must be >= 1")
    coeffs = _dense_from_terms(triangular_terms(precision), precision, ring)
    return CoeffSeries(ring=ring, valuation_num=3, coeffs=coeffs, precision=precision)


def sigma1_table(limit: int) -> list[int]:
    """sigma1(n) = sum of divisors for 0 <= n < limit, with sigma1(0) = 0."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    sig = [0] * limit
    for d in range(1, limit):
        for m in range(d, limit, d):
            sig[m] += d
    return sig


# ----------------------------------------------------------------------------
# multiplication kernels


def _nonzero_terms(series: CoeffSeries, upto: int) -> list[tuple[int, int]]:
    if isinstance(series.coeffs, np.ndarray):
        arr = series.coeffs[:upto]
        idx = np.nonzero(arr)[0]
        return [(int(i), int(arr[i])) for i in idx]
    return [(i, int(c)) for i, c in enumerate(series.coeffs[:upto]) if c != 0]


def _count_nonzero(series: CoeffSeries, upto: int) -> int:
    if isinstance(series.coeffs, np.ndarray):
        return int(np.count_nonzero(series.coeffs[:upto]))
    return sum(1 for c in series.coeffs[:upto] if c != 0)


def _fold_sparse_np(dense: np.ndarray, terms, precision: int, p: int) -> np.ndarray:
    out = np.zeros(precision, dtype=np.int64)
    for e, c in terms:
        if e >= precision or c == 0:
            continue
        out[e:] = (out[e:] + c * dense[: precision - e]) % p
    return out


def _fold_sparse_list(dense, terms, precision: int, modulus: int | None):
    out = [0] * precision
    for e, c in terms:
        if e >= precision or c == 0:
            continue
        for i in range(e, precision):
            out[i] += c * dense[i - e]
    if modulus is not None:
        out = [x % modulus for x in out]
    return out


def _schoolbook_list(a, b, precision: int, modulus: int | None):
    out = [0] * precision
    for i, ca in enumerate(a[:precision]):
        if ca == 0:
            continue
        top = precision - i
        for j, cb in enumerate(b[:top]):
            if cb:
                out[i + j] += ca * cb
    if modulus is not None:
        out = [x % modulus for x in out]
    return out


_LANE_BYTES = 16  # fits P * (p-1)^2 < 2^128 for p < 2^31


def _kron_mul_np(a: np.ndarray, b: np.ndarray, precision: int, p: int) -> np.ndarray:
    """Truncated convolution of residue arrays via one GMP product.

    Coefficients are packed into 128-bit lanes of a single integer; the lane
    width is safe because each convolution coefficient is < precision * p^2.
    """

    def pack(arr: np.ndarray) -> mpz:
        buf = np.zeros((precision, 2), dtype="<u8")
        buf[: arr.shape[0], 0] = arr[:precision].astype(np.uint64)
        return mpz(int.from_bytes(buf.tobytes(), "little"))

    prod = pack(a) * pack(b)
    nlanes = 2 * precision
    raw = int(prod).to_bytes(nlanes * _LANE_BYTES, "little")
    words = np.frombuffer(raw, dtype="<u8").reshape(nlanes, 2)
    shift = (1 << 64) % p
    lanes = ((words[:precision, 0] % p) + (words[:precision, 1] % p) * shift % p) % p
    return lanes.astype(np.int64)


def _kron_mul_big(a, b, precision: int, p: int) -> list[int]:
    """Kronecker-substitution convolution for large moduli (list storage)."""
    slot = 2 * p.bit_length() + precision.bit_length() + 1
    za = gmpy2.pack([mpz(x) for x in a[:precision]], slot)
    zb = gmpy2.pack([mpz(x) for x in b[:precision]], slot)
    lanes = gmpy2.unpack(za * zb, slot)
    lanes = lanes[:precision]
    out = [int(v % p) for v in lanes]
    out.extend([0] * (precision - len(out)))
    return out


def _kron_mul_exact(a, b, precision: int) -> list[int]:
    """Exact signed convolution via four nonnegative GMP products."""
    ap = [x if x > 0 else 0 for x in a[:precision]]
    an = [-x if x < 0 else 0 for x in a[:precision]]
    bp = [x if x > 0 else 0 for x in b[:precision]]
    bn = [-x if x < 0 else 0 for x in b[:precision]]
    bits_a = max((int(x).bit_length() for x in ap + an), default=0)
    bits_b = max((int(x).bit_length() for x in bp + bn), default=0)
    slot = bits_a + bits_b + precision.bit_length() + 2
    if bits_a == 0 or bits_b == 0:
        return [0] * precision

    def pk(v) -> mpz:
        return gmpy2.pack([mpz(x) for x in v], slot)

    pos = pk(ap) * pk(bp) + pk(an) * pk(bn)
    neg = pk(ap) * pk(bn) + pk(an) * pk(bp)
    lp = gmpy2.unpack(pos, slot) if pos else [mpz(0)]
    ln = gmpy2.unpack(neg, slot) if neg else [mpz(0)]
    lp = lp[:precision] + [mpz(0)] * max(0, precision - len(lp))
    ln = ln[:precision] + [mpz(0)] * max(0, precision - len(ln))
    return [int(lp[i] - ln[i]) for i in range(precision)]


_SPARSE_NNZ_LIMIT = 64
_KRON_MIN_PRECISION = 1024


def _select_strategy(a: CoeffSeries, b: CoeffSeries, precision: int) -> str:
    """Deterministic multiplication-strategy rule (result-invariant)."""
    nnz = min(_count_nonzero(a, precision), _count_nonzero(b, precision))
    if nnz <= _SPARSE_NNZ_LIMIT:
        return "sparse"
    if precision >= _KRON_MIN_PRECISION:
        return "kronecker"
    return "schoolbook"


def multiply(a: CoeffSeries, b: CoeffSeries) -> CoeffSeries:
    """Product truncated to min(a.precision, b.precision); valuations add."""
    if a.ring != b.ring:
        raise ValueError("ring mismatch: %r vs %r" % (a.ring, b.ring))
    precision = min(a.precision, b.precision)
    strategy = _select_strategy(a, b, precision)
    ring = a.ring
    val = a.valuation_num + b.valuation_num

    if strategy == "sparse":
        if _count_nonzero(a, precision) <= _count_nonzero(b, precision):
            sparse, dense = a, b
        else:
            sparse, dense = b, a
        terms = _nonzero_terms(sparse, precision)
        if _uses_numpy(ring):
            coeffs = _fold_sparse_np(dense.coeffs, terms, precision, ring.p)
        else:
            modulus = ring.p if isinstance(ring, ModPrime) else None
            coeffs = _fold_sparse_list(dense.coeffs, terms, precision, modulus)
    elif strategy == "kronecker":
        if _uses_numpy(ring):
            coeffs = _kron_mul_np(a.coeffs, b.coeffs, precision, ring.p)
        elif isinstance(ring, ModPrime):
            coeffs = _kron_mul_big(a.coeffs, b.coeffs, precision, ring.p)
        else:
            coeffs = _kron_mul_exact(a.coeffs, b.coeffs, precision)
    else:
        if _uses_numpy(ring):
            al = [int(x) for x in a.coeffs[:precision]]
            bl = [int(x) for x in b.coeffs[:precision]]
            out = _schoolbook_list(al, bl, precision, ring.p)
            coeffs = np.array(out, dtype=np.int64)
        else:
            modulus = ring.p if isinstance(ring, ModPrime) else None
            coeffs = _schoolbook_list(a.coeffs, b.coeffs, precision, modulus)

    return CoeffSeries(ring=ring, valuation_num=val, coeffs=coeffs, precision=precision)


# ----------------------------------------------------------------------------
# eta powers


def _power_by_squaring(base: CoeffSeries, exponent: int) -> CoeffSeries:
    result: CoeffSeries | None = None
    while exponent:
        if exponent & 1:
            result = base if result is None else multiply(result, base)
        exponent >>= 1
        if exponent:
            base = multiply(base, base)
    assert result is not None
    return result


def _eta_sparse_power(r: int, precision: int, ring: Ring) -> CoeffSeries:
    s, t = divmod(r, 3)
    if s == 0:
        out = _power_by_squaring(euler_series(precision, ring), r)
    else:
        out = _power_by_squaring(jacobi_series(precision, ring), s)
        if t:
            e = euler_series(precision, ring)
            for _ in range(t):
                out = multiply(out, e)
    return out


def _eta_binary_pow(r: int, precision: int, ring: Ring) -> CoeffSeries:
    return _power_by_squaring(euler_series(precision, ring), r)


def _eta_sigma_recurrence(r: int, precision: int, ring: Ring) -> CoeffSeries:
    sig = sigma1_table(precision)
    if isinstance(ring, ModPrime):
        p = ring.p
        if p <= precision:
            raise ValueError(
                "sigma recurrence mod p needs p > precision "
                "(division by every n < precision must be invertible)"
            )
        rr = (-r) % p
        a = [0] * precision
        a[0] = 1
        for n in range(1, precision):
            s = 0
            for k in range(1, n + 1):
                s += sig[k] * a[n - k]
            a[n] = rr * s % p * pow(n, -1, p) % p
        if _uses_numpy(ring):
            coeffs: object = np.array(a, dtype=np.int64)
        else:
            coeffs = a
        return CoeffSeries(ring=ring, valuation_num=r, coeffs=coeffs, precision=precision)
    a = [mpz(0)] * precision
    a[0] = mpz(1)
    for n in range(1, precision):
        s = mpz(0)
        for k in range(1, n + 1):
            s += sig[k] * a[n - k]
        q, rem = divmod(-r * s, n)
        if rem:
            raise ArithmeticError(
                "sigma recurrence produced a non-integer at n=%d (internal error)" % n
            )
        a[n] = q
    return CoeffSeries(
        ring=ring, valuation_num=r, coeffs=[int(x) for x in a], precision=precision
    )


def eta_power(
    r: int,
    precision: int,
    ring: Ring = EXACT,
    algorithm: EtaAlgorithm = EtaAlgorithm.SPARSE_POWER,
) -> CoeffSeries:
    """Truncated expansion of eta^r with the fractional power factored out.

    Returns the series sum_n a_r(n) q^n of valuation numerator r, where
    eta(tau)^r = q^(r/24) * sum_n a_r(n) q^n. All three algorithms produce
    identical output on identical (r, precision, ring) inputs.
    """
    if not isinstance(r, int) or r < 1:
        raise ValueError("eta_power needs an integer power r >= 1")
    if precision < 1:
        raise ValueError("precision must be >= 1")
    if not isinstance(ring, (ExactInt, ModPrime)):
        raise TypeError("ring must be ExactInt or ModPrime")
    if algorithm is EtaAlgorithm.SPARSE_POWER:
        out = _eta_sparse_power(r, precision, ring)
    elif algorithm is EtaAlgorithm.BINARY_POW:
        out = _eta_binary_pow(r, precision, ring)
    elif algorithm is EtaAlgorithm.SIGMA_RECURRENCE:
        out = _eta_sigma_recurrence(r, precision, ring)
    else:
        raise TypeError("unknown algorithm %r" % (algorithm,))
    assert out.valuation_num == r
    return out
