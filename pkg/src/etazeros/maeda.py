"""Integral-weight Hecke matrices on level-one cusp spaces.

The weights handled here have dim S_k <= 2: the one-dimensional weights
{12, 16, 18, 20, 22, 26} and weight 24, where dim S_24 = 2 and the Hecke
eigenvalues live in Z[sqrt(144169)]. Cusp forms are built as monomials
delta^a E4^b E6^c (a >= 1) and row-reduced to an integral echelon basis
basis[i] = q^(i+1) + O(q^(d+1)), so Hecke matrices read off directly from
coefficients 1..d.

The discriminant equivalence on S_24: every T_m lies in the span of I and
T_2 (T_2 has distinct eigenvalues, so its commutant is the polynomials in
T_2), say T_m = alpha_m I + beta_m T_2 with integers alpha_m, beta_m. Then
disc(T_m) = beta_m^2 disc(T_2) with disc(T_2) = 4 * 144169 * B(2)^2, and
the eigenvalue difference a_f(m) - a_g(m) equals beta_m * kappa for
kappa = a_f(2) - a_g(2) = 2 B(2) sqrt(144169). The coefficientwise identity
delta^2 = (f - g) / kappa is therefore exactly beta_m = a_48(m-2), which
makes "a_48(m-2) != 0 iff T_m has distinct eigenvalues" checkable without
factoring the (enormous) discriminants: their squarefree part is the prime
144169 whenever beta_m != 0, structurally.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

from .halfint import kronecker
from .primes import squarefree_part
from .series import EXACT, CoeffSeries, eta_power, multiply

__all__ = [
    "CuspBasis",
    "Dim1Report",
    "EtaQuotientMembership",
    "HeckeMatrix",
    "MaedaReport",
    "MaedaRow",
    "cusp_basis",
    "delta_sq_equivalence",
    "dim1_scan",
    "distinct_eigenvalues",
    "eisenstein",
    "eta_quotient_membership",
    "hecke_matrix",
]

_DIMENSIONS = {12: 1, 16: 1, 18: 1, 20: 1, 22: 1, 24: 2, 26: 1}
_EISENSTEIN_WEIGHTS = {4: (240, 3), 6: (-504, 5)}
_MAEDA_PRIME = 144169


def _sigma_table(limit: int, power: int) -> list[int]:
    """sigma_power(n) for 0 <= n < limit via the divisor sieve; sigma(0) = 0."""
    table = [0] * limit
    for d in range(1, limit):
        step = d**power
        for n in range(d, limit, d):
            table[n] += step
    return table


def eisenstein(weight: int, precision: int) -> CoeffSeries:
    """Normalized Eisenstein series E4 or E6 as an exact series."""
    if weight not in _EISENSTEIN_WEIGHTS:
        raise ValueError("eisenstein supports weights 4 and 6 only")
    if precision < 1:
        raise ValueError("precision must be >= 1")
    scale, power = _EISENSTEIN_WEIGHTS[weight]
    sigma = _sigma_table(precision, power)
    coeffs = [1] + [scale * sigma[n] for n in range(1, precision)]
    return CoeffSeries(ring=EXACT, valuation_num=0, coeffs=coeffs, precision=precision)


@dataclass(frozen=True)
class CuspBasis:
    """Echelon basis of S_k: series[i][m] is the q^m coefficient, all ints."""

    weight: int
    dim: int
    precision: int
    series: tuple[tuple[int, ...], ...]


def _monomial_qlist(a: int, b: int, c: int, precision: int) -> list[int]:
    """q-coefficients 0..precision-1 of delta^a E4^b E6^c."""
    form = eta_power(24 * a, precision - a)
    for weight, count in ((4, b), (6, c)):
        for _ in range(count):
            form = multiply(form, eisenstein(weight, precision))
    out = [0] * a + form.to_list()
    return out[:precision]


def cusp_basis(k: int, precision: int) -> CuspBasis:
    """All weight-k cusp monomials, row-reduced to unit-pivot echelon form.

    The rank is asserted against the classical dimension, and the reduced
    rows are asserted integral; both would only fail on an internal bug.
    """
    d = _DIMENSIONS.get(k)
    if d is None:
        raise ValueError("unsupported weight %r" % (k,))
    if precision <= d:
        raise ValueError("precision must exceed the dimension")
    rows: list[list[Fraction]] = []
    for a in range(1, k // 12 + 1):
        w = k - 12 * a
        for b in range(w // 4 + 1):
            if (w - 4 * b) % 6 == 0:
                qlist = _monomial_qlist(a, b, (w - 4 * b) // 6, precision)
                rows.append([Fraction(x) for x in qlist])

    echelon: list[list[Fraction]] = []
    for col in range(1, precision):
        pivot = next((row for row in rows if row[col] != 0), None)
        if pivot is None:
            continue
        rows.remove(pivot)
        inv = pivot[col]
        pivot = [x / inv for x in pivot]
        for other in rows + echelon:
            factor = other[col]
            if factor != 0:
                for j in range(col, precision):
                    other[j] -= factor * pivot[j]
        echelon.append(pivot)
        if len(echelon) == d:
            break
    if len(echelon) != d or any(any(x != 0 for x in row) for row in rows):
        raise ArithmeticError(
            "rank of weight-%d monomials does not match dim S_k = %d" % (k, d)
        )
    series = []
    for i, row in enumerate(echelon):
        if any(x.denominator != 1 for x in row):
            raise ArithmeticError("echelon basis failed to be integral")
        ints = tuple(int(x) for x in row)
        assert ints[i + 1] == 1 and all(ints[j] == 0 for j in range(i + 1))
        series.append(ints)
    return CuspBasis(weight=k, dim=d, precision=precision, series=tuple(series))


@dataclass(frozen=True)
class HeckeMatrix:
    n: int
    k: int
    entries: tuple[tuple[int, ...], ...]

    @property
    def trace(self) -> int:
        return sum(self.entries[i][i] for i in range(len(self.entries)))

    @property
    def det(self) -> int:
        e = self.entries
        if len(e) == 1:
            return e[0][0]
        if len(e) == 2:
            return e[0][0] * e[1][1] - e[0][1] * e[1][0]
        raise ValueError("determinant implemented for dimensions 1 and 2")

    def matmul(self, other: "HeckeMatrix") -> tuple[tuple[int, ...], ...]:
        d = len(self.entries)
        return tuple(
            tuple(
                sum(self.entries[i][x] * other.entries[x][j] for x in range(d))
                for j in range(d)
            )
            for i in range(d)
        )


def _divisors(n: int) -> list[int]:
    out = []
    for e in range(1, isqrt(n) + 1):
        if n % e == 0:
            out.append(e)
            if e * e != n:
                out.append(n // e)
    return sorted(out)


def hecke_matrix(n: int, k: int, basis: CuspBasis) -> HeckeMatrix:
    """T_n in the echelon basis: row i holds the coordinates of T_n basis[i].

    Coefficient m of T_n f is sum over e | gcd(n, m) of e^(k-1) b(n m / e^2);
    the echelon shape means coordinates are literally coefficients 1..d.
    """
    if n < 1:
        raise ValueError("Hecke index must be >= 1")
    if basis.weight != k:
        raise ValueError("basis weight %d differs from k=%d" % (basis.weight, k))
    d = basis.dim
    if basis.precision < n * d + 1:
        raise ValueError(
            "basis precision %d < required %d" % (basis.precision, n * d + 1)
        )
    entries = []
    for i in range(d):
        b = basis.series[i]
        row = []
        for m in range(1, d + 1):
            total = 0
            for e in _divisors(gcd(n, m)):
                total += e ** (k - 1) * b[n * m // (e * e)]
            row.append(total)
        entries.append(tuple(row))
    return HeckeMatrix(n=n, k=k, entries=tuple(entries))


def distinct_eigenvalues(
    n: int, k: int = 24, basis: CuspBasis | None = None
) -> tuple[bool, int, int]:
    """(distinct, disc, squarefree part of disc) for T_n on the 2-dim space.

    The squarefree part here comes from genuine factorization, so keep n
    small; the bulk equivalence check uses the structural route instead.
    """
    if _DIMENSIONS.get(k) != 2:
        raise ValueError("distinct_eigenvalues needs a 2-dimensional weight")
    if basis is None:
        basis = cusp_basis(k, 2 * n + 2)
    m = hecke_matrix(n, k, basis)
    disc = m.trace**2 - 4 * m.det
    if disc == 0:
        return False, 0, 0
    return True, disc, squarefree_part(disc)


def _solve_in_span(tm: HeckeMatrix, t2: HeckeMatrix) -> tuple[int, int]:
    """Integers (alpha, beta) with T_m = alpha I + beta T_2, verified exactly."""
    (s11, s12), (s21, s22) = t2.entries
    (t11, t12), (t21, t22) = tm.entries
    if s12 != 0:
        beta = Fraction(t12, s12)
    elif s21 != 0:
        beta = Fraction(t21, s21)
    else:
        beta = Fraction(t11 - t22, s11 - s22)
    alpha = Fraction(t11) - beta * s11
    if alpha.denominator != 1 or beta.denominator != 1:
        raise ArithmeticError("T_m does not lie integrally in span{I, T_2}")
    a, b = int(alpha), int(beta)
    if (
        t11 != a + b * s11
        or t12 != b * s12
        or t21 != b * s21
        or t22 != a + b * s22
    ):
        raise ArithmeticError("T_m is not a combination of I and T_2")
    return a, b


@dataclass(frozen=True)
class MaedaRow:
    m: int
    a48_nonzero: bool
    disc: int
    squarefree_part: int
    b_zero: bool

    def to_json_dict(self) -> dict:
        return {
            "m": str(self.m),
            "a48_nonzero": self.a48_nonzero,
            "disc": str(self.disc),
            "squarefree_part": str(self.squarefree_part),
            "b_zero": self.b_zero,
        }


@dataclass
class MaedaReport:
    n_max: int
    kappa: tuple[int, int]  # kappa = kappa[0] + kappa[1]*sqrt(144169)
    b2: int
    disc2: int
    rows: list[MaedaRow]

    @property
    def all_nonzero(self) -> bool:
        return all(row.a48_nonzero for row in self.rows)


def delta_sq_equivalence(
    n_max: int, basis: CuspBasis | None = None, factor_limit: int = 30
) -> MaedaReport:
    """Verify a_48(m-2) != 0 iff disc(T_m) != 0 for 2 <= m <= n_max.

    Verifies the stronger coefficientwise identity beta_m = a_48(m-2), which
    encodes delta^2 = (f - g) / kappa for the T_2 eigenvectors f, g. Any
    violation raises: the equivalence is a theorem for this range, so a
    failure means corrupted arithmetic. Discriminant squarefree parts are
    independently re-derived by factorization for m <= factor_limit.
    """
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if basis is None:
        basis = cusp_basis(24, 2 * n_max + 1)
    a48 = eta_power(48, n_max)  # coefficient j sits at q^(j+2)
    t2 = hecke_matrix(2, 24, basis)
    disc2 = t2.trace**2 - 4 * t2.det
    if disc2 <= 0 or disc2 % (4 * _MAEDA_PRIME) != 0:
        raise ArithmeticError("disc(T_2) lost the 4*144169 factor")
    b2 = isqrt(disc2 // (4 * _MAEDA_PRIME))
    if 4 * _MAEDA_PRIME * b2 * b2 != disc2:
        raise ArithmeticError("disc(T_2) is not 4*144169*B(2)^2")
    kappa = (0, 2 * b2)

    rows = []
    for m in range(2, n_max + 1):
        tm = hecke_matrix(m, 24, basis)
        _, beta = _solve_in_span(tm, t2)
        a48m = int(a48.coefficient(m - 2))
        if beta != a48m:
            raise ArithmeticError(
                "delta^2 = (f-g)/kappa fails at m=%d: beta=%d, a48=%d"
                % (m, beta, a48m)
            )
        disc = tm.trace**2 - 4 * tm.det
        if disc != disc2 * beta * beta:
            raise ArithmeticError("disc(T_%d) != beta^2 disc(T_2)" % m)
        if beta != 0:
            root = isqrt(disc)
            if root * root == disc:
                raise ArithmeticError("disc(T_%d) is a perfect square" % m)
            sf = _MAEDA_PRIME
            if m <= factor_limit and squarefree_part(disc) != _MAEDA_PRIME:
                raise ArithmeticError(
                    "factored squarefree part of disc(T_%d) is not 144169" % m
                )
        else:
            sf = 0
        rows.append(
            MaedaRow(
                m=m,
                a48_nonzero=a48m != 0,
                disc=disc,
                squarefree_part=sf,
                b_zero=beta == 0,
            )
        )
    return MaedaReport(n_max=n_max, kappa=kappa, b2=b2, disc2=disc2, rows=rows)


@dataclass(frozen=True)
class Dim1Report:
    k: int
    n_max: int
    zeros: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "k": str(self.k),
            "n_max": str(self.n_max),
            "zeros": [str(n) for n in self.zeros],
        }


def dim1_scan(k: int, n_max: int) -> Dim1Report:
    """Zero coefficients of the normalized generator of a dim-1 space."""
    if _DIMENSIONS.get(k) != 1:
        raise ValueError("dim1_scan needs a weight with dim S_k = 1")
    basis = cusp_basis(k, n_max + 1)
    g = basis.series[0]
    zeros = tuple(n for n in range(1, n_max + 1) if g[n] == 0)
    return Dim1Report(k=k, n_max=n_max, zeros=zeros)


@dataclass(frozen=True)
class EtaQuotientMembership:
    is_cusp_candidate: bool
    k: int
    character_top: int

    def chi(self, d: int) -> int:
        return kronecker(self.character_top, d)

    def to_json_dict(self) -> dict:
        return {
            "is_cusp_candidate": self.is_cusp_candidate,
            "k": str(self.k),
            "character_top": str(self.character_top),
        }


def eta_quotient_membership(r: int, delta: int, n_level: int) -> EtaQuotientMembership:
    """Congruence test for eta(delta tau)^r landing in S_k(Gamma0(n_level)).

    Requires both delta*r = 0 and (n_level/delta)*r = 0 mod 24; the weight is
    k = r/2 and the character is d -> kronecker((-1)^k delta^r, d).
    """
    if r < 2 or r % 2 != 0:
        raise ValueError("membership test needs even r >= 2")
    if delta < 1 or n_level < 1 or n_level % delta != 0:
        raise ValueError("delta must be a positive divisor of the level")
    k = r // 2
    ok = (delta * r) % 24 == 0 and ((n_level // delta) * r) % 24 == 0
    top = (-1) ** k * delta**r
    return EtaQuotientMembership(is_cusp_candidate=ok, k=k, character_top=top)
