"""Half-integral-weight Hecke operators acting on eta-power coefficients.

For odd r the series eta^r is re-indexed by discriminants: b(D) = a_r(n)
for D = 24n + r, and b(D) = 0 off the residue class D = r (mod 24). In this
indexing eta^r has weight lambda + 1/2 with lambda = (r - 1)/2, level
4N = 576, and nebentypus chi12 (the quadratic character mod 12, equal to
chi12^r for odd r).

The operator T(p^2) for a prime p >= 5 acts coefficientwise:

  (T(p^2) f)(D) = b(D p^2) + chi*(p) (D/p) p^(lambda-1) b(D)
                  + chi*(p^2) p^(2 lambda - 1) b(D / p^2)

with chi*(D) = kronecker((-1)^lambda, D) * chi12(D), (D/p) the Kronecker
symbol, and b(D/p^2) = 0 unless p^2 | D. For r = 1 the exponent
lambda - 1 = -1 makes eigenvalues rational rather than integral
(chi12(p) (1 + 1/p)); those paths carry exact Fractions. For r >= 3 all
quantities are integers and eigen_check enforces that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Mapping

from .primes import is_prime
from .series import EXACT, EtaAlgorithm, eta_power

__all__ = [
    "DSeries",
    "EigenReport",
    "HeckeHalfParams",
    "SquareClassReport",
    "chi12",
    "chi_star",
    "dseries_from_eta",
    "eigen_check",
    "hecke_tp2",
    "kronecker",
    "square_class_check",
]

Coeff = int | Fraction


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a | n), defined for all integer pairs."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    t = 1
    if n < 0:
        n = -n
        if a < 0:
            t = -1
    twos = 0
    while n % 2 == 0:
        n //= 2
        twos += 1
    if twos:
        if a % 2 == 0:
            return 0
        if twos % 2 == 1 and a % 8 in (3, 5):
            t = -t
    # Jacobi loop on the odd positive part
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


_CHI12 = {1: 1, 11: 1, 5: -1, 7: -1}


def chi12(n: int) -> int:
    """Quadratic character mod 12: +1 at 1,11; -1 at 5,7; else 0."""
    return _CHI12.get(n % 12, 0)


@dataclass(frozen=True)
class HeckeHalfParams:
    """Weight/level/character data for eta^r in the discriminant indexing."""

    r: int

    def __post_init__(self) -> None:
        if self.r < 1 or self.r % 2 == 0:
            raise ValueError("half-integral parameters need odd r >= 1")

    @property
    def lam(self) -> int:
        return (self.r - 1) // 2

    @property
    def level4n(self) -> int:
        return 576

    def chi(self, n: int) -> int:
        return chi12(n)


def chi_star(d: int, params: HeckeHalfParams) -> int:
    """Twisted character chi*(d) = kronecker((-1)^lam, d) * chi(d), d >= 1."""
    if d < 1:
        raise ValueError("chi_star is defined for d >= 1")
    sign = kronecker(-1, d) if params.lam % 2 else 1
    return sign * params.chi(d)


@dataclass
class DSeries:
    """Coefficients b(D) on the class D = r (mod 24), known for D <= d_max.

    Only nonzero values are stored. Reading off the residue class gives 0;
    reading past d_max raises, so truncation errors cannot pass silently.
    """

    r: int
    d_max: int
    values: Mapping[int, Coeff]

    def __post_init__(self) -> None:
        if self.r < 1 or self.r % 2 == 0:
            raise ValueError("DSeries needs odd r >= 1")
        if self.d_max < self.r % 24:
            raise ValueError("d_max admits no coefficients")

    def b(self, d: int) -> Coeff:
        if d % 24 != self.r % 24 or d < 1:
            return 0
        if d > self.d_max:
            raise ValueError(
                "coefficient at D=%d exceeds series precision %d" % (d, self.d_max)
            )
        return self.values.get(d, 0)

    def support(self) -> list[int]:
        return sorted(self.values)


def dseries_from_eta(
    r: int,
    d_max: int,
    algorithm: EtaAlgorithm = EtaAlgorithm.SPARSE_POWER,
) -> DSeries:
    """Exact discriminant-indexed coefficients of eta^r up to d_max."""
    if r < 1 or r % 2 == 0:
        raise ValueError("discriminant indexing needs odd r >= 1")
    if d_max < r:
        return DSeries(r=r, d_max=max(d_max, r % 24), values={})
    n_top = (d_max - r) // 24
    series = eta_power(r, n_top + 1, EXACT, algorithm)
    values = {
        24 * n + r: c for n, c in enumerate(series.to_list()) if c != 0
    }
    return DSeries(r=r, d_max=d_max, values=values)


def _as_plain(x: Coeff) -> Coeff:
    if isinstance(x, Fraction) and x.denominator == 1:
        return int(x)
    return x


def hecke_tp2(f: DSeries, p: int, params: HeckeHalfParams) -> DSeries:
    """Apply T(p^2); the output is exact to d_max // p^2."""
    if not is_prime(p) or p < 5:
        raise ValueError("T(p^2) needs a prime p >= 5 (p coprime to the level)")
    if f.r % 24 != params.r % 24:
        raise ValueError("series and parameters disagree on the residue class")
    lam = params.lam
    p2 = p * p
    out_max = f.d_max // p2
    if out_max < f.r % 24:
        raise ValueError("input precision %d too small for T(p^2)" % f.d_max)
    star_p = chi_star(p, params)
    star_p2 = chi_star(p2, params)
    if lam >= 1:
        mid_unit: Coeff = star_p * p ** (lam - 1)
        last_unit: Coeff = star_p2 * p ** (2 * lam - 1)
    else:
        mid_unit = Fraction(star_p, p)
        last_unit = Fraction(star_p2, p)
    values: dict[int, Coeff] = {}
    d = f.r % 24
    while d <= out_max:
        total = f.b(d * p2) + mid_unit * kronecker(d, p) * f.b(d)
        if d % p2 == 0:
            total += last_unit * f.b(d // p2)
        total = _as_plain(total)
        if total != 0:
            values[d] = total
        d += 24
    return DSeries(r=f.r, d_max=out_max, values=values)


@dataclass(frozen=True)
class EigenReport:
    r: int
    p: int
    d_max: int
    eigenvalue: Coeff
    max_residual: Coeff
    checked: int

    def to_json_dict(self) -> dict:
        return {
            "r": str(self.r),
            "p": str(self.p),
            "d_max": str(self.d_max),
            "eigenvalue": str(self.eigenvalue),
            "max_residual": str(self.max_residual),
            "checked": str(self.checked),
        }


def eigen_check(
    r: int,
    p: int,
    d_max: int,
    dseries: DSeries | None = None,
    algorithm: EtaAlgorithm = EtaAlgorithm.SPARSE_POWER,
) -> EigenReport:
    """Verify the eigenform relation T(p^2) f = eigenvalue * f up to d_max.

    The eigenvalue is read off at D = r, where b(r) = a_r(0) = 1. Any
    nonzero residual, or a non-integral eigenvalue for r >= 3, raises
    ArithmeticError: both would contradict the eigenform structure the rest
    of the chain theory rests on.
    """
    params = HeckeHalfParams(r)
    if d_max < r:
        raise ValueError("d_max must be at least r")
    needed = d_max * p * p
    if dseries is None:
        dseries = dseries_from_eta(r, needed, algorithm)
    if dseries.r != r:
        raise ValueError("dseries was built for a different power")
    if dseries.d_max < needed:
        raise ValueError(
            "dseries precision %d < required %d" % (dseries.d_max, needed)
        )
    transformed = hecke_tp2(dseries, p, params)
    if dseries.b(r) != 1:
        raise ArithmeticError("b(r) must equal a_r(0) = 1")
    eigenvalue = _as_plain(transformed.b(r))
    if r >= 3 and not isinstance(eigenvalue, int):
        raise ArithmeticError(
            "eigenvalue %s is not an integer for r=%d" % (eigenvalue, r)
        )
    worst: Coeff = 0
    checked = 0
    d = r
    while d <= d_max:
        residual = transformed.b(d) - eigenvalue * dseries.b(d)
        if abs(residual) > abs(worst):
            worst = residual
        checked += 1
        d += 24
    if worst != 0:
        raise ArithmeticError(
            "eigenform relation fails for r=%d, p=%d: max residual %s"
            % (r, p, worst)
        )
    return EigenReport(
        r=r,
        p=p,
        d_max=d_max,
        eigenvalue=eigenvalue,
        max_residual=_as_plain(worst),
        checked=checked,
    )


@dataclass(frozen=True)
class SquareClassReport:
    r: int
    d0: int
    n_bound: int
    checked: tuple[int, ...]
    violations: tuple[int, ...]
    unchecked: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "r": str(self.r),
            "d0": str(self.d0),
            "n_bound": str(self.n_bound),
            "checked": [str(m) for m in self.checked],
            "violations": [str(m) for m in self.violations],
            "unchecked": [str(m) for m in self.unchecked],
            "ok": self.ok,
        }


def square_class_check(
    r: int,
    d0: int,
    n_bound: int,
    zeros: Iterable[int] | None = None,
    zeros_n_max: int | None = None,
    algorithm: EtaAlgorithm = EtaAlgorithm.SPARSE_POWER,
) -> SquareClassReport:
    """Check b(d0 * m^2) = 0 for every m <= n_bound coprime to the level.

    A vanishing b(d0) propagates along the square class, so every multiplier
    m with gcd(m, 6) = 1 must land on another zero. With `zeros` the check
    runs against scan output (certified zero indices complete up to
    zeros_n_max); otherwise the coefficients are recomputed exactly.
    Multipliers beyond the available data are reported as unchecked.
    """
    if r < 1 or r % 2 == 0:
        raise ValueError("square classes are defined for odd r >= 1")
    if d0 < r or (d0 - r) % 24 != 0:
        raise ValueError("d0 must lie on the class d0 = r (mod 24), d0 >= r")
    if n_bound < 1:
        raise ValueError("n_bound must be >= 1")
    multipliers = [m for m in range(1, n_bound + 1) if gcd(m, 6) == 1]
    targets = {m: (d0 * m * m - r) // 24 for m in multipliers}

    checked: list[int] = []
    violations: list[int] = []
    unchecked: list[int] = []
    if zeros is None:
        top = max(targets.values())
        series = eta_power(r, top + 1, EXACT, algorithm)
        for m in multipliers:
            if series.coefficient(targets[m]) == 0:
                checked.append(m)
            else:
                violations.append(m)
    else:
        zero_set = set(zeros)
        limit = zeros_n_max if zeros_n_max is not None else max(zero_set, default=0)
        for m in multipliers:
            n = targets[m]
            if n > limit:
                unchecked.append(m)
            elif n in zero_set:
                checked.append(m)
            else:
                violations.append(m)
    return SquareClassReport(
        r=r,
        d0=d0,
        n_bound=n_bound,
        checked=tuple(checked),
        violations=tuple(violations),
        unchecked=tuple(unchecked),
    )
