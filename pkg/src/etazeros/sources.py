"""Classification of eta-power zeros into sources and descendant chains.

For odd r, index n of eta^r corresponds to the discriminant D = 24n + r.
Zeros propagate along square classes: a source zero at n0 with D0 = 24*n0 + r
forces zeros at every n_l = n0*l^2 + r*(l^2 - 1)/24 (equivalently
D_l = D0*l^2) for admissible multipliers l:

  coprime_six   l with gcd(l, 6) = 1; always available.
  odd_only      every odd l; available when 3 | r and 27 does not divide D0
                (the refined case).

Both rules keep n_l integral: l coprime to 6 gives l^2 = 1 (mod 24), and for
odd l the factor 3 | r absorbs the missing 3 in l^2 - 1.

A source is called admissible when D0 is squarefree away from 2 and 3, i.e.
p^2 never divides D0 for a prime p >= 5. Classification does not require
admissibility: an inadmissible leading zero is still recorded as a source,
but it is flagged as an anomaly, as is any predicted chain member missing
from the supplied zero set.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterable, Sequence

from .primes import factorize

__all__ = [
    "CHAIN_RULE_COPRIME_SIX",
    "CHAIN_RULE_ODD",
    "CensusRow",
    "ClassificationReport",
    "SourceRecord",
    "census",
    "chain_indices",
    "chain_rule_for",
    "classify_zeros",
    "discriminant",
    "is_admissible_discriminant",
    "is_descendant",
    "is_refined_source",
]

CHAIN_RULE_COPRIME_SIX = "coprime_six"
CHAIN_RULE_ODD = "odd_only"


def _require_odd(r: int) -> None:
    if r < 1 or r % 2 == 0:
        raise ValueError("chain arithmetic is defined for odd r >= 1")


def discriminant(r: int, n: int) -> int:
    """D = 24n + r attached to index n of eta^r."""
    if n < 0:
        raise ValueError("index must be >= 0")
    return 24 * n + r


def is_admissible_discriminant(d: int) -> bool:
    """True when no prime p >= 5 divides d to the second power."""
    if d < 1:
        raise ValueError("discriminant must be positive")
    return all(e < 2 for p, e in factorize(d).items() if p not in (2, 3))


def is_refined_source(r: int, d0: int) -> bool:
    """Refined sources (3 | r, 27 does not divide D0) admit every odd l."""
    return r % 3 == 0 and d0 % 27 != 0


def chain_rule_for(r: int, n0: int) -> str:
    _require_odd(r)
    d0 = discriminant(r, n0)
    return CHAIN_RULE_ODD if is_refined_source(r, d0) else CHAIN_RULE_COPRIME_SIX


def _rule_allows(l: int, rule: str) -> bool:
    if rule == CHAIN_RULE_ODD:
        return l % 2 == 1
    if rule == CHAIN_RULE_COPRIME_SIX:
        return l % 2 == 1 and l % 3 != 0
    raise ValueError("unknown chain rule: %r" % rule)


def chain_indices(r: int, n0: int, n_max: int) -> list[int]:
    """Chain members n_l <= n_max in ascending order, starting at l = 1."""
    _require_odd(r)
    rule = chain_rule_for(r, n0)
    out = []
    l = 1
    while True:
        if _rule_allows(l, rule):
            n_l = n0 * l * l + r * (l * l - 1) // 24
            if n_l > n_max:
                break
            out.append(n_l)
        l += 2
    return out


def is_descendant(r: int, n: int, n0: int) -> bool:
    """True when n sits strictly above n0 on the chain rooted at n0."""
    _require_odd(r)
    d0 = discriminant(r, n0)
    d = discriminant(r, n)
    if d <= d0 or d % d0 != 0:
        return False
    q = d // d0
    l = isqrt(q)
    if l * l != q:
        return False
    return _rule_allows(l, chain_rule_for(r, n0))


@dataclass(frozen=True)
class SourceRecord:
    r: int
    n0: int
    d0: int
    admissible: bool
    refined: bool
    chain_rule: str
    members: tuple[int, ...]
    missing_members: tuple[int, ...] = ()

    @property
    def anomalous(self) -> bool:
        return (not self.admissible) or bool(self.missing_members)

    def to_json_dict(self) -> dict:
        return {
            "r": str(self.r),
            "n0": str(self.n0),
            "d0": str(self.d0),
            "admissible": self.admissible,
            "refined": self.refined,
            "chain_rule": self.chain_rule,
            "members": [str(n) for n in self.members],
            "missing_members": [str(n) for n in self.missing_members],
        }


@dataclass
class ClassificationReport:
    r: int
    n_max: int
    sources: list[SourceRecord]

    @property
    def source_indices(self) -> list[int]:
        return [s.n0 for s in self.sources]

    @property
    def anomalies(self) -> list[str]:
        out = []
        for s in self.sources:
            if not s.admissible:
                out.append(
                    "source n0=%d: discriminant %d has a square factor away "
                    "from 2 and 3" % (s.n0, s.d0)
                )
            if s.missing_members:
                out.append(
                    "source n0=%d: predicted chain members %s absent from the "
                    "zero set" % (s.n0, list(s.missing_members))
                )
        return out


def classify_zeros(
    r: int, zeros: Iterable[int], n_max: int | None = None
) -> ClassificationReport:
    """Greedy ascending classification of a zero set.

    Each zero joins the chain of the earliest recorded source whose
    discriminant divides its own with a square, rule-respecting quotient;
    otherwise it opens a new source. The input must contain every zero of
    eta^r up to n_max for the missing-member check to be meaningful.
    """
    _require_odd(r)
    zs = sorted(set(zeros))
    if any(n < 1 for n in zs):
        raise ValueError("zero indices must be >= 1 (n = 0 has coefficient 1)")
    if n_max is None:
        n_max = zs[-1] if zs else 0
    zs = [n for n in zs if n <= n_max]

    roots: list[tuple[int, int, str, list[int]]] = []  # (n0, d0, rule, members)
    for n in zs:
        d = discriminant(r, n)
        home = None
        for root in roots:
            _, d0, rule, _ = root
            if d % d0 != 0:
                continue
            q = d // d0
            l = isqrt(q)
            if l * l != q or l == 1:
                continue
            if _rule_allows(l, rule):
                home = root
                break
        if home is None:
            roots.append((n, d, chain_rule_for(r, n), [n]))
        else:
            home[3].append(n)

    present = set(zs)
    sources = []
    for n0, d0, rule, members in roots:
        predicted = chain_indices(r, n0, n_max)
        missing = tuple(m for m in predicted if m not in present)
        sources.append(
            SourceRecord(
                r=r,
                n0=n0,
                d0=d0,
                admissible=is_admissible_discriminant(d0),
                refined=is_refined_source(r, d0),
                chain_rule=rule,
                members=tuple(members),
                missing_members=missing,
            )
        )
    return ClassificationReport(r=r, n_max=n_max, sources=sources)


@dataclass(frozen=True)
class CensusRow:
    threshold: int
    zero_count: int
    source_count: int
    anomaly_count: int

    def to_json_dict(self) -> dict:
        return {
            "threshold": str(self.threshold),
            "zero_count": str(self.zero_count),
            "source_count": str(self.source_count),
            "anomaly_count": str(self.anomaly_count),
        }


def census(
    r: int, zeros: Iterable[int], thresholds: Sequence[int]
) -> tuple[ClassificationReport, list[CensusRow]]:
    """Count zeros and sources at each threshold using one classification.

    Greedy classification of a prefix coincides with the prefix of the full
    classification, so a single pass at the largest threshold serves every
    row. The zero list must be complete up to max(thresholds).
    """
    if not thresholds or list(thresholds) != sorted(set(thresholds)):
        raise ValueError("thresholds must be strictly increasing and nonempty")
    top = thresholds[-1]
    zs = [n for n in sorted(set(zeros)) if n <= top]
    report = classify_zeros(r, zs, n_max=top)
    rows = []
    for t in thresholds:
        nz = sum(1 for n in zs if n <= t)
        srcs = [s for s in report.sources if s.n0 <= t]
        # missing members above t do not taint the row at threshold t
        bad = sum(
            1
            for s in srcs
            if (not s.admissible) or any(m <= t for m in s.missing_members)
        )
        rows.append(
            CensusRow(
                threshold=t, zero_count=nz, source_count=len(srcs), anomaly_count=bad
            )
        )
    return report, rows
