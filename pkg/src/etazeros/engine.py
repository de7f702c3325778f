"""Scan engine: find and exactly certify vanishing coefficients of eta powers.

The pipeline is residue-first. Computing a_r(n) for one n costs as much as
computing the whole truncated series, so every stage works on full residue
arrays and batches candidates:

  stage 1   one pass mod the largest basket prime; indices with residue 0
            become candidates (a_r(0) = 1, so n = 0 never qualifies).
  stage 2   one pass per remaining basket prime, truncated to the largest
            candidate; any nonzero residue refutes that candidate.
  stage 3   CRT certification. A survivor n is exactly zero once the product
            of distinct primes with residue 0 exceeds 2^(bound_bits+1), where
            bound_bits bounds |a_r(n)| through the dominance series (see
            coefficient_bound). Primes beyond the basket are drawn from a
            deterministic descending sequence below 2^31, and passes are
            scheduled per prime at the smallest sufficient precision.

Checkpointing is append-only JSONL; each line carries a sha256 of its payload
and the job fingerprint. On resume the valid prefix is honored, anything from
the first corrupt line on is recomputed, and a mismatched fingerprint is a
hard error. Reports are bit-identical with or without interruption, and for
any worker-thread count.

Memory budgets: if the projected working set for a stage-1 pass exceeds the
budget (ETAZEROS_MEMORY_BUDGET or ScanJob.memory_budget, in bytes), the scan
splits [0, n_max] into segments and recomputes the series prefix per segment.
For the convolution algorithms the final segment still materializes the full
prefix, so the budget governs checkpoint granularity more than true peak
memory; the recomputation makes a fully segmented scan quadratic in n_max.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import isqrt
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .primes import descending_primes, largest_primes_below
from .series import EtaAlgorithm, ModPrime, eta_power

__all__ = [
    "DEFAULT_BASKET",
    "ScanJob",
    "ScanReport",
    "ZeroRecord",
    "certify_zero",
    "coefficient_bound",
    "nonvanishing_sweep",
    "scan_zeros",
]

# The eight largest primes below 2^61 (verified at import; deterministic).
DEFAULT_BASKET: tuple[int, ...] = largest_primes_below(1 << 61, 8)

# Certification primes beyond the basket descend from here; sub-2^31 moduli
# keep residue arrays on the vectorized numpy path.
_EXTENSION_CEILING = 1 << 31

_DEFAULT_MEMORY_BUDGET = 2 << 30  # bytes
_BYTES_PER_COEFF = 112  # measured transient footprint per index, numpy path

STATUS_CANDIDATE = "candidate"
STATUS_CERTIFIED = "certified_zero"
STATUS_REFUTED = "refuted_nonzero"


def coefficient_bound(r: int, n: int) -> int:
    """Bits B with |a_r(n)| < 2^B, via the dominance series.

    Termwise |a_r(n)| <= [q^n] prod_k (1-q^k)^(-r), the r-colored partition
    count. For any t > 0 that count is <= e^(t n) prod_k (1 - e^(-t k))^(-r),
    and -log(1-y) = sum_j y^j / j gives log of the product <= r pi^2 / (6 t)
    since 1/(e^(t j) - 1) <= 1/(t j). Optimizing t yields the clean bound
    exp(pi sqrt(2 r n / 3)) with no polynomial factor. In bits, pi/log(2) <
    4.533, and the integer square root below rounds everything upward.
    """
    if r < 1:
        raise ValueError("coefficient_bound needs r >= 1")
    if n < 0:
        raise ValueError("coefficient_bound needs n >= 0")
    if n == 0:
        return 1
    s = isqrt((2 * r * n + 2) // 3) + 1  # >= sqrt(2rn/3)
    return (4533 * s) // 1000 + 1


@dataclass(frozen=True)
class ZeroRecord:
    """Outcome for one candidate index n of eta^r."""

    r: int
    n: int
    status: str
    bound_bits: int | None = None
    crt_bits: int | None = None
    first_nonzero_prime: int | None = None
    witness_primes: tuple[int, ...] = ()

    def to_json_dict(self) -> dict:
        out: dict = {"r": str(self.r), "n": str(self.n), "status": self.status}
        if self.status == STATUS_CERTIFIED:
            out["bound_bits"] = str(self.bound_bits)
            out["crt_bits"] = str(self.crt_bits)
        elif self.status == STATUS_REFUTED:
            out["first_nonzero_prime"] = str(self.first_nonzero_prime)
        else:
            if self.bound_bits is not None:
                out["bound_bits"] = str(self.bound_bits)
            out["witness_primes"] = [str(p) for p in self.witness_primes]
        return out

    @staticmethod
    def from_json_dict(d: dict) -> "ZeroRecord":
        status = d["status"]
        return ZeroRecord(
            r=int(d["r"]),
            n=int(d["n"]),
            status=status,
            bound_bits=int(d["bound_bits"]) if "bound_bits" in d else None,
            crt_bits=int(d["crt_bits"]) if "crt_bits" in d else None,
            first_nonzero_prime=(
                int(d["first_nonzero_prime"])
                if "first_nonzero_prime" in d
                else None
            ),
            witness_primes=tuple(int(p) for p in d.get("witness_primes", ())),
        )


@dataclass(frozen=True)
class ScanJob:
    r: int
    n_max: int
    prime_basket: tuple[int, ...] = DEFAULT_BASKET
    algorithm: EtaAlgorithm = EtaAlgorithm.SPARSE_POWER
    checkpoint_path: str | os.PathLike | None = None
    threads: int | None = None
    memory_budget: int | None = None
    extend_basket: bool = True
    certify: bool = True

    def __post_init__(self) -> None:
        if self.r < 1:
            raise ValueError("scan needs r >= 1")
        if self.n_max < 1:
            raise ValueError("scan needs n_max >= 1")
        if len(set(self.prime_basket)) != len(self.prime_basket) or not self.prime_basket:
            raise ValueError("prime basket must be nonempty and duplicate-free")

    def fingerprint(self) -> str:
        payload = json.dumps(
            {
                "r": self.r,
                "n_max": self.n_max,
                "basket": [str(p) for p in self.prime_basket],
                "algorithm": self.algorithm.value,
            },
            sort_keys=True,
        )
        return hashlib.sha256(payload.encode()).hexdigest()[:16]


@dataclass
class ScanReport:
    r: int
    n_max: int
    prime_basket: tuple[int, ...]
    algorithm: EtaAlgorithm
    records: list[ZeroRecord]
    resumed: bool = False
    stats: dict = field(default_factory=dict)

    @property
    def zeros(self) -> list[int]:
        return [rec.n for rec in self.records if rec.status == STATUS_CERTIFIED]

    @property
    def unresolved(self) -> list[int]:
        return [rec.n for rec in self.records if rec.status == STATUS_CANDIDATE]

    def write_jsonl(self, path: str | os.PathLike) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            header = {
                "kind": "scan_header",
                "r": str(self.r),
                "n_max": str(self.n_max),
                "prime_basket": [str(p) for p in self.prime_basket],
                "algorithm": self.algorithm.value,
            }
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for rec in self.records:
                fh.write(json.dumps(rec.to_json_dict(), sort_keys=True) + "\n")

    @staticmethod
    def read_jsonl(path: str | os.PathLike) -> "ScanReport":
        with open(path, "r", encoding="utf-8") as fh:
            lines = [ln for ln in fh.read().splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty scan file: %s" % path)
        header = json.loads(lines[0])
        if header.get("kind") != "scan_header":
            raise ValueError("scan file missing header line")
        records = [ZeroRecord.from_json_dict(json.loads(ln)) for ln in lines[1:]]
        return ScanReport(
            r=int(header["r"]),
            n_max=int(header["n_max"]),
            prime_basket=tuple(int(p) for p in header["prime_basket"]),
            algorithm=EtaAlgorithm(header["algorithm"]),
            records=records,
        )


# ----------------------------------------------------------------------------
# residue passes


def _residue_array(r: int, precision: int, p: int, algorithm: EtaAlgorithm):
    return eta_power(r, precision, ModPrime(p), algorithm).coeffs


def _residues_at(arr, indices: Sequence[int]) -> list[int]:
    if isinstance(arr, np.ndarray):
        return [int(x) for x in arr[np.asarray(indices, dtype=np.int64)]]
    return [int(arr[i]) for i in indices]


def _zero_indices(arr, start: int, stop: int) -> list[int]:
    if isinstance(arr, np.ndarray):
        view = arr[start:stop]
        return [start + int(i) for i in np.nonzero(view == 0)[0]]
    return [i for i in range(start, stop) if arr[i] == 0]


# ----------------------------------------------------------------------------
# checkpointing


class _Checkpoint:
    """Append-only JSONL log of completed residue passes."""

    def __init__(self, path: str | os.PathLike | None, fingerprint: str) -> None:
        self.path = Path(path) if path is not None else None
        self.fp = fingerprint
        self.passes: dict[tuple[int, str], list[int]] = {}
        self.segments: dict[str, tuple[int, list[int]]] = {}
        if self.path is not None and self.path.exists():
            self._load()

    @staticmethod
    def _line_hash(payload: dict) -> str:
        blob = json.dumps(payload, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()

    def _load(self) -> None:
        valid: list[str] = []
        for raw in self.path.read_text(encoding="utf-8").splitlines():
            if not raw.strip():
                continue
            try:
                d = json.loads(raw)
                h = d.pop("sha256")
                if h != self._line_hash(d):
                    break
            except (ValueError, KeyError):
                break
            if d.get("fp") != self.fp:
                raise ValueError(
                    "checkpoint %s belongs to a different job definition" % self.path
                )
            valid.append(raw)
            if d["kind"] == "pass":
                key = (int(d["stage"]), d["prime"])
                self.passes[key] = [int(n) for n in d["surviving"]]
            elif d["kind"] == "segment":
                end, cands = self.segments.get(d["prime"], (0, []))
                if int(d["segment_end"]) > end:
                    self.segments[d["prime"]] = (
                        int(d["segment_end"]),
                        [int(n) for n in d["candidates_so_far"]],
                    )
        # compact away any corrupt tail so later appends stay consistent
        text = "".join(ln + "\n" for ln in valid)
        if self.path.read_text(encoding="utf-8") != text:
            self.path.write_text(text, encoding="utf-8")

    def _append(self, payload: dict) -> None:
        if self.path is None:
            return
        payload = dict(payload, fp=self.fp)
        payload["sha256"] = self._line_hash(payload)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, sort_keys=True) + "\n")

    def get_pass(self, stage: int, prime: int) -> list[int] | None:
        return self.passes.get((stage, str(prime)))

    def record_pass(
        self, stage: int, prime: int, precision: int, surviving: Iterable[int]
    ) -> None:
        surviving = sorted(surviving)
        self.passes[(stage, str(prime))] = list(surviving)
        self._append(
            {
                "kind": "pass",
                "stage": stage,
                "prime": str(prime),
                "precision": precision,
                "surviving": [str(n) for n in surviving],
            }
        )

    def get_segment(self, prime: int) -> tuple[int, list[int]]:
        return self.segments.get(str(prime), (0, []))

    def record_segment(
        self, prime: int, segment_end: int, candidates: Iterable[int]
    ) -> None:
        cands = sorted(candidates)
        self.segments[str(prime)] = (segment_end, list(cands))
        self._append(
            {
                "kind": "segment",
                "stage": 1,
                "prime": str(prime),
                "segment_end": segment_end,
                "candidates_so_far": [str(n) for n in cands],
            }
        )

    @property
    def used(self) -> bool:
        return bool(self.passes) or bool(self.segments)


# ----------------------------------------------------------------------------
# certification scheduling


def extension_primes(exclude: Sequence[int]) -> Iterable[int]:
    """Deterministic certification primes below 2^31, largest first."""
    seen = set(exclude)
    for p in descending_primes(_EXTENSION_CEILING):
        if p not in seen:
            yield p


def _certification_schedule(
    candidates: Sequence[int],
    bounds: dict[int, int],
    basket: Sequence[int],
    extend: bool,
) -> tuple[list[int], dict[int, int]]:
    """Prime sequence and per-candidate prefix length for CRT certificates.

    Returns (primes, needed) where needed[n] = k means the product of
    primes[:k] exceeds 2^(bound+1) for candidate n. Candidates whose target
    cannot be met (extension disabled) are absent from `needed`.
    """
    if not candidates:
        return list(basket), {}
    targets = {n: 1 << (bounds[n] + 1) for n in candidates}
    hardest = max(targets.values())
    primes = list(basket)
    product = 1
    products = [1]
    for p in primes:
        product *= p
        products.append(product)
    if product <= hardest and extend:
        for p in extension_primes(basket):
            primes.append(p)
            product *= p
            products.append(product)
            if product > hardest:
                break
    needed: dict[int, int] = {}
    for n in candidates:
        t = targets[n]
        for k, prod in enumerate(products):
            if prod > t:
                needed[n] = k
                break
    return primes, needed


def _run_passes(
    jobs: list[tuple[int, int, list[int]]],
    r: int,
    algorithm: EtaAlgorithm,
    threads: int,
) -> dict[int, dict[int, int]]:
    """Compute residues at the requested indices for each (prime, precision).

    jobs entries are (prime, precision, indices). Returns
    {prime: {n: residue}}. Results do not depend on the thread count.
    """

    def one(job: tuple[int, int, list[int]]) -> tuple[int, dict[int, int]]:
        prime, precision, indices = job
        arr = _residue_array(r, precision, prime, algorithm)
        vals = _residues_at(arr, indices)
        return prime, dict(zip(indices, vals))

    if threads <= 1 or len(jobs) <= 1:
        results = [one(j) for j in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(one, jobs))
    return dict(results)


# ----------------------------------------------------------------------------
# public operations


def scan_zeros(job: ScanJob) -> ScanReport:
    """Run the staged scan and return per-candidate records, n ascending."""
    t0 = time.monotonic()
    threads = job.threads if job.threads is not None else (os.cpu_count() or 1)
    budget = job.memory_budget
    if budget is None:
        env = os.environ.get("ETAZEROS_MEMORY_BUDGET")
        budget = int(env) if env else _DEFAULT_MEMORY_BUDGET
    ckpt = _Checkpoint(job.checkpoint_path, job.fingerprint())
    resumed = ckpt.used
    stats: dict = {"passes": 0}
    precision = job.n_max + 1
    stage1_prime = max(job.prime_basket)

    # ---- stage 1
    candidates = ckpt.get_pass(1, stage1_prime)
    if candidates is None:
        seg_len = precision
        if budget and precision * _BYTES_PER_COEFF > budget:
            nseg = -(-precision * _BYTES_PER_COEFF // budget)
            seg_len = -(-precision // nseg)
        done, found = ckpt.get_segment(stage1_prime)
        candidates = list(found)
        while done < precision:
            end = min(done + seg_len, precision)
            arr = _residue_array(job.r, end, stage1_prime, job.algorithm)
            if done == 0 and int(arr[0]) == 0:
                raise ArithmeticError("a_r(0) must be 1; residue pass is corrupt")
            candidates.extend(_zero_indices(arr, max(done, 1), end))
            del arr
            stats["passes"] += 1
            done = end
            if done < precision:
                ckpt.record_segment(stage1_prime, done, candidates)
        ckpt.record_pass(1, stage1_prime, precision, candidates)
    candidates = sorted(candidates)

    records: dict[int, ZeroRecord] = {}

    # ---- stage 2
    rest = [p for p in job.prime_basket if p != stage1_prime]
    survivors = list(candidates)
    if candidates and rest:
        top = max(candidates) + 1
        jobs = []
        cached: dict[int, dict[int, int]] = {}
        for p in rest:
            prior = ckpt.get_pass(2, p)
            if prior is not None:
                prior_set = set(prior)
                cached[p] = {n: (0 if n in prior_set else 1) for n in candidates}
            else:
                jobs.append((p, top, candidates))
        fresh = _run_passes(jobs, job.r, job.algorithm, threads)
        stats["passes"] += len(jobs)
        for p, _, _ in jobs:
            ckpt.record_pass(2, p, top, [n for n, v in fresh[p].items() if v == 0])
        residues = {**cached, **fresh}
        survivors = []
        for n in candidates:
            refuter = next((p for p in rest if residues[p][n] != 0), None)
            if refuter is None:
                survivors.append(n)
            else:
                records[n] = ZeroRecord(
                    job.r, n, STATUS_REFUTED, first_nonzero_prime=refuter
                )

    # ---- stage 3
    if survivors and job.certify:
        bounds = {n: coefficient_bound(job.r, n) for n in survivors}
        primes, needed = _certification_schedule(
            survivors, bounds, job.prime_basket, job.extend_basket
        )
        ext = primes[len(job.prime_basket):]
        jobs = []
        cached = {}
        for j, p in enumerate(ext, start=len(job.prime_basket)):
            check = [n for n in survivors if needed.get(n, 0) > j]
            if not check:
                continue
            prior = ckpt.get_pass(3, p)
            if prior is not None:
                prior_set = set(prior)
                cached[p] = {n: (0 if n in prior_set else 1) for n in check}
            else:
                jobs.append((p, max(check) + 1, check))
        fresh = _run_passes(jobs, job.r, job.algorithm, threads)
        stats["passes"] += len(jobs)
        for p, _, idx in jobs:
            ckpt.record_pass(3, p, max(idx) + 1, [n for n, v in fresh[p].items() if v == 0])
        residues = {**cached, **fresh}
        prefix_products = [1]
        for p in primes:
            prefix_products.append(prefix_products[-1] * p)
        for n in survivors:
            k = needed.get(n)
            if k is None:
                records[n] = ZeroRecord(
                    job.r,
                    n,
                    STATUS_CANDIDATE,
                    bound_bits=bounds[n],
                    witness_primes=tuple(job.prime_basket),
                )
                continue
            refuter = None
            for p in primes[len(job.prime_basket): k]:
                if residues[p][n] != 0:
                    refuter = p
                    break
            if refuter is not None:
                records[n] = ZeroRecord(
                    job.r, n, STATUS_REFUTED, first_nonzero_prime=refuter
                )
            else:
                crt_bits = prefix_products[k].bit_length() - 1
                records[n] = ZeroRecord(
                    job.r,
                    n,
                    STATUS_CERTIFIED,
                    bound_bits=bounds[n],
                    crt_bits=crt_bits,
                )
    elif survivors:
        for n in survivors:
            records[n] = ZeroRecord(
                job.r,
                n,
                STATUS_CANDIDATE,
                bound_bits=coefficient_bound(job.r, n),
                witness_primes=tuple(job.prime_basket),
            )

    stats["seconds"] = time.monotonic() - t0
    ordered = [records[n] for n in sorted(records)]
    return ScanReport(
        r=job.r,
        n_max=job.n_max,
        prime_basket=job.prime_basket,
        algorithm=job.algorithm,
        records=ordered,
        resumed=resumed,
        stats=stats,
    )


def certify_zero(
    r: int,
    n: int,
    primes: Sequence[int] | None = None,
    extend: bool = True,
    algorithm: EtaAlgorithm = EtaAlgorithm.SPARSE_POWER,
) -> ZeroRecord:
    """Certify or refute a_r(n) = 0 for a single index.

    Accumulates residues mod distinct primes (the given sequence, then the
    deterministic extension sequence when allowed) until their product
    exceeds 2^(bound_bits+1). All residues zero at that point proves the
    coefficient is exactly 0 by CRT against the dominance bound. A prime
    shortfall is reported as a candidate record, never ignored.
    """
    basket = tuple(primes) if primes is not None else DEFAULT_BASKET
    bound = coefficient_bound(r, n)
    target = 1 << (bound + 1)
    product = 1
    used: list[int] = []

    def prime_stream() -> Iterable[int]:
        yield from basket
        if extend:
            yield from extension_primes(basket)

    for p in prime_stream():
        arr = _residue_array(r, n + 1, p, algorithm)
        residue = int(arr[n])
        if residue != 0:
            return ZeroRecord(r, n, STATUS_REFUTED, first_nonzero_prime=p)
        used.append(p)
        product *= p
        if product > target:
            return ZeroRecord(
                r,
                n,
                STATUS_CERTIFIED,
                bound_bits=bound,
                crt_bits=product.bit_length() - 1,
            )
    return ZeroRecord(
        r, n, STATUS_CANDIDATE, bound_bits=bound, witness_primes=tuple(used)
    )


@dataclass
class SweepRow:
    r: int
    n_max: int
    zeros: list[int]
    unresolved: list[int]

    @property
    def empty(self) -> bool:
        return not self.zeros and not self.unresolved

    def to_json_dict(self) -> dict:
        return {
            "r": str(self.r),
            "n_max": str(self.n_max),
            "zeros": [str(n) for n in self.zeros],
            "unresolved": [str(n) for n in self.unresolved],
            "empty": self.empty,
        }


def nonvanishing_sweep(
    r_values: Sequence[int],
    n_max: int,
    prime_basket: tuple[int, ...] = DEFAULT_BASKET,
    algorithm: EtaAlgorithm = EtaAlgorithm.SPARSE_POWER,
    threads: int | None = None,
) -> list[SweepRow]:
    """Scan each power and report certified zero sets (expected empty rows)."""
    rows = []
    for r in r_values:
        report = scan_zeros(
            ScanJob(
                r=r,
                n_max=n_max,
                prime_basket=prime_basket,
                algorithm=algorithm,
                threads=threads,
            )
        )
        rows.append(
            SweepRow(r=r, n_max=n_max, zeros=report.zeros, unresolved=report.unresolved)
        )
    return rows
