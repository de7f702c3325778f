"""Command-line front end: scans, chain classification, verification suites.

Every run that writes data files also writes a JSON manifest recording the
command, its parameters, the prime basket, start/end timestamps, and a
sha256 hash of each output file. Timestamps live only in the manifest, so
data outputs are byte-identical across reruns with the same parameters.

Exit codes: 0 clean, 1 failed invariant, 2 anomaly found (unexpected or
unresolved zeros, inadmissible discriminants, broken chains), 3 I/O error,
4 bad arguments.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone

from . import __version__
from .bounds import (
    CS_BOUND_NAME,
    CS_CONSTANT,
    CS_THRESHOLD,
    ONO_LINEAR_RATIO,
    ONO_REFINED,
    cs_bound_check,
    lacunarity_density,
    ono_bound_check,
)
from .engine import DEFAULT_BASKET, ScanJob, ScanReport, scan_zeros
from .halfint import HeckeHalfParams, dseries_from_eta, eigen_check, hecke_tp2
from .maeda import delta_sq_equivalence
from .series import (
    EXACT,
    EtaAlgorithm,
    ModPrime,
    eta_power,
    euler_series,
    jacobi_series,
    multiply,
)
from .sources import (
    census,
    chain_indices,
    chain_rule_for,
    classify_zeros,
    discriminant,
    is_admissible_discriminant,
    is_refined_source,
)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_ANOMALY = 2
EXIT_IO = 3
EXIT_BAD_ARGS = 4

_ODD_R_DEFAULT = tuple(range(1, 24, 2))


class UsageError(Exception):
    """Bad command-line arguments or inconsistent parameter combinations."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


# ----------------------------------------------------------------------------
# run manifests


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


def _sha256_file(path: str | os.PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _jsonable(value):
    if value is None or isinstance(value, (bool, str)):
        return value
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return str(value)


@dataclass
class RunManifest:
    """Record of one CLI run: parameters in, hashed output files out."""

    command: str
    parameters: dict
    prime_basket: tuple[int, ...] = ()
    started_at: str = ""
    finished_at: str = ""
    checkpoint_path: str | None = None
    outputs: dict = field(default_factory=dict)

    def register(self, path: str | os.PathLike) -> None:
        self.outputs[str(path)] = _sha256_file(path)

    def to_json_dict(self) -> dict:
        return {
            "command": self.command,
            "parameters": {k: _jsonable(v) for k, v in sorted(self.parameters.items())},
            "prime_basket": [str(p) for p in self.prime_basket],
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "checkpoint_path": self.checkpoint_path,
            "outputs": dict(sorted(self.outputs.items())),
        }

    def write(self, path: str | os.PathLike) -> None:
        self.finished_at = _utcnow()
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def _start_manifest(args: argparse.Namespace, basket: tuple[int, ...] = ()) -> RunManifest:
    parameters = {k: v for k, v in vars(args).items() if k != "func"}
    return RunManifest(
        command=args.command,
        parameters=parameters,
        prime_basket=basket,
        started_at=_utcnow(),
        checkpoint_path=str(args.checkpoint) if getattr(args, "checkpoint", None) else None,
    )


def _finish_manifest(manifest: RunManifest, args: argparse.Namespace, primary_out: str) -> None:
    path = getattr(args, "manifest", None) or primary_out + ".manifest.json"
    manifest.write(path)
    print("manifest: %s" % path)


# ----------------------------------------------------------------------------
# shared helpers


def _parse_int_list(text: str, flag: str) -> tuple[int, ...]:
    try:
        values = tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise UsageError("%s expects a comma-separated list of integers" % flag)
    if not values:
        raise UsageError("%s expects a nonempty list" % flag)
    return values


def _load_scan(path: str) -> ScanReport:
    try:
        return ScanReport.read_jsonl(path)
    except (ValueError, json.JSONDecodeError) as exc:
        raise OSError("unreadable scan file %s: %s" % (path, exc)) from exc


def _scan_for(args: argparse.Namespace, r: int, n_max: int) -> ScanReport:
    """Load --from-scan when given (validating coverage), else scan now."""
    path = getattr(args, "from_scan", None)
    if path:
        scan = _load_scan(path)
        if scan.r != r:
            raise UsageError("scan file %s holds r=%d, expected r=%d" % (path, scan.r, r))
        if scan.n_max < n_max:
            raise UsageError(
                "scan file %s stops at n=%d, need n=%d" % (path, scan.n_max, n_max)
            )
        return scan
    return scan_zeros(ScanJob(r=r, n_max=n_max, threads=getattr(args, "threads", None)))


class _SuiteRunner:
    """Prints one PASS/FAIL line per invariant and tallies failures."""

    def __init__(self) -> None:
        self.passed = 0
        self.failed = 0

    def check(self, name: str, fn) -> None:
        try:
            detail = fn()
        except (ArithmeticError, AssertionError) as exc:
            self.failed += 1
            print("FAIL %s: %s" % (name, exc))
        else:
            self.passed += 1
            print("PASS %s%s" % (name, ": %s" % detail if detail else ""))

    def summary(self) -> int:
        print("%d passed, %d failed" % (self.passed, self.failed))
        return EXIT_CHECK_FAILED if self.failed else EXIT_OK


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ArithmeticError(message)


# ----------------------------------------------------------------------------
# scan


def cmd_scan(args: argparse.Namespace) -> int:
    basket = (
        _parse_int_list(args.primes, "--primes") if args.primes else DEFAULT_BASKET
    )
    if args.checkpoint and not args.resume:
        path = str(args.checkpoint)
        if os.path.exists(path) and os.path.getsize(path) > 0:
            raise UsageError(
                "checkpoint %s already exists; pass --resume to continue it "
                "or remove the file" % path
            )
    manifest = _start_manifest(args, basket)
    job = ScanJob(
        r=args.r,
        n_max=args.n_max,
        prime_basket=basket,
        algorithm=EtaAlgorithm(args.algorithm),
        checkpoint_path=args.checkpoint,
        threads=args.threads,
        memory_budget=args.memory_budget,
        extend_basket=not args.no_extend,
    )
    report = scan_zeros(job)
    zeros = report.zeros
    unresolved = report.unresolved
    print(
        "r=%d n_max=%d: %d certified zeros, %d unresolved candidates"
        % (args.r, args.n_max, len(zeros), len(unresolved))
    )
    if zeros:
        shown = zeros if len(zeros) <= 200 else zeros[:200]
        print("zeros: %s%s" % (" ".join(map(str, shown)), "" if shown is zeros else " ..."))
    for n in unresolved:
        print("unresolved candidate: n=%d" % n)
    if args.out:
        report.write_jsonl(args.out)
        manifest.register(args.out)
        _finish_manifest(manifest, args, str(args.out))
    if unresolved:
        return EXIT_ANOMALY
    if args.expect_none and zeros:
        print("anomaly: zeros found where none were expected")
        return EXIT_ANOMALY
    return EXIT_OK


# ----------------------------------------------------------------------------
# chain / sources / census


def cmd_chain(args: argparse.Namespace) -> int:
    d0 = discriminant(args.r, args.n0)
    rule = chain_rule_for(args.r, args.n0)
    admissible = is_admissible_discriminant(d0)
    refined = is_refined_source(args.r, d0)
    print(
        "r=%d n0=%d: discriminant %d, rule %s, %s%s"
        % (
            args.r,
            args.n0,
            d0,
            rule,
            "admissible" if admissible else "NOT admissible",
            ", refined" if refined else "",
        )
    )
    members = chain_indices(args.r, args.n0, args.n_max)
    print("chain up to %d: %s" % (args.n_max, " ".join(map(str, members))))
    return EXIT_OK if admissible else EXIT_ANOMALY


def _print_census(rows) -> None:
    print("threshold zero_count source_count anomaly_count")
    for row in rows:
        print(
            "%9d %10d %12d %13d"
            % (row.threshold, row.zero_count, row.source_count, row.anomaly_count)
        )


def _write_census_csv(path: str, rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["threshold", "zero_count", "source_count", "anomaly_count"])
        for row in rows:
            writer.writerow(
                [row.threshold, row.zero_count, row.source_count, row.anomaly_count]
            )


def cmd_sources(args: argparse.Namespace) -> int:
    scan = _load_scan(args.from_scan)
    if scan.r != args.r:
        raise UsageError(
            "scan file %s holds r=%d, expected r=%d" % (args.from_scan, scan.r, args.r)
        )
    manifest = _start_manifest(args, scan.prime_basket)
    zeros = scan.zeros
    report = classify_zeros(args.r, zeros, n_max=scan.n_max)
    print(
        "r=%d n_max=%d: %d zeros in %d chains"
        % (args.r, scan.n_max, len(zeros), len(report.sources))
    )
    for s in report.sources:
        print(
            "source n0=%d: discriminant %d, rule %s, %d members%s"
            % (s.n0, s.d0, s.chain_rule, len(s.members), " ANOMALOUS" if s.anomalous else "")
        )
    for message in report.anomalies:
        print("anomaly: %s" % message)
    rows = None
    if args.census_grid:
        grid = _parse_int_list(args.census_grid, "--census-grid")
        if grid[-1] > scan.n_max:
            raise UsageError(
                "census grid reaches %d but the scan stops at %d" % (grid[-1], scan.n_max)
            )
        _, rows = census(args.r, zeros, grid)
        _print_census(rows)
    outputs = []
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            header = {
                "kind": "classification_header",
                "r": str(args.r),
                "n_max": str(scan.n_max),
            }
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for s in report.sources:
                fh.write(json.dumps(s.to_json_dict(), sort_keys=True) + "\n")
        manifest.register(args.out)
        outputs.append(str(args.out))
    if args.csv:
        if rows is None:
            raise UsageError("--csv requires --census-grid")
        _write_census_csv(args.csv, rows)
        manifest.register(args.csv)
        outputs.append(str(args.csv))
    if outputs:
        _finish_manifest(manifest, args, outputs[0])
    if scan.unresolved:
        print("anomaly: scan holds %d unresolved candidates" % len(scan.unresolved))
        return EXIT_ANOMALY
    if report.anomalies:
        return EXIT_ANOMALY
    return EXIT_OK


def cmd_census(args: argparse.Namespace) -> int:
    scan = _load_scan(args.from_scan)
    if scan.r != args.r:
        raise UsageError(
            "scan file %s holds r=%d, expected r=%d" % (args.from_scan, scan.r, args.r)
        )
    grid = _parse_int_list(args.grid, "--grid")
    if grid[-1] > scan.n_max:
        raise UsageError(
            "census grid reaches %d but the scan stops at %d" % (grid[-1], scan.n_max)
        )
    manifest = _start_manifest(args, scan.prime_basket)
    _, rows = census(args.r, scan.zeros, grid)
    _print_census(rows)
    if args.csv:
        _write_census_csv(args.csv, rows)
        manifest.register(args.csv)
        _finish_manifest(manifest, args, str(args.csv))
    if scan.unresolved:
        print("anomaly: scan holds %d unresolved candidates" % len(scan.unresolved))
        return EXIT_ANOMALY
    if any(row.anomaly_count for row in rows):
        return EXIT_ANOMALY
    return EXIT_OK


# ----------------------------------------------------------------------------
# hecke-verify / maeda / bounds


def cmd_hecke_verify(args: argparse.Namespace) -> int:
    primes = _parse_int_list(args.primes, "--primes")
    series = dseries_from_eta(args.r, args.d_max * max(primes) ** 2)
    for p in primes:
        report = eigen_check(args.r, p, args.d_max, dseries=series)
        print(
            "r=%d p=%d: eigenvalue %s, zero residual across %d coefficients"
            % (args.r, p, report.eigenvalue, report.checked)
        )
    print("all eigenvalue checks passed")
    return EXIT_OK


def cmd_maeda(args: argparse.Namespace) -> int:
    report = delta_sq_equivalence(args.n_max)
    print("kappa = %d + %d*sqrt(144169)" % report.kappa)
    degenerate = [row.m for row in report.rows if row.b_zero]
    print(
        "m=2..%d: coefficient identity holds; discriminant vanishes for %d "
        "indices, matching the coefficient zeros exactly" % (args.n_max, len(degenerate))
    )
    if degenerate:
        print("degenerate indices: %s" % " ".join(map(str, degenerate)))
    if args.out:
        manifest = _start_manifest(args)
        with open(args.out, "w", encoding="utf-8") as fh:
            header = {
                "kind": "equivalence_header",
                "n_max": str(args.n_max),
                "kappa": [str(report.kappa[0]), str(report.kappa[1])],
                "b2": str(report.b2),
                "disc2": str(report.disc2),
            }
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for row in report.rows:
                fh.write(json.dumps(row.to_json_dict(), sort_keys=True) + "\n")
        manifest.register(args.out)
        _finish_manifest(manifest, args, str(args.out))
    return EXIT_OK


def _bound_failures(report) -> list[str]:
    failures = []
    if report.bound_name == CS_BOUND_NAME:
        if report.threshold_met and not report.satisfied:
            failures.append("upper bound violated at x=%d" % report.x)
    else:
        if not report.satisfied:
            failures.append("linear lower bound violated at x=%d" % report.x)
        if report.refined_threshold_met and not report.refined_satisfied:
            failures.append("refined lower bound violated at x=%d" % report.x)
    return failures


def cmd_bounds(args: argparse.Namespace) -> int:
    scan = _scan_for(args, args.r, args.x)
    if scan.unresolved:
        print("anomaly: scan holds %d unresolved candidates" % len(scan.unresolved))
        return EXIT_ANOMALY
    manifest = _start_manifest(args, scan.prime_basket)
    reports = []
    if args.check in ("cs", "both"):
        if args.r in CS_CONSTANT:
            reports.append(cs_bound_check(args.r, args.x, scan))
        elif args.check == "cs":
            raise UsageError("no zero-count upper bound tabulated for r=%d" % args.r)
    if args.check in ("ono", "both"):
        if args.r in ONO_LINEAR_RATIO:
            reports.append(ono_bound_check(args.r, args.x, scan))
        elif args.check == "ono":
            raise UsageError("no non-vanishing lower bound tabulated for r=%d" % args.r)
    if not reports:
        raise UsageError("no bounds tabulated for r=%d" % args.r)
    failures = []
    for report in reports:
        print(json.dumps(report.to_json_dict(), sort_keys=True))
        failures.extend(_bound_failures(report))
    rows = []
    if args.density_grid:
        grid = _parse_int_list(args.density_grid, "--density-grid")
        rows = lacunarity_density(args.r, grid, scan)
        for row in rows:
            print(json.dumps(row.to_json_dict(), sort_keys=True))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            header = {"kind": "bounds_header", "r": str(args.r), "x": str(args.x)}
            fh.write(json.dumps(header, sort_keys=True) + "\n")
            for report in reports:
                fh.write(json.dumps(report.to_json_dict(), sort_keys=True) + "\n")
            for row in rows:
                fh.write(json.dumps(row.to_json_dict(), sort_keys=True) + "\n")
        manifest.register(args.out)
        _finish_manifest(manifest, args, str(args.out))
    for message in failures:
        print("FAIL %s" % message)
    return EXIT_CHECK_FAILED if failures else EXIT_OK


# ----------------------------------------------------------------------------
# verify suites


def _suite_hecke(args: argparse.Namespace, runner: _SuiteRunner) -> None:
    r_values = (args.r,) if args.r else _ODD_R_DEFAULT
    primes = _parse_int_list(args.primes, "--primes") if args.primes else (5, 7)
    d_max = args.d_max or 250
    window = 97
    for r in r_values:
        series = dseries_from_eta(r, d_max * max(primes) ** 2)
        for p in primes:
            def eigen(r=r, p=p, series=series):
                report = eigen_check(r, p, d_max, dseries=series)
                return "eigenvalue %s over %d coefficients" % (
                    report.eigenvalue,
                    report.checked,
                )

            runner.check("eigenform r=%d T(%d^2)" % (r, p), eigen)
        if len(primes) >= 2:
            p, q = primes[0], primes[1]

            def commute(r=r, p=p, q=q):
                params = HeckeHalfParams(r)
                f = dseries_from_eta(r, window * p * p * q * q)
                pq = hecke_tp2(hecke_tp2(f, p, params), q, params)
                qp = hecke_tp2(hecke_tp2(f, q, params), p, params)
                _require(
                    pq.d_max == qp.d_max and pq.values == qp.values,
                    "operators do not commute",
                )
                return "window %d" % pq.d_max

            runner.check("commutation r=%d T(%d^2)T(%d^2)" % (r, p, q), commute)


def _suite_chains(args: argparse.Namespace, runner: _SuiteRunner) -> None:
    r = args.r or 15
    n_max = args.n_max or 100000
    scan = _scan_for(args, r, n_max)
    zeros = [n for n in scan.zeros if n <= n_max]
    unresolved = [n for n in scan.unresolved if n <= n_max]
    runner.check(
        "certification complete r=%d n<=%d" % (r, n_max),
        lambda: _require(not unresolved, "%d unresolved candidates" % len(unresolved))
        or "%d zeros all certified" % len(zeros),
    )
    report = classify_zeros(r, zeros, n_max=n_max)
    covered = sorted(m for s in report.sources for m in s.members)
    runner.check(
        "every zero lies on exactly one chain",
        lambda: _require(covered == sorted(zeros), "coverage mismatch")
        or "%d chains" % len(report.sources),
    )
    runner.check(
        "source discriminants admissible",
        lambda: _require(
            all(s.admissible for s in report.sources),
            "; ".join(report.anomalies) or "inadmissible source",
        )
        or "checked %d sources" % len(report.sources),
    )
    runner.check(
        "chains complete within range",
        lambda: _require(
            all(not s.missing_members for s in report.sources),
            "; ".join(report.anomalies) or "missing members",
        ),
    )


def _suite_maeda(args: argparse.Namespace, runner: _SuiteRunner) -> None:
    n_max = args.n_max or 300
    report_box = []

    def identity():
        report_box.append(delta_sq_equivalence(n_max))
        report = report_box[0]
        return "kappa = %d + %d*sqrt(144169), %d rows" % (
            report.kappa[0],
            report.kappa[1],
            len(report.rows),
        )

    runner.check("coefficient identity m=2..%d" % n_max, identity)
    if report_box:
        report = report_box[0]
        runner.check(
            "discriminant vanishes exactly when the coefficient does",
            lambda: _require(
                all(row.b_zero != row.a48_nonzero for row in report.rows)
                and all((row.disc == 0) == row.b_zero for row in report.rows),
                "equivalence broken",
            )
            or "%d degenerate indices" % sum(1 for row in report.rows if row.b_zero),
        )


def _suite_bounds(args: argparse.Namespace, runner: _SuiteRunner) -> None:
    r = args.r or 15
    if r not in CS_CONSTANT and r not in ONO_LINEAR_RATIO:
        raise UsageError("no bounds tabulated for r=%d" % r)
    default_x = CS_THRESHOLD.get(r) or ONO_REFINED[r][1]
    x = args.x or default_x
    scan = _scan_for(args, r, x)
    runner.check(
        "scan certification complete",
        lambda: _require(
            not scan.unresolved, "%d unresolved candidates" % len(scan.unresolved)
        )
        or "%d certified zeros" % len([n for n in scan.zeros if n <= x]),
    )
    if r in CS_CONSTANT:

        def upper():
            report = cs_bound_check(r, x, scan)
            _require(
                not report.threshold_met or report.satisfied,
                "zero count %d breaks the upper bound" % report.zero_count,
            )
            applies = "holds" if report.threshold_met else "below threshold"
            return "%s; ratio %s vs %s" % (applies, report.ratio, report.bound_value)

        runner.check("zero-count upper bound r=%d x=%d" % (r, x), upper)
    if r in ONO_LINEAR_RATIO:

        def lower():
            report = ono_bound_check(r, x, scan)
            _require(report.satisfied, "linear lower bound broken")
            _require(
                not report.refined_threshold_met or bool(report.refined_satisfied),
                "refined lower bound broken",
            )
            return "nonzero ratio %s >= %s" % (report.ratio, report.bound_value)

        runner.check("non-vanishing lower bound r=%d x=%d" % (r, x), lower)


def _suite_identities(args: argparse.Namespace, runner: _SuiteRunner) -> None:
    precision = args.n_max or 600
    euler = euler_series(precision)
    jacobi = jacobi_series(precision)
    runner.check(
        "pentagonal series equals first power",
        lambda: _require(euler == eta_power(1, precision), "series differ")
        or "precision %d" % precision,
    )
    runner.check(
        "triangular series equals third power",
        lambda: _require(jacobi == eta_power(3, precision), "series differ")
        or "precision %d" % precision,
    )
    runner.check(
        "cube of the pentagonal series is the triangular series",
        lambda: _require(
            multiply(multiply(euler, euler), euler) == jacobi, "series differ"
        ),
    )
    for r in (5, 24):
        def algorithms(r=r):
            sparse = eta_power(r, 400, EXACT, EtaAlgorithm.SPARSE_POWER)
            binary = eta_power(r, 400, EXACT, EtaAlgorithm.BINARY_POW)
            sigma = eta_power(r, 400, EXACT, EtaAlgorithm.SIGMA_RECURRENCE)
            _require(sparse == binary == sigma, "algorithms disagree")
            return "three algorithms agree to precision 400"

        runner.check("algorithm cross-check r=%d" % r, algorithms)
    for r, p in ((15, 97), (24, DEFAULT_BASKET[0])):
        def reduction(r=r, p=p):
            exact = eta_power(r, 300, EXACT)
            modular = eta_power(r, 300, ModPrime(p))
            _require(
                modular.to_list() == [c % p for c in exact.to_list()],
                "reduction does not commute",
            )
            return "mod %d" % p

        runner.check("reduction commutes r=%d" % r, reduction)


_SUITES = {
    "hecke": _suite_hecke,
    "chains": _suite_chains,
    "maeda": _suite_maeda,
    "bounds": _suite_bounds,
    "identities": _suite_identities,
}


def cmd_verify(args: argparse.Namespace) -> int:
    runner = _SuiteRunner()
    _SUITES[args.suite](args, runner)
    return runner.summary()


# ----------------------------------------------------------------------------
# parser


def build_parser() -> _Parser:
    parser = _Parser(
        prog="etazeros",
        description=(
            "Exact detection, certification, and classification of vanishing "
            "coefficients in integer powers of the generating series "
            "prod (1 - q^n)."
        ),
        epilog=(
            "environment: ETAZEROS_MEMORY_BUDGET caps scan working memory in "
            "bytes. exit codes: 0 clean, 1 failed invariant, 2 anomaly, "
            "3 I/O error, 4 bad arguments."
        ),
    )
    parser.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_scan = sub.add_parser("scan", help="find and certify zero coefficients")
    p_scan.add_argument("--r", type=int, required=True, help="power of the series")
    p_scan.add_argument("--n-max", type=int, required=True, help="last index scanned")
    p_scan.add_argument("--primes", help="comma-separated modulus basket override")
    p_scan.add_argument(
        "--algorithm",
        choices=[a.value for a in EtaAlgorithm],
        default=EtaAlgorithm.SPARSE_POWER.value,
        help="series expansion algorithm",
    )
    p_scan.add_argument("--checkpoint", help="append-only progress file for long runs")
    p_scan.add_argument(
        "--resume", action="store_true", help="continue from an existing checkpoint"
    )
    p_scan.add_argument("--threads", type=int, help="worker threads (default: cores)")
    p_scan.add_argument(
        "--memory-budget", type=int, help="stage-one memory budget in bytes"
    )
    p_scan.add_argument(
        "--no-extend",
        action="store_true",
        help="never pull certification moduli beyond --primes",
    )
    p_scan.add_argument(
        "--expect-none",
        action="store_true",
        help="exit with the anomaly code if any zero is certified",
    )
    p_scan.add_argument("--out", help="write zero records as JSONL")
    p_scan.add_argument("--manifest", help="manifest path (default: OUT.manifest.json)")
    p_scan.set_defaults(func=cmd_scan)

    p_chain = sub.add_parser("chain", help="print the quadratic chain of one index")
    p_chain.add_argument("--r", type=int, required=True)
    p_chain.add_argument("--n0", type=int, required=True, help="chain starting index")
    p_chain.add_argument("--n-max", type=int, required=True, help="chain cutoff")
    p_chain.set_defaults(func=cmd_chain)

    p_sources = sub.add_parser(
        "sources", help="classify scanned zeros into chains under their sources"
    )
    p_sources.add_argument("--r", type=int, required=True)
    p_sources.add_argument("--from-scan", required=True, help="scan JSONL input")
    p_sources.add_argument(
        "--census-grid", help="comma-separated thresholds for source counts"
    )
    p_sources.add_argument("--out", help="write source records as JSONL")
    p_sources.add_argument("--csv", help="write the census table as CSV")
    p_sources.add_argument("--manifest", help="manifest path")
    p_sources.set_defaults(func=cmd_sources)

    p_census = sub.add_parser("census", help="count zeros and sources per threshold")
    p_census.add_argument("--r", type=int, required=True)
    p_census.add_argument("--from-scan", required=True, help="scan JSONL input")
    p_census.add_argument("--grid", required=True, help="comma-separated thresholds")
    p_census.add_argument("--csv", help="write the census table as CSV")
    p_census.add_argument("--manifest", help="manifest path")
    p_census.set_defaults(func=cmd_census)

    p_hecke = sub.add_parser(
        "hecke-verify", help="verify eigenvalue relations for odd powers"
    )
    p_hecke.add_argument("--r", type=int, required=True, help="odd power")
    p_hecke.add_argument("--primes", default="5,7", help="operator primes (>= 5)")
    p_hecke.add_argument(
        "--d-max", type=int, default=500, help="discriminant range verified"
    )
    p_hecke.set_defaults(func=cmd_hecke_verify)

    p_maeda = sub.add_parser(
        "maeda", help="verify the weight-24 coefficient/discriminant equivalence"
    )
    p_maeda.add_argument("--n-max", type=int, default=200, help="last operator index")
    p_maeda.add_argument("--out", help="write per-index rows as JSONL")
    p_maeda.add_argument("--manifest", help="manifest path")
    p_maeda.set_defaults(func=cmd_maeda)

    p_bounds = sub.add_parser(
        "bounds", help="check zero-count and non-vanishing bounds against a scan"
    )
    p_bounds.add_argument("--r", type=int, required=True)
    p_bounds.add_argument("--x", type=int, required=True, help="count zeros up to x")
    p_bounds.add_argument("--from-scan", help="scan JSONL input (default: scan now)")
    p_bounds.add_argument(
        "--check", choices=["cs", "ono", "both"], default="both",
        help="which tabulated bounds to evaluate",
    )
    p_bounds.add_argument(
        "--density-grid", help="comma-separated indices for density rows"
    )
    p_bounds.add_argument("--threads", type=int, help="worker threads for fresh scans")
    p_bounds.add_argument("--out", help="write bound reports as JSONL")
    p_bounds.add_argument("--manifest", help="manifest path")
    p_bounds.set_defaults(func=cmd_bounds)

    p_verify = sub.add_parser("verify", help="run a named invariant suite")
    p_verify.add_argument(
        "--suite", choices=sorted(_SUITES), required=True, help="suite to run"
    )
    p_verify.add_argument("--r", type=int, help="restrict the suite to one power")
    p_verify.add_argument("--n-max", type=int, help="suite-specific range override")
    p_verify.add_argument("--d-max", type=int, help="discriminant range (hecke)")
    p_verify.add_argument("--x", type=int, help="count cutoff (bounds)")
    p_verify.add_argument("--primes", help="operator primes (hecke)")
    p_verify.add_argument("--from-scan", help="reuse a scan JSONL (chains, bounds)")
    p_verify.add_argument("--threads", type=int, help="worker threads for fresh scans")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BAD_ARGS
    except SystemExit as exc:  # --help / --version
        return EXIT_OK if exc.code in (0, None) else EXIT_BAD_ARGS
    try:
        return args.func(args)
    except UsageError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BAD_ARGS
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_BAD_ARGS
    except OSError as exc:
        print("i/o error: %s" % exc, file=sys.stderr)
        return EXIT_IO
    except ArithmeticError as exc:
        print("invariant failed: %s" % exc, file=sys.stderr)
        return EXIT_CHECK_FAILED


if __name__ == "__main__":
    sys.exit(main())
