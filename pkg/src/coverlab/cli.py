"""Command-line front end: asset loading, verification runs, JSON reports.

Exit codes: 0 = all checks passed, 1 = a verification failed, 2 = input
error (unreadable/malformed file or bad arguments).  All reports carry a
schema version and decimal-string bigints so they survive any JSON reader.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import assets
from .arith import FactorBudget, factor
from .certify import CertificationError, certify_all_cases, check_exclusion, load_case
from .construct import (ERDOS_EXPONENT_COVER, build_erdos_class,
                        build_two_prime_class, check_divisibility_mechanics)
from .covers import CoverFormatError, load_cover, verify_cover
from .lucas import (LucasSpec, check_rank_periodicity, rank_of_apparition,
                    u_term)
from .mersenne import find_primitive_divisors, verify_prime_table

REPORT_SCHEMA = "coverlab.report/1"


@dataclass
class RunReport:
    command: str
    inputs: dict
    outcome: str = "pass"                 # pass | fail | partial
    detail: list[dict] = field(default_factory=list)
    wall_time_s: float = 0.0
    asset_checksums: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "schema": REPORT_SCHEMA,
            "command": self.command,
            "inputs": self.inputs,
            "outcome": self.outcome,
            "detail": self.detail,
            "wall_time_s": round(self.wall_time_s, 3),
            "asset_checksums": self.asset_checksums,
        }

    @property
    def exit_code(self) -> int:
        return 0 if self.outcome == "pass" else 1


def _note(report: RunReport, **kw) -> None:
    report.detail.append({k: str(v) if isinstance(v, int) else v
                          for k, v in kw.items()})


def _cmd_verify_cover(args) -> RunReport:
    report = RunReport("verify-cover", {"path": str(args.path)})
    report.asset_checksums = {str(args.path): assets.checksum(args.path)}
    system = load_cover(args.path)
    result = verify_cover(system, enumeration_budget=args.budget)
    _note(report, label=system.label, classes=len(system.classes),
          lcm=result.lcm, is_cover=str(result.is_cover).lower(),
          min_multiplicity=result.min_multiplicity,
          max_multiplicity=result.max_multiplicity)
    if not result.is_cover:
        _note(report, uncovered_witness=result.uncovered_witness)
        report.outcome = "fail"
    return report


def _cmd_primitive(args) -> RunReport:
    budget = FactorBudget(trial_bound=args.factor_budget,
                          rho_iterations=10 * args.factor_budget)
    if args.lucas_c is not None:
        report = RunReport("primitive", {"lucas_c": str(args.lucas_c),
                                         "n": str(args.n)})
        spec = LucasSpec(args.lucas_c)
        value = u_term(spec, args.n)
        fz = factor(value, budget)
        for p in fz.primes():
            rank = rank_of_apparition(spec, p, search_bound=args.n)
            if rank == args.n:
                _note(report, p=p, rank=rank)
        if not fz.complete:
            _note(report, unresolved_cofactor=fz.cofactor)
            report.outcome = "partial"
        return report
    report = RunReport("primitive", {"base": "2", "n": str(args.n)})
    witnesses, complete = find_primitive_divisors(args.n, budget=budget)
    for w in witnesses:
        _note(report, p=w.p, alpha=w.alpha)
    if not complete:
        _note(report, note="factorization incomplete within budget")
        report.outcome = "partial"
    return report


def _checksums(names, override) -> dict:
    return {name: assets.checksum(assets.asset_path(name, override))
            for name in names}


def _reproduce_thm11(args, report: RunReport) -> None:
    report.asset_checksums = _checksums(
        [assets.COVER_ODD173, assets.PRIME_TABLE], args.assets)
    cover = assets.odd_cover_173(args.assets)
    cover_result = verify_cover(cover, enumeration_budget=args.budget)
    _note(report, check="cover", classes=len(cover.classes),
          lcm=cover_result.lcm, is_cover=str(cover_result.is_cover).lower())
    if not (cover_result.is_cover and cover_result.lcm == 675675
            and len(cover.classes) == 173):
        report.outcome = "fail"
        return
    table = assets.prime_table(args.assets)
    audit = verify_prime_table(cover, table)
    _note(report, check="prime-table", entries=len(table.all_primes()),
          failing_rows=len(audit.failing_rows),
          duplicates=len(audit.duplicates),
          count_mismatches=len(audit.count_mismatches),
          omitted_consistent=str(audit.omitted_consistent).lower())
    for erratum in audit.errata:
        _note(report, erratum_n=erratum.n, bad_value=erratum.bad_value,
              reason=erratum.reason,
              replacement=erratum.replacement,
              replacement_verified=str(erratum.verified).lower())
    if args.out_errata and audit.errata:
        payload = [{"n": str(e.n), "bad_value": str(e.bad_value),
                    "reason": e.reason,
                    "replacement": None if e.replacement is None else str(e.replacement),
                    "verified": e.verified} for e in audit.errata]
        with open(args.out_errata, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
    if not audit.passed:
        report.outcome = "fail"


def _reproduce_thm13(args, report: RunReport) -> None:
    report.asset_checksums = _checksums([assets.TWO_PRIME_CLASS], args.assets)
    data = assets.two_prime_data(args.assets)
    combined, build_report = build_two_prime_class(data)
    for row in build_report.failures():
        _note(report, check=row.name, ok="false", detail=row.detail)
    _note(report, checks=len(build_report.checks),
          failures=len(build_report.failures()))
    _note(report, a=combined.a, M=combined.n)
    if not build_report.passed:
        report.outcome = "fail"


def _reproduce_cases(args, report: RunReport) -> None:
    report.asset_checksums = _checksums([assets.TWO_PRIME_CLASS], args.assets)
    data = assets.two_prime_data(args.assets)
    try:
        certificates = certify_all_cases(data)
    except CertificationError as exc:
        certificates = exc.reports
        report.outcome = "fail"
    valid = sum(1 for c in certificates if c.valid)
    for c in certificates:
        _note(report, case=c.label, valid=str(c.valid).lower(),
              combinations=c.combinations)
    _note(report, valid_cases=f"{valid}/{len(certificates)}")


def _reproduce_erdos(args, report: RunReport) -> None:
    cls = build_erdos_class()
    _note(report, a=cls.a, M=cls.n)
    ok = cls.a % 2 == 1 and cls.a % 31 == 3
    cover = [(a, n) for a, n, _ in ERDOS_EXPONENT_COVER]
    primes = [p for _, _, p in ERDOS_EXPONENT_COVER]
    mech = check_divisibility_mechanics(cls, cover, primes, m=1,
                                        n_range=range(0, 2001))
    _note(report, mechanics_checked=mech.checked,
          mechanics_failures=len(mech.failures),
          odd=str(cls.a % 2 == 1).lower(), mod31=cls.a % 31)
    if not (ok and mech.all_ok):
        report.outcome = "fail"


def _reproduce_lemma41(args, report: RunReport) -> None:
    failures = 0
    for c in range(1, 7):
        spec = LucasSpec(c)
        for n in (2, 6, 10, 14):
            value = u_term(spec, n)
            primitive = []
            if value > 1:
                for p in factor(value).primes():
                    if p < 10**6 and rank_of_apparition(spec, p, search_bound=n) == n:
                        primitive.append(p)
            bad = [p for p in primitive
                   if not check_rank_periodicity(spec, n, p, k_max=5)]
            failures += len(bad)
            _note(report, c=c, n=n, primitive_primes=len(primitive),
                  failures=len(bad))
    if failures:
        report.outcome = "fail"


def _cmd_reproduce(args) -> RunReport:
    report = RunReport("reproduce", {"target": args.target})
    handler = {
        "thm11": _reproduce_thm11,
        "thm13": _reproduce_thm13,
        "cases": _reproduce_cases,
        "erdos": _reproduce_erdos,
        "lemma41": _reproduce_lemma41,
    }[args.target]
    handler(args, report)
    return report


def _cmd_certify(args) -> RunReport:
    report = RunReport("certify", {"case_file": str(args.case_file)})
    report.asset_checksums = {str(args.case_file): assets.checksum(args.case_file)}
    case = load_case(args.case_file)
    certificate = check_exclusion(case, combination_budget=args.budget)
    report.detail.append(certificate.to_dict())
    if not certificate.valid:
        report.outcome = "fail"
    return report


def _emit(report: RunReport, args) -> None:
    payload = report.to_dict()
    if getattr(args, "json", False):
        print(json.dumps(payload, indent=2))
    else:
        print(f"{report.command}: {report.outcome}")
        for row in report.detail:
            print("  " + "  ".join(f"{k}={v}" for k, v in row.items()))
        print(f"  ({report.wall_time_s:.2f}s)")
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coverlab",
        description="Covering systems with odd moduli and their prime-divisor "
                    "certificates: verification and reproduction runs.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_cover = sub.add_parser("verify-cover", help="sieve a cover file over one period")
    p_cover.add_argument("path")
    p_cover.add_argument("--budget", type=int, default=10**8,
                         help="largest lcm the sieve will enumerate")
    p_cover.add_argument("--json", action="store_true")
    p_cover.add_argument("--out", help="also write the JSON report here")

    p_prim = sub.add_parser("primitive",
                            help="primitive prime divisors of 2^n-1 or of a "
                                 "Lucas sequence term")
    p_prim.add_argument("--base", type=int, choices=[2], default=None,
                        help="search divisors of base^n - 1 (base 2 only)")
    p_prim.add_argument("--lucas-c", type=int, default=None,
                        help="search primitive divisors of U_n for this c")
    p_prim.add_argument("--n", type=int, required=True)
    p_prim.add_argument("--factor-budget", type=int, default=10**6,
                        help="trial-division bound for the factoring step; "
                             "the rho iteration cap scales with it")
    p_prim.add_argument("--json", action="store_true")
    p_prim.add_argument("--out")

    p_rep = sub.add_parser("reproduce", help="run a full verification target")
    p_rep.add_argument("target",
                       choices=["thm11", "thm13", "cases", "erdos", "lemma41"])
    p_rep.add_argument("--assets", default=None,
                       help="asset directory (default: packaged assets; "
                            "COVERLAB_ASSETS overrides)")
    p_rep.add_argument("--budget", type=int, default=10**8)
    p_rep.add_argument("--factor-budget", type=int, default=10**6)
    p_rep.add_argument("--out-errata", default=None,
                       help="write discovered prime-table errata to this file")
    p_rep.add_argument("--json", action="store_true")
    p_rep.add_argument("--out")

    p_cert = sub.add_parser("certify", help="check one exclusion-case file")
    p_cert.add_argument("case_file")
    p_cert.add_argument("--budget", type=int, default=10**9,
                        help="largest (n, sign, b) combination count")
    p_cert.add_argument("--json", action="store_true")
    p_cert.add_argument("--out")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "primitive":
        if (args.base is None) == (args.lucas_c is None):
            parser.error("pass exactly one of --base 2 or --lucas-c C")
        if args.n < 2:
            parser.error("--n must be at least 2")
    handlers = {
        "verify-cover": _cmd_verify_cover,
        "primitive": _cmd_primitive,
        "reproduce": _cmd_reproduce,
        "certify": _cmd_certify,
    }
    started = time.perf_counter()
    try:
        report = handlers[args.command](args)
    except (CoverFormatError, FileNotFoundError, IsADirectoryError,
            json.JSONDecodeError, KeyError) as exc:
        print(f"coverlab: input error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"coverlab: {exc}", file=sys.stderr)
        return 2
    report.wall_time_s = time.perf_counter() - started
    _emit(report, args)
    return report.exit_code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
