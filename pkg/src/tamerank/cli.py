"""Batch front-end: validate job configurations, run the rank / oracle /
lambda / chars pipelines, and emit deterministic JSON reports.

Exit codes: 0 ok, 2 invalid configuration, 3 lambda unavailable for a
required character, 4 internal oracle inconsistency.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field as dataclass_field
from typing import List, Optional

from .arith import is_prime
from .characters import (
    FieldSpec,
    class_representatives,
    conjugacy_classes,
    enumerate_characters,
)
from .errors import (
    ConfigError,
    InvariantViolationError,
    LambdaUnavailableError,
    OracleInconsistencyError,
)
from .frobenius import inertia_trivial, m_index, sigma0_ok, stabilization_level
from .rank import LambdaProvider, rank_total
from .residue import chi_quotient_order, residue_module
from .stickelberger import lambda_minus

SCHEMA_VERSION = "1"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_LAMBDA = 3
EXIT_INCONSISTENT = 4

_LAMBDA_MODES = {
    "table": (False, False),
    "greenberg-even": (True, False),
    "stickelberger-odd": (False, True),
    "auto": (True, True),
}


@dataclass
class JobConfig:
    p: int
    f: int = 1
    subgroup: tuple = ()
    S: tuple = ()
    lambda_mode: str = "table"
    lambda_table: dict = dataclass_field(default_factory=dict)
    oracle_levels: Optional[tuple] = None
    precision: Optional[int] = None

    @property
    def field(self) -> FieldSpec:
        return FieldSpec(self.p, self.f, self.subgroup)


def parse_config(text: str) -> JobConfig:
    """Validate a JSON job document, collecting every violated constraint."""
    violations: List[str] = []
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError([f"malformed JSON: {exc}"]) from exc
    if not isinstance(raw, dict):
        raise ConfigError(["top-level document must be an object"])

    p = raw.get("p")
    p_given = p if isinstance(p, int) else None
    if not isinstance(p, int) or p == 2 or not is_prime(p):
        violations.append("p must be an odd prime")
        p = 3  # placeholder so later checks can continue
    f = raw.get("f", 1)
    if not isinstance(f, int) or f < 1:
        violations.append("f must be a positive integer")
        f = 1
    if math.gcd(f, p) != 1:
        violations.append("f must be prime to p")
        f = 1
    subgroup = raw.get("H", [])
    if not isinstance(subgroup, list) or not all(isinstance(h, int) for h in subgroup):
        violations.append("H must be a list of integers")
        subgroup = []
    else:
        for h in subgroup:
            if math.gcd(h, f) != 1:
                violations.append(f"H generator {h} is not a unit mod f")
    S = raw.get("S", [])
    if not isinstance(S, list) or not all(isinstance(q, int) for q in S):
        violations.append("S must be a list of integers")
        S = []
    else:
        if len(set(S)) != len(S):
            violations.append("S entries must be distinct")
        for q in S:
            if not is_prime(q):
                violations.append(f"S entry {q} is not prime")
        if (p_given if p_given is not None else p) in S:
            violations.append("S must not contain p")
    lam = raw.get("lambda", {"mode": "table", "table": {}})
    mode = "table"
    table: dict = {}
    if not isinstance(lam, dict):
        violations.append("lambda must be an object")
    else:
        mode = lam.get("mode", "table")
        if mode not in _LAMBDA_MODES:
            violations.append(
                f"lambda mode must be one of {sorted(_LAMBDA_MODES)}"
            )
            mode = "table"
        table = lam.get("table", {})
        if not isinstance(table, dict) or not all(
            isinstance(v, int) and v >= 0 for v in table.values()
        ):
            violations.append("lambda table must map labels to nonnegative integers")
            table = {}
    levels = raw.get("oracle_levels")
    if levels is not None:
        if (
            not isinstance(levels, list)
            or len(levels) != 2
            or not all(isinstance(x, int) and x >= 0 for x in levels)
            or not levels[1] > levels[0]
        ):
            violations.append("oracle_levels must be a pair [n0, n1] with n1 > n0 >= 0")
            levels = None
    precision = raw.get("precision")
    if precision is not None and (not isinstance(precision, int) or precision < 1):
        violations.append("precision must be a positive integer")
        precision = None

    if violations:
        raise ConfigError(violations)
    return JobConfig(
        p=p,
        f=f,
        subgroup=tuple(subgroup),
        S=tuple(S),
        lambda_mode=mode,
        lambda_table=dict(table),
        oracle_levels=tuple(levels) if levels else None,
        precision=precision,
    )


def _provider(job: JobConfig, assume_greenberg: bool = False, extra_table: Optional[dict] = None) -> LambdaProvider:
    greenberg, stickelberger = _LAMBDA_MODES[job.lambda_mode]
    table = dict(job.lambda_table)
    if extra_table:
        table.update(extra_table)
    return LambdaProvider(
        table=table,
        allow_greenberg=greenberg or assume_greenberg,
        allow_stickelberger=stickelberger,
        stickelberger_precision=job.precision or 8,
    )


def _field_dict(job: JobConfig) -> dict:
    return {"p": job.p, "f": job.f, "H": list(job.subgroup)}


def validate_rank_report(report: dict) -> None:
    """Recompute the rank identity of every record from its own fields."""
    p = report["field"]["p"]
    total = 0
    for rec in report["records"]:
        lam = rec["lambda"]["value"]
        if rec["S_chi"]:
            tame = sum(rec["d_chi"] * p ** rec["m_map"][str(q)] for q in rec["S_chi"])
            expected = lam + tame - rec["P_chi"]
        else:
            expected = lam
        if expected != rec["rank"]:
            raise InvariantViolationError(
                f"rank identity fails for {rec['character']}"
            )
        total += rec["rank"]
    if total != report["total"]:
        raise InvariantViolationError("report total differs from the record sum")


def run_rank(job: JobConfig, assume_greenberg: bool = False, extra_table: Optional[dict] = None) -> dict:
    provider = _provider(job, assume_greenberg, extra_table)
    result = rank_total(job.field, list(job.S), provider)
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": "rank",
        "field": _field_dict(job),
        "S": list(result.S),
        "records": [r.to_dict() for r in result.records],
        "total": result.total,
        "conjectural": result.conjectural,
    }
    validate_rank_report(report)
    return report


def run_oracle(job: JobConfig, levels: Optional[tuple] = None) -> dict:
    field = job.field
    chars = enumerate_characters(field)
    reps = class_representatives(chars, field.p)
    rows = []
    all_pass = True
    for q in sorted(job.S):
        if levels is not None:
            n0, n1 = levels
        elif job.oracle_levels is not None:
            n0, n1 = job.oracle_levels
        else:
            n0 = stabilization_level(field, q)
            n1 = n0 + 1
        lo, hi = residue_module(field, q, n0), residue_module(field, q, n1)
        de = hi.e_exp - lo.e_exp
        if de <= 0:
            raise OracleInconsistencyError("residue exponent did not grow")
        for chi in reps:
            admissible = inertia_trivial(chi, q) and sigma0_ok(chi, q)
            expected = chi.d_chi * field.p ** m_index(q, field.p) if admissible else 0
            x0 = chi_quotient_order(lo, chi)
            x1 = chi_quotient_order(hi, chi)
            if (x1 - x0) % de or x1 < x0:
                raise OracleInconsistencyError(
                    f"non-integral growth for chi={chi.label()}, q={q}"
                )
            estimated = (x1 - x0) // de
            ok = estimated == expected
            all_pass = all_pass and ok
            rows.append(
                {
                    "q": q,
                    "levels": [n0, n1],
                    "character": chi.label(),
                    "admissible": admissible,
                    "exponents": [x0, x1],
                    "expected": expected,
                    "estimated": estimated,
                    "pass": ok,
                }
            )
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "oracle",
        "field": _field_dict(job),
        "rows": rows,
        "all_pass": all_pass,
    }


def run_lambda(job: JobConfig) -> dict:
    field = job.field
    chars = enumerate_characters(field)
    reps = class_representatives(chars, field.p)
    rows = []
    from .characters import omega

    om = omega(field.p)
    for chi in reps:
        if not chi.is_odd or chi == om:
            continue
        res = lambda_minus(chi, precision=job.precision or 8)
        rows.append(
            {
                "character": chi.label(),
                "lambda": res.lambda_,
                "mu_zero": res.mu_zero,
                "levels_used": list(res.levels_used),
            }
        )
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "lambda",
        "field": _field_dict(job),
        "rows": rows,
    }


def run_chars(job: JobConfig) -> dict:
    field = job.field
    chars = enumerate_characters(field)
    classes = conjugacy_classes(chars, field.p)
    return {
        "schema_version": SCHEMA_VERSION,
        "command": "chars",
        "field": _field_dict(job),
        "characters": [
            dict(chi.to_dict(), label=chi.label()) for chi in chars
        ],
        "classes": [[chi.label() for chi in cl] for cl in classes],
    }


def run(job: JobConfig, command: str, **kwargs) -> dict:
    """Dispatch a validated job; raises the typed errors mapped to exit codes
    by main()."""
    if command == "rank":
        return run_rank(job, **kwargs)
    if command == "oracle":
        return run_oracle(job, **kwargs)
    if command == "lambda":
        return run_lambda(job)
    if command == "chars":
        return run_chars(job)
    raise ValueError(f"unknown command {command}")


def _emit(report: dict, out: Optional[str]) -> None:
    text = json.dumps(report, indent=2)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def main(argv: Optional[list] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="tamerank",
        description="Ranks of chi-quotients of tamely ramified Iwasawa modules",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_rank = sub.add_parser("rank", help="rank records and total for a job")
    p_rank.add_argument("--config", required=True)
    p_rank.add_argument("--assume-greenberg", action="store_true")
    p_rank.add_argument("--lambda-table", default=None)
    p_rank.add_argument("--out", default=None)

    p_oracle = sub.add_parser("oracle", help="brute-force verification grid")
    p_oracle.add_argument("--config", required=True)
    p_oracle.add_argument("--levels", default=None, help="n0,n1")
    p_oracle.add_argument("--out", default=None)

    p_lambda = sub.add_parser("lambda", help="Stickelberger lambda table")
    p_lambda.add_argument("--config", required=True)
    p_lambda.add_argument("--out", default=None)

    p_chars = sub.add_parser("chars", help="character inventory")
    p_chars.add_argument("--config", required=True)
    p_chars.add_argument("--out", default=None)

    args = parser.parse_args(argv)

    try:
        with open(args.config) as fh:
            job = parse_config(fh.read())
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConfigError as exc:
        for v in exc.violations:
            print(f"config error: {v}", file=sys.stderr)
        return EXIT_CONFIG

    kwargs = {}
    if args.command == "rank":
        kwargs["assume_greenberg"] = args.assume_greenberg
        if args.lambda_table:
            try:
                with open(args.lambda_table) as fh:
                    kwargs["extra_table"] = json.load(fh)
            except (OSError, json.JSONDecodeError) as exc:
                print(f"cannot read lambda table: {exc}", file=sys.stderr)
                return EXIT_CONFIG
    if args.command == "oracle" and args.levels:
        try:
            n0, n1 = (int(x) for x in args.levels.split(","))
        except ValueError:
            print("levels must be 'n0,n1'", file=sys.stderr)
            return EXIT_CONFIG
        kwargs["levels"] = (n0, n1)

    try:
        report = run(job, args.command, **kwargs)
    except LambdaUnavailableError as exc:
        print(f"lambda unavailable: {exc}", file=sys.stderr)
        return EXIT_LAMBDA
    except OracleInconsistencyError as exc:
        print(f"oracle inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT

    _emit(report, args.out)
    if args.command == "oracle" and not report["all_pass"]:
        return EXIT_INCONSISTENT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
