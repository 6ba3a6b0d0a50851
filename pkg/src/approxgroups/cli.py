"""Command line entry point: ``asg validate|run|battery|oracle``."""
from __future__ import annotations

import argparse
import logging
import sys
import time

from .approx import family_validate
from .covering import set_default_budget
from .errors import ApproxGroupError, CapExceeded, LemmaViolation
from .groups import automorphisms
from .instance import InstanceInvalid, ParseError, canonical_json, load_instance, write_atomic
from .lemmas import check_instance_lemmas
from .oracle import ORACLE_FAMILY_CAP, ORACLE_ORDER_CAP, lemma_battery, oracle_core
from .pipeline import FAMILY_CAP, run_pipeline
from .report import build_report

log = logging.getLogger("approxgroups")

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_INVALID = 2
EXIT_LEMMA = 3
EXIT_CAP = 4
AUTOMORPHISM_ENUMERATION_LIMIT = 16

EPILOG = """\
exit codes:
  0  success
  1  instance file could not be parsed
  2  instance parsed but is not a valid group / family of approximate subgroups
  3  a lemma or theorem assertion failed (report and reproducer still written)
  4  a size cap or search budget was exceeded
"""


def _load(args):
    inst = load_instance(args.instance)
    if "budget" in inst.config and args.budget is None:
        set_default_budget(inst.config["budget"])
    group, carriers = inst.materialize()
    return inst, group, carriers


def _emit(args, text: str) -> None:
    if not args.quiet:
        print(text)


def cmd_validate(args) -> int:
    inst, group, carriers = _load(args)
    f = family_validate(carriers)
    _emit(args, f"K={f.k_uniform} N={f.n_uniform}")
    return EXIT_OK


def cmd_run(args) -> int:
    started = time.perf_counter()
    inst, group, carriers = _load(args)
    f = family_validate(carriers)
    autos = inst.automorphism_list(group)
    limit = inst.config.get("enumerate_automorphisms_up_to", AUTOMORPHISM_ENUMERATION_LIMIT)
    if autos is None and group.order <= limit:
        autos = automorphisms(group)
    max_union = args.max_union if args.max_union is not None else inst.config.get("max_union")
    cap = inst.config.get("family_cap", FAMILY_CAP)

    status, code, lemmas, oracle = "ok", EXIT_OK, None, None
    try:
        res = run_pipeline(f, max_union=max_union, cap=cap, automorphisms=autos)
    except LemmaViolation as err:
        log.error("%s", err)
        if args.out:
            write_atomic(args.out, canonical_json({"instance_digest": inst.digest(), "status": "lemma-violation", "error": str(err)}))
        return EXIT_LEMMA
    if args.check_lemmas:
        try:
            lemmas = check_instance_lemmas(res)
        except LemmaViolation as err:
            status, code = "lemma-violation", EXIT_LEMMA
            lemmas = {"violation": str(err)}
    if args.oracle:
        if len(f) > ORACLE_FAMILY_CAP or group.order > ORACLE_ORDER_CAP:
            oracle = {"skipped": f"oracle caps are |family| <= {ORACLE_FAMILY_CAP}, |G| <= {ORACLE_ORDER_CAP}"}
        else:
            try:
                oracle = oracle_core(f, res).to_dict()
            except LemmaViolation as err:
                status, code = "oracle-mismatch", EXIT_LEMMA
                oracle = err.details.get("report", {"error": str(err)})
    timing = time.perf_counter() - started if args.timing else None
    report = build_report(inst, res, lemmas, oracle, status, timing)
    text = canonical_json(report)
    if args.out:
        write_atomic(args.out, text)
    _emit(args, f"m={res.m} k0={res.k0} n0={res.n0} m'={res.m_prime} n2={res.n2} |H|={len(res.h)} |H'|={len(res.h_prime)} status={status}")
    return code


def cmd_battery(args) -> int:
    try:
        rep = lemma_battery(args.seed, args.trials, args.group_cap, inject_fault=args.inject_fault)
    except LemmaViolation as err:
        reproducer = err.details.get("reproducer")
        path = args.reproducer or (args.out + ".reproducer.json" if args.out else "battery-reproducer.json")
        write_atomic(path, canonical_json(reproducer))
        log.error("%s; reproducer written to %s", err, path)
        if args.out:
            write_atomic(args.out, canonical_json({"seed": args.seed, "trials": args.trials, "group_cap": args.group_cap, "violations": 1, "error": str(err), "reproducer": path}))
        return EXIT_LEMMA
    text = canonical_json(rep.to_dict())
    if args.out:
        write_atomic(args.out, text)
    _emit(args, f"trials={rep.trials} violations={rep.violations}")
    for label, count in rep.tallies.items():
        _emit(args, f"  {label}: {count} checks")
    return EXIT_OK


def cmd_oracle(args) -> int:
    inst, group, carriers = _load(args)
    f = family_validate(carriers)
    try:
        rep = oracle_core(f)
    except LemmaViolation as err:
        log.error("%s", err)
        if args.out:
            write_atomic(args.out, canonical_json(err.details.get("report", {"error": str(err)})))
        return EXIT_LEMMA
    if args.out:
        write_atomic(args.out, canonical_json(rep.to_dict()))
    _emit(args, " ".join(f"{k}={'ok' if v else 'MISMATCH'}" for k, v in rep.matches.items()))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asg",
        description="Invariant approximate subgroups for finite uniform families.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, help="search node budget (also ASG_BUDGET)")
    common.add_argument("--quiet", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common], help="check a family and print K, N")
    p.add_argument("instance")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", parents=[common], help="run the construction and write a report")
    p.add_argument("instance")
    p.add_argument("--out")
    p.add_argument("--check-lemmas", action="store_true")
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--max-union", type=int)
    p.add_argument("--timing", action="store_true", help="record wall time (makes reports non-reproducible)")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("battery", parents=[common], help="seeded random lemma battery")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--group-cap", type=int, default=ORACLE_ORDER_CAP)
    p.add_argument("--out")
    p.add_argument("--reproducer", help="where to write a failing instance")
    p.add_argument("--inject-fault", action="store_true", help="corrupt one certificate to exercise the failure path")
    p.set_defaults(func=cmd_battery)

    p = sub.add_parser("oracle", parents=[common], help="cross-check against brute force")
    p.add_argument("instance")
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(levelname)s %(message)s")
    if args.budget is not None:
        set_default_budget(args.budget)
    try:
        return args.func(args)
    except (ParseError, OSError) as err:
        log.error("parse error: %s", err)
        return EXIT_PARSE
    except CapExceeded as err:
        log.error("cap exceeded: %s", err)
        return EXIT_CAP
    except LemmaViolation as err:
        log.error("%s", err)
        return EXIT_LEMMA
    except (InstanceInvalid, ApproxGroupError, ValueError) as err:
        log.error("invalid instance: %s", err)
        return EXIT_INVALID
    finally:
        set_default_budget(None)


if __name__ == "__main__":
    sys.exit(main())
