#!/usr/bin/env python3
"""Exhaustively verify the replacement isomorphism on the bundled systems.

Checks every path of the requested depth (default 3) on the dyadic
odometer and the chacon system, then sanity-checks that a deliberately
corrupted cut vector is caught.  Exits 1 if any genuine check fails.
"""

import argparse
import dataclasses
from fractions import Fraction

from rankone import (
    IsoContext,
    ParamSchedule,
    Stage,
    build_expansive,
    verify_isomorphism,
)

SYSTEMS = {
    "dyadic-odometer": ParamSchedule((Stage(2, (0, 0)),), tail_period=1),
    "chacon": ParamSchedule((Stage(3, (0, 1, 0)),), tail_period=1),
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--depth", type=int, default=3)
    args = parser.parse_args()
    ok = True
    last_ctx = None
    for name, schedule in SYSTEMS.items():
        ctx = IsoContext.from_model(build_expansive(schedule, args.depth))
        last_ctx = ctx
        report = verify_isomorphism(ctx, args.depth)
        mass = sum(report.exceptional_mass_terms, Fraction(0))
        status = "ok" if report.passed else f"FAILED {report.failure_counts()}"
        print(
            f"{name}: depth {args.depth}, {report.paths_tested} paths, "
            f"excluded {dict(report.exclusions)}, exceptional mass <= {mass}: "
            f"{status}"
        )
        ok = ok and report.passed

    bad = dataclasses.replace(last_ctx, cut=(0,) + last_ctx.cut[1:])
    broken = verify_isomorphism(bad, args.depth)
    caught = not broken.passed
    print(f"corrupted cut vector caught: {caught} "
          f"({len(broken.failures)} failures)")
    ok = ok and caught
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
