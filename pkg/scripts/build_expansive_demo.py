#!/usr/bin/env python3
"""Walk the two bundled systems through telescoping and replacement.

Prints, for each system: the chosen levels, the telescoped stages, the
replaced stages with their cuts and top runs, and the first few blocks
of the rebuilt system next to the originals.
"""

import argparse

from rankone import ParamSchedule, Stage, build_block, build_expansive, heights

SYSTEMS = {
    "dyadic-odometer": ParamSchedule((Stage(2, (0, 0)),), tail_period=1),
    "chacon": ParamSchedule((Stage(3, (0, 1, 0)),), tail_period=1),
}


def show(name: str, schedule: ParamSchedule, stages: int) -> None:
    model = build_expansive(schedule, stages)
    tele = model.telescoped
    print(f"== {name} ==")
    print(f"levels m = {list(tele.levels)}, heights H = {list(tele.heights)}")
    for n, r in enumerate(model.replaced):
        print(
            f"stage {n}: (Q={r.original.q}, A={list(r.original.a)})"
            f" -> cut {r.cut}, top run {r.top_run}"
            f" -> (Q'={r.stage.q}, A'={list(r.stage.a)})"
        )
    if model.warnings:
        print(f"single-copy stages (still valid, q > 1 resumes later): "
              f"{list(model.warnings)}")
    rep = model.replaced_schedule()
    for n in range(1, min(stages, 3) + 1):
        w = build_block(rep, n)
        shown = w if len(w) <= 72 else w[:69] + "..."
        print(f"B'_{n} (len {len(w)}): {shown}")
    base_h = heights(schedule, tele.levels[-1])
    assert [base_h[m] for m in tele.levels] == list(tele.heights)
    print()


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--stages", type=int, default=4)
    args = parser.parse_args()
    for name, schedule in SYSTEMS.items():
        show(name, schedule, args.stages)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
