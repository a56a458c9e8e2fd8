"""Level telescoping and the expansive spacer replacement.

Collapsing levels m_n <= k < m_{n+1} of a schedule into one stage gives
Q_n = prod q_k cuts with heights H_n = h_{m_n} preserved.  The spacer
run above collapsed copy i is read off the mixed-radix digits of i:
writing i = g_0 + g_1 q_{m_n} + g_2 q_{m_n} q_{m_n+1} + ..., the copy is
followed by the runs of every level whose lower digits are all maximal,

    A[n][i] = a[m_n][g_0] + ... + a[m_n + l][g_l],

where l is the first digit index with g_l < q_{m_n+l} - 1 (or the last
digit when all are maximal).

The replacement then rebuilds each stage so that its final spacer run
strictly dominates all others: keep copies 0..cut, where cut is the
largest index whose tail of the stage,

    (Q_n - cut - 1) H_n + A[n][cut] + ... + A[n][Q_n - 1],

still exceeds max_i A[n][i], and overwrite everything above copy `cut`
with that many spacers.  Heights are unchanged and the total spacer
mass at most doubles plus H_n, so summability survives.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

from .schedules import (
    DepthError,
    ParamSchedule,
    Stage,
    choose_telescoping_levels,
    heights,
)


class SpacerReplacementError(Exception):
    """The replacement has no valid cut at some stage."""


def digit_decomposition(i: int, radices: Sequence[int]) -> list[int]:
    """Mixed-radix digits of i, least significant first."""
    total = prod(radices)
    if not 0 <= i < total:
        raise ValueError(f"value {i} outside 0..{total - 1}")
    digits = []
    for q in radices:
        digits.append(i % q)
        i //= q
    return digits


@dataclass(frozen=True)
class TelescopedSchedule:
    """A schedule regrouped along levels m_0 < m_1 < ... < m_N."""

    base: ParamSchedule
    levels: tuple[int, ...]
    stages: tuple[Stage, ...]     # one (Q, A) stage per collapsed window
    heights: tuple[int, ...]      # H_n = base height at m_n

    @property
    def num_stages(self) -> int:
        return len(self.stages)

    def as_schedule(self) -> ParamSchedule:
        return ParamSchedule(self.stages, tail_period=None)

    def to_json_dict(self) -> dict:
        return {
            "base": self.base.to_json_dict(),
            "m": list(self.levels),
            "H": list(self.heights),
            "stages": [{"Q": s.q, "A": list(s.a)} for s in self.stages],
        }


def telescope(schedule: ParamSchedule, levels: Sequence[int]) -> TelescopedSchedule:
    """Collapse the windows [m_n, m_{n+1}) into single stages."""
    levels = tuple(levels)
    if not levels or levels[0] != 0:
        raise ValueError("levels must start at 0")
    if any(b <= a for a, b in zip(levels, levels[1:])):
        raise ValueError("levels must be strictly increasing")
    hs = heights(schedule, levels[-1])
    stages = []
    for n in range(len(levels) - 1):
        lo, hi = levels[n], levels[n + 1]
        radices = [schedule.stage(k).q for k in range(lo, hi)]
        big_q = prod(radices)
        runs = []
        for i in range(big_q):
            g = digit_decomposition(i, radices)
            width = hi - lo
            l = next((t for t in range(width) if g[t] != radices[t] - 1), width - 1)
            runs.append(sum(schedule.stage(lo + t).a[g[t]] for t in range(l + 1)))
        st = Stage(big_q, tuple(runs))
        assert big_q * hs[lo] + sum(runs) == hs[hi], "telescoped heights must agree"
        stages.append(st)
    return TelescopedSchedule(
        base=schedule,
        levels=levels,
        stages=tuple(stages),
        heights=tuple(hs[m] for m in levels),
    )


@dataclass(frozen=True)
class ReplacedStage:
    """One stage before and after the spacer replacement."""

    original: Stage     # (Q, A)
    spacer_max: int     # largest original run
    cut: int            # last kept copy
    top_run: int        # spacers installed above the kept copies
    stage: Stage        # (Q', A') actually used


@dataclass(frozen=True)
class ExpansiveModel:
    telescoped: TelescopedSchedule
    replaced: tuple[ReplacedStage, ...]

    @property
    def warnings(self) -> tuple[int, ...]:
        """Stages left with a single copy (q > 1 must still recur overall)."""
        return tuple(n for n, r in enumerate(self.replaced) if r.stage.q == 1)

    def replaced_schedule(self) -> ParamSchedule:
        return ParamSchedule(tuple(r.stage for r in self.replaced), tail_period=None)

    def to_json_dict(self) -> dict:
        return {
            "base": self.telescoped.base.to_json_dict(),
            "m": list(self.telescoped.levels),
            "H": list(self.telescoped.heights),
            "stages": [
                {
                    "Q": r.original.q,
                    "A": list(r.original.a),
                    "A_max": r.spacer_max,
                    "cut": r.cut,
                    "top_run": r.top_run,
                    "Q_new": r.stage.q,
                    "A_new": list(r.stage.a),
                }
                for r in self.replaced
            ],
            "warnings": list(self.warnings),
            "replaced_schedule": self.replaced_schedule().to_json_dict(),
        }


def expansive_replace(
    telescoped: TelescopedSchedule, depth: int | None = None
) -> ExpansiveModel:
    """Rebuild every stage with a dominating final spacer run.

    At stage n the cut is the largest copy index whose tail mass
    (Q-cut-1) H + sum(A[cut:]) strictly exceeds max(A); it exists for
    Q >= 2 because the full sum at index 0 is at least H + max(A).
    """
    count = telescoped.num_stages if depth is None else depth
    if count > telescoped.num_stages:
        raise DepthError(
            f"only {telescoped.num_stages} telescoped stages available, need {count}"
        )
    replaced = []
    for n in range(count):
        st = telescoped.stages[n]
        high = telescoped.heights[n]
        if st.q < 2:
            raise SpacerReplacementError(
                f"stage {n}: a single-copy stage (Q={st.q}) has no valid cut"
            )
        spacer_max = max(st.a)
        cut = None
        for i in range(st.q - 1, -1, -1):
            if (st.q - i - 1) * high + sum(st.a[i:]) > spacer_max:
                cut = i
                break
        assert cut is not None, "cut exists whenever Q >= 2"
        top_run = (st.q - cut - 1) * high + sum(st.a[cut:])
        assert top_run > spacer_max
        assert (st.q - cut - 2) * high + sum(st.a[cut + 1:]) <= spacer_max
        new = Stage(cut + 1, st.a[:cut] + (top_run,))
        assert new.q * high + new.spacer_sum == st.q * high + st.spacer_sum
        assert new.spacer_sum <= 2 * st.spacer_sum + high
        replaced.append(ReplacedStage(st, spacer_max, cut, top_run, new))
    return ExpansiveModel(telescoped, tuple(replaced))


def one_tower_variant(
    telescoped: TelescopedSchedule, picks: Sequence[int]
) -> ParamSchedule:
    """Blank a single copy per stage instead of everything above the cut.

    Contract at the block level: the new stage-(n+1) block equals the
    telescoped one with copy picks[n] of the level-n block overwritten
    by H_n spacer symbols.  In run arithmetic the blanked copy merges
    its neighbouring runs: A[p-1] + H_n + A[p] at slot p-1, with later
    runs shifting down.  picks[n] = 0 would put the merged run before
    the first copy, which no stage of this form can express, so it is
    rejected.
    """
    if len(picks) != telescoped.num_stages:
        raise ValueError(
            f"need {telescoped.num_stages} picks, got {len(picks)}"
        )
    stages = []
    for n, st in enumerate(telescoped.stages):
        p = picks[n]
        high = telescoped.heights[n]
        if st.q < 2:
            raise SpacerReplacementError(
                f"stage {n}: a single-copy stage (Q={st.q}) cannot lose a copy"
            )
        if p == 0:
            raise ValueError(
                f"stage {n}: pick 0 would leave a spacer run before the first copy"
            )
        if not 1 <= p <= st.q - 1:
            raise ValueError(f"stage {n}: pick {p} outside 1..{st.q - 1}")
        a = list(st.a)
        merged = a[p - 1] + high + a[p]
        new = Stage(st.q - 1, tuple(a[: p - 1] + [merged] + a[p + 1:]))
        assert new.q * high + new.spacer_sum == st.q * high + st.spacer_sum
        stages.append(new)
    return ParamSchedule(tuple(stages), tail_period=None)


def build_expansive(
    schedule: ParamSchedule,
    stages: int,
    growth_base: int = 2,
    max_retries: int = 6,
) -> ExpansiveModel:
    """Choose levels greedily, telescope, and replace, end to end.

    A stage may legitimately collapse to a single copy (Q' = 1); that is
    reported via ExpansiveModel.warnings.  Retries with a doubled growth
    base only when the replacement is impossible (some window multiplies
    no cuts at all) or degenerate (every stage collapses to one copy),
    since a wider window restores Q >= 2.
    """
    factor = growth_base
    last_error: Exception | None = None
    for _ in range(max_retries):
        try:
            m = choose_telescoping_levels(schedule, stages, factor)
            model = expansive_replace(telescope(schedule, m))
        except SpacerReplacementError as exc:
            last_error = exc
            factor *= 2
            continue
        if model.replaced and all(r.stage.q == 1 for r in model.replaced):
            last_error = SpacerReplacementError(
                "every replaced stage kept a single copy"
            )
            factor *= 2
            continue
        return model
    raise SpacerReplacementError(
        f"no usable telescoping after {max_retries} growth doublings: {last_error}"
    )
