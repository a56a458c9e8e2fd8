"""Telescoping windows and the dominating-run spacer replacement."""

import random

import pytest
from conftest import CHACON, ODOMETER, schedules, seeded_levels, seeded_schedule
from hypothesis import given
from hypothesis import strategies as st

from rankone import (
    DepthError,
    ParamSchedule,
    SpacerReplacementError,
    Stage,
    TelescopedSchedule,
    build_block,
    build_expansive,
    digit_decomposition,
    expansive_replace,
    heights,
    one_tower_variant,
    pea_condition,
    telescope,
)


@given(st.integers(0, 10**6), st.lists(st.integers(2, 5), min_size=1, max_size=8))
def test_digit_decomposition_round_trip(i, radices):
    total = 1
    for r in radices:
        total *= r
    i %= total
    digits = digit_decomposition(i, radices)
    assert len(digits) == len(radices)
    back, scale = 0, 1
    for d, r in zip(digits, radices):
        assert 0 <= d < r
        back += d * scale
        scale *= r
    assert back == i


def test_digit_decomposition_range():
    with pytest.raises(ValueError):
        digit_decomposition(8, [2, 4])
    with pytest.raises(ValueError):
        digit_decomposition(-1, [2])


def test_telescope_known_values():
    tele = telescope(CHACON, [0, 1, 3])
    assert tele.levels == (0, 1, 3)
    assert tele.heights == (1, 4, 40)
    assert tele.stages == (
        Stage(3, (0, 1, 0)),
        Stage(9, (0, 1, 0, 0, 1, 1, 0, 1, 0)),
    )
    assert tele.num_stages == 2
    assert tele.as_schedule() == ParamSchedule(tele.stages, tail_period=None)


def test_telescope_level_validation():
    with pytest.raises(ValueError):
        telescope(CHACON, [1, 2])  # must start at 0
    with pytest.raises(ValueError):
        telescope(CHACON, [0, 2, 2])  # strictly increasing
    with pytest.raises(ValueError):
        telescope(CHACON, [0, 2, 1])


@given(schedules(allow_bare=False), st.data())
def test_telescope_block_equality(schedule, data):
    top = schedule.prefix_len + 2
    inner = sorted(
        data.draw(
            st.sets(st.integers(1, top), min_size=1, max_size=3), label="levels"
        )
    )
    levels = [0] + inner
    tele = telescope(schedule, levels)
    merged = tele.as_schedule()
    for j, m in enumerate(levels):
        assert build_block(schedule, m) == build_block(merged, j)
    assert list(tele.heights) == [heights(schedule, m)[m] for m in levels]


def _single(stage: Stage, low: int = 1) -> TelescopedSchedule:
    base = ParamSchedule((stage,), tail_period=None)
    high = stage.q * low + stage.spacer_sum
    return TelescopedSchedule(
        base=base, levels=(0, 1), stages=(stage,), heights=(low, high)
    )


def test_replace_single_stage_examples():
    # the tail 1*H + (0 + 3) = 4 beats the largest run 3 at copy 2
    model = expansive_replace(_single(Stage(4, (0, 1, 0, 3))))
    (r,) = model.replaced
    assert (r.cut, r.top_run, r.spacer_max) == (2, 4, 3)
    assert r.stage == Stage(3, (0, 1, 4))

    # degenerate: nothing above the first copy beats 0 until everything goes
    model2 = expansive_replace(_single(Stage(2, (0, 0))))
    (r2,) = model2.replaced
    assert (r2.cut, r2.top_run) == (0, 1)
    assert r2.stage == Stage(1, (1,))
    assert model2.warnings == (0,)


def test_replace_chacon_model():
    model = expansive_replace(telescope(CHACON, [0, 1, 3]))
    assert [r.cut for r in model.replaced] == [1, 7]
    assert [r.top_run for r in model.replaced] == [2, 5]
    assert [r.stage for r in model.replaced] == [
        Stage(2, (0, 2)),
        Stage(8, (0, 1, 0, 0, 1, 1, 0, 5)),
    ]
    assert model.warnings == ()
    rep = model.replaced_schedule()
    assert heights(rep, 2) == [1, 4, 40]


def test_replace_rejects_single_copy_window():
    with pytest.raises(SpacerReplacementError):
        expansive_replace(_single(Stage(1, (3,))))


def test_replace_depth_argument():
    tele = telescope(CHACON, [0, 1, 3])
    partial = expansive_replace(tele, 1)
    assert len(partial.replaced) == 1
    with pytest.raises(DepthError):
        expansive_replace(tele, 3)


@given(schedules(allow_bare=False))
def test_replace_invariants(schedule):
    tele = telescope(schedule, [0, 1, schedule.prefix_len + 1])
    model = expansive_replace(tele)
    rep = model.replaced_schedule()
    # heights preserved stage by stage
    assert heights(rep, tele.num_stages) == list(tele.heights)
    # dominating final run
    assert all(pea_condition(rep, tele.num_stages))
    for r, low in zip(model.replaced, tele.heights):
        assert r.top_run > r.spacer_max
        assert r.stage.spacer_sum <= 2 * r.original.spacer_sum + low


def test_variant_known_values():
    tele = telescope(CHACON, [0, 1, 3])
    got = one_tower_variant(tele, [2, 8])
    assert got.stages == (Stage(2, (0, 2)), Stage(8, (0, 1, 0, 0, 1, 1, 0, 5)))
    assert got.tail_period is None
    assert heights(got, 2) == [1, 4, 40]


def test_variant_pick_validation():
    tele = telescope(CHACON, [0, 1, 3])
    with pytest.raises(ValueError):
        one_tower_variant(tele, [2])  # wrong count
    with pytest.raises(ValueError):
        one_tower_variant(tele, [0, 8])  # leading spacer run not expressible
    with pytest.raises(ValueError):
        one_tower_variant(tele, [3, 8])  # outside 1..q-1
    with pytest.raises(SpacerReplacementError):
        one_tower_variant(_single(Stage(1, (1,))), [1])


@given(schedules(allow_bare=False), st.data())
def test_variant_block_surgery(schedule, data):
    tele = telescope(schedule, [0, 1, schedule.prefix_len + 1])
    picks = [
        data.draw(st.integers(1, s.q - 1), label=f"pick{n}")
        for n, s in enumerate(tele.stages)
    ]
    variant = one_tower_variant(tele, picks)
    # per stage, the new block is the old concatenation with copy p
    # overwritten by spacer symbols, assembled over the variant's own
    # lower block
    for n, st_n in enumerate(tele.stages):
        w = build_block(variant, n)
        parts = []
        for i in range(st_n.q):
            body = "1" * len(w) if i == picks[n] else w
            parts.append(body + "1" * st_n.a[i])
        assert "".join(parts) == build_block(variant, n + 1)


def test_build_expansive_known_models():
    model = build_expansive(ODOMETER, 3)
    assert model.telescoped.levels == (0, 1, 3, 6)
    assert [r.stage for r in model.replaced] == [
        Stage(1, (1,)),
        Stage(3, (0, 0, 2)),
        Stage(7, (0, 0, 0, 0, 0, 0, 8)),
    ]
    assert model.warnings == (0,)
    rep = model.replaced_schedule()
    assert build_block(rep, 1) == "01"
    assert build_block(rep, 2) == "01010111"


def test_build_expansive_retries_on_degenerate_window():
    # a single window over the odometer collapses to one copy; the
    # doubled growth base widens it to four copies and succeeds
    model = build_expansive(ODOMETER, 1)
    assert model.telescoped.levels == (0, 2)
    assert model.replaced[0].stage == Stage(3, (0, 0, 1))
    assert model.warnings == ()


def test_build_expansive_gives_up_without_cuts():
    # q > 1 happens once, so every later window multiplies to Q = 1 and
    # no growth base can fix it
    stuck = ParamSchedule((Stage(2, (0, 0)), Stage(1, (3,))), tail_period=1)
    with pytest.raises(SpacerReplacementError):
        build_expansive(stuck, 2)


def test_seeded_generators_shape():
    rng = random.Random(20240817)
    sched = seeded_schedule(rng, 10**5)
    assert heights(sched, sched.prefix_len)[-1] <= 10**5
    levels = seeded_levels(rng, sched)
    assert levels[0] == 0
    assert all(a < b for a, b in zip(levels, levels[1:]))
