"""Cutting-and-stacking parameter schedules.

A rank-one construction is driven by a stage sequence: stage n cuts the
current tower into ``q_n`` columns and inserts ``a[n][i]`` spacer levels
above column i, so the heights satisfy

    h_0 = 1,    h_{n+1} = q_n * h_n + sum_i a[n][i].

Infinite schedules are encoded as a finite explicit prefix plus an
optional periodic tail that repeats the last ``tail_period`` explicit
stages forever.  That encoding keeps tail questions decidable: eventual
height growth, whether q > 1 occurs infinitely often, and convergence
of the spacer-ratio series sum_n (sum_i a[n][i]) / h_{n+1}.

All arithmetic here is exact: heights are Python ints, ratios are
``fractions.Fraction``.  Floats never enter.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

PROVED_CONVERGENT = "proved-convergent"
PROVED_DIVERGENT = "proved-divergent"
UNKNOWN_AT_DEPTH = "unknown-at-depth"


class ScheduleError(ValueError):
    """A stage is structurally unusable (q < 1, negative spacers, bad shape)."""


class DepthError(Exception):
    """A stage beyond the resolvable range was requested."""


@dataclass(frozen=True)
class Stage:
    """One cut-and-stack step: q columns, a[i] spacers above column i."""

    q: int
    a: tuple[int, ...]

    @property
    def spacer_sum(self) -> int:
        return sum(self.a)

    def issues(self) -> list[str]:
        """Structural problems, empty when the stage is well-formed."""
        out = []
        if self.q < 1:
            out.append(f"q={self.q} < 1")
        if len(self.a) != self.q:
            out.append(f"len(a)={len(self.a)} != q={self.q}")
        if any(x < 0 for x in self.a):
            out.append("negative spacer count")
        return out


@dataclass(frozen=True)
class ParamSchedule:
    """Explicit stages plus an optional periodic tail.

    ``tail_period=None`` means the schedule is only known up to its
    explicit prefix; ``tail_period=p`` means the last p explicit stages
    repeat forever.
    """

    stages: tuple[Stage, ...]
    tail_period: int | None = None

    def __post_init__(self):
        if self.tail_period is not None:
            if not self.stages:
                raise ScheduleError("periodic tail requires at least one explicit stage")
            if not 1 <= self.tail_period <= len(self.stages):
                raise ScheduleError(
                    f"tail period {self.tail_period} outside 1..{len(self.stages)}"
                )

    @property
    def prefix_len(self) -> int:
        return len(self.stages)

    def resolvable(self, n: int) -> bool:
        return n < len(self.stages) or self.tail_period is not None

    def stage(self, n: int, *, checked: bool = True) -> Stage:
        """Resolve stage n, reading through the periodic tail when present."""
        if n < 0:
            raise ValueError(f"stage index {n} < 0")
        if n < len(self.stages):
            st = self.stages[n]
        elif self.tail_period is not None:
            p = self.tail_period
            st = self.stages[len(self.stages) - p + (n - len(self.stages)) % p]
        else:
            raise DepthError(
                f"stage {n} unresolvable: {len(self.stages)} explicit stages and no tail"
            )
        if checked:
            problems = st.issues()
            if problems:
                raise ScheduleError(f"stage {n}: " + "; ".join(problems))
        return st

    def tail_stages(self) -> tuple[Stage, ...]:
        """The repeating part; empty for a bare prefix."""
        if self.tail_period is None:
            return ()
        return self.stages[len(self.stages) - self.tail_period:]

    def to_json_dict(self) -> dict:
        tail: dict = (
            {"kind": "none"}
            if self.tail_period is None
            else {"kind": "periodic", "period": self.tail_period}
        )
        return {
            "stages": [{"q": s.q, "a": list(s.a)} for s in self.stages],
            "tail": tail,
        }

    @classmethod
    def from_json_dict(cls, doc, where: str = "$") -> "ParamSchedule":
        """Strict parse of the schedule JSON form; unknown keys are rejected."""
        if not isinstance(doc, dict):
            raise ScheduleError(f"expected object at {where}")
        for key in doc:
            if key not in ("stages", "tail"):
                raise ScheduleError(f"unknown field {key!r} at {where}.{key}")
        if "stages" not in doc or "tail" not in doc:
            raise ScheduleError(f"missing 'stages' or 'tail' at {where}")
        raw_stages = doc["stages"]
        if not isinstance(raw_stages, list):
            raise ScheduleError(f"expected array at {where}.stages")
        stages = []
        for idx, raw in enumerate(raw_stages):
            spot = f"{where}.stages[{idx}]"
            if not isinstance(raw, dict):
                raise ScheduleError(f"expected object at {spot}")
            for key in raw:
                if key not in ("q", "a"):
                    raise ScheduleError(f"unknown field {key!r} at {spot}.{key}")
            if "q" not in raw or "a" not in raw:
                raise ScheduleError(f"missing 'q' or 'a' at {spot}")
            q, a = raw["q"], raw["a"]
            if not isinstance(q, int) or isinstance(q, bool):
                raise ScheduleError(f"expected integer at {spot}.q")
            if not isinstance(a, list) or any(
                not isinstance(x, int) or isinstance(x, bool) for x in a
            ):
                raise ScheduleError(f"expected array of integers at {spot}.a")
            stages.append(Stage(q, tuple(a)))
        raw_tail = doc["tail"]
        spot = f"{where}.tail"
        if not isinstance(raw_tail, dict) or "kind" not in raw_tail:
            raise ScheduleError(f"expected object with 'kind' at {spot}")
        kind = raw_tail["kind"]
        if kind == "none":
            extra = set(raw_tail) - {"kind"}
            if extra:
                raise ScheduleError(f"unknown field {extra.pop()!r} at {spot}")
            period = None
        elif kind == "periodic":
            extra = set(raw_tail) - {"kind", "period"}
            if extra:
                raise ScheduleError(f"unknown field {extra.pop()!r} at {spot}")
            period = raw_tail.get("period")
            if not isinstance(period, int) or isinstance(period, bool):
                raise ScheduleError(f"expected integer at {spot}.period")
        else:
            raise ScheduleError(f"tail kind must be 'none' or 'periodic' at {spot}.kind")
        return cls(tuple(stages), period)


def heights(schedule: ParamSchedule, n: int) -> list[int]:
    """Tower heights h_0..h_n from the stage recursion, exact."""
    if n < 0:
        raise ValueError(f"depth {n} < 0")
    hs = [1]
    for k in range(n):
        st = schedule.stage(k)
        hs.append(st.q * hs[-1] + st.spacer_sum)
    return hs


@dataclass(frozen=True)
class _TailProfile:
    period: int
    q_product: int          # height growth factor per full period, from cuts alone
    max_stage_spacers: int  # largest per-stage spacer sum in the period
    any_q_gt1: bool
    all_spacers_zero: bool


def _tail_profile(schedule: ParamSchedule) -> _TailProfile | None:
    tail = schedule.tail_stages()
    if not tail:
        return None
    prod = 1
    for st in tail:
        if st.issues():
            raise ScheduleError("tail contains a structurally invalid stage")
        prod *= st.q
    return _TailProfile(
        period=len(tail),
        q_product=prod,
        max_stage_spacers=max(st.spacer_sum for st in tail),
        any_q_gt1=any(st.q > 1 for st in tail),
        all_spacers_zero=all(st.spacer_sum == 0 for st in tail),
    )


def tail_mass_bound(schedule: ParamSchedule, start: int) -> Fraction | None:
    """Rigorous upper bound on sum_{k>=start} spacers_k / h_{k+1}.

    Exact terms are used up to the end of the explicit prefix; past it,
    one full tail period multiplies the height by at least the period's
    q-product R, so the remaining terms are dominated by the geometric
    series (period * max_spacers / h) * R/(R-1) when R >= 2.  Returns
    None when no bound is provable (bare prefix, or an R = 1 tail with
    positive spacers, whose series in fact diverges).
    """
    profile = _tail_profile(schedule)
    if profile is None:
        return None
    t0 = max(start, schedule.prefix_len)
    hs = heights(schedule, t0)
    exact = sum(
        (Fraction(schedule.stage(k).spacer_sum, hs[k + 1]) for k in range(start, t0)),
        Fraction(0),
    )
    if profile.max_stage_spacers == 0:
        return exact
    if profile.q_product < 2:
        return None
    geom = Fraction(profile.period * profile.max_stage_spacers, hs[t0]) * Fraction(
        profile.q_product, profile.q_product - 1
    )
    return exact + geom


def tail_diverges(schedule: ParamSchedule) -> bool:
    """True when the spacer-ratio series provably diverges.

    An all-q=1 tail with some positive spacer sum grows heights only
    linearly, so the terms behave harmonically: the partial products
    prod h_k/h_{k+1} = h_start/h_K tend to zero, which is equivalent to
    divergence of sum (1 - h_k/h_{k+1}) = sum spacers_k / h_{k+1}.
    """
    profile = _tail_profile(schedule)
    return (
        profile is not None
        and profile.q_product == 1
        and profile.max_stage_spacers > 0
    )


@dataclass(frozen=True)
class RatioSumReport:
    """Partial spacer-ratio sum plus what the tail implies about the series."""

    partial: Fraction
    verdict: str                      # proved-convergent / proved-divergent / unknown-at-depth
    total_bound: Fraction | None      # upper bound on the full series when proved-convergent


def spacer_ratio_sum(schedule: ParamSchedule, n: int) -> RatioSumReport:
    """Exact partial sum sum_{k<n} spacers_k / h_{k+1} with a tail verdict."""
    hs = heights(schedule, n)
    partial = sum(
        (Fraction(schedule.stage(k).spacer_sum, hs[k + 1]) for k in range(n)),
        Fraction(0),
    )
    if schedule.tail_period is None:
        return RatioSumReport(partial, UNKNOWN_AT_DEPTH, None)
    if tail_diverges(schedule):
        return RatioSumReport(partial, PROVED_DIVERGENT, None)
    bound = tail_mass_bound(schedule, n)
    if bound is None:
        return RatioSumReport(partial, UNKNOWN_AT_DEPTH, None)
    return RatioSumReport(partial, PROVED_CONVERGENT, partial + bound)


@dataclass(frozen=True)
class ValidityReport:
    """Structural and asymptotic health of a schedule.

    ``q_gt1_infinitely_often`` is decided exactly on periodic tails and
    is None for bare prefixes.  ``not_defined_everywhere_risk`` flags an
    eventually trivial tail (q = 1, no spacers): the construction then
    freezes and the map is not defined almost everywhere.
    """

    structural_issues: tuple[str, ...]
    q_gt1_stages: tuple[int, ...]
    q_gt1_infinitely_often: bool | None
    partial_sums: tuple[Fraction, ...]
    tail_verdict: str
    not_defined_everywhere_risk: bool

    @property
    def ok(self) -> bool:
        return (
            not self.structural_issues
            and self.q_gt1_infinitely_often is not False
            and not self.not_defined_everywhere_risk
        )

    def to_json_dict(self) -> dict:
        return {
            "structural_issues": list(self.structural_issues),
            "q_gt1_stages": list(self.q_gt1_stages),
            "q_gt1_infinitely_often": self.q_gt1_infinitely_often,
            "partial_sums": [str(s) for s in self.partial_sums],
            "tail_verdict": self.tail_verdict,
            "not_defined_everywhere_risk": self.not_defined_everywhere_risk,
            "ok": self.ok,
        }


def validate(schedule: ParamSchedule, depth: int) -> ValidityReport:
    """Inspect stages up to ``depth``; never raises on bad stages."""
    issues: list[str] = []
    for k in range(min(depth, schedule.prefix_len)):
        st = schedule.stage(k, checked=False)
        issues.extend(f"stage {k}: {msg}" for msg in st.issues())

    q_gt1 = tuple(
        k for k in range(schedule.prefix_len)
        if not schedule.stage(k, checked=False).issues()
        and schedule.stage(k, checked=False).q > 1
    )

    infinitely_often: bool | None = None
    risk = False
    tail_verdict = UNKNOWN_AT_DEPTH
    partials: tuple[Fraction, ...] = ()
    try:
        profile = _tail_profile(schedule)
        if profile is not None:
            infinitely_often = profile.any_q_gt1
            risk = profile.q_product == 1 and profile.all_spacers_zero
        sums = []
        total = Fraction(0)
        hs = heights(schedule, depth)
        for k in range(depth):
            total += Fraction(schedule.stage(k).spacer_sum, hs[k + 1])
            sums.append(total)
        partials = tuple(sums)
        tail_verdict = spacer_ratio_sum(schedule, depth).verdict
    except (ScheduleError, DepthError):
        pass  # partial sums only make sense on resolvable, well-formed stages
    return ValidityReport(
        structural_issues=tuple(issues),
        q_gt1_stages=q_gt1,
        q_gt1_infinitely_often=infinitely_often,
        partial_sums=partials,
        tail_verdict=tail_verdict,
        not_defined_everywhere_risk=risk,
    )


def choose_telescoping_levels(
    schedule: ParamSchedule, count: int, growth_base: int = 2
) -> list[int]:
    """Greedy level selection m_0 = 0 < m_1 < ... < m_count.

    m_{j+1} is the least level m > m_j with h_m >= growth_base**(j+1) * h_{m_j},
    which forces sum_j H_j / H_{j+1} <= sum_j growth_base**-(j+1) < 1.
    """
    if count < 0:
        raise ValueError(f"count {count} < 0")
    if growth_base < 2:
        raise ValueError(f"growth base {growth_base} < 2")
    profile = _tail_profile(schedule)
    frozen_tail = (
        profile is not None and profile.q_product == 1 and profile.all_spacers_zero
    )
    hs = [1]

    def extend_to(idx: int) -> None:
        while len(hs) <= idx:
            st = schedule.stage(len(hs) - 1)
            hs.append(st.q * hs[-1] + st.spacer_sum)

    m = [0]
    for j in range(count):
        target = growth_base ** (j + 1) * hs[m[j]]
        cand = m[j] + 1
        while True:
            if frozen_tail and cand - 1 >= schedule.prefix_len and hs[-1] < target:
                raise DepthError(
                    f"periodic tail adds no height growth; cannot reach h >= {target}"
                )
            extend_to(cand)
            if hs[cand] >= target:
                break
            cand += 1
        m.append(cand)
    return m
