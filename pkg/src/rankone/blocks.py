"""Symbolic blocks and spacer-arrangement diagnostics.

Blocks are plain strings over {0, 1}: B_0 = "0" and

    B_{n+1} = B_n 1^{a[n][0]} B_n 1^{a[n][1]} ... B_n 1^{a[n][q_n - 1]},

so len(B_n) = h_n and the number of 0s in B_n is prod_{k<n} q_k.
Construction is guarded by a symbol budget checked against h_n before
any string is materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .schedules import ParamSchedule, UNKNOWN_AT_DEPTH, heights

DEFAULT_SYMBOL_BUDGET = 1 << 26

KALIKOW_BOUNDED = "bounded"
KALIKOW_UNBOUNDED = "unbounded"


class BlockBudgetError(Exception):
    """The requested block exceeds the symbol budget."""

    def __init__(self, required: int, budget: int):
        super().__init__(
            f"block needs {required} symbols, over the budget of {budget}"
        )
        self.required = required
        self.budget = budget


def build_block(
    schedule: ParamSchedule, n: int, budget: int = DEFAULT_SYMBOL_BUDGET
) -> str:
    """The stage-n block B_n; length h_n is checked against the budget first."""
    hs = heights(schedule, n)
    if hs[n] > budget:
        raise BlockBudgetError(required=hs[n], budget=budget)
    b = "0"
    for k in range(n):
        st = schedule.stage(k)
        b = "".join(b + "1" * st.a[i] for i in range(st.q))
    return b


def detect_period(w: str) -> int | None:
    """Least period p <= len(w)//2 (w[i] == w[i+p] for all i), else None."""
    for p in range(1, len(w) // 2 + 1):
        if w[:-p] == w[p:]:
            return p
    return None


def pea_condition(schedule: ParamSchedule, depth: int) -> list[bool]:
    """Per-stage flags for stages 0..depth-1.

    Stage k passes when its final spacer run strictly dominates every
    earlier run: a[k][q_k - 1] > a[k][i] for all i < q_k - 1.  Vacuously
    true when q_k == 1.
    """
    out = []
    for k in range(depth):
        st = schedule.stage(k)
        last = st.a[st.q - 1]
        out.append(all(last > x for x in st.a[: st.q - 1]))
    return out


@dataclass(frozen=True)
class KalikowReport:
    """Witness values for the unbounded-final-run criterion.

    witnesses[n] = max over 0 <= m <= n and 0 <= i < q_{n+1} of
    a[m][q_m-1] + a[m+1][q_{m+1}-1] + ... + a[n][q_n-1] + a[n+1][i].
    The criterion asks for sup_n witnesses[n] = infinity, which forces
    arbitrarily long spacer runs in the blocks.  The verdict is decided
    exactly on periodic tails and is unknown-at-depth otherwise.
    """

    witnesses: tuple[int, ...]
    verdict: str


def kalikow_sup_condition(schedule: ParamSchedule, depth: int) -> KalikowReport:
    """Witnesses for n = 0..depth (needs stages up to depth+1)."""
    witnesses = []
    for n in range(depth + 1):
        nxt = schedule.stage(n + 1)
        best = None
        for m in range(n + 1):
            run = sum(
                schedule.stage(k).a[schedule.stage(k).q - 1] for k in range(m, n + 1)
            )
            for i in range(nxt.q):
                val = run + nxt.a[i]
                if best is None or val > best:
                    best = val
        witnesses.append(best)
    tail = schedule.tail_stages()
    if not tail:
        verdict = UNKNOWN_AT_DEPTH
    elif any(st.a[st.q - 1] > 0 for st in tail):
        # every extra tail stage adds a positive final run to the sum
        verdict = KALIKOW_UNBOUNDED
    else:
        # final runs vanish on the tail, so witnesses are eventually
        # constant-sum plus a value from the finite set of tail spacers
        verdict = KALIKOW_BOUNDED
    return KalikowReport(tuple(witnesses), verdict)


_PD_RULES = {"0": "01", "1": "00"}


def period_doubling_prefix(length: int) -> str:
    """Prefix of the fixed point of 0 -> 01, 1 -> 00 starting from 0."""
    if length < 1:
        raise ValueError(f"length {length} < 1")
    w = "0"
    while len(w) < length:
        w = "".join(_PD_RULES[c] for c in w)
    return w[:length]


@dataclass(frozen=True)
class Occurrences:
    positions: tuple[int, ...]
    gaps: tuple[int, ...]


def occurrence_spacing(w: str, pattern: str) -> Occurrences:
    """Start positions of (possibly overlapping) matches, and their gaps."""
    if not pattern:
        raise ValueError("empty pattern")
    if len(pattern) > len(w):
        raise ValueError("pattern longer than the word")
    positions = []
    i = w.find(pattern)
    while i != -1:
        positions.append(i)
        i = w.find(pattern, i + 1)
    gaps = tuple(b - a for a, b in zip(positions, positions[1:]))
    return Occurrences(tuple(positions), gaps)


def symbol_frequency(w: str, pattern: str) -> Fraction:
    """Occurrence count over window count, exact; 0/1 when no window fits."""
    if not pattern:
        raise ValueError("empty pattern")
    windows = len(w) - len(pattern) + 1
    if windows <= 0:
        return Fraction(0)
    count = 0
    i = w.find(pattern)
    while i != -1:
        count += 1
        i = w.find(pattern, i + 1)
    return Fraction(count, windows)
