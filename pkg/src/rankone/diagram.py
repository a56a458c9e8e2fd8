"""Two-column ordered Bratteli diagrams and their Vershik dynamics.

The diagram of a parameter schedule has a root and, per level n >= 0, a
column-0 vertex (the tower) and a column-1 vertex (the spacer
reservoir).  Edges into the column-0 vertex at level n+1, in order:

    tower(0) < spacer(0,0) < ... < spacer(0, a[n][0]-1) < tower(1) < ...

tower(i) leaves the column-0 vertex at level n, spacer(i,j) leaves the
column-1 vertex, and a single down edge joins consecutive column-1
vertices.  The root sends one edge to each level-0 vertex ("nonspacer"
into column 0, "spacer" into column 1).

Paths here are finite, with edges at levels 0..depth-1, and carry the
canonical extension convention: tower(0) at every level past their
depth.  tower(0) never belongs to an exceptional set at deeper levels,
so quantities like the last exceptional level are computable from the
truncation alone.

The number of root-to-column-0 paths at level n equals the tower height
h_n, and the dimension-weighted rank of such a path in the incoming
order is exactly its level index J_n: the floor of the tower the path
codes.  The successor map (replace the lowest non-maximal edge by the
next edge into the same vertex, refill minimally below) therefore steps
J_n by one, and walking the whole fiber enumerates floors 0..h_n - 1 in
lexicographic order.  Moves that fall off the truncation are returned
as Overflow values, not raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .schedules import ParamSchedule, Stage, heights, tail_mass_bound

TOWER = "tower"
SPACER = "spacer"
DOWN = "down"
ROOT_NONSPACER = "nonspacer"
ROOT_SPACER = "spacer"


class PathError(ValueError):
    """A path is malformed or incompatible with the schedule."""


@dataclass(frozen=True)
class Edge:
    kind: str
    i: int = 0
    j: int = 0


@dataclass(frozen=True)
class Overflow:
    """The finite truncation cannot represent the requested move."""

    depth: int


@dataclass(frozen=True)
class AdicPath:
    """A finite path from the root: a root edge plus edges at levels 0..depth-1."""

    root: str
    edges: tuple[Edge, ...]

    @property
    def depth(self) -> int:
        return len(self.edges)


def validate_path(schedule: ParamSchedule, path: AdicPath) -> None:
    """Check vertex compatibility and index bounds; raises PathError."""
    if path.root not in (ROOT_NONSPACER, ROOT_SPACER):
        raise PathError(f"unknown root edge {path.root!r}")
    column = 0 if path.root == ROOT_NONSPACER else 1
    for n, e in enumerate(path.edges):
        st = schedule.stage(n)
        if column == 0:
            if e.kind != TOWER:
                raise PathError(f"level {n}: expected a tower edge out of column 0")
            if not 0 <= e.i < st.q:
                raise PathError(f"level {n}: tower index {e.i} outside 0..{st.q - 1}")
        else:
            if e.kind == DOWN:
                continue
            if e.kind != SPACER:
                raise PathError(f"level {n}: expected spacer or down out of column 1")
            if not 0 <= e.i < st.q:
                raise PathError(f"level {n}: spacer group {e.i} outside 0..{st.q - 1}")
            if not 0 <= e.j < st.a[e.i]:
                raise PathError(
                    f"level {n}: spacer index {e.j} outside 0..{st.a[e.i] - 1}"
                )
            column = 0
    # paths may end in either column; depth-0 paths are a bare root edge


def _edge_count(st: Stage) -> int:
    return st.q + st.spacer_sum


def _edge_rank(st: Stage, e: Edge) -> int:
    """Position of an edge in the order into the next column-0 vertex."""
    if e.kind == TOWER:
        return e.i + sum(st.a[: e.i])
    if e.kind == SPACER:
        return e.i + sum(st.a[: e.i]) + 1 + e.j
    raise PathError("down edges are not ordered into column 0")


def _edge_at_rank(st: Stage, r: int) -> Edge:
    for i in range(st.q):
        if r == 0:
            return Edge(TOWER, i)
        r -= 1
        if r < st.a[i]:
            return Edge(SPACER, i, r)
        r -= st.a[i]
    raise PathError("edge rank out of range")


def minimal_path(schedule: ParamSchedule, depth: int, column: int = 0) -> AdicPath:
    """The least path of the given depth ending in the given column."""
    for k in range(depth):
        schedule.stage(k)  # surfaces DepthError before building anything
    if column == 0:
        return AdicPath(ROOT_NONSPACER, tuple(Edge(TOWER, 0) for _ in range(depth)))
    if column == 1:
        return AdicPath(ROOT_SPACER, tuple(Edge(DOWN) for _ in range(depth)))
    raise ValueError(f"column must be 0 or 1, got {column}")


def maximal_path(schedule: ParamSchedule, depth: int, column: int = 0) -> AdicPath:
    """The greatest path of the given depth ending in the given column."""
    if column == 1:
        return minimal_path(schedule, depth, column=1)  # sole path, min and max
    if column != 0:
        raise ValueError(f"column must be 0 or 1, got {column}")
    edges: list[Edge] = [Edge(DOWN)] * depth
    level = depth - 1
    while level >= 0:
        st = schedule.stage(level)
        if st.a[st.q - 1] > 0:
            edges[level] = Edge(SPACER, st.q - 1, st.a[st.q - 1] - 1)
            return AdicPath(ROOT_SPACER, tuple(edges))
        edges[level] = Edge(TOWER, st.q - 1)
        level -= 1
    return AdicPath(ROOT_NONSPACER, tuple(edges))


def successor(schedule: ParamSchedule, path: AdicPath) -> AdicPath | Overflow:
    """Vershik successor within the truncation, or Overflow."""
    for pos, e in enumerate(path.edges):
        if e.kind == DOWN:
            continue  # the sole edge into its vertex, nothing to increment
        st = schedule.stage(pos)
        r = _edge_rank(st, e)
        if r + 1 >= _edge_count(st):
            continue
        new = _edge_at_rank(st, r + 1)
        if new.kind == TOWER:
            root, head = ROOT_NONSPACER, (Edge(TOWER, 0),) * pos
        else:
            root, head = ROOT_SPACER, (Edge(DOWN),) * pos
        return AdicPath(root, head + (new,) + path.edges[pos + 1:])
    return Overflow(path.depth)


def predecessor(schedule: ParamSchedule, path: AdicPath) -> AdicPath | Overflow:
    """Mirror of successor: previous edge, maximal refill below."""
    for pos, e in enumerate(path.edges):
        if e.kind == DOWN:
            continue
        st = schedule.stage(pos)
        r = _edge_rank(st, e)
        if r == 0:
            continue
        new = _edge_at_rank(st, r - 1)
        if new.kind == TOWER:
            fill = maximal_path(schedule, pos, column=0)
            return AdicPath(fill.root, fill.edges + (new,) + path.edges[pos + 1:])
        fill = maximal_path(schedule, pos, column=1)
        return AdicPath(fill.root, fill.edges + (new,) + path.edges[pos + 1:])
    return Overflow(path.depth)


@dataclass(frozen=True)
class LevelIndices:
    """Tower floor numbers J_n for n = start..depth.

    start is the first level at which the path sits inside the tower:
    0 for paths rooted in column 0, spacer-level + 1 for paths that
    enter through the spacer reservoir.
    """

    start: int
    values: tuple[int, ...]

    @property
    def m(self) -> int:
        """Level of the spacer edge, -1 when the path starts in column 0."""
        return self.start - 1

    def at(self, n: int) -> int:
        if not self.start <= n < self.start + len(self.values):
            raise ValueError(f"J_{n} not defined; range is {self.start}..{self.start + len(self.values) - 1}")
        return self.values[n - self.start]


def level_indices(schedule: ParamSchedule, path: AdicPath) -> LevelIndices:
    """Floor numbers of the path in each tower it crosses.

    A path through the level-n column-0 vertex codes floor J_n of the
    n-th tower: J_0 = 0, a spacer edge (i, j) at level m enters floor
    (i+1) h_m + a[m][0] + ... + a[m][i-1] + j of tower m+1, and a tower
    edge i at level n lifts J_n to i h_n + a[n][0] + ... + a[n][i-1] + J_n.
    """
    hs = heights(schedule, path.depth)
    if path.root == ROOT_NONSPACER:
        vals = [0]
        j = 0
        for n, e in enumerate(path.edges):
            if e.kind != TOWER:
                raise PathError(f"level {n}: column-0 paths carry tower edges only")
            st = schedule.stage(n)
            j = e.i * hs[n] + sum(st.a[: e.i]) + j
            vals.append(j)
        return LevelIndices(0, tuple(vals))
    m = None
    for n, e in enumerate(path.edges):
        if e.kind == DOWN:
            continue
        if e.kind == SPACER:
            m = n
            break
        raise PathError(f"level {n}: tower edge cannot leave column 1")
    if m is None:
        raise PathError("path stays in the spacer column; no tower coordinates")
    st = schedule.stage(m)
    e = path.edges[m]
    j = (e.i + 1) * hs[m] + sum(st.a[: e.i]) + e.j
    vals = [j]
    for n in range(m + 1, path.depth):
        e = path.edges[n]
        if e.kind != TOWER:
            raise PathError(f"level {n}: expected a tower edge above the spacer")
        st = schedule.stage(n)
        j = e.i * hs[n] + sum(st.a[: e.i]) + j
        vals.append(j)
    return LevelIndices(m + 1, tuple(vals))


def from_tower_coordinates(schedule: ParamSchedule, n: int, k: int) -> AdicPath:
    """The unique depth-n path through the column-0 vertex with J_n = k.

    Inverts level_indices by greedy digit extraction: at each level the
    floor number selects either a sub-tower copy (continue downward) or
    a spacer slot (the path enters from the reservoir below).
    """
    hs = heights(schedule, n)
    if not 0 <= k < hs[n]:
        raise ValueError(f"floor {k} outside 0..{hs[n] - 1}")
    edges: list[Edge] = [Edge(DOWN)] * n
    pos = k
    for level in range(n - 1, -1, -1):
        st = schedule.stage(level)
        base = 0
        placed = False
        for i in range(st.q):
            if pos < base + hs[level]:
                edges[level] = Edge(TOWER, i)
                pos -= base
                placed = True
                break
            base += hs[level]
            if pos < base + st.a[i]:
                edges[level] = Edge(SPACER, i, pos - base)
                return AdicPath(ROOT_SPACER, tuple(edges))
            base += st.a[i]
        if not placed:
            raise AssertionError("floor number exceeded the tower height")
    assert pos == 0
    return AdicPath(ROOT_NONSPACER, tuple(edges))


@dataclass(frozen=True)
class OrbitCoding:
    word: str
    overflow: Overflow | None


def code_orbit(schedule: ParamSchedule, path: AdicPath, steps: int) -> OrbitCoding:
    """Code `steps` symbols along the successor orbit.

    Symbol rule: 1 when the current path enters through the spacer
    reservoir (root edge into column 1), else 0.  Stops early with the
    partial word when the orbit overflows the truncation.
    """
    if steps < 0:
        raise ValueError(f"steps {steps} < 0")
    out = []
    cur = path
    for s in range(steps):
        out.append("1" if cur.root == ROOT_SPACER else "0")
        if s + 1 < steps:
            nxt = successor(schedule, cur)
            if isinstance(nxt, Overflow):
                return OrbitCoding("".join(out), nxt)
            cur = nxt
    return OrbitCoding("".join(out), None)


@dataclass(frozen=True)
class MeasureBracket:
    lo: Fraction
    hi: Fraction
    tail_bounded: bool  # False: no tail information, lo pinned to 0

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo


def cylinder_measure_bounds(
    schedule: ParamSchedule, n: int, depth: int
) -> MeasureBracket:
    """Bracket the mass of the minimal level-n cylinder (the n-tower base).

    The base cylinder splits into prod_{k=n..depth-1} q_k cylinders at
    level `depth`, each of mass at most 1/h_depth, giving hi.  For
    periodic tails the spacer mass not yet swallowed by the towers is at
    most the tail ratio bound, giving lo = hi * (1 - bound).
    """
    if not 0 <= n <= depth:
        raise ValueError(f"need 0 <= n <= depth, got n={n}, depth={depth}")
    hs = heights(schedule, depth)
    copies = prod(schedule.stage(k).q for k in range(n, depth))
    hi = Fraction(copies, hs[depth])
    bound = tail_mass_bound(schedule, depth)
    if bound is None:
        return MeasureBracket(Fraction(0), hi, False)
    lo = max(Fraction(0), hi * (1 - bound))
    return MeasureBracket(lo, hi, True)


def export_dot(schedule: ParamSchedule, depth: int) -> str:
    """Deterministic DOT rendering of the first `depth` levels.

    Edge labels give the order into the next column-0 vertex, 1-based;
    spacer edges are dashed, down edges bold.
    """
    lines = [
        "digraph bratteli {",
        "  rankdir=TB;",
        "  node [shape=circle, fontsize=10];",
        '  "root";',
    ]
    for lvl in range(depth + 1):
        lines.append(f'  {{ rank=same; "v{lvl}_0"; "v{lvl}_1"; }}')
    lines.append('  "root" -> "v0_0" [label="1"];')
    lines.append('  "root" -> "v0_1" [label="1"];')
    for lvl in range(depth):
        st = schedule.stage(lvl)
        rank = 1
        for i in range(st.q):
            lines.append(f'  "v{lvl}_0" -> "v{lvl + 1}_0" [label="{rank}"];')
            rank += 1
            for _ in range(st.a[i]):
                lines.append(
                    f'  "v{lvl}_1" -> "v{lvl + 1}_0" [label="{rank}", style=dashed];'
                )
                rank += 1
        lines.append(f'  "v{lvl}_1" -> "v{lvl + 1}_1" [label="1", style=bold];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def path_to_json_dict(path: AdicPath) -> dict:
    edges = []
    for n, e in enumerate(path.edges):
        if e.kind == TOWER:
            edges.append({"level": n, "kind": TOWER, "i": e.i})
        elif e.kind == SPACER:
            edges.append({"level": n, "kind": SPACER, "i": e.i, "j": e.j})
        elif e.kind == DOWN:
            edges.append({"level": n, "kind": DOWN})
        else:
            raise PathError(f"unknown edge kind {e.kind!r}")
    return {"root": path.root, "edges": edges}


def path_from_json_dict(doc: dict, schedule: ParamSchedule | None = None) -> AdicPath:
    if not isinstance(doc, dict) or set(doc) != {"root", "edges"}:
        raise PathError("expected an object with 'root' and 'edges'")
    root = doc["root"]
    if root not in (ROOT_NONSPACER, ROOT_SPACER):
        raise PathError(f"root must be 'nonspacer' or 'spacer', got {root!r}")
    edges = []
    for n, raw in enumerate(doc["edges"]):
        if not isinstance(raw, dict) or "kind" not in raw:
            raise PathError(f"edge {n}: expected an object with 'kind'")
        if "level" in raw and raw["level"] != n:
            raise PathError(f"edge {n}: level field says {raw['level']}")
        kind = raw["kind"]
        if kind == TOWER:
            edges.append(Edge(TOWER, raw["i"]))
        elif kind == SPACER:
            edges.append(Edge(SPACER, raw["i"], raw["j"]))
        elif kind == DOWN:
            edges.append(Edge(DOWN))
        else:
            raise PathError(f"edge {n}: unknown kind {kind!r}")
    path = AdicPath(root, tuple(edges))
    if schedule is not None:
        validate_path(schedule, path)
    return path
