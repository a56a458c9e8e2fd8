"""The spacer-replacement conjugacy and its finite-depth verification.

Source paths live over the telescoped stages (Q_n, A_n), target paths
over the replaced stages (Q'_n, A'_n); both share the heights H_n.  The
exceptional set at level n collects the source paths sitting in stage-n
spacers or in the copies above the cut:

    x in E_n  iff  x(n) is a spacer edge, or a tower edge with i > cut_n.

With the canonical extension (tower(0) past the truncation, never
exceptional) every finite path has a well-defined last exceptional
level N(x), and the map sends x to the target path that occupies the
same floor of every tower above N(x):

  * N(x) = -1: copy the tower edges unchanged;
  * otherwise: downs below N(x); at N(x) keep a spacer edge (i, j) with
    i <= cut verbatim, and send anything above the cut into the big
    replacement run at slot J_{N+1}(x) - H_{N+1} + top_run_N;
  * copy tower edges above N(x).

Floor preservation J'_n = J_n for n > N(x) makes the map injective and
equivariant for the successor dynamics wherever both sides stay inside
the truncation.  verify_isomorphism walks the whole level-D fiber (or a
seeded sample) and checks all of it mechanically.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .diagram import (
    AdicPath,
    DOWN,
    Edge,
    Overflow,
    PathError,
    ROOT_NONSPACER,
    ROOT_SPACER,
    SPACER,
    TOWER,
    from_tower_coordinates,
    level_indices,
    successor,
    validate_path,
)
from .schedules import ParamSchedule, heights
from .telescoping import ExpansiveModel


class MappingRangeError(Exception):
    """A computed replacement-run slot fell outside the run."""


@dataclass(frozen=True)
class IsoContext:
    """Shared data of a source/target pair related by spacer replacement."""

    source: ParamSchedule        # telescoped stages (Q, A)
    target: ParamSchedule        # replaced stages (Q', A')
    heights: tuple[int, ...]     # H_0..H_K, shared by both sides
    cut: tuple[int, ...]         # last kept copy per stage
    top_run: tuple[int, ...]     # replacement run length per stage

    @classmethod
    def from_model(cls, model: ExpansiveModel) -> "IsoContext":
        return cls(
            source=model.telescoped.as_schedule(),
            target=model.replaced_schedule(),
            heights=model.telescoped.heights,
            cut=tuple(r.cut for r in model.replaced),
            top_run=tuple(r.top_run for r in model.replaced),
        )

    @property
    def num_stages(self) -> int:
        return len(self.cut)


def in_exceptional(ctx: IsoContext, path: AdicPath, n: int) -> bool:
    """x in E_n; levels past the truncation are never exceptional."""
    if n >= path.depth or n >= ctx.num_stages:
        return False
    e = path.edges[n]
    if e.kind == SPACER:
        return True
    return e.kind == TOWER and e.i > ctx.cut[n]


def exceptional_index(ctx: IsoContext, path: AdicPath) -> int:
    """N(x): the last exceptional level, or -1."""
    for n in range(min(path.depth, ctx.num_stages) - 1, -1, -1):
        if in_exceptional(ctx, path, n):
            return n
    return -1


def to_target(ctx: IsoContext, x: AdicPath) -> AdicPath:
    """Map a source path to the target path on the same tower floors."""
    if x.depth > ctx.num_stages:
        raise ValueError(f"path depth {x.depth} exceeds the {ctx.num_stages} stages")
    if x.root == ROOT_SPACER and all(e.kind == DOWN for e in x.edges):
        raise PathError(
            "path stays in the spacer column; its exceptional level is not "
            "visible at this depth"
        )
    n_exc = exceptional_index(ctx, x)
    if n_exc == -1:
        y = AdicPath(ROOT_NONSPACER, x.edges)
        validate_path(ctx.target, y)
        return y
    edges: list[Edge] = [Edge(DOWN)] * n_exc
    e = x.edges[n_exc]
    if e.kind == SPACER and e.i <= ctx.cut[n_exc]:
        edges.append(e)
    else:
        floor = level_indices(ctx.source, x).at(n_exc + 1)
        slot = floor - ctx.heights[n_exc + 1] + ctx.top_run[n_exc]
        if not 0 <= slot < ctx.top_run[n_exc]:
            raise MappingRangeError(
                f"stage {n_exc}: slot {slot} outside the replacement run "
                f"0..{ctx.top_run[n_exc] - 1}"
            )
        edges.append(Edge(SPACER, ctx.cut[n_exc], slot))
    edges.extend(x.edges[n_exc + 1:])
    y = AdicPath(ROOT_SPACER, tuple(edges))
    validate_path(ctx.target, y)
    return y


def to_source(ctx: IsoContext, y: AdicPath) -> AdicPath:
    """Inverse map: recover the source path on the same tower floors."""
    if y.depth > ctx.num_stages:
        raise ValueError(f"path depth {y.depth} exceeds the {ctx.num_stages} stages")
    validate_path(ctx.target, y)
    if y.root == ROOT_NONSPACER:
        x = AdicPath(ROOT_NONSPACER, y.edges)
        validate_path(ctx.source, x)
        return x
    spacer_level = None
    for n, e in enumerate(y.edges):
        if e.kind == SPACER:
            spacer_level = n
            break
    if spacer_level is None:
        raise PathError(
            "image path stays in the spacer column; no preimage at this depth"
        )
    floor = level_indices(ctx.target, y).at(spacer_level + 1)
    prefix = from_tower_coordinates(ctx.source, spacer_level + 1, floor)
    x = AdicPath(prefix.root, prefix.edges + y.edges[spacer_level + 1:])
    validate_path(ctx.source, x)
    return x


def _target_spacer_level(y: AdicPath) -> int:
    """Level of the target path's spacer edge, -1 for column-0 roots."""
    if y.root == ROOT_NONSPACER:
        return -1
    for n, e in enumerate(y.edges):
        if e.kind == SPACER:
            return n
    raise PathError("target path stays in the spacer column")


@dataclass(frozen=True)
class IsoFailure:
    check: str
    detail: str
    witness: AdicPath


@dataclass(frozen=True)
class IsoReport:
    """Outcome of a finite-depth isomorphism check.

    exceptional_mass_terms[n] bounds the mass of E_n from above by
    (sum A_n + max A_n + H_n) / H_{n+1}; their sum converging is the
    evidence that the exceptional sets are asymptotically negligible.
    """

    depth: int
    paths_tested: int
    failures: tuple[IsoFailure, ...]
    exclusions: tuple[tuple[str, int], ...]
    exceptional_mass_terms: tuple[Fraction, ...]

    @property
    def passed(self) -> bool:
        return not self.failures

    def failure_counts(self) -> dict[str, int]:
        counts: Counter[str] = Counter(f.check for f in self.failures)
        return dict(counts)

    def to_json_dict(self) -> dict:
        from .diagram import path_to_json_dict

        return {
            "depth": self.depth,
            "paths_tested": self.paths_tested,
            "passed": self.passed,
            "failure_counts": self.failure_counts(),
            "failures": [
                {
                    "check": f.check,
                    "detail": f.detail,
                    "witness": path_to_json_dict(f.witness),
                }
                for f in self.failures
            ],
            "exclusions": dict(self.exclusions),
            "exceptional_mass_terms": [str(t) for t in self.exceptional_mass_terms],
            "exceptional_mass_partial_sum": str(
                sum(self.exceptional_mass_terms, Fraction(0))
            ),
        }


def verify_isomorphism(
    ctx: IsoContext,
    depth: int,
    samples: int | None = None,
    seed: int | None = None,
) -> IsoReport:
    """Check the map on the level-`depth` fiber of the source diagram.

    Exhaustive when samples is None, otherwise a seeded sample of floor
    numbers.  Per path: the image's spacer level must equal the source's
    last exceptional level, floors must agree above it, the round trip
    must return the path, images must not collide, and taking successors
    must commute with the map.  The only skips are truncation overflows
    (the top floor has no successor inside the diagram); they are
    counted under exclusions.  Mapping errors are recorded as failures,
    never raised.
    """
    if depth > ctx.num_stages:
        raise ValueError(f"depth {depth} exceeds the {ctx.num_stages} stages")
    fiber = heights(ctx.source, depth)[depth]
    if samples is None:
        floors = range(fiber)
    else:
        rng = random.Random(seed)
        floors = sorted(rng.sample(range(fiber), min(samples, fiber)))
    failures: list[IsoFailure] = []
    exclusions: Counter[str] = Counter()
    images: dict[AdicPath, AdicPath] = {}
    tested = 0
    for k in floors:
        x = from_tower_coordinates(ctx.source, depth, k)
        tested += 1
        n_exc = exceptional_index(ctx, x)
        try:
            y = to_target(ctx, x)
        except (PathError, MappingRangeError, ValueError) as exc:
            failures.append(IsoFailure("mapping-error", str(exc), x))
            continue

        try:
            level = _target_spacer_level(y)
            if level != n_exc:
                failures.append(
                    IsoFailure(
                        "level-match",
                        f"image spacer level {level} != last exceptional level {n_exc}",
                        x,
                    )
                )
        except PathError as exc:
            failures.append(IsoFailure("level-match", str(exc), x))

        try:
            jx = level_indices(ctx.source, x)
            jy = level_indices(ctx.target, y)
            lo = max(jx.start, jy.start, n_exc + 1)
            for n in range(lo, depth + 1):
                if jx.at(n) != jy.at(n):
                    failures.append(
                        IsoFailure(
                            "floor-preservation",
                            f"J_{n}: source {jx.at(n)} != target {jy.at(n)}",
                            x,
                        )
                    )
                    break
        except (PathError, ValueError) as exc:
            failures.append(IsoFailure("floor-preservation", str(exc), x))

        try:
            back = to_source(ctx, y)
            if back != x:
                failures.append(
                    IsoFailure("round-trip", "inverse image differs from the path", x)
                )
        except (PathError, MappingRangeError, ValueError) as exc:
            failures.append(IsoFailure("round-trip", str(exc), x))

        if y in images and images[y] != x:
            failures.append(
                IsoFailure("injectivity", "two paths share this image", x)
            )
        images[y] = x

        step_x = successor(ctx.source, x)
        if isinstance(step_x, Overflow):
            exclusions["successor-overflow"] += 1
        else:
            step_y = successor(ctx.target, y)
            if isinstance(step_y, Overflow):
                failures.append(
                    IsoFailure(
                        "equivariance",
                        "image overflowed although the source did not",
                        x,
                    )
                )
            else:
                try:
                    mapped = to_target(ctx, step_x)
                except (PathError, MappingRangeError, ValueError) as exc:
                    failures.append(IsoFailure("equivariance", str(exc), x))
                else:
                    if mapped != step_y:
                        failures.append(
                            IsoFailure(
                                "equivariance",
                                "successor of image differs from image of successor",
                                x,
                            )
                        )

    terms = []
    for n in range(min(depth, ctx.num_stages)):
        st = ctx.source.stage(n)
        terms.append(
            Fraction(st.spacer_sum + max(st.a) + ctx.heights[n], ctx.heights[n + 1])
        )
    return IsoReport(
        depth=depth,
        paths_tested=tested,
        failures=tuple(failures),
        exclusions=tuple(sorted(exclusions.items())),
        exceptional_mass_terms=tuple(terms),
    )
