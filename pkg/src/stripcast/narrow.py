"""Minimum broadcast in strips of width <= sqrt(3)/2.

The solver checks the three possible structures of an optimum in order:

* small: {s} alone, or {s, p} with one disk covering everything outside the
  source disk;
* bidirectional: {s, p, p'} with both extra centers inside the source core,
  one covering a y-prefix of each side's outside points and the other the
  complementary suffixes;
* path-like: a shortest path from s to the right-covering set plus a shortest
  path to the left-covering set, sharing at most their second vertex.

Path-like solutions are found by levelling the points backwards from the
covering sets, window-restricted so the whole loop stays near-linear.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import geom
from .model import (
    BroadcastSet,
    ContractError,
    InfeasibleError,
    Point,
    StripInstance,
    UnitDiskGraph,
    build_graph,
    compute_levels,
    core_region,
    dist2,
    in_rect,
    make_broadcast_set,
    validate_broadcast,
)


@dataclass(frozen=True)
class CoveringSets:
    """Right-/left-covering points: adjacent to every farther outside point."""

    q_plus: tuple[int, ...]
    q_minus: tuple[int, ...]
    outside: tuple[int, ...]  # points outside the source disk


@dataclass(frozen=True)
class BackwardLevels:
    """Backward hop levels from a covering set toward the source disk.

    ``levels[0]`` is the covering set itself; ``levels[i]`` holds the points
    whose shortest path to it has i hops, restricted to the moving window.
    ``reached`` is False when the loop died out before touching the source
    disk (disconnected side).
    """

    side: str
    levels: tuple[tuple[int, ...], ...]
    reached: bool

    @property
    def hops(self) -> int:
        return len(self.levels)


def _require_narrow(instance: StripInstance) -> None:
    if not instance.is_narrow():
        raise ContractError("this solver requires a strip of width <= sqrt(3)/2")


def _outside_indices(instance: StripInstance) -> list[int]:
    s = instance.source_point
    return [
        i for i, p in enumerate(instance.points) if dist2(p, s) > 1.0
    ]


def compute_covering_sets(
    instance: StripInstance, fast: bool = False
) -> CoveringSets:
    """Classify points into right-/left-covering via the three-zone split.

    A point with x within 1/2 of the farthest outside point covers everything
    farther by the core property; a point more than 1 before it cannot reach
    it; the half-unit zone between is resolved by an intersection-membership
    query against the outside points of the leading half-unit zone.
    """
    _require_narrow(instance)
    pts = instance.points
    outside = _outside_indices(instance)
    if not outside:
        inside = tuple(i for i in range(instance.n))
        return CoveringSets(inside, inside, ())

    def one_side(sign: int) -> tuple[int, ...]:
        # sign +1: right-covering (anchor = max x); -1: mirrored.
        anchor = max(pts[i].x * sign for i in outside)
        covering = set(i for i in range(instance.n) if pts[i].x * sign >= anchor - 0.5)
        middle = [
            i
            for i in range(instance.n)
            if anchor - 1.0 <= pts[i].x * sign < anchor - 0.5
        ]
        if middle:
            lead = [i for i in outside if pts[i].x * sign >= anchor - 0.5]
            mask = geom.intersection_mask(
                [pts[i] for i in lead], [pts[i] for i in middle], fast=fast
            )
            covering.update(i for i, ok in zip(middle, mask) if ok)
        return tuple(sorted(covering))

    return CoveringSets(one_side(+1), one_side(-1), tuple(outside))


def covering_sets_oracle(instance: StripInstance) -> CoveringSets:
    """Definitional O(n^2) scan (test oracle for compute_covering_sets)."""
    pts = instance.points
    outside = _outside_indices(instance)
    if not outside:
        inside = tuple(i for i in range(instance.n))
        return CoveringSets(inside, inside, ())
    q_plus = tuple(
        i
        for i in range(instance.n)
        if all(
            dist2(pts[i], pts[j]) <= 1.0
            for j in outside
            if pts[j].x > pts[i].x
        )
    )
    q_minus = tuple(
        i
        for i in range(instance.n)
        if all(
            dist2(pts[i], pts[j]) <= 1.0
            for j in outside
            if pts[j].x < pts[i].x
        )
    )
    return CoveringSets(q_plus, q_minus, tuple(outside))


def find_small(instance: StripInstance, fast: bool = False) -> BroadcastSet | None:
    """Solution of size 1 ({s} dominates) or 2 ({s, p} with p covering the rest)."""
    pts = instance.points
    s = instance.source
    outside = _outside_indices(instance)
    if not outside:
        return make_broadcast_set(instance, [s])
    inside = [i for i in range(instance.n) if i not in set(outside)]
    mask = geom.intersection_mask(
        [pts[i] for i in outside], [pts[i] for i in inside], fast=fast
    )
    for i, ok in zip(inside, mask):
        if ok:
            return make_broadcast_set(instance, [s, i])
    return None


def find_bidirectional(
    instance: StripInstance, fast: bool = False
) -> BroadcastSet | None:
    """Size-3 solution {s, p, p'} with both centers in the source core.

    p must cover a y-prefix of each side's outside points and p' the
    complementary suffixes; existence is decided by a dominance sweep over
    the prefix/suffix coverage numbers, the reported pair by the first
    feasible pair in index order.
    """
    _require_narrow(instance)
    pts = instance.points
    outside = _outside_indices(instance)
    if not outside:
        return None
    core = core_region(instance, instance.source)
    cand = [i for i in range(instance.n) if in_rect(core, pts[i])]
    if len(cand) < 2:
        return None

    def side_points(sign: int) -> list[Point]:
        idx = [i for i in outside if pts[i].x * sign > 0.0]
        idx.sort(key=lambda i: (pts[i].y, i))
        return [pts[i] for i in idx]

    left = geom.build_z_structure(side_points(-1), core)
    right = geom.build_z_structure(side_points(+1), core)
    zvals = {}
    for i in cand:
        zl = geom.query_z(left, pts[i])
        zr = geom.query_z(right, pts[i])
        zvals[i] = (zl.z_le, zl.z_gt, zr.z_le, zr.z_gt)

    def pair_ok(a: int, b: int) -> bool:
        # a takes the prefixes, b the suffixes
        return zvals[a][0] >= zvals[b][1] and zvals[a][2] >= zvals[b][3]

    # dominance sweep: sort suffix candidates by left-suffix need, grow the
    # prefix pool, track the best right-prefix coverage seen so far
    by_need = sorted(cand, key=lambda i: zvals[i][1], reverse=True)
    by_cover = sorted(cand, key=lambda i: zvals[i][0], reverse=True)
    best_right = -1
    ptr = 0
    found = False
    for b in by_need:
        need_left = zvals[b][1]
        while ptr < len(by_cover) and zvals[by_cover[ptr]][0] >= need_left:
            best_right = max(best_right, zvals[by_cover[ptr]][2])
            ptr += 1
        if best_right >= zvals[b][3] and any(
            pair_ok(a, b) and a != b for a in by_cover[:ptr]
        ):
            found = True
            break
    if not found:
        return None
    for a in cand:
        for b in cand:
            if a < b and (pair_ok(a, b) or pair_ok(b, a)):
                return make_broadcast_set(instance, [instance.source, a, b])
    return None


def backward_level_sets(
    instance: StripInstance,
    side: str,
    covering: CoveringSets | None = None,
    fast: bool = False,
    debug: bool = False,
) -> BackwardLevels:
    """Level the points backwards from one covering set toward the source disk."""
    _require_narrow(instance)
    if covering is None:
        covering = compute_covering_sets(instance, fast=fast)
    if side not in ("+", "-"):
        raise ContractError("side must be '+' or '-'")
    sign = 1.0 if side == "+" else -1.0
    pts = instance.points
    s = instance.source_point
    first = covering.q_plus if side == "+" else covering.q_minus
    if not first:
        raise ContractError("backward levelling needs a nonempty covering set")

    levels = [tuple(first)]
    pool = [i for i in range(instance.n) if i not in set(first)]
    while True:
        cur = levels[-1]
        if any(dist2(pts[i], s) <= 1.0 for i in cur):
            return BackwardLevels(side, tuple(levels), True)
        if not cur:
            return BackwardLevels(side, tuple(levels[:-1]), False)
        inner = min(pts[i].x * sign for i in cur)
        window = [i for i in pool if pts[i].x * sign >= inner - 1.0]
        mask = geom.union_mask(
            [pts[i] for i in cur], [pts[i] for i in window], fast=fast
        )
        nxt = tuple(i for i, ok in zip(window, mask) if ok)
        if debug and nxt:
            _check_window_span(instance, sign, window, levels, nxt)
        taken = set(nxt)
        pool = [i for i in pool if i not in taken]
        levels.append(nxt)


def _check_window_span(instance, sign, window, levels, nxt) -> None:
    # the window is consumed within two further rounds; cheap sanity check
    pts = instance.points
    s = instance.source_point
    rest = [i for i in window if i not in set(nxt)]
    if not rest:
        return
    reach = set(nxt)
    for _ in range(2):
        frontier = [
            i
            for i in rest
            if i not in reach
            and any(dist2(pts[i], pts[j]) <= 1.0 for j in reach)
        ]
        reach.update(frontier)
    stuck = [i for i in rest if i not in reach and dist2(pts[i], s) > 1.0]
    if stuck:
        raise ContractError(f"window points {stuck} not absorbed within two levels")


def walk_backward_path(
    instance: StripInstance, back: BackwardLevels, start: int
) -> list[int]:
    """Path from a point of the last backward level down to the covering set."""
    pts = instance.points
    path = [start]
    for depth in range(back.hops - 2, -1, -1):
        cur = path[-1]
        step = min(
            i for i in back.levels[depth] if dist2(pts[i], pts[cur]) <= 1.0
        )
        path.append(step)
    return path


def solve_narrow(instance: StripInstance, fast: bool = False) -> BroadcastSet:
    """Minimum broadcast set on a narrow strip."""
    result, _ = solve_narrow_detailed(instance, fast=fast)
    return result


def solve_narrow_detailed(
    instance: StripInstance, fast: bool = False
) -> tuple[BroadcastSet, dict]:
    """Like solve_narrow, also reporting the structure class and path witnesses."""
    _require_narrow(instance)
    graph = build_graph(instance)
    part = compute_levels(instance, graph)
    if part.unreachable:
        raise InfeasibleError(
            "graph is disconnected; no broadcast set exists",
            witness=part.unreachable,
        )

    small = find_small(instance, fast=fast)
    if small is not None:
        return small, {"kind": "small"}
    bidi = find_bidirectional(instance, fast=fast)
    if bidi is not None:
        _must_be_valid(instance, graph, bidi)
        return bidi, {"kind": "bidirectional"}

    covering = compute_covering_sets(instance, fast=fast)
    pts = instance.points
    s = instance.source
    sp = instance.source_point
    sides: dict[str, BackwardLevels] = {}
    for side, sign in (("+", 1.0), ("-", -1.0)):
        if any(pts[i].x * sign > 0.0 for i in covering.outside):
            back = backward_level_sets(instance, side, covering, fast=fast)
            if not back.reached:
                raise InfeasibleError(
                    f"side {side} cannot be reached from the source disk",
                    witness=back.levels[0],
                )
            sides[side] = back

    active = {s}
    paths: dict[str, list[int]] = {}
    if len(sides) == 2:
        bp, bm = sides["+"], sides["-"]
        shared = [
            i
            for i in bp.levels[-1]
            if i in set(bm.levels[-1]) and dist2(pts[i], sp) <= 1.0
        ]
        if shared:
            second = min(shared)
            paths["+"] = [s] + walk_backward_path(instance, bp, second)
            paths["-"] = [s] + walk_backward_path(instance, bm, second)
        else:
            start_p = min(i for i in bp.levels[-1] if dist2(pts[i], sp) <= 1.0)
            start_m = min(i for i in bm.levels[-1] if dist2(pts[i], sp) <= 1.0)
            paths["+"] = [s] + walk_backward_path(instance, bp, start_p)
            paths["-"] = [s] + walk_backward_path(instance, bm, start_m)
    else:
        side, back = next(iter(sides.items()))
        start = min(i for i in back.levels[-1] if dist2(pts[i], sp) <= 1.0)
        paths[side] = [s] + walk_backward_path(instance, back, start)

    for path in paths.values():
        active.update(path)
    result = make_broadcast_set(instance, active)
    _must_be_valid(instance, graph, result)
    return result, {"kind": "path", "paths": paths}


def _must_be_valid(
    instance: StripInstance, graph: UnitDiskGraph, result: BroadcastSet
) -> None:
    report = validate_broadcast(instance, result, graph, hops=None)
    if not (report.is_dominating and report.is_connected):
        raise AssertionError(
            f"internal error: produced an invalid set {result.active}, "
            f"witnesses {report.witnesses}"
        )
