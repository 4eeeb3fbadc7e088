"""Core data types: strip instances, unit-disk graphs, hop levels, validation.

Everything downstream (the narrow/hop/two-hop/wide solvers and the brute-force
oracle) works on the immutable types defined here.  Conventions:

* instances are normalized on construction: the source is translated to x = 0
  and coordinates are rescaled so the transmission radius is 1;
* adjacency is the closed unit disk, decided by exact squared-distance
  comparison in double precision (no epsilon);
* a "narrow" strip has width <= sqrt(3)/2, where every unit disk covers a
  full-width slab of the strip at least 1 unit long.
"""

from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

NARROW_LIMIT = math.sqrt(3.0) / 2.0
INF = math.inf

# Pairwise distances closer than this to the radius make the graph depend on
# the last ulps of the input; the loader flags such instances instead of
# silently picking a side.
FRAGILE_TOL = 1e-9


class InstanceError(ValueError):
    """Malformed input: bad coordinates, indices, widths, candidate sets."""


class InfeasibleError(Exception):
    """The instance admits no broadcast set under the given constraints."""

    def __init__(self, reason: str, witness: tuple = ()):
        super().__init__(reason)
        self.reason = reason
        self.witness = tuple(witness)


class ContractError(RuntimeError):
    """An operation was invoked outside its stated precondition."""


@dataclass(frozen=True, order=True)
class Point:
    x: float
    y: float

    def __iter__(self):
        yield self.x
        yield self.y


def dist2(p: Point, q: Point) -> float:
    dx = p.x - q.x
    dy = p.y - q.y
    return dx * dx + dy * dy


@dataclass(frozen=True)
class StripInstance:
    """A normalized problem instance.

    ``width`` is None for planar (unbounded) instances.  After normalization
    the source sits at x = 0 and the radius is 1; ``fragile`` marks instances
    with a pairwise distance within FRAGILE_TOL of the radius.
    """

    points: tuple[Point, ...]
    source: int
    width: float | None = None
    hops: int | None = None
    fragile: bool = field(default=False, compare=False)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def source_point(self) -> Point:
        return self.points[self.source]

    def is_narrow(self) -> bool:
        return self.width is not None and self.width <= NARROW_LIMIT


def make_instance(
    coords: Sequence[tuple[float, float]] | Sequence[Point],
    source: int = 0,
    width: float | None = None,
    radius: float = 1.0,
    hops: int | None = None,
    warn_fragile: bool = True,
) -> StripInstance:
    """Validate, normalize (source to x=0, radius to 1) and freeze an instance."""
    pts = [p if isinstance(p, Point) else Point(float(p[0]), float(p[1])) for p in coords]
    if not pts:
        raise InstanceError("instance needs at least one point")
    if not 0 <= source < len(pts):
        raise InstanceError(f"source index {source} out of range 0..{len(pts) - 1}")
    for i, p in enumerate(pts):
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise InstanceError(f"point {i} has non-finite coordinates")
    if radius <= 0 or not math.isfinite(radius):
        raise InstanceError("radius must be positive and finite")
    if width is not None:
        if width <= 0 or not math.isfinite(width):
            raise InstanceError("width must be positive (or None for planar)")
    if hops is not None and hops < 1:
        raise InstanceError("hop bound must be a positive integer")

    sx = pts[source].x
    if sx != 0.0:
        pts = [Point(p.x - sx, p.y) for p in pts]
    if radius != 1.0:
        pts = [Point(p.x / radius, p.y / radius) for p in pts]
        if width is not None:
            width = width / radius
    if width is not None:
        for i, p in enumerate(pts):
            if not 0.0 <= p.y <= width:
                raise InstanceError(f"point {i} lies outside the strip [0, {width}]")

    fragile = _is_fragile(pts)
    if fragile and warn_fragile:
        warnings.warn(
            "instance has a pairwise distance within 1e-9 of the radius; "
            "the adjacency of such pairs is decided by the last bits of the input",
            stacklevel=2,
        )
    return StripInstance(tuple(pts), source, width, hops, fragile)


def _is_fragile(pts: Sequence[Point]) -> bool:
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = math.sqrt(dist2(pts[i], pts[j]))
            if abs(d - 1.0) < FRAGILE_TOL:
                return True
    return False


@dataclass(frozen=True)
class UnitDiskGraph:
    n: int
    adj: tuple[frozenset[int], ...]

    def neighbors(self, i: int) -> frozenset[int]:
        return self.adj[i]

    def adjacent(self, i: int, j: int) -> bool:
        return j in self.adj[i]


def build_graph(instance: StripInstance) -> UnitDiskGraph:
    """Closed-disk adjacency: (p, q) is an edge iff dist(p, q) <= 1 exactly."""
    pts = instance.points
    n = len(pts)
    for i, p in enumerate(pts):
        if not (math.isfinite(p.x) and math.isfinite(p.y)):
            raise InstanceError(f"point {i} has non-finite coordinates")
    nbrs: list[set[int]] = [set() for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if dist2(pts[i], pts[j]) <= 1.0:
                nbrs[i].add(j)
                nbrs[j].add(i)
    return UnitDiskGraph(n, tuple(frozenset(s) for s in nbrs))


@dataclass(frozen=True)
class LevelPartition:
    """BFS hop levels from the source, split by the sign of x.

    ``level[i]`` is the hop distance of point i (math.inf if unreachable).
    ``levels[d]`` lists the points at distance d; ``minus``/``plus`` split each
    level into x < 0 and x >= 0 parts.
    """

    level: tuple[float, ...]
    levels: tuple[tuple[int, ...], ...]
    minus: tuple[tuple[int, ...], ...]
    plus: tuple[tuple[int, ...], ...]
    unreachable: tuple[int, ...]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1


def compute_levels(
    instance: StripInstance,
    graph: UnitDiskGraph | None = None,
    source: int | None = None,
) -> LevelPartition:
    """BFS levels from the source; asserts the narrow-strip level-overlap bound."""
    if graph is None:
        graph = build_graph(instance)
    src = instance.source if source is None else source
    n = graph.n
    level: list[float] = [INF] * n
    level[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in graph.adj[u]:
            if level[v] == INF:
                level[v] = level[u] + 1
                queue.append(v)
    depth = max((int(d) for d in level if d != INF), default=0)
    levels: list[list[int]] = [[] for _ in range(depth + 1)]
    unreachable = []
    for i, d in enumerate(level):
        if d == INF:
            unreachable.append(i)
        else:
            levels[int(d)].append(i)
    pts = instance.points
    minus = tuple(tuple(i for i in lv if pts[i].x < 0.0) for lv in levels)
    plus = tuple(tuple(i for i in lv if pts[i].x >= 0.0) for lv in levels)
    part = LevelPartition(
        tuple(level),
        tuple(tuple(lv) for lv in levels),
        minus,
        plus,
        tuple(unreachable),
    )
    if instance.is_narrow():
        _check_level_overlap(instance, part)
    return part


def _check_level_overlap(instance: StripInstance, part: LevelPartition) -> None:
    # On narrow strips neighboring levels overlap by at most 1/2 in x.
    pts = instance.points
    for i in range(1, len(part.levels)):
        if part.plus[i] and part.plus[i - 1]:
            hi_prev = max(pts[j].x for j in part.plus[i - 1])
            lo_cur = min(pts[j].x for j in part.plus[i])
            if hi_prev > lo_cur + 0.5:
                raise ContractError(
                    f"level overlap bound violated on the right at level {i}"
                )
        if part.minus[i] and part.minus[i - 1]:
            lo_prev = min(pts[j].x for j in part.minus[i - 1])
            hi_cur = max(pts[j].x for j in part.minus[i])
            if lo_prev < hi_cur - 0.5:
                raise ContractError(
                    f"level overlap bound violated on the left at level {i}"
                )


@dataclass(frozen=True)
class BroadcastSet:
    """A candidate solution: a sorted index set that contains the source."""

    active: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.active)

    def __contains__(self, i: int) -> bool:
        return i in set(self.active)


def make_broadcast_set(instance: StripInstance, indices: Iterable[int]) -> BroadcastSet:
    idx = sorted(set(int(i) for i in indices))
    if any(i < 0 or i >= instance.n for i in idx):
        raise InstanceError("active index out of range")
    if instance.source not in idx:
        raise InstanceError("active set must contain the source")
    return BroadcastSet(tuple(idx))


@dataclass(frozen=True)
class ValidationReport:
    is_dominating: bool
    is_connected: bool
    max_hops_needed: float
    hops_ok: bool | None
    witnesses: tuple[int, ...]

    @property
    def valid(self) -> bool:
        return self.is_dominating and self.is_connected and self.hops_ok is not False


def validate_broadcast(
    instance: StripInstance,
    candidate: BroadcastSet | Iterable[int],
    graph: UnitDiskGraph | None = None,
    hops: int | None = None,
) -> ValidationReport:
    """Check domination, connectivity, and the hop count of a candidate set.

    ``max_hops_needed`` is the worst shortest-path length from the source
    where only active points may relay (the endpoint itself may be inactive).
    The hop bound checked is the ``hops`` argument, else the instance's.
    """
    if graph is None:
        graph = build_graph(instance)
    if isinstance(candidate, BroadcastSet):
        active = set(candidate.active)
    else:
        active = set(int(i) for i in candidate)
    if any(i < 0 or i >= instance.n for i in active):
        raise InstanceError("active index out of range")
    if instance.source not in active:
        raise InstanceError("active set must contain the source")
    n = graph.n
    src = instance.source

    uncovered = [
        i for i in range(n) if i not in active and not (graph.adj[i] & active)
    ]
    is_dominating = not uncovered

    seen = {src}
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in graph.adj[u]:
            if v in active and v not in seen:
                seen.add(v)
                queue.append(v)
    stranded = sorted(active - seen)
    is_connected = not stranded

    # BFS where only active vertices relay; inactive points are absorbing.
    dist: list[float] = [INF] * n
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in graph.adj[u]:
            if dist[v] == INF:
                dist[v] = dist[u] + 1
                if v in active:
                    queue.append(v)
    max_hops = max(dist)

    bound = hops if hops is not None else instance.hops
    hops_ok = None if bound is None else max_hops <= bound
    witnesses = tuple(uncovered + stranded)
    return ValidationReport(is_dominating, is_connected, max_hops, hops_ok, witnesses)


Rect = tuple[float, float, float, float]  # (x0, x1, y0, y1)


def core_region(instance: StripInstance, p: Point | int) -> Rect:
    """Full-width rectangle [x-1/2, x+1/2] x [0, w]; inside delta(p) when narrow."""
    if instance.width is None or instance.width > NARROW_LIMIT:
        raise ContractError("core regions are only defined on narrow strips")
    if isinstance(p, int):
        p = instance.points[p]
    return (p.x - 0.5, p.x + 0.5, 0.0, instance.width)


def in_rect(rect: Rect, q: Point) -> bool:
    x0, x1, y0, y1 = rect
    return x0 <= q.x <= x1 and y0 <= q.y <= y1
