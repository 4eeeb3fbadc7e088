"""Planar 2-hop broadcast: every point reachable from the source in two hops.

All useful extra disks are centered inside the source disk, so a solution is
the source plus a set of such disks covering the points outside the source
disk.  Those points are ordered by angle around the source; the key fact is
that in an optimal solution each disk's contribution to the boundary of the
covered union is at most two angular runs, which makes a circular-interval
dynamic program over "minimum disks to cover the arc [i, j]" exact.

Works on planar and strip instances alike; no width restriction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from . import geom
from .model import (
    BroadcastSet,
    ContractError,
    InfeasibleError,
    Point,
    StripInstance,
    dist2,
    make_broadcast_set,
    validate_broadcast,
)


@dataclass(frozen=True)
class AngularInstance:
    """Outside points in counterclockwise order plus the candidate disks.

    ``order[i]`` is the input index of the i-th outside point; ``disks`` are
    input indices of candidate centers (inside the source disk, covering at
    least one outside point); ``disks_at[i]`` lists positions into ``disks``
    whose disk covers outside point i; ``covers[d]`` is the coverage bitmask
    of candidate d over outside positions.
    """

    instance: StripInstance
    order: tuple[int, ...]
    disks: tuple[int, ...]
    disks_at: tuple[tuple[int, ...], ...]
    covers: tuple[int, ...]

    @property
    def m(self) -> int:
        return len(self.order)


def _ccw_angle(s: Point, p: Point) -> float:
    a = math.atan2(p.y - s.y, p.x - s.x)
    return a if a >= 0.0 else a + 2.0 * math.pi


def angular_order(instance: StripInstance) -> AngularInstance:
    """Order the outside points CCW and materialize the candidate disks."""
    pts = instance.points
    s = instance.source_point
    outside = [i for i in range(instance.n) if dist2(pts[i], s) > 1.0]
    if not outside:
        raise ContractError(
            "no points outside the source disk; sizes 1-2 apply"
        )
    outside.sort(key=lambda i: (_ccw_angle(s, pts[i]), dist2(pts[i], s), i))
    m = len(outside)
    disks = []
    covers = []
    for c in range(instance.n):
        if c == instance.source or dist2(pts[c], s) > 1.0:
            continue
        mask = 0
        for pos, q in enumerate(outside):
            if dist2(pts[c], pts[q]) <= 1.0:
                mask |= 1 << pos
        if mask:
            disks.append(c)
            covers.append(mask)
    disks_at = []
    for pos in range(m):
        at = tuple(d for d in range(len(disks)) if covers[d] >> pos & 1)
        if not at:
            raise InfeasibleError(
                "a point outside the source disk is coverable by no candidate disk",
                witness=(outside[pos],),
            )
        disks_at.append(at)
    return AngularInstance(
        instance, tuple(outside), tuple(disks), tuple(disks_at), tuple(covers)
    )


def compute_next(ai: AngularInstance, i: int, disk: int | None = None) -> int:
    """First position in the cyclic sequence from i not coverable by one disk.

    With ``disk`` given, the scan is against that candidate; otherwise the
    latest stop over all candidates covering position i is returned.
    """
    m = ai.m
    if disk is not None:
        if not (ai.covers[disk] >> i & 1):
            return i
        for off in range(1, m):
            pos = (i + off) % m
            if not (ai.covers[disk] >> pos & 1):
                return pos
        raise ContractError(
            "candidate disk covers every outside point; sizes <= 2 were missed"
        )
    if not ai.disks_at[i]:
        raise ContractError("position has no covering disk")
    best = None
    best_off = -1
    for d in ai.disks_at[i]:
        pos = compute_next(ai, i, d)
        off = (pos - i) % m
        if off > best_off:
            best_off = off
            best = pos
    return best


def interval_set(ai: AngularInstance, i: int, j: int, disk: int) -> list[tuple[int, int]]:
    """Split pairs induced by the disk's covered runs inside [i, j] beyond its
    initial prefix: one (before-run, after-run) position pair per run."""
    m = ai.m
    length = (j - i) % m + 1
    covered = [bool(ai.covers[disk] >> ((i + off) % m) & 1) for off in range(length)]
    off = 0
    while off < length and covered[off]:
        off += 1
    pairs = []
    while off < length:
        if not covered[off]:
            off += 1
            continue
        start = off
        while off < length and covered[off]:
            off += 1
        a = (i + start) % m
        b = (i + off - 1) % m
        pairs.append(((a - 1) % m, (b + 1) % m))
    return pairs


@dataclass
class CoverTable:
    """Circular-interval cover costs A[(start, length)] with witness choices."""

    ai: AngularInstance
    values: dict[tuple[int, int], int]
    choice: dict[tuple[int, int], tuple]
    next1: dict[int, int]
    nextd: dict[tuple[int, int], int]

    def lookup(self, start: int, length: int) -> int:
        if length <= 0:
            return 0
        return self.values[(start, length)]


def cover_dp(ai: AngularInstance) -> CoverTable:
    """Fill every proper circular interval by increasing length."""
    m = ai.m
    nextd = {}
    for i in range(m):
        for d in ai.disks_at[i]:
            nextd[(i, d)] = compute_next(ai, i, d)
    next1 = {i: compute_next(ai, i) for i in range(m)}

    values: dict[tuple[int, int], int] = {}
    choice: dict[tuple[int, int], tuple] = {}

    def sub(start: int, length: int) -> int:
        return 0 if length <= 0 else values[(start, length)]

    for length in range(1, m):
        for i in range(m):
            j = (i + length - 1) % m
            best = None
            pick = None
            # best single-disk prefix
            nx = next1[i]
            off = (nx - i) % m
            if off >= length:
                d_best = min(
                    d for d in ai.disks_at[i] if (nextd[(i, d)] - i) % m >= length
                )
                best, pick = 1, ("one", d_best)
            else:
                cand = 1 + sub(nx, length - off)
                d_best = min(d for d in ai.disks_at[i] if nextd[(i, d)] == nx)
                best, pick = cand, ("prefix", d_best, (nx, length - off))
                for d in ai.disks_at[i]:
                    nxd = nextd[(i, d)]
                    offd = (nxd - i) % m
                    if offd >= length:
                        if 1 < best:
                            best, pick = 1, ("one", d)
                        continue
                    for a, b in interval_set(ai, i, j, d):
                        offa = (a - i) % m
                        offb = (b - i) % m
                        left_len = offa - offd + 1
                        right_len = length - offb
                        cand = 1 + sub(nxd, left_len) + (
                            sub(b, right_len) if right_len > 0 else 0
                        )
                        if cand < best:
                            best = cand
                            pick = (
                                "pair",
                                d,
                                (nxd, left_len),
                                (b, right_len),
                            )
            values[(i, length)] = best
            choice[(i, length)] = pick
    return CoverTable(ai, values, choice, next1, nextd)


def _collect_disks(table: CoverTable, start: int, length: int, out: set[int]) -> None:
    if length <= 0:
        return
    pick = table.choice[(start, length)]
    if pick[0] == "one":
        out.add(pick[1])
    elif pick[0] == "prefix":
        out.add(pick[1])
        _collect_disks(table, *pick[2], out)
    else:
        out.add(pick[1])
        _collect_disks(table, *pick[2], out)
        _collect_disks(table, *pick[3], out)


def solve_two_hop(instance: StripInstance) -> BroadcastSet:
    """Minimum 2-hop broadcast set for a planar (or strip) instance."""
    pts = instance.points
    s = instance.source
    sp = instance.source_point
    outside = [i for i in range(instance.n) if dist2(pts[i], sp) > 1.0]
    if not outside:
        return make_broadcast_set(instance, [s])
    inside = [i for i in range(instance.n) if dist2(pts[i], sp) <= 1.0]
    mask = geom.intersection_mask([pts[i] for i in outside], [pts[i] for i in inside])
    for i, ok in zip(inside, mask):
        if ok and i != s:
            return make_broadcast_set(instance, [s, i])

    ai = angular_order(instance)
    table = cover_dp(ai)
    m = ai.m
    if m == 1:  # single outside point but no size-2 solution cannot happen
        raise AssertionError("unreachable: one outside point implies a size-2 solution")
    best = None
    split = None
    for i in range(m):
        for length in range(1, m):
            total = table.lookup(i, length) + table.lookup((i + length) % m, m - length)
            if best is None or total < best:
                best = total
                split = (i, length)
    disks: set[int] = set()
    i, length = split
    _collect_disks(table, i, length, disks)
    _collect_disks(table, (i + length) % m, m - length, disks)
    active = [s] + [ai.disks[d] for d in sorted(disks)]
    result = make_broadcast_set(instance, active)
    report = validate_broadcast(instance, result, hops=2)
    if not report.valid:
        raise AssertionError(
            f"internal error: 2-hop solver produced an invalid set {result.active}"
        )
    return result


# --- test instrumentation: boundary sequence and star shape ----------------


def _ray_exit(
    s: Point, direction: tuple[float, float], centers: Sequence[tuple[int, Point]]
) -> tuple[float, list[int]]:
    """Leave-point of the ray from s through the union of unit disks.

    Returns (t_exit, indices of disks whose boundary passes through it).
    The ray is parametrized s + t * direction with |direction| = 1.
    """
    spans = []
    for idx, c in centers:
        # |s + t d - c|^2 = 1
        fx = s.x - c.x
        fy = s.y - c.y
        b = fx * direction[0] + fy * direction[1]
        cc = fx * fx + fy * fy - 1.0
        disc = b * b - cc
        if disc < 0.0:
            continue
        r = math.sqrt(disc)
        spans.append((-b - r, -b + r, idx))
    reach = 0.0
    grown = True
    while grown:
        grown = False
        for t0, t1, _ in spans:
            if t0 <= reach < t1:
                reach = t1
                grown = True
    owners = [idx for t0, t1, idx in spans if t1 == reach]
    return reach, owners


def boundary_sequence(instance: StripInstance, active: BroadcastSet) -> list[int]:
    """Deduplicated circular sequence of boundary owners around the source.

    For each outside point in CCW order, shoot a ray from the source through
    it and record which active disk's boundary the ray exits the union at
    (ties by smallest index).  Consecutive duplicates are merged circularly.
    """
    pts = instance.points
    s = instance.source_point
    outside = sorted(
        (i for i in range(instance.n) if dist2(pts[i], s) > 1.0),
        key=lambda i: (_ccw_angle(s, pts[i]), dist2(pts[i], s), i),
    )
    centers = [(i, pts[i]) for i in active.active]
    seq = []
    for q in outside:
        d = math.sqrt(dist2(pts[q], s))
        direction = ((pts[q].x - s.x) / d, (pts[q].y - s.y) / d)
        _, owners = _ray_exit(s, direction, centers)
        if not owners:
            raise AssertionError(f"ray through point {q} never inside the union")
        seq.append(min(owners))
    dedup: list[int] = []
    for v in seq:
        if not dedup or dedup[-1] != v:
            dedup.append(v)
    while len(dedup) > 1 and dedup[0] == dedup[-1]:
        dedup.pop()
    return dedup


def sigma_properties_ok(sigma: list[int]) -> bool:
    """Each owner appears at most twice and no two owners interleave."""
    from collections import Counter

    counts = Counter(sigma)
    if any(v > 2 for v in counts.values()):
        return False
    pos: dict[int, list[int]] = {}
    for i, v in enumerate(sigma):
        pos.setdefault(v, []).append(i)
    doubles = [v for v, ps in pos.items() if len(ps) == 2]
    for x in doubles:
        a, b = pos[x]
        for y in doubles:
            if y == x:
                continue
            c, d = pos[y]
            inside_c = a < c < b
            inside_d = a < d < b
            if inside_c != inside_d:
                return False
    return True


def star_shape_ok(
    instance: StripInstance, active: BroadcastSet, rng, samples: int = 1000
) -> bool:
    """Sampled check: segments from the source into the union stay inside it."""
    pts = instance.points
    s = instance.source_point
    centers = [pts[i] for i in active.active]
    for _ in range(samples):
        c = centers[rng.randrange(len(centers))]
        ang = rng.uniform(0.0, 2.0 * math.pi)
        rad = math.sqrt(rng.uniform(0.0, 1.0))
        z = Point(c.x + rad * math.cos(ang), c.y + rad * math.sin(ang))
        for step in range(1, 21):
            t = step / 20.0
            m = Point(s.x + t * (z.x - s.x), s.y + t * (z.y - s.y))
            if all(dist2(m, ctr) > 1.0 for ctr in centers):
                return False
    return True
