"""Broadcast on strips of arbitrary width via a window-frontier DP.

The state at anchor k is the set of active points inside the two 2-by-w
windows [-k-1, -k+1] and [k-1, k+1], together with the partition of those
points into connectivity classes of the graph spanned by all actives chosen
so far.  Advancing the anchor adds fresh actives from the newly exposed
1-wide slabs, re-derives the partition by union-find (old classes restricted
to surviving points, plus edges incident to fresh points), and checks that
the newly interior slabs are dominated.

A class with no representative in the leading slabs can never reconnect, so
such states are dropped - except when the class is the only one, which covers
solutions whose actives end before the strip does.  Acceptance at the final
anchor requires at most one class and all input points dominated.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .model import (
    BroadcastSet,
    ContractError,
    InfeasibleError,
    StripInstance,
    build_graph,
    compute_levels,
    dist2,
    make_broadcast_set,
    make_instance,
    validate_broadcast,
)


class TractabilityError(RuntimeError):
    """A window holds more candidate points than the configured cap."""


def mu(width: float) -> int:
    """Density cap: max actives of some optimum inside any 2-by-w window."""
    if width <= 0:
        raise ContractError("width must be positive")
    return math.floor(32.0 * width / math.sqrt(3.0) + 14.0)


@dataclass(frozen=True)
class WindowState:
    """Frontier actives and their connectivity partition at anchor k."""

    k: int
    active: frozenset[int]
    classes: tuple[frozenset[int], ...]


def _canonical(classes) -> tuple[frozenset[int], ...]:
    return tuple(sorted((frozenset(c) for c in classes), key=lambda c: min(c)))


def _in_window(x: float, k: int) -> bool:
    return (-k - 1.0 <= x <= -k + 1.0) or (k - 1.0 <= x <= k + 1.0)


def _in_leading(x: float, k: int) -> bool:
    return (k <= x <= k + 1.0) or (-k - 1.0 <= x <= -k)


def _components(instance: StripInstance, members: frozenset[int]):
    pts = instance.points
    seen: set[int] = set()
    comps = []
    for start in sorted(members):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in members:
                if v not in comp and dist2(pts[u], pts[v]) <= 1.0:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        comps.append(frozenset(comp))
    return _canonical(comps)


def _induced_partition(
    instance: StripInstance, prev: WindowState, cur_active: frozenset[int]
) -> tuple[frozenset[int], ...]:
    """Partition of cur_active: old classes on surviving points, closed under
    edges incident to points that were not in the previous windows."""
    pts = instance.points
    parent = {i: i for i in cur_active}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    fresh = {i for i in cur_active if not _in_window(pts[i].x, prev.k)}
    for cls in prev.classes:
        kept = [i for i in cls if i in cur_active]
        for a, b in zip(kept, kept[1:]):
            union(a, b)
    cur_list = sorted(cur_active)
    for ai, a in enumerate(cur_list):
        for b in cur_list[ai + 1 :]:
            if (a in fresh or b in fresh) and dist2(pts[a], pts[b]) <= 1.0:
                union(a, b)
    groups: dict[int, set[int]] = {}
    for i in cur_active:
        groups.setdefault(find(i), set()).add(i)
    return _canonical(groups.values())


def compatible(
    instance: StripInstance, prev: WindowState, cur: WindowState
) -> bool:
    """Whether cur can directly extend prev (anchors k and k+1)."""
    if cur.k != prev.k + 1:
        raise ContractError("compatibility is defined for consecutive anchors")
    pts = instance.points
    if {i for i in prev.active if _in_window(pts[i].x, cur.k)} != {
        i for i in cur.active if _in_window(pts[i].x, prev.k)
    }:
        return False
    return _induced_partition(instance, prev, cur.active) == cur.classes


def _subsets(items: list[int], max_extra: int):
    for r in range(0, min(len(items), max_extra) + 1):
        yield from combinations(items, r)


def solve_wide(instance: StripInstance, cap: int = 16) -> BroadcastSet:
    """Minimum broadcast set on a strip of any width."""
    if instance.width is None:
        raise ContractError("the window DP requires a finite strip width")
    graph = build_graph(instance)
    part = compute_levels(instance, graph)
    if part.unreachable:
        raise InfeasibleError(
            "graph is disconnected; no broadcast set exists",
            witness=part.unreachable,
        )
    pts = instance.points
    src = instance.source
    density = mu(instance.width)
    k_final = math.ceil(max(abs(p.x) for p in pts))

    for k in range(k_final + 1):
        for lo, hi, name in (
            (k - 1.0, k + 1.0, f"[{k - 1}, {k + 1}]"),
            (-k - 1.0, -k + 1.0, f"[{-k - 1}, {-k + 1}]"),
        ):
            load = sum(1 for p in pts if lo <= p.x <= hi)
            if load > cap:
                raise TractabilityError(
                    f"window {name} holds {load} candidate points (cap {cap})"
                )

    # states: (active, classes) -> (cost, parent_key_at_prev_k)
    seed_pool = [i for i in range(instance.n) if _in_window(pts[i].x, 0)]
    must_cover = [i for i in range(instance.n) if pts[i].x == 0.0]
    states: dict[tuple, tuple[int, tuple | None]] = {}
    others = [i for i in seed_pool if i != src]
    for extra in _subsets(others, density - 1):
        active = frozenset((src, *extra))
        if any(
            all(dist2(pts[q], pts[a]) > 1.0 for a in active) for q in must_cover
        ):
            continue
        key = (active, _components(instance, active))
        cost = len(active)
        if key not in states or cost < states[key][0]:
            states[key] = (cost, None)

    trail: list[dict[tuple, tuple[int, tuple | None]]] = [states]
    for k in range(1, k_final + 1):
        fresh_pool = sorted(
            i
            for i in range(instance.n)
            if _in_window(pts[i].x, k) and not _in_window(pts[i].x, k - 1)
        )
        newly_required = [
            i
            for i in range(instance.n)
            if (k - 1.0 < pts[i].x <= k) or (-k <= pts[i].x < -k + 1.0)
        ]
        nxt: dict[tuple, tuple[int, tuple | None]] = {}
        for (p_active, p_classes), (p_cost, _) in states.items():
            carried = frozenset(i for i in p_active if _in_window(pts[i].x, k))
            # once the frontier empties, fresh actives could never reconnect
            sealed = len(carried) == 0
            pools = [()] if sealed else list(_subsets(fresh_pool, density))
            prev_state = WindowState(k - 1, p_active, p_classes)
            for extra in pools:
                active = carried | frozenset(extra)
                if len(active) > density:
                    continue
                helpers = active | p_active
                if any(
                    q not in helpers
                    and all(dist2(pts[q], pts[a]) > 1.0 for a in helpers)
                    for q in newly_required
                ):
                    continue
                classes = _induced_partition(instance, prev_state, active)
                if len(classes) > 1 and any(
                    not any(_in_leading(pts[i].x, k) for i in cls)
                    for cls in classes
                ):
                    continue
                key = (active, classes)
                cost = p_cost + len(extra)
                if key not in nxt or cost < nxt[key][0]:
                    nxt[key] = (cost, (p_active, p_classes))
        states = nxt
        trail.append(states)
        if not states:
            raise InfeasibleError("window DP ran out of states before the end")

    finals = {
        key: val for key, val in states.items() if len(key[1]) <= 1
    }
    if not finals:
        raise InfeasibleError("no connected dominating trajectory reaches the end")
    best_key = min(
        finals,
        key=lambda key: (
            finals[key][0],
            sorted(key[0]),
            [sorted(c) for c in key[1]],
        ),
    )

    # walk the trail backwards collecting every point that was ever active
    chosen: set[int] = set()
    key = best_key
    for k in range(k_final, -1, -1):
        active, classes = key
        chosen.update(active)
        parent = trail[k][key][1]
        if parent is None:
            break
        key = parent
    result = make_broadcast_set(instance, chosen)
    report = validate_broadcast(instance, result, graph, hops=None)
    if not (report.is_dominating and report.is_connected):
        raise AssertionError(
            f"internal error: wide DP produced an invalid set {result.active}"
        )
    return result


def solve_wide_cds(instance: StripInstance, cap: int = 16) -> BroadcastSet:
    """Minimum connected dominating set: best forced-source broadcast."""
    best: BroadcastSet | None = None
    for src in range(instance.n):
        inst = make_instance(
            [(p.x, p.y) for p in instance.points],
            source=src,
            width=instance.width,
            warn_fragile=False,
        )
        cand = solve_wide(inst, cap=cap)
        if best is None or cand.size < best.size:
            best = cand
    assert best is not None
    return best
