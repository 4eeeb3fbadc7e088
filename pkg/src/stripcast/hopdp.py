"""Hop-bounded broadcast in narrow strips.

With t the number of hop levels: t > h is infeasible, t < h reduces to the
unbounded solver, and t = h is solved as the minimum over four candidate
structures: a 2-hop solution, a path-like solution, a mixed solution (path on
one side, arborescence on the other, possibly sharing the second vertex), and
a two-sided arborescence.

Arborescences live in the level DAG (edges between consecutive levels,
oriented upward).  The one-sided table M(p, [i, j]) is the minimum number of
active points, excluding the root p, of an order-respecting arborescence
rooted at p whose leaf set is the y-interval [i, j] of the last level.  The
two-sided table at the source adds the root back in, so empty-interval cells
are 0 and single-leaf cells are plain DAG distances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from . import narrow as narrow_mod
from . import twohop as twohop_mod
from .model import (
    BroadcastSet,
    ContractError,
    InfeasibleError,
    LevelPartition,
    StripInstance,
    UnitDiskGraph,
    build_graph,
    compute_levels,
    dist2,
    make_broadcast_set,
    validate_broadcast,
)

INF = math.inf


@dataclass(frozen=True)
class LevelDag:
    """Graph edges between consecutive levels, oriented low to high."""

    instance: StripInstance
    graph: UnitDiskGraph
    part: LevelPartition
    children: tuple[tuple[int, ...], ...]
    parents: tuple[tuple[int, ...], ...]
    _reach: dict = field(default_factory=dict, compare=False, repr=False)

    def reach_to(self, q: int) -> frozenset[int]:
        """Vertices with a directed path to q (per-target backward walk)."""
        if q not in self._reach:
            seen = {q}
            stack = [q]
            while stack:
                u = stack.pop()
                for v in self.parents[u]:
                    if v not in seen:
                        seen.add(v)
                        stack.append(v)
            self._reach[q] = frozenset(seen)
        return self._reach[q]

    def distance(self, p: int, q: int) -> float:
        """Hop count from p to q in the DAG: the level gap, if reachable."""
        if p == q:
            return 0.0
        if p in self.reach_to(q):
            return self.part.level[q] - self.part.level[p]
        return INF


def build_level_dag(
    instance: StripInstance,
    hops: int | None = None,
    graph: UnitDiskGraph | None = None,
    part: LevelPartition | None = None,
) -> LevelDag:
    """Orient inter-level edges upward; same-level edges are dropped."""
    if graph is None:
        graph = build_graph(instance)
    if part is None:
        part = compute_levels(instance, graph)
    if part.unreachable:
        raise InfeasibleError(
            "graph is disconnected; no broadcast set exists",
            witness=part.unreachable,
        )
    t = part.depth
    if hops is not None and t > hops:
        raise InfeasibleError(
            f"points at hop level {t} cannot be reached within {hops} hops"
        )
    n = graph.n
    children: list[list[int]] = [[] for _ in range(n)]
    parents: list[list[int]] = [[] for _ in range(n)]
    for u in range(n):
        for v in graph.adj[u]:
            if part.level[v] == part.level[u] + 1:
                children[u].append(v)
                parents[v].append(u)
    return LevelDag(
        instance,
        graph,
        part,
        tuple(tuple(sorted(c)) for c in children),
        tuple(tuple(sorted(p)) for p in parents),
    )


@dataclass
class OneSidedTable:
    """M(p, [i, j]) over 1-based terminal intervals, with witness choices."""

    dag: LevelDag
    vertices: frozenset[int]
    terminals: tuple[int, ...]  # last-level points in (y, index) order
    values: dict[tuple[int, int, int], float]
    choice: dict[tuple[int, int, int], tuple]
    reach: dict[int, frozenset[int]]  # terminal -> vertices with a path to it

    @property
    def m(self) -> int:
        return len(self.terminals)

    def value(self, p: int, i: int, j: int) -> float:
        if j < i:
            return 0.0
        return self.values.get((p, i, j), INF)


def _sorted_terminals(instance: StripInstance, idx: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(idx, key=lambda q: (instance.points[q].y, q)))


def _restricted_reach(dag: LevelDag, vertices: frozenset[int], q: int) -> frozenset[int]:
    seen = {q}
    stack = [q]
    while stack:
        u = stack.pop()
        for v in dag.parents[u]:
            if v in vertices and v not in seen:
                seen.add(v)
                stack.append(v)
    return frozenset(seen)


def _fill_table(
    dag: LevelDag, vertices: frozenset[int], terminals: tuple[int, ...]
) -> OneSidedTable:
    """Fill M by increasing interval length."""
    part = dag.part
    m = len(terminals)
    reach = {q: _restricted_reach(dag, vertices, q) for q in terminals}
    values: dict[tuple[int, int, int], float] = {}
    choice: dict[tuple[int, int, int], tuple] = {}
    # the descend branch reads same-interval cells one level deeper, so roots
    # go deepest-first within a span
    verts = sorted(vertices, key=lambda p: (-part.level[p], p))
    for span in range(1, m + 1):
        for i in range(1, m - span + 2):
            j = i + span - 1
            q = terminals[i - 1]
            for p in verts:
                if span == 1:
                    if p == q:
                        values[(p, i, j)] = -1.0
                        choice[(p, i, j)] = ("leaf",)
                    elif p in reach[q]:
                        values[(p, i, j)] = part.level[q] - part.level[p] - 1.0
                        choice[(p, i, j)] = ("leaf",)
                    continue
                best = INF
                pick = None
                for t in range(i, j):
                    a = values.get((p, i, t), INF)
                    b = values.get((p, t + 1, j), INF)
                    if a + b < best:
                        best = a + b
                        pick = ("merge", t)
                for c in dag.children[p]:
                    if c not in vertices:
                        continue
                    sub = values.get((c, i, j), INF)
                    if 1.0 + sub < best:
                        best = 1.0 + sub
                        pick = ("descend", c)
                if best < INF:
                    values[(p, i, j)] = best
                    choice[(p, i, j)] = pick
    return OneSidedTable(dag, vertices, terminals, values, choice, reach)


def _walk_dag_path(table: OneSidedTable, p: int, q: int, out: set[int]) -> None:
    """Activate the interior of the min-index DAG path from p to q."""
    dag = table.dag
    cur = p
    while cur != q:
        nxt = min(
            c
            for c in dag.children[cur]
            if c in table.vertices and c in table.reach[q]
        )
        if nxt != q:
            out.add(nxt)
        cur = nxt


def _walk_table(table: OneSidedTable, p: int, i: int, j: int, out: set[int]) -> None:
    """Active points (excluding the root p) of the witness arborescence."""
    if j < i:
        return
    pick = table.choice[(p, i, j)]
    if pick[0] == "leaf":
        _walk_dag_path(table, p, table.terminals[i - 1], out)
    elif pick[0] == "merge":
        _walk_table(table, p, i, pick[1], out)
        _walk_table(table, p, pick[1] + 1, j, out)
    else:
        out.add(pick[1])
        _walk_table(table, pick[1], i, j, out)


def one_sided_dp(
    instance: StripInstance, hops: int | None = None
) -> tuple[OneSidedTable, BroadcastSet]:
    """Solve the one-sided problem (source leftmost) with t = hops levels."""
    if not instance.is_narrow():
        raise ContractError("one-sided DP requires a narrow strip")
    if any(p.x < 0.0 for p in instance.points):
        raise ContractError("one-sided input must have the source leftmost")
    graph = build_graph(instance)
    part = compute_levels(instance, graph)
    if part.unreachable:
        raise InfeasibleError("graph is disconnected", witness=part.unreachable)
    t = part.depth
    h = hops if hops is not None else instance.hops
    if h is None:
        h = t
    if t > h:
        raise InfeasibleError(f"points at hop level {t} cannot be reached in {h} hops")
    if t < h:
        raise ContractError("one-sided DP expects t = h; dispatch handles t < h")
    dag = build_level_dag(instance, h, graph, part)
    terminals = _sorted_terminals(instance, part.levels[t])
    if not terminals:
        raise ContractError("last level empty although t = h")
    table = _fill_table(dag, frozenset(range(instance.n)), terminals)

    candidates: list[BroadcastSet] = []
    root_val = table.value(instance.source, 1, table.m)
    if root_val < INF:
        actives: set[int] = {instance.source}
        _walk_table(table, instance.source, 1, table.m, actives)
        arb = make_broadcast_set(instance, actives)
        if validate_broadcast(instance, arb, graph, hops=h).valid:
            candidates.append(arb)
    try:
        path = narrow_mod.solve_narrow(instance)
        if validate_broadcast(instance, path, graph, hops=h).valid:
            candidates.append(path)
    except InfeasibleError:
        pass
    if not candidates:
        raise AssertionError("internal error: no feasible one-sided candidate")
    best = min(candidates, key=lambda b: b.size)
    return table, best


def second_point_candidates(table: OneSidedTable) -> tuple[int, ...]:
    """Level-1 points usable as the source's child in some minimum arborescence."""
    dag = table.dag
    src = dag.instance.source
    level1 = [p for p in sorted(table.vertices) if dag.part.level[p] == 1]
    m = table.m
    total = table.value(src, 1, m)
    if total == INF or m == 0:
        return ()
    out = []
    for p in level1:
        if _second_point_split(table, p) is not None:
            out.append(p)
    return tuple(out)


def _second_point_split(table: OneSidedTable, p: int) -> tuple[int, int] | None:
    """Interval [i, j] witnessing p as an optimal child of the source."""
    src = table.dag.instance.source
    m = table.m
    total = table.value(src, 1, m)
    if total == INF:
        return None
    for i in range(1, m + 1):
        for j in range(i, m + 1):
            if (
                table.value(src, 1, i - 1)
                + table.value(p, i, j)
                + table.value(src, j + 1, m)
                + 1.0
                == total
            ):
                return (i, j)
    return None


@dataclass
class TwoSidedTable:
    """Joint source table over (left interval, right interval) pairs."""

    left: OneSidedTable
    right: OneSidedTable
    values: dict[tuple[int, int, int, int], float]
    choice: dict[tuple[int, int, int, int], tuple]


def _on_side(instance: StripInstance, i: int, side: str) -> bool:
    x = instance.points[i].x
    return x >= 0.0 if side == "+" else x < 0.0


def _side_vertices(
    instance: StripInstance, part: LevelPartition, side: str
) -> frozenset[int]:
    """Source, all of level 1, and the side's points of levels >= 2."""
    base = {instance.source}
    if len(part.levels) > 1:
        base.update(part.levels[1])
    for lv in part.levels[2:]:
        base.update(i for i in lv if _on_side(instance, i, side))
    return frozenset(base)


def _side_tables(
    instance: StripInstance, dag: LevelDag
) -> tuple[OneSidedTable, OneSidedTable]:
    part = dag.part
    t = part.depth
    tminus = _sorted_terminals(
        instance, (q for q in part.levels[t] if _on_side(instance, q, "-"))
    )
    tplus = _sorted_terminals(
        instance, (q for q in part.levels[t] if _on_side(instance, q, "+"))
    )
    left = _fill_table(dag, _side_vertices(instance, part, "-"), tminus)
    right = _fill_table(dag, _side_vertices(instance, part, "+"), tplus)
    return left, right


def _root_cost(table: OneSidedTable, p: int, i: int, j: int) -> float:
    """Root-inclusive one-sided cost: M + 1 on nonempty intervals, 0 on empty."""
    if j < i:
        return 0.0
    v = table.value(p, i, j)
    return v + 1.0 if v < INF else INF


def _fill_joint(
    instance: StripInstance,
    dag: LevelDag,
    left: OneSidedTable,
    right: OneSidedTable,
) -> TwoSidedTable:
    src = instance.source
    part = dag.part
    level1 = sorted(part.levels[1]) if len(part.levels) > 1 else []
    ml, mr = left.m, right.m
    values: dict[tuple[int, int, int, int], float] = {}
    choice: dict[tuple[int, int, int, int], tuple] = {}

    cells = []
    for i in range(1, ml + 2):
        for j in range(i - 1, ml + 1):
            for k in range(1, mr + 2):
                for l in range(k - 1, mr + 1):
                    cells.append((i, j, k, l))
    cells.sort(key=lambda c: (c[1] - c[0]) + (c[3] - c[2]))

    for i, j, k, l in cells:
        key = (i, j, k, l)
        ln_l = j - i + 1
        ln_r = l - k + 1
        if ln_l == 0 and ln_r == 0:
            values[key] = 0.0
            choice[key] = ("empty",)
            continue
        if ln_l == 1 and ln_r == 0:
            q = left.terminals[i - 1]
            values[key] = part.level[q] if src in left.reach[q] else INF
            choice[key] = ("path-left", q)
            continue
        if ln_l == 0 and ln_r == 1:
            q = right.terminals[k - 1]
            values[key] = part.level[q] if src in right.reach[q] else INF
            choice[key] = ("path-right", q)
            continue
        best = INF
        pick = None
        # branching at the source: split both intervals
        for t in range(i - 1, j + 1):
            for u in range(k - 1, l + 1):
                if (t, u) == (i - 1, k - 1) or (t, u) == (j, l):
                    continue
                cand = values[(i, t, k, u)] + values[(t + 1, j, u + 1, l)] - 1.0
                if cand < best:
                    best = cand
                    pick = ("branch", t, u)
        # a single level-1 child carrying both sides
        for p in level1:
            al = _root_cost(left, p, i, j)
            ar = _root_cost(right, p, k, l)
            if al == INF or ar == INF:
                continue
            joint = al + ar - 1.0 if (ln_l and ln_r) else al + ar
            cand = 1.0 + joint
            if cand < best:
                best = cand
                pick = ("child", p)
        values[key] = best
        choice[key] = pick if pick is not None else ("dead",)
    return TwoSidedTable(left, right, values, choice)


def _walk_joint(
    table: TwoSidedTable,
    instance: StripInstance,
    i: int,
    j: int,
    k: int,
    l: int,
    out: set[int],
) -> None:
    src = instance.source
    pick = table.choice[(i, j, k, l)]
    kind = pick[0]
    if kind == "empty":
        return
    if kind == "path-left":
        out.add(src)
        _walk_dag_path(table.left, src, pick[1], out)
        return
    if kind == "path-right":
        out.add(src)
        _walk_dag_path(table.right, src, pick[1], out)
        return
    if kind == "branch":
        t, u = pick[1], pick[2]
        _walk_joint(table, instance, i, t, k, u, out)
        _walk_joint(table, instance, t + 1, j, u + 1, l, out)
        return
    if kind == "child":
        p = pick[1]
        out.add(src)
        out.add(p)
        if j >= i:
            _walk_table(table.left, p, i, j, out)
        if l >= k:
            _walk_table(table.right, p, k, l, out)
        return
    raise AssertionError("walking a dead table cell")


def two_sided_dp(
    instance: StripInstance,
    hops: int | None = None,
    max_points: int = 400,
) -> BroadcastSet:
    """Minimum broadcast from a two-sided arborescence for the last level."""
    if not instance.is_narrow():
        raise ContractError("two-sided DP requires a narrow strip")
    if instance.n > max_points:
        raise ContractError(
            f"two-sided DP refuses n={instance.n} > {max_points} (table memory)"
        )
    graph = build_graph(instance)
    part = compute_levels(instance, graph)
    if part.unreachable:
        raise InfeasibleError("graph is disconnected", witness=part.unreachable)
    t = part.depth
    h = hops if hops is not None else instance.hops
    if h is None:
        h = t
    if t > h:
        raise InfeasibleError(f"points at hop level {t} cannot be reached in {h} hops")
    if t < h:
        raise ContractError("two-sided DP expects t = h; dispatch handles t < h")
    dag = build_level_dag(instance, h, graph, part)
    left, right = _side_tables(instance, dag)
    table = _fill_joint(instance, dag, left, right)
    total = table.values[(1, left.m, 1, right.m)]
    if total == INF:
        raise InfeasibleError("no two-sided arborescence spans the last level")
    out: set[int] = {instance.source}
    _walk_joint(table, instance, 1, left.m, 1, right.m, out)
    return make_broadcast_set(instance, out)


def solve_hop(instance: StripInstance, hops: int | None = None) -> BroadcastSet:
    """Minimum h-hop broadcast on a narrow strip."""
    if not instance.is_narrow():
        raise ContractError("hop-bounded solving requires a narrow strip")
    h = hops if hops is not None else instance.hops
    if h is None:
        return narrow_mod.solve_narrow(instance)
    if h < 1:
        raise ContractError("hop bound must be >= 1")
    graph = build_graph(instance)
    part = compute_levels(instance, graph)
    if part.unreachable:
        raise InfeasibleError(
            "graph is disconnected; no broadcast set exists",
            witness=part.unreachable,
        )
    t = part.depth
    if t > h:
        raise InfeasibleError(
            f"infeasible: points at hop level t={t} exceed the bound h={h}"
        )
    if t < h:
        return narrow_mod.solve_narrow(instance)

    candidates: list[BroadcastSet] = []

    def consider(result: BroadcastSet | None) -> None:
        if result is not None and validate_broadcast(
            instance, result, graph, hops=h
        ).valid:
            candidates.append(result)

    try:
        consider(twohop_mod.solve_two_hop(instance))
    except InfeasibleError:
        pass
    try:
        consider(narrow_mod.solve_narrow(instance))
    except InfeasibleError:
        pass
    for arb_side in ("+", "-"):
        consider(_mixed_candidate(instance, graph, part, h, arb_side))
    try:
        consider(two_sided_dp(instance, h))
    except InfeasibleError:
        pass

    if not candidates:
        raise AssertionError("internal error: no feasible hop-bounded candidate")
    best = candidates[0]
    for cand in candidates[1:]:
        if cand.size < best.size:
            best = cand
    return best


def _mixed_candidate(
    instance: StripInstance,
    graph: UnitDiskGraph,
    part: LevelPartition,
    h: int,
    arb_side: str,
) -> BroadcastSet | None:
    """Arborescence toward one side plus a shortest covering path to the other.

    The path may enter the arborescence at a shared second vertex; sharing is
    possible exactly when some optimal-child candidate of the arborescence is
    also a possible second vertex of a shortest covering path.
    """
    pts = instance.points
    src = instance.source
    sp = instance.source_point
    sign = 1.0 if arb_side == "+" else -1.0
    t = part.depth
    terminals = [q for q in part.levels[t] if _on_side(instance, q, arb_side)]
    if not terminals:
        return None
    dag = build_level_dag(instance, h, graph, part)
    vertices = _side_vertices(instance, part, arb_side)
    table = _fill_table(dag, vertices, _sorted_terminals(instance, terminals))
    total = table.value(src, 1, table.m)
    if total == INF:
        return None

    covering = narrow_mod.compute_covering_sets(instance)
    path_side_used = any(pts[i].x * sign < 0.0 for i in covering.outside)
    if not path_side_used:
        actives: set[int] = {src}
        _walk_table(table, src, 1, table.m, actives)
        return make_broadcast_set(instance, actives)

    path_side = "-" if arb_side == "+" else "+"
    back = narrow_mod.backward_level_sets(instance, path_side, covering)
    if not back.reached:
        return None
    entry = [i for i in back.levels[-1] if dist2(pts[i], sp) <= 1.0]

    start = None
    actives = {src}
    for p in sorted(entry):
        split = _second_point_split(table, p)
        if split is not None:
            i, j = split
            actives.add(p)
            _walk_table(table, src, 1, i - 1, actives)
            _walk_table(table, p, i, j, actives)
            _walk_table(table, src, j + 1, table.m, actives)
            start = p
            break
    if start is None:
        _walk_table(table, src, 1, table.m, actives)
        start = min(entry)
    path = narrow_mod.walk_backward_path(instance, back, start)
    actives.update(path)
    return make_broadcast_set(instance, actives)


# --- test helper: predecessor arborescence and niceness --------------------


def build_pred_arborescence(
    instance: StripInstance, active: BroadcastSet
) -> list[tuple[int, int]]:
    """Arcs (pred(p), p) of the boundary-exit predecessor construction.

    The construction is per side: a point at level >= 2 takes its predecessor
    among the same-side active points of the previous level (level-1 points
    of both signs feed level 2), through the exit point of the outward
    horizontal ray from p; ties go to the highest y, then the smallest index.
    Raises ContractError naming the point when no eligible active disk covers
    it (possible on non-optimal inputs).
    """
    graph = build_graph(instance)
    part = compute_levels(instance, graph)
    pts = instance.points
    act = set(active.active)
    t = part.depth
    arcs = []
    nodes = sorted(act | set(part.levels[t]))
    for p in nodes:
        if p == instance.source:
            continue
        lvl = part.level[p]
        if lvl == INF or lvl == 0:
            continue
        side = "+" if pts[p].x >= 0.0 else "-"
        sign = 1.0 if side == "+" else -1.0
        prev = [
            u
            for u in part.levels[int(lvl) - 1]
            if (u in act or u == instance.source)
            and (int(lvl) - 1 <= 1 or _on_side(instance, u, side))
        ]
        if not any(dist2(pts[u], pts[p]) <= 1.0 for u in prev):
            raise ContractError(
                f"predecessor undefined for point {p}: no active disk on level "
                f"{int(lvl) - 1} covers it"
            )
        y = pts[p].y
        reach_x = pts[p].x * sign
        grown = True
        while grown:
            grown = False
            for u in prev:
                dy = pts[u].y - y
                if abs(dy) > 1.0:
                    continue
                g = math.sqrt(max(0.0, 1.0 - dy * dy))
                lo = pts[u].x * sign - g
                hi = pts[u].x * sign + g
                if lo <= reach_x <= hi and hi > reach_x:
                    reach_x = hi
                    grown = True
        owners = []
        for u in prev:
            dy = pts[u].y - y
            if abs(dy) > 1.0:
                continue
            g = math.sqrt(max(0.0, 1.0 - dy * dy))
            if pts[u].x * sign + g == reach_x:
                owners.append(u)
        owner = max(owners, key=lambda u: (pts[u].y, -u))
        arcs.append((owner, p))
    return arcs


def arborescence_is_nice(
    instance: StripInstance, arcs: Sequence[tuple[int, int]]
) -> tuple[bool, tuple | None]:
    """Same-side arcs between the same two levels must preserve y-order."""
    graph = build_graph(instance)
    part = compute_levels(instance, graph)
    pts = instance.points
    by_group: dict[tuple[str, float], list[tuple[int, int]]] = {}
    for u, v in arcs:
        side = "+" if pts[v].x >= 0.0 else "-"
        by_group.setdefault((side, part.level[v]), []).append((u, v))
    for group in by_group.values():
        for u, v in group:
            for a, b in group:
                if u == a:
                    continue
                if pts[v].y < pts[b].y and not (pts[u].y < pts[a].y):
                    return False, ((u, v), (a, b))
    return True, None
