"""Exhaustive ground truth for small instances.

Subsets are enumerated in increasing cardinality and, within a cardinality,
in lexicographic index order, so the first feasible subset found is both a
minimum and the lexicographically smallest minimum.  Adjacency is kept as
bitmasks; connectivity, domination, and the hop bound are all mask walks.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations

from .model import (
    BroadcastSet,
    InfeasibleError,
    StripInstance,
    UnitDiskGraph,
    build_graph,
    make_broadcast_set,
    make_instance,
)


class OracleLimitError(RuntimeError):
    """Instance exceeds the oracle's size or time budget."""


@dataclass(frozen=True)
class OracleConfig:
    max_n: int = 16
    time_budget: float | None = None  # seconds per instance


DEFAULT_CONFIG = OracleConfig()


def _masks(graph: UnitDiskGraph) -> tuple[list[int], list[int]]:
    nbr = [0] * graph.n
    for i in range(graph.n):
        for j in graph.adj[i]:
            nbr[i] |= 1 << j
    closed = [nbr[i] | (1 << i) for i in range(graph.n)]
    return nbr, closed


def _connected(subset: int, src_bit: int, nbr: list[int], n: int) -> bool:
    seen = src_bit
    frontier = src_bit
    while frontier:
        grow = 0
        f = frontier
        while f:
            low = f & -f
            grow |= nbr[low.bit_length() - 1]
            f ^= low
        grow &= subset & ~seen
        seen |= grow
        frontier = grow
    return seen == subset


def _dominates(subset: int, closed: list[int], full: int) -> bool:
    cover = 0
    s = subset
    while s:
        low = s & -s
        cover |= closed[low.bit_length() - 1]
        s ^= low
    return cover == full


def _hops_within(
    subset: int, src: int, nbr: list[int], full: int, bound: int
) -> bool:
    # BFS where only subset members relay; every point must be seen in <= bound.
    seen = 1 << src
    frontier = 1 << src
    depth = 0
    while frontier and seen != full and depth < bound:
        relays = frontier & subset
        grow = 0
        f = relays
        while f:
            low = f & -f
            grow |= nbr[low.bit_length() - 1]
            f ^= low
        grow &= ~seen
        seen |= grow
        frontier = grow
        depth += 1
    return seen == full


def brute_min_broadcast(
    instance: StripInstance,
    hops: int | None = None,
    config: OracleConfig = DEFAULT_CONFIG,
    graph: UnitDiskGraph | None = None,
) -> BroadcastSet:
    """Minimum broadcast set containing the source, optionally hop-bounded."""
    n = instance.n
    if n > config.max_n:
        raise OracleLimitError(f"oracle refuses n={n} > max_n={config.max_n}")
    if graph is None:
        graph = build_graph(instance)
    nbr, closed = _masks(graph)
    full = (1 << n) - 1
    src = instance.source
    bound = hops if hops is not None else instance.hops

    all_active = full
    if not _connected(all_active, 1 << src, nbr, n) or not _dominates(
        all_active, closed, full
    ):
        raise InfeasibleError("graph is disconnected; no broadcast set exists")
    if bound is not None and not _hops_within(all_active, src, nbr, full, bound):
        raise InfeasibleError(
            f"even the all-active set needs more than {bound} hops"
        )

    deadline = None if config.time_budget is None else time.monotonic() + config.time_budget
    others = [i for i in range(n) if i != src]
    for k in range(0, n):
        for extra in combinations(others, k):
            if deadline is not None and time.monotonic() > deadline:
                raise OracleLimitError("oracle time budget exceeded")
            subset = 1 << src
            for i in extra:
                subset |= 1 << i
            if not _connected(subset, 1 << src, nbr, n):
                continue
            if not _dominates(subset, closed, full):
                continue
            if bound is not None and not _hops_within(subset, src, nbr, full, bound):
                continue
            return make_broadcast_set(instance, [src, *extra])
    raise InfeasibleError("no feasible broadcast set found")  # pragma: no cover


def brute_min_cds(
    instance: StripInstance,
    config: OracleConfig = DEFAULT_CONFIG,
    mode: str = "direct",
) -> BroadcastSet:
    """Minimum connected dominating set (no forced source).

    ``direct`` enumerates subsets outright; ``per-source`` takes the best
    forced-source broadcast over all sources.  The two must agree in size.
    """
    n = instance.n
    if n > config.max_n:
        raise OracleLimitError(f"oracle refuses n={n} > max_n={config.max_n}")
    if mode == "per-source":
        best: BroadcastSet | None = None
        for src in range(n):
            inst = make_instance(
                [(p.x, p.y) for p in instance.points],
                source=src,
                width=instance.width,
                warn_fragile=False,
            )
            cand = brute_min_broadcast(inst, config=config)
            if best is None or cand.size < best.size:
                best = cand
        assert best is not None
        return best
    if mode != "direct":
        raise ValueError(f"unknown oracle mode {mode!r}")

    graph = build_graph(instance)
    nbr, closed = _masks(graph)
    full = (1 << n) - 1
    deadline = None if config.time_budget is None else time.monotonic() + config.time_budget
    for k in range(1, n + 1):
        for sub in combinations(range(n), k):
            if deadline is not None and time.monotonic() > deadline:
                raise OracleLimitError("oracle time budget exceeded")
            subset = 0
            for i in sub:
                subset |= 1 << i
            anchor = 1 << sub[0]
            if not _connected(subset, anchor, nbr, n):
                continue
            if not _dominates(subset, closed, full):
                continue
            return BroadcastSet(tuple(sub))
    raise InfeasibleError("no connected dominating set exists")
