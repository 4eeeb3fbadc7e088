"""Acceptance suites: solver-vs-oracle equivalence and structural checks.

Each criterion is a zero-argument callable returning (ok, detail); the CLI
``bench`` subcommand and the test module run the same registry and print one
PASS/FAIL line per criterion.  All corpora are seeded and deterministic.
"""

from __future__ import annotations

import hashlib
import math
import random
import warnings
from collections import deque

from . import hopdp, io_cli, narrow, oracle, twohop, wide
from .model import (
    ContractError,
    InfeasibleError,
    StripInstance,
    build_graph,
    compute_levels,
    core_region,
    dist2,
    in_rect,
    make_instance,
    validate_broadcast,
)

WIDTHS_NARROW = (0.3, 0.6, 0.86)
WIDTHS_WIDE = (1.0, 1.5, 2.0)


def _narrow_corpus(count: int, base_seed: int, n_cap: int = 12):
    for s in range(count):
        n = 4 + s % (n_cap - 3)
        w = WIDTHS_NARROW[s % 3]
        yield s, io_cli.gen_random_strip(
            n, w, base_seed + s, min_sep=0.05, span=max(1.0, 0.2 * n)
        )


def gen_planar(n: int, seed: int) -> StripInstance:
    """Planar instance with inner relay points and coverable outer points."""
    rng = random.Random(seed)
    pts = [(0.0, 0.0)]
    n_in = max(2, n // 2)
    while len(pts) < n_in:
        ang = rng.uniform(0, 2 * math.pi)
        rad = math.sqrt(rng.uniform(0, 1)) * 0.98
        cand = (rad * math.cos(ang), rad * math.sin(ang))
        if all(
            abs(math.hypot(cand[0] - q[0], cand[1] - q[1]) - 1.0) > 1e-6 for q in pts
        ):
            pts.append(cand)
    inner = list(pts[1:])
    while len(pts) < n:
        ang = rng.uniform(0, 2 * math.pi)
        rad = rng.uniform(1.0, 1.9)
        cand = (rad * math.cos(ang), rad * math.sin(ang))
        if not all(
            abs(math.hypot(cand[0] - q[0], cand[1] - q[1]) - 1.0) > 1e-6 for q in pts
        ):
            continue
        if any(
            math.hypot(cand[0] - q[0], cand[1] - q[1]) < 1.0 - 1e-6 for q in inner
        ):
            pts.append(cand)
    return make_instance(pts, source=0, warn_fragile=False)


def criterion_narrow_optimality():
    """200 narrow instances: solve_narrow equals the oracle exactly."""
    solved = 0
    for s, inst in _narrow_corpus(200, base_seed=0):
        try:
            got = narrow.solve_narrow(inst)
            got_feasible = True
        except InfeasibleError:
            got_feasible = False
        try:
            want = oracle.brute_min_broadcast(inst)
            want_feasible = True
        except InfeasibleError:
            want_feasible = False
        if got_feasible != want_feasible:
            return False, f"seed {s}: feasibility disagrees"
        if not got_feasible:
            continue
        report = validate_broadcast(inst, got)
        if not (report.is_dominating and report.is_connected):
            return False, f"seed {s}: returned set invalid"
        if got.size != want.size:
            return False, f"seed {s}: size {got.size} != oracle {want.size}"
        solved += 1
    return True, f"{solved} feasible instances matched the oracle"


def _is_shortest_covering_path(inst, graph, path, targets) -> bool:
    # path[0] = source; must be a graph path ending in the target set whose
    # length equals the BFS distance from the source to the set
    pts = inst.points
    for a, b in zip(path, path[1:]):
        if dist2(pts[a], pts[b]) > 1.0:
            return False
    if path[-1] not in targets:
        return False
    dist = {inst.source: 0}
    queue = deque([inst.source])
    while queue:
        u = queue.popleft()
        for v in graph.adj[u]:
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    best = min(dist.get(t, math.inf) for t in targets)
    return len(path) - 1 == best


def criterion_structure():
    """Returned narrow solutions classify as small / bidirectional / path-like."""
    kinds = {"small": 0, "bidirectional": 0, "path": 0}
    for s, inst in _narrow_corpus(200, base_seed=0):
        try:
            got, info = narrow.solve_narrow_detailed(inst)
        except InfeasibleError:
            continue
        kind = info["kind"]
        kinds[kind] += 1
        if kind == "small":
            if got.size > 2:
                return False, f"seed {s}: small solution of size {got.size}"
        elif kind == "bidirectional":
            if got.size != 3:
                return False, f"seed {s}: bidirectional size {got.size}"
            core = core_region(inst, inst.source)
            centers = [i for i in got.active if i != inst.source]
            if not all(in_rect(core, inst.points[i]) for i in centers):
                return False, f"seed {s}: bidirectional center outside the core"
        else:
            graph = build_graph(inst)
            covering = narrow.compute_covering_sets(inst)
            paths = info["paths"]
            seen = []
            for side, path in paths.items():
                targets = set(
                    covering.q_plus if side == "+" else covering.q_minus
                )
                if not _is_shortest_covering_path(inst, graph, path, targets):
                    return False, f"seed {s}: side {side} path not shortest"
                seen.append(set(path) - {inst.source})
            if len(seen) == 2 and len(seen[0] & seen[1]) > 1:
                return False, f"seed {s}: paths share more than one point"
    return True, (
        f"small={kinds['small']} bidirectional={kinds['bidirectional']} "
        f"path={kinds['path']}"
    )


def criterion_hop_optimality():
    """300 narrow instances with h in 2..5: solve_hop equals the hop oracle."""
    solved = 0
    infeasible = 0
    for s in range(300):
        n = 4 + s % 7
        w = WIDTHS_NARROW[s % 3]
        inst = io_cli.gen_random_strip(n, w, 40000 + s, min_sep=0.05)
        if s % 3 == 0:
            part = compute_levels(inst)
            h = min(5, max(2, part.depth))  # bias toward t = h
        else:
            h = 2 + s % 4
        try:
            got = hopdp.solve_hop(inst, h)
            got_feasible = True
        except InfeasibleError:
            got_feasible = False
        try:
            want = oracle.brute_min_broadcast(inst, hops=h)
            want_feasible = True
        except InfeasibleError:
            want_feasible = False
        if got_feasible != want_feasible:
            return False, f"seed {s}: feasibility flags disagree"
        if not got_feasible:
            infeasible += 1
            continue
        if not validate_broadcast(inst, got, hops=h).valid:
            return False, f"seed {s}: returned set invalid for h={h}"
        if got.size != want.size:
            return False, f"seed {s}: size {got.size} != oracle {want.size} (h={h})"
        solved += 1
    return True, f"{solved} solved, {infeasible} infeasible, all matching"


def criterion_dp_consistency():
    """Every filled one-sided cell re-evaluates to itself under the recursion."""
    cells = 0
    instances = 0
    s = 0
    while instances < 100:
        n = 4 + s % 7
        w = WIDTHS_NARROW[s % 3]
        inst = io_cli.gen_random_strip(
            n, w, 60000 + s, min_sep=0.05, span=max(1.0, 0.2 * n), one_sided=True
        )
        s += 1
        part = compute_levels(inst)
        if part.unreachable or part.depth < 1:
            continue
        try:
            table, _ = hopdp.one_sided_dp(inst, part.depth)
        except (InfeasibleError, ContractError):
            continue
        instances += 1
        dag = hopdp.build_level_dag(inst)
        for (p, i, j), val in table.values.items():
            cells += 1
            if i == j:
                q = table.terminals[i - 1]
                if p == q:
                    want = -1.0
                elif p in table.reach[q]:
                    want = dag.part.level[q] - dag.part.level[p] - 1.0
                else:
                    want = math.inf
            else:
                want = math.inf
                for t in range(i, j):
                    want = min(
                        want, table.value(p, i, t) + table.value(p, t + 1, j)
                    )
                for c in dag.children[p]:
                    if c in table.vertices:
                        want = min(want, 1.0 + table.value(c, i, j))
            if val != want:
                return False, f"instance {s}: cell ({p},[{i},{j}]) {val} != {want}"
    return True, f"{cells} cells re-evaluated across {instances} instances"


def criterion_two_hop():
    """200 planar instances: solve_two_hop equals the 2-hop oracle; sigma holds."""
    solved = 0
    for s in range(200):
        n = 4 + s % 9
        inst = gen_planar(n, 70000 + s)
        try:
            got = twohop.solve_two_hop(inst)
            got_feasible = True
        except InfeasibleError:
            got_feasible = False
        try:
            want = oracle.brute_min_broadcast(inst, hops=2)
            want_feasible = True
        except InfeasibleError:
            want_feasible = False
        if got_feasible != want_feasible:
            return False, f"seed {s}: feasibility disagrees"
        if not got_feasible:
            continue
        if got.size != want.size:
            return False, f"seed {s}: size {got.size} != oracle {want.size}"
        if not validate_broadcast(inst, got, hops=2).valid:
            return False, f"seed {s}: invalid 2-hop set"
        sigma = twohop.boundary_sequence(inst, got)
        if not twohop.sigma_properties_ok(sigma):
            return False, f"seed {s}: boundary sequence violates the run properties"
        solved += 1
    return True, f"{solved} instances matched the 2-hop oracle"


def criterion_wide():
    """Wide solver equals the oracle; equals the narrow solver on narrow strips."""
    solved = 0
    for s in range(100):
        n = 4 + s % 9
        w = WIDTHS_WIDE[s % 3]
        inst = io_cli.gen_random_strip(
            n, w, 80000 + s, min_sep=0.05, span=max(1.0, 0.2 * n)
        )
        try:
            got = wide.solve_wide(inst)
            got_feasible = True
        except InfeasibleError:
            got_feasible = False
        try:
            want = oracle.brute_min_broadcast(inst)
            want_feasible = True
        except InfeasibleError:
            want_feasible = False
        if got_feasible != want_feasible:
            return False, f"seed {s}: feasibility disagrees"
        if got_feasible:
            if got.size != want.size:
                return False, f"seed {s}: size {got.size} != oracle {want.size}"
            solved += 1
    agreed = 0
    for s, inst in _narrow_corpus(100, base_seed=90000):
        try:
            a = wide.solve_wide(inst)
        except InfeasibleError:
            try:
                narrow.solve_narrow(inst)
                return False, f"narrow seed {s}: wide infeasible, narrow not"
            except InfeasibleError:
                continue
        b = narrow.solve_narrow(inst)
        if a.size != b.size:
            return False, f"narrow seed {s}: wide {a.size} != narrow {b.size}"
        agreed += 1
    return True, f"{solved} wide instances matched; {agreed} narrow agreements"


def criterion_density_formula():
    """Exact density-cap values at the two anchor widths."""
    vals = (wide.mu(math.sqrt(3) / 2), wide.mu(math.sqrt(3)), wide.mu(0.01))
    if vals != (30, 46, 14):
        return False, f"mu values {vals} != (30, 46, 14)"
    return True, "mu(sqrt(3)/2)=30, mu(sqrt(3))=46, mu(0.01)=14"


def criterion_geometric_invariants():
    """Path coverage and level overlap hold on 1000 random narrow instances."""
    rng = random.Random(123)
    paths_checked = 0
    for s in range(1000):
        n = 3 + s % 8
        w = WIDTHS_NARROW[s % 3]
        inst = io_cli.gen_random_strip(n, w, 100000 + s, min_sep=0.02)
        graph = build_graph(inst)
        part = compute_levels(inst, graph)  # raises on an overlap violation
        pts = inst.points
        for i in range(1, len(part.levels)):
            if part.plus[i] and part.plus[i - 1]:
                if max(pts[j].x for j in part.plus[i - 1]) > min(
                    pts[j].x for j in part.plus[i]
                ) + 0.5:
                    return False, f"seed {s}: level overlap bound violated"
            if part.minus[i] and part.minus[i - 1]:
                if min(pts[j].x for j in part.minus[i - 1]) < max(
                    pts[j].x for j in part.minus[i]
                ) - 0.5:
                    return False, f"seed {s}: level overlap bound violated"
        # random connected pair: the path disks cover the slab between them
        reachable = [i for i in range(inst.n) if part.level[i] != math.inf]
        if len(reachable) < 2:
            continue
        a, b = rng.sample(reachable, 2)
        if pts[a].x > pts[b].x:
            a, b = b, a
        path = _bfs_path(graph, a, b)
        if path is None:
            continue
        paths_checked += 1
        lo, hi = pts[a].x - 0.5, pts[b].x + 0.5
        for q in range(inst.n):
            if lo <= pts[q].x <= hi:
                if all(dist2(pts[q], pts[v]) > 1.0 for v in path):
                    return False, f"seed {s}: point {q} escapes the path slab"
    return True, f"1000 instances, {paths_checked} slab coverage checks"


def _bfs_path(graph, a, b):
    prev = {a: a}
    queue = deque([a])
    while queue:
        u = queue.popleft()
        if u == b:
            break
        for v in graph.adj[u]:
            if v not in prev:
                prev[v] = u
                queue.append(v)
    if b not in prev:
        return None
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path


# SVG fixtures: (builder, sha256 of the rendered bytes)
def _fixture_chain():
    inst = io_cli.gen_chain(4, width=0.6)
    return inst, [0, 1, 2]


def _fixture_bundle():
    inst = io_cli.gen_bundle(1, 2)
    return inst, []


def _fixture_random():
    inst = io_cli.gen_random_strip(6, 0.86, seed=1, min_sep=0.05)
    return inst, list(narrow.solve_narrow(inst).active)


SVG_FIXTURES = {
    "chain": _fixture_chain,
    "bundle": _fixture_bundle,
    "random": _fixture_random,
}

SVG_DIGESTS = {
    "chain": "e4b46e12110028d2ae64a4077860f1a67bc67717dc404523d6d9fe6c98d5633d",
    "bundle": "d5171c0c27a7b08b10c32dd03b8dcd812bc8f255b4203c3f53a0094af732be0f",
    "random": "980b1346d8a6d0722c5ba0caf8daa2ca7faea1ba020a2a54ae9265c4b8f0aa25",
}


def render_fixture(name: str) -> str:
    inst, active = SVG_FIXTURES[name]()
    return io_cli.render_svg(inst, active)


def criterion_plumbing():
    """File round trips, auto-vs-brute CLI equality, SVG golden bytes."""
    import io as _io
    import tempfile
    from contextlib import redirect_stdout

    from . import cli as cli_mod  # deferred: cli imports this module

    for s in range(100):
        if s % 10 == 0:
            inst = io_cli.gen_chain(3 + s % 9, width=0.5 + 0.01 * (s % 30))
        elif s % 10 == 1:
            inst = io_cli.gen_bundle(1 + s % 2, 2 + s % 3)
        else:
            inst = io_cli.gen_random_strip(
                3 + s % 10, 0.3 + 0.05 * (s % 12), 110000 + s, min_sep=0.03
            )
        text = io_cli.serialize_instance(inst)
        back = io_cli.parse_instance(text)
        if back.points != inst.points or back.width != inst.width:
            return False, f"file {s}: round trip not bit-stable"
        if io_cli.serialize_instance(back) != text:
            return False, f"file {s}: second serialization differs"

    with tempfile.TemporaryDirectory() as tmp:
        for s in range(50):
            n = 3 + s % 8
            w = (0.4, 0.7, 1.2)[s % 3]
            inst = io_cli.gen_random_strip(n, w, 120000 + s, min_sep=0.05)
            path = f"{tmp}/case{s}.json"
            io_cli.save_instance(inst, path)
            sizes = {}
            codes = {}
            for algo in ("auto", "brute"):
                buf = _io.StringIO()
                with redirect_stdout(buf):
                    code = cli_mod.main(["solve", path, "--algo", algo])
                codes[algo] = code
                out = buf.getvalue()
                sizes[algo] = (
                    int(out.split("size ", 1)[1].split()[0]) if code == 0 else None
                )
            if codes["auto"] != codes["brute"] or sizes["auto"] != sizes["brute"]:
                return False, f"cli case {s}: auto={sizes['auto']} brute={sizes['brute']}"

    for name, want in SVG_DIGESTS.items():
        got = hashlib.sha256(render_fixture(name).encode()).hexdigest()
        if got != want:
            return False, f"svg fixture {name}: digest {got[:12]} != {want[:12]}"
    return True, "100 round trips, 50 cli agreements, 3 svg fixtures byte-stable"


def criterion_bundle_optimum():
    """Oracle optimum on generated bundles equals 1 + strings * (hops - 1)."""
    for nv in (1, 2):
        for h in (2, 3):
            inst = io_cli.gen_bundle(nv, h)
            want = 1 + nv * (h - 1)
            got = oracle.brute_min_broadcast(inst, hops=h)
            if got.size != want:
                return False, f"bundle nv={nv} h={h}: oracle {got.size} != {want}"
            solved = hopdp.solve_hop(inst, h)
            if solved.size != want:
                return False, f"bundle nv={nv} h={h}: solver {solved.size} != {want}"
    return True, "four bundles at the closed-form optimum"


CRITERIA = [
    ("narrow-optimality", criterion_narrow_optimality),
    ("structure-trichotomy", criterion_structure),
    ("hop-optimality", criterion_hop_optimality),
    ("dp-consistency", criterion_dp_consistency),
    ("two-hop", criterion_two_hop),
    ("wide", criterion_wide),
    ("density-formula", criterion_density_formula),
    ("geometric-invariants", criterion_geometric_invariants),
    ("plumbing", criterion_plumbing),
    ("bundle-optimum", criterion_bundle_optimum),
]


def run_suite(name: str = "all"):
    """Run one suite (or all); returns [(name, ok, detail)] and prints a table."""
    selected = [c for c in CRITERIA if name in ("all", c[0])]
    if not selected:
        raise ValueError(
            f"unknown suite {name!r}; choose from "
            + ", ".join(c[0] for c in CRITERIA)
        )
    results = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        for crit_name, fn in selected:
            ok, detail = fn()
            results.append((crit_name, ok, detail))
            print(f"{'PASS' if ok else 'FAIL'}  {crit_name}: {detail}")
    return results
