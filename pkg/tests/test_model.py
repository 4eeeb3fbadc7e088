import math

import pytest

from stripcast.model import (
    ContractError,
    InstanceError,
    NARROW_LIMIT,
    Point,
    build_graph,
    compute_levels,
    core_region,
    dist2,
    in_rect,
    make_broadcast_set,
    make_instance,
    validate_broadcast,
)
from stripcast.io_cli import gen_bundle, gen_random_strip


def chain(k, spacing=1.0, width=0.5):
    return make_instance(
        [(i * spacing, 0.25) for i in range(k)],
        width=width,
        warn_fragile=False,
    )


def test_boundary_distance_is_adjacent():
    inst = make_instance([(0.0, 0.0), (1.0, 0.0)], warn_fragile=False)
    g = build_graph(inst)
    assert g.adjacent(0, 1)


def test_single_point_graph_has_no_edges():
    g = build_graph(make_instance([(0.0, 0.0)]))
    assert g.n == 1 and g.adj[0] == frozenset()


def test_chain_adjacency_exact():
    g = build_graph(chain(3))
    assert g.adj[0] == frozenset({1})
    assert g.adj[1] == frozenset({0, 2})
    assert g.adj[2] == frozenset({1})


def test_graph_symmetry_random():
    inst = gen_random_strip(30, 0.7, seed=11, min_sep=0.01)
    g = build_graph(inst)
    for i in range(g.n):
        for j in g.adj[i]:
            assert i in g.adj[j]


def test_normalization_translates_and_scales():
    inst = make_instance(
        [(4.0, 1.0), (6.0, 1.0)], source=0, width=2.0, radius=2.0, warn_fragile=False
    )
    assert inst.points[0] == Point(0.0, 0.5)
    assert inst.points[1] == Point(1.0, 0.5)
    assert inst.width == 1.0


def test_instance_rejects_bad_input():
    with pytest.raises(InstanceError):
        make_instance([])
    with pytest.raises(InstanceError):
        make_instance([(0, 0)], source=2)
    with pytest.raises(InstanceError):
        make_instance([(float("nan"), 0)])
    with pytest.raises(InstanceError):
        make_instance([(0, 0), (0, 5.0)], width=1.0)
    with pytest.raises(InstanceError):
        make_instance([(0, 0)], hops=0)


def test_fragility_flag():
    with pytest.warns(UserWarning):
        inst = make_instance([(0.0, 0.0), (1.0, 0.0)])
    assert inst.fragile
    quiet = make_instance([(0.0, 0.0), (0.5, 0.0)])
    assert not quiet.fragile


def test_levels_chain():
    part = compute_levels(chain(4, spacing=0.95))
    assert [part.level[i] for i in range(4)] == [0, 1, 2, 3]
    assert part.levels[0] == (0,)
    assert part.depth == 3


def test_levels_unreachable():
    inst = make_instance([(0.0, 0.2), (10.0, 0.2)], width=0.5, warn_fragile=False)
    part = compute_levels(inst)
    assert part.level[1] == math.inf
    assert part.unreachable == (1,)


def test_levels_bundle_columns():
    inst = gen_bundle(2, 3)
    part = compute_levels(inst)
    rows = 4
    for col in (1, 2):
        for r in range(rows):
            assert part.level[1 + (col - 1) * rows + r] == col
    assert part.depth == 3


def test_level_side_split():
    inst = make_instance(
        [(0.0, 0.25), (0.9, 0.25), (-0.9, 0.25)], width=0.5, warn_fragile=False
    )
    part = compute_levels(inst)
    assert part.plus[1] == (1,)
    assert part.minus[1] == (2,)


def test_validate_all_active():
    inst = chain(4, spacing=0.95)
    report = validate_broadcast(inst, range(4))
    assert report.is_dominating and report.is_connected
    assert report.max_hops_needed == 3  # eccentricity of the source


def test_validate_missing_source_is_input_error():
    inst = chain(3, spacing=0.95)
    with pytest.raises(InstanceError):
        validate_broadcast(inst, [1, 2])


def test_validate_chain_prefix():
    inst = chain(4, spacing=0.95)
    report = validate_broadcast(inst, [0, 1, 2])
    assert report.is_dominating and report.is_connected
    assert report.max_hops_needed == 3


def test_validate_witnesses():
    inst = make_instance(
        [(0.0, 0.2), (0.9, 0.2), (1.8, 0.2), (2.7, 0.2)],
        width=0.5,
        warn_fragile=False,
    )
    report = validate_broadcast(inst, [0, 1])
    assert not report.is_dominating
    assert 3 in report.witnesses
    report = validate_broadcast(inst, [0, 2])
    assert not report.is_connected
    assert report.max_hops_needed == math.inf


def test_validate_hop_bound_flag():
    inst = chain(4, spacing=0.95)
    assert validate_broadcast(inst, range(4), hops=3).hops_ok is True
    assert validate_broadcast(inst, range(4), hops=2).hops_ok is False
    assert validate_broadcast(inst, range(4)).hops_ok is None


def test_core_region_formula():
    inst = make_instance([(0.0, 0.3)], width=0.5)
    assert core_region(inst, 0) == (-0.5, 0.5, 0.0, 0.5)


def test_core_region_contained_in_disk():
    # 1000 corner probes across random points in a width-0.8 strip
    inst = gen_random_strip(250, 0.8, seed=5, min_sep=0.0)
    pts = inst.points
    for i in range(inst.n):
        x0, x1, y0, y1 = core_region(inst, i)
        for cx in (x0, x1):
            for cy in (y0, y1):
                assert dist2(pts[i], Point(cx, cy)) <= 1.0 + 1e-12


def test_core_region_rejects_wide_strip():
    inst = make_instance([(0.0, 0.3)], width=0.9)
    assert inst.width > NARROW_LIMIT
    with pytest.raises(ContractError):
        core_region(inst, 0)


def test_broadcast_set_requires_source():
    inst = chain(3, spacing=0.95)
    with pytest.raises(InstanceError):
        make_broadcast_set(inst, [1, 2])
    bs = make_broadcast_set(inst, [2, 0])
    assert bs.active == (0, 2)


def test_coincident_points_are_adjacent():
    inst = make_instance([(0.0, 0.1), (0.0, 0.1)], width=0.3, warn_fragile=False)
    g = build_graph(inst)
    assert g.adjacent(0, 1)


def test_in_rect():
    assert in_rect((0.0, 1.0, 0.0, 1.0), Point(0.5, 1.0))
    assert not in_rect((0.0, 1.0, 0.0, 1.0), Point(1.1, 0.5))
