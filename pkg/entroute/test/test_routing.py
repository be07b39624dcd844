"""Test the path plans of the routing algorithms."""
import itertools

import networkx as nx
import pytest

from entroute.topology import build_grid, build_line, hop_distance, \
    nodes_disjoint, Path
from entroute.routing import plan_mg, plan_nl, plan_qp, make_plan, PathPlan, \
    PLANNERS


def test_mg_straight_row():
    g = build_grid(5)
    plan = plan_mg(g, (g.node_at(0, 0), g.node_at(0, 4)))
    assert plan.primary == [Path([0, 1, 2, 3, 4])]
    assert plan.recovery == {}


def test_mg_lexicographic_first():
    g = build_grid(3)
    brute = min(tuple(p) for p in nx.all_shortest_paths(g.graph, 0, 8))
    assert plan_mg(g, (0, 8)).primary[0].nodes == brute


def test_nl_disjoint_pair():
    g = build_grid(3)
    plan = plan_nl(g, (0, 8))
    assert len(plan.primary) == 2
    p1, p2 = plan.primary
    assert nodes_disjoint(p1, p2)
    assert len(p1) == len(p2) == 4
    # a disjoint pair exists among the shortest paths at all
    paths = [Path(p) for p in nx.all_shortest_paths(g.graph, 0, 8)]
    assert any(nodes_disjoint(a, b) for a, b in itertools.combinations(paths, 2))


def test_nl_single_paths():
    assert len(plan_nl(build_line(6), (1, 5)).primary) == 1
    plan = plan_nl(build_grid(4), (5, 6))
    assert plan.primary == [Path([5, 6])]
    assert len(plan_nl(build_grid(4), (0, 3)).primary) == 1


def test_qp_recovery():
    g = build_grid(5)
    plan = plan_qp(g, (g.node_at(2, 0), g.node_at(2, 4)))
    assert plan.primary == plan_mg(g, (10, 14)).primary
    assert set(plan.recovery) == set(plan.primary[0].links)
    for link, seg in plan.recovery.items():
        assert len(seg) == 3
        assert set((seg.source, seg.dest)) == set(link)
    assert plan_qp(g, (0, 1)).recovery[(0, 1)] == Path([0, 5, 6, 1])
    assert plan_qp(build_line(4), (0, 4)).recovery == {}


def test_qp_splices_are_simple_paths():
    g = build_grid(4)
    for s, d in [(0, 15), (5, 10), (3, 12), (1, 2)]:
        plan = plan_qp(g, (s, d))
        path = plan.primary[0]
        for i, link in enumerate(path.links):
            try:
                new = path.splice(i, plan.recovery[link])
            except ValueError:
                continue
            assert (new.source, new.dest) == (s, d)
            assert len(new) == len(path) + 2
            assert len(set(new.nodes)) == len(new.nodes)


def test_primary_lengths_and_determinism():
    g = build_grid(4)
    for s, d in itertools.permutations(g.nodes, 2):
        for name in PLANNERS:
            plan = make_plan(name, g, (s, d))
            again = make_plan(name, g, (s, d))
            assert plan.primary == again.primary
            assert plan.recovery == again.recovery
            for p in plan.primary:
                assert (p.source, p.dest) == (s, d)
                assert len(p) == hop_distance(g, s, d)


def test_errors():
    g = build_grid(3)
    with pytest.raises(ValueError):
        make_plan('XY', g, (0, 1))
    for name in PLANNERS:
        with pytest.raises(ValueError):
            make_plan(name, g, (4, 4))
    with pytest.raises(ValueError):
        PathPlan([Path([0, 1]), Path([0, 3, 4])])
    with pytest.raises(ValueError):
        PathPlan([Path([0, 1, 2])], {(0, 1): Path([0, 3, 2])})
