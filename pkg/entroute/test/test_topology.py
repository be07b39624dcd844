"""Test the line and grid topologies and their paths."""
import itertools

import networkx as nx
import pytest

from entroute.topology import build_line, build_grid, hop_distance, \
    shortest_paths, iter_shortest_paths, nodes_disjoint, detour, Path, link_id


def test_line_sizes():
    assert (build_line(1).n_nodes, build_line(1).n_links) == (2, 1)
    line = build_line(20)
    assert (line.n_nodes, line.n_links) == (21, 20)
    assert build_line(5).neighbors(2) == (1, 3)
    assert line.links == tuple((i, i + 1) for i in range(20))


def test_grid_sizes():
    for M in range(2, 8):
        g = build_grid(M)
        assert g.n_nodes == M * M
        assert g.n_links == 2 * M * (M - 1)
    assert len(build_grid(3).neighbors(4)) == 4
    assert build_grid(5).neighbors(0) == (1, 5)


@pytest.mark.parametrize('builder, M', [(build_line, 0), (build_grid, 1),
                                        (build_grid, 0)])
def test_invalid_sizes(builder, M):
    with pytest.raises(ValueError):
        builder(M)


def test_adjacency_symmetric():
    g = build_grid(4)
    for a in g.nodes:
        for b in g.neighbors(a):
            assert a in g.neighbors(b)
            assert g.has_link(link_id(a, b))


def test_hop_distance_is_bfs_distance():
    g = build_grid(4)
    dist = dict(nx.all_pairs_shortest_path_length(g.graph))
    for a, b in itertools.product(g.nodes, repeat=2):
        assert hop_distance(g, a, b) == dist[a][b]


def test_shortest_paths_brute_force():
    g = build_grid(3)
    brute = sorted(tuple(p) for p in nx.all_shortest_paths(g.graph, 0, 8))
    paths = shortest_paths(g, 0, 8, limit=100)
    assert [p.nodes for p in paths] == brute
    assert len(paths) == 6
    assert list(iter_shortest_paths(g, 0, 8)) == paths
    assert shortest_paths(g, 0, 8, limit=2) == paths[:2]


def test_shortest_paths_errors():
    g = build_grid(3)
    with pytest.raises(ValueError):
        shortest_paths(g, 2, 2, limit=1)
    with pytest.raises(ValueError):
        shortest_paths(g, 0, 9, limit=1)
    with pytest.raises(ValueError):
        iter_shortest_paths(g, 4, 4)


def test_paths():
    p = Path([0, 1, 2, 5])
    assert len(p) == 3
    assert p.links == ((0, 1), (1, 2), (2, 5))
    assert p.splice(0, Path([0, 3, 4, 1])).nodes == (0, 3, 4, 1, 2, 5)
    assert p.splice(0, Path([1, 4, 3, 0])).nodes == (0, 3, 4, 1, 2, 5)
    with pytest.raises(ValueError):
        p.splice(1, Path([1, 4, 5, 2]))
    with pytest.raises(ValueError):
        Path([3])
    with pytest.raises(ValueError):
        p.splice(0, Path([4, 3]))


def test_nodes_disjoint():
    assert nodes_disjoint(Path([0, 1, 2, 5, 8]), Path([0, 3, 6, 7, 8]))
    assert not nodes_disjoint(Path([0, 1, 4, 5, 8]), Path([0, 3, 4, 7, 8]))


def test_detours():
    g = build_grid(5)
    for link in g.links:
        d = detour(g, link)
        assert d is not None
        assert (d.source, d.dest) == link
        assert len(d) == 3
        assert link not in d.links
    assert detour(g, (0, 1)) == Path([0, 5, 6, 1])
    assert detour(g, (20, 21)) == Path([20, 15, 16, 21])
    line = build_line(4)
    assert all(detour(line, l) is None for l in line.links)
    with pytest.raises(ValueError):
        detour(g, (0, 6))
