'''
Line and grid network topologies and their (shortest) paths.

Nodes are plain integers (row-major on grids), links are canonical node pairs
`(a, b)` with `a < b`. The topologies wrap an immutable (frozen) networkx graph
and are safe to share between workers.

Example:
    >>> line = build_line(5)
    >>> line
    <Topology line(M=5): 6 nodes, 5 links>
    >>> line.neighbors(2)
    (1, 3)
    >>> grid = build_grid(5)
    >>> grid.n_nodes, grid.n_links
    (25, 40)
    >>> grid.coords(13), grid.node_at(2, 3)
    ((2, 3), 13)
    >>> hop_distance(grid, grid.node_at(0, 0), grid.node_at(2, 3))
    5
    >>> paths = shortest_paths(build_grid(3), 0, 8, limit=10)
    >>> len(paths), set(len(p) for p in paths)
    (6, {4})
    >>> paths[0]
    Path(0, 1, 2, 5, 8)
    >>> paths[0].links
    ((0, 1), (1, 2), (2, 5), (5, 8))
    >>> nodes_disjoint(paths[0], paths[-1])
    True
    >>> detour(grid, (6, 7))
    Path(6, 1, 2, 7)
    >>> detour(line, (2, 3)) is None
    True
'''
__all__ = ['link_id', 'Path', 'Topology', 'build_line', 'build_grid',
           'hop_distance', 'shortest_paths', 'iter_shortest_paths',
           'nodes_disjoint', 'detour']

import networkx as nx


def link_id(a, b):
    '''
    The canonical id of the link between the nodes `a` and `b`.

    Example:
        >>> link_id(7, 2)
        (2, 7)
    '''
    a, b = int(a), int(b)
    if a == b:
        raise ValueError('A link needs two distinct end points.')
    return (a, b) if a < b else (b, a)


class Path(object):
    '''
    A simple path given by its node sequence.

    The length of a path is its number of links (hops). Paths compare and sort
    by their node sequences.

    Args:
        nodes (iterable):   The nodes from the source to the destination.

    Raises:
        ValueError:         If there are fewer than two nodes or a node repeats.

    Example:
        >>> p = Path([3, 4, 9])
        >>> len(p), p.source, p.dest
        (2, 3, 9)
        >>> p.links
        ((3, 4), (4, 9))
        >>> p < Path([3, 8, 9])
        True
        >>> Path([1, 2, 1])
        Traceback (most recent call last):
        ...
        ValueError: A path must not repeat nodes: [1, 2, 1]
    '''

    def __init__(self, nodes):
        nodes = tuple(int(n) for n in nodes)
        if len(nodes) < 2:
            raise ValueError('A path needs at least two nodes.')
        if len(set(nodes)) != len(nodes):
            raise ValueError('A path must not repeat nodes: %s' % list(nodes))
        self._nodes = nodes
        self._links = tuple(link_id(a, b) for a, b in zip(nodes[:-1], nodes[1:]))

    @property
    def nodes(self):
        return self._nodes

    @property
    def links(self):
        return self._links

    @property
    def source(self):
        return self._nodes[0]

    @property
    def dest(self):
        return self._nodes[-1]

    def __len__(self):
        return len(self._links)

    def __iter__(self):
        return iter(self._links)

    def __getitem__(self, i):
        return self._links[i]

    def __eq__(self, other):
        return isinstance(other, Path) and self._nodes == other._nodes

    def __lt__(self, other):
        return self._nodes < other._nodes

    def __hash__(self):
        return hash(self._nodes)

    def __repr__(self):
        return 'Path(%s)' % ', '.join(str(n) for n in self._nodes)

    def splice(self, i, segment):
        '''
        Replace the i-th link by a segment between the link's end points.

        The segment may be given in either direction.

        Args:
            i (int):            The index of the link to replace.
            segment (Path):     A path connecting the end points of link i.

        Returns:
            path (Path):        The new path.

        Raises:
            ValueError:         If the segment does not fit or the result is
                                not simple.

        Example:
            >>> Path([0, 1, 2]).splice(1, Path([2, 5, 4, 1]))
            Path(0, 1, 4, 5, 2)
            >>> Path([0, 1, 2]).splice(0, Path([0, 3, 2, 1]))
            Traceback (most recent call last):
            ...
            ValueError: A path must not repeat nodes: [0, 3, 2, 1, 2]
        '''
        a, b = self._nodes[i], self._nodes[i+1]
        seg = segment.nodes
        if (seg[0], seg[-1]) == (b, a):
            seg = seg[::-1]
        elif (seg[0], seg[-1]) != (a, b):
            raise ValueError('Segment %s does not connect %d and %d.' % (
                             segment, a, b))
        return Path(self._nodes[:i] + seg + self._nodes[i+2:])


class Topology(object):
    '''
    An immutable line or grid network.

    Use `build_line` and `build_grid` to create one.

    Args:
        kind (str):         Either 'line' or 'grid'.
        M (int):            The size parameter (links of the line, side length
                            of the grid).
        graph (nx.Graph):   The graph with integer nodes 0..n_nodes-1.
    '''

    def __init__(self, kind, M, graph):
        if kind not in ('line', 'grid'):
            raise ValueError('Unknown topology kind "%s"!' % kind)
        self._kind = kind
        self._M = int(M)
        self._graph = nx.freeze(graph)
        self._links = tuple(sorted(link_id(a, b) for a, b in graph.edges()))
        self._link_index = {l: i for i, l in enumerate(self._links)}
        self._adj = {n: tuple(sorted(graph.neighbors(n)))
                     for n in sorted(graph.nodes())}

    @property
    def kind(self):
        return self._kind

    @property
    def M(self):
        return self._M

    @property
    def graph(self):
        '''The frozen networkx graph.'''
        return self._graph

    @property
    def nodes(self):
        return range(len(self._adj))

    @property
    def links(self):
        '''All links in canonical (sorted) order.'''
        return self._links

    @property
    def link_index(self):
        '''Mapping from link to its position in `links`.'''
        return self._link_index

    @property
    def n_nodes(self):
        return len(self._adj)

    @property
    def n_links(self):
        return len(self._links)

    def neighbors(self, n):
        '''The neighbours of node `n` in ascending order.'''
        return self._adj[n]

    def has_link(self, link):
        return link in self._link_index

    def coords(self, n):
        '''
        The (row, column) of a node; a line is a single row.

        Example:
            >>> build_line(3).coords(2)
            (0, 2)
        '''
        if not 0 <= n < self.n_nodes:
            raise ValueError('Node %s is not in the topology.' % n)
        if self._kind == 'line':
            return (0, int(n))
        return divmod(int(n), self._M)

    def node_at(self, row, col):
        '''The node at the given (row, column).'''
        if self._kind == 'line':
            if row != 0 or not 0 <= col <= self._M:
                raise ValueError('(%d,%d) is not on the line.' % (row, col))
            return int(col)
        if not (0 <= row < self._M and 0 <= col < self._M):
            raise ValueError('(%d,%d) is not on the grid.' % (row, col))
        return int(row) * self._M + int(col)

    def __repr__(self):
        return '<Topology %s(M=%d): %d nodes, %d links>' % (
                self._kind, self._M, self.n_nodes, self.n_links)


def build_line(M):
    '''
    A line of M links with the nodes 0..M (end points A=0 and B=M).

    Raises:
        ValueError:     For M < 1.

    Example:
        >>> build_line(1).links
        ((0, 1),)
        >>> build_line(20).n_nodes
        21
        >>> build_line(0)
        Traceback (most recent call last):
        ...
        ValueError: A line needs at least one link (M=0).
    '''
    if int(M) != M or M < 1:
        raise ValueError('A line needs at least one link (M=%s).' % M)
    return Topology('line', M, nx.path_graph(int(M) + 1))


def build_grid(M):
    '''
    An MxM mesh (no wrap-around) with row-major node indices.

    Raises:
        ValueError:     For M < 2.

    Example:
        >>> g = build_grid(2)
        >>> g.n_nodes, g.links
        (4, ((0, 1), (0, 2), (1, 3), (2, 3)))
        >>> build_grid(3).neighbors(4)
        (1, 3, 5, 7)
    '''
    if int(M) != M or M < 2:
        raise ValueError('A grid needs a side length of at least two (M=%s).' % M)
    M = int(M)
    g = nx.grid_2d_graph(M, M)
    g = nx.relabel_nodes(g, {(r, c): r * M + c for r, c in g.nodes()})
    return Topology('grid', M, g)


def hop_distance(topo, a, b):
    '''
    The number of hops of a shortest path between two nodes.

    Example:
        >>> hop_distance(build_line(20), 0, 20)
        20
        >>> hop_distance(build_grid(4), 6, 6)
        0
    '''
    ra, ca = topo.coords(a)
    rb, cb = topo.coords(b)
    return abs(ra - rb) + abs(ca - cb)


def _canonical_shortest(graph, neighbors, s, d, limit):
    '''
    Generate up to `limit` shortest s-d paths in lexicographic node order.

    Only steps that decrease the BFS distance to `d` are followed; visiting the
    neighbours in ascending order makes the depth-first order lexicographic.
    '''
    dist = nx.single_source_shortest_path_length(graph, d)
    if s not in dist:
        return
    found = 0
    stack = [(s,)]
    while stack:
        nodes = stack.pop()
        last = nodes[-1]
        if last == d:
            yield Path(nodes)
            found += 1
            if found >= limit:
                return
            continue
        nxt = [n for n in neighbors(last) if dist.get(n, -1) == dist[last] - 1]
        for n in reversed(nxt):
            stack.append(nodes + (n,))


def iter_shortest_paths(topo, s, d):
    '''
    Iterate lazily over all shortest paths from `s` to `d` in the canonical
    (lexicographic) order of `shortest_paths`.

    Example:
        >>> it = iter_shortest_paths(build_grid(4), 0, 15)
        >>> next(it), next(it)
        (Path(0, 1, 2, 3, 7, 11, 15), Path(0, 1, 2, 6, 7, 11, 15))
    '''
    if s == d:
        raise ValueError('Empty request: source and destination are both %s.' % s)
    return _canonical_shortest(topo.graph, topo.neighbors, s, d, float('inf'))


def shortest_paths(topo, s, d, limit):
    '''
    Up to `limit` distinct shortest paths from `s` to `d`.

    The paths come in lexicographic order of their node sequences, hence the
    result is a deterministic function of the arguments.

    Args:
        topo (Topology):    The network.
        s (int):            The source node.
        d (int):            The destination node.
        limit (int):        The maximum number of paths.

    Returns:
        paths (list):       List of `Path`s, all of length hop_distance(s,d).

    Raises:
        ValueError:         If s == d (empty request) or limit < 1.

    Example:
        >>> shortest_paths(build_line(5), 0, 5, limit=3)
        [Path(0, 1, 2, 3, 4, 5)]
        >>> shortest_paths(build_grid(3), 4, 5, limit=5)
        [Path(4, 5)]
        >>> shortest_paths(build_grid(3), 8, 0, limit=2)
        [Path(8, 5, 2, 1, 0), Path(8, 5, 4, 1, 0)]
        >>> shortest_paths(build_grid(3), 3, 3, limit=1)
        Traceback (most recent call last):
        ...
        ValueError: Empty request: source and destination are both 3.
    '''
    if s == d:
        raise ValueError('Empty request: source and destination are both %s.' % s)
    if limit < 1:
        raise ValueError('The path limit has to be positive.')
    for n in (s, d):
        if not 0 <= n < topo.n_nodes:
            raise ValueError('Node %s is not in the topology.' % n)
    return list(_canonical_shortest(topo.graph, topo.neighbors, s, d, limit))


def nodes_disjoint(p1, p2):
    '''
    Whether two paths share no node apart from common end points.

    Example:
        >>> nodes_disjoint(Path([0, 1, 2]), Path([0, 3, 2]))
        True
        >>> nodes_disjoint(Path([0, 1, 2]), Path([0, 1, 4, 5]))
        False
    '''
    ends = set((p1.source, p1.dest)) & set((p2.source, p2.dest))
    return set(p1.nodes) & set(p2.nodes) <= ends


def detour(topo, link):
    '''
    The lexicographically first shortest path between the end points of `link`
    that does not use the link itself.

    The detour runs from the smaller to the larger end point.

    Returns:
        path (Path):    The detour or None if there is none (e.g. on a line).

    Example:
        >>> g = build_grid(5)
        >>> detour(g, (0, 1))
        Path(0, 5, 6, 1)
        >>> len(detour(g, (11, 12)))
        3
    '''
    if not topo.has_link(link):
        raise ValueError('%s is not a link of %s.' % (link, topo))
    a, b = link
    view = nx.restricted_view(topo.graph, [], [link])

    def nbrs(n):
        return tuple(m for m in topo.neighbors(n) if link_id(n, m) != link)

    for p in _canonical_shortest(view, nbrs, a, b, 1):
        return p
    return None
