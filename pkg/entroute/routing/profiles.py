'''
Path plans of the routing algorithms compared in the benchmarks.

All three algorithms select by hop distance only (which on homogeneous grids
induces the same preference as more elaborate path metrics):

    MG  Modified Greedy: a single shortest path.
    NL  Nonoblivious Local: up to `DEFAULT_NL_paths` node-disjoint shortest
        paths; the request is reserved on all of them and continues on the one
        whose forwarding trigger fires first.
    QP  a QPASS/QCAST combination: one shortest path plus, for every link of
        it, a recovery detour around that link, substituted at trigger time if
        the link is not ready but the detour is.

Plans are deterministic functions of the topology and the request.

Example:
    >>> from ..topology import build_grid, build_line
    >>> g = build_grid(3)
    >>> plan_mg(g, (0, 8))
    <PathPlan MG: 1 path(s), 0 recovery segment(s)>
    >>> plan_nl(g, (0, 8)).primary
    [Path(0, 1, 2, 5, 8), Path(0, 3, 4, 7, 8)]
    >>> qp = plan_qp(g, (0, 8))
    >>> qp.recovery[(1, 2)]
    Path(1, 4, 5, 2)
    >>> plan_qp(build_line(4), (0, 4)).recovery
    {}
'''
__all__ = ['PathPlan', 'plan_mg', 'plan_nl', 'plan_qp', 'make_plan',
           'PLANNERS']

from .. import environment
from ..topology import shortest_paths, iter_shortest_paths, nodes_disjoint, \
                       detour


class PathPlan(object):
    '''
    The paths a request may use.

    Args:
        primary (list):     The primary paths (at least one), all from the
                            request's source to its destination.
        recovery (dict):    Map from a primary link to a detour between its end
                            points (length >= 2).
        algorithm (str):    The tag of the algorithm that made the plan.

    Raises:
        ValueError:         If the paths do not fit together.
    '''

    def __init__(self, primary, recovery=None, algorithm=None):
        primary = list(primary)
        if not primary:
            raise ValueError('A plan needs at least one primary path.')
        ends = (primary[0].source, primary[0].dest)
        for p in primary[1:]:
            if (p.source, p.dest) != ends:
                raise ValueError('All primary paths must connect %d and %d.' % ends)
        recovery = dict(recovery or {})
        primary_links = set(l for p in primary for l in p.links)
        for link, seg in recovery.items():
            if link not in primary_links:
                raise ValueError('%s is not a primary link.' % (link,))
            if set((seg.source, seg.dest)) != set(link) or len(seg) < 2:
                raise ValueError('%s is no detour of %s.' % (seg, link))
        self.primary = primary
        self.recovery = recovery
        self.algorithm = algorithm

    @property
    def source(self):
        return self.primary[0].source

    @property
    def dest(self):
        return self.primary[0].dest

    def links(self):
        '''All links the plan may use (primary and recovery), sorted.'''
        links = set(l for p in self.primary for l in p.links)
        for seg in self.recovery.values():
            links.update(seg.links)
        return sorted(links)

    def __repr__(self):
        return '<PathPlan %s: %d path(s), %d recovery segment(s)>' % (
                self.algorithm, len(self.primary), len(self.recovery))


def _ends(request):
    s, d = request
    if s == d:
        raise ValueError('Empty request: source and destination are both %s.' % s)
    return s, d


def plan_mg(topo, request):
    '''
    The Modified Greedy plan: the (lexicographically) first shortest path.

    Example:
        >>> from ..topology import build_grid
        >>> g = build_grid(5)
        >>> plan_mg(g, (g.node_at(0, 0), g.node_at(0, 4))).primary
        [Path(0, 1, 2, 3, 4)]
    '''
    s, d = _ends(request)
    return PathPlan(shortest_paths(topo, s, d, limit=1), algorithm='MG')


def plan_nl(topo, request, n_paths=None):
    '''
    The Nonoblivious Local plan: node-disjoint shortest paths, chosen greedily
    in canonical order (the first path, then the first one disjoint to all
    chosen ones, ...).

    Args:
        topo (Topology):    The network.
        request (tuple):    (source, dest).
        n_paths (int):      The maximum number of paths (default:
                            `environment.DEFAULT_NL_paths`).

    Example:
        >>> from ..topology import build_line, build_grid
        >>> plan_nl(build_line(5), (1, 4)).primary
        [Path(1, 2, 3, 4)]
        >>> plan_nl(build_grid(3), (4, 5)).primary
        [Path(4, 5)]
    '''
    s, d = _ends(request)
    if n_paths is None:
        n_paths = environment.DEFAULT_NL_paths
    chosen = []
    for p in iter_shortest_paths(topo, s, d):
        if all(nodes_disjoint(p, c) for c in chosen):
            chosen.append(p)
            if len(chosen) >= n_paths:
                break
    return PathPlan(chosen, algorithm='NL')


def plan_qp(topo, request):
    '''
    The QPASS/QCAST-like plan: the MG path and a detour for every of its links
    (where one exists).

    Example:
        >>> from ..topology import build_grid
        >>> g = build_grid(5)
        >>> plan = plan_qp(g, (6, 8))
        >>> plan.primary[0], sorted(plan.recovery.items())
        (Path(6, 7, 8), [((6, 7), Path(6, 1, 2, 7)), ((7, 8), Path(7, 2, 3, 8))])
    '''
    s, d = _ends(request)
    path = shortest_paths(topo, s, d, limit=1)[0]
    recovery = {}
    for link in path.links:
        seg = detour(topo, link)
        if seg is not None:
            recovery[link] = seg
    return PathPlan([path], recovery, algorithm='QP')


PLANNERS = {
    'MG': plan_mg,
    'NL': plan_nl,
    'QP': plan_qp,
    }


def make_plan(algorithm, topo, request):
    '''
    The plan of the given algorithm for a request.

    Raises:
        ValueError:     For an unknown algorithm.

    Example:
        >>> from ..topology import build_line
        >>> make_plan('mg', build_line(3), (3, 0)).primary
        [Path(3, 2, 1, 0)]
        >>> make_plan('XY', build_line(3), (3, 0))
        Traceback (most recent call last):
        ...
        ValueError: Unknown routing algorithm "XY"!
    '''
    try:
        planner = PLANNERS[str(algorithm).upper()]
    except KeyError:
        raise ValueError('Unknown routing algorithm "%s"!' % algorithm)
    return planner(topo, request)
