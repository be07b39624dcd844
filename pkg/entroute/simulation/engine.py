'''
The slotted routing engine.

Time is divided into slots and every slot runs the following stages in that
order:

    (a) generation:     every idle link with a non-empty reservation queue
                        attempts to generate a pair (success p_gen),
    (b) forwarding:     every request (in id order) delivers if its entangled
                        segment spans its whole path, otherwise evaluates its
                        forwarding trigger and commits the links it may take,
    (c) swapping:       every request with committed but not yet fused links
                        gets a single chain-swap attempt (success p_swap); a
                        failure collapses the whole segment,
    (d) aging:          generated links that are not committed age by one slot
                        and are idle again at age L.

The entangled segment of a request grows from its source towards its
destination. A link is consumed when it is fused into the segment (the first
committed link is fused right away); committed links that are not yet fused
are held by the request and do not age. Links serve the head (lowest id) of
their reservation queue only. Requests queue on the links of their path ahead
of the segment; recovery detours are queued on with second priority: a
request waiting for a detour link is served only when no request needs the
link on its path.

Random numbers are drawn in fixed amounts per slot (one per link, then one per
request), so that runs with different forwarding modes but identical seeds see
the same random numbers.

Example:
    >>> from ..topology import build_line
    >>> from ..routing import plan_mg
    >>> from ..utils import RngStream
    >>> from .config import SimConfig
    >>> topo = build_line(2)
    >>> cfg = SimConfig(p_gen=1, p_swap=1, L='inf', N=1, M=2, topology='line')
    >>> m = run_episode(cfg, [(0, 2)], topo, [plan_mg(topo, (0, 2))], RngStream(0))
    >>> m.waiting_times, m.slots
    ([2], 2)
    >>> m = run_episode(cfg, [(0, 1)], topo, [plan_mg(topo, (0, 1))], RngStream(0))
    >>> m.waiting_times
    [1]
'''
__all__ = ['LinkRuntime', 'RequestRuntime', 'EpisodeMetrics', 'EngineState',
           'SlotCapExceeded', 'run_slot', 'run_episode',
           'forwarding_trigger_nonopp', 'forwarding_trigger_opp', 'swap_step',
           'IDLE', 'GENERATED', 'PENDING', 'SWAPPING', 'DELIVERED']

from .. import environment
from bisect import insort, bisect_left
import numpy as np

IDLE = 'idle'
GENERATED = 'generated'
PENDING = 'pending'
SWAPPING = 'swapping'
DELIVERED = 'delivered'


class SlotCapExceeded(RuntimeError):
    '''
    An episode did not finish within its slot cap.

    Attributes:
        metrics (EpisodeMetrics):   The metrics up to the cap.
    '''

    def __init__(self, msg, metrics):
        super(SlotCapExceeded, self).__init__(msg)
        self.metrics = metrics


class LinkRuntime(object):
    '''
    The state of a single link.

    Attributes:
        link (tuple):       The link id.
        state (str):        IDLE or GENERATED.
        age (int):          Slots spent generated and uncommitted.
        generated_slot (int):
                            The slot of the last successful generation.
        holder (int):       The request holding the (committed) link or None.
        queue (list):       The ids of the requests that reserved the link,
                            sorted, without duplicates.
        backup (list):      The same for reservations of recovery detours,
                            served only when `queue` is empty.
        attempts (int):     Generation attempts since the link went idle.
    '''
    __slots__ = ('link', 'state', 'age', 'generated_slot', 'holder', 'queue',
                 'backup', 'attempts')

    def __init__(self, link):
        self.link = link
        self.state = IDLE
        self.age = 0
        self.generated_slot = None
        self.holder = None
        self.queue = []
        self.backup = []
        self.attempts = 0

    @property
    def head(self):
        if self.queue:
            return self.queue[0]
        return self.backup[0] if self.backup else None

    @property
    def wanted(self):
        return bool(self.queue or self.backup)

    def reserve(self, rid, backup=False):
        queue = self.backup if backup else self.queue
        i = bisect_left(queue, rid)
        if i == len(queue) or queue[i] != rid:
            insort(queue, rid)

    def release(self, rid):
        for queue in (self.queue, self.backup):
            i = bisect_left(queue, rid)
            if i < len(queue) and queue[i] == rid:
                del queue[i]

    def ready_for(self, rid):
        '''Generated, not held by anyone and reserved to `rid` first.'''
        return (self.state == GENERATED and self.holder is None
                and self.head == rid)

    def __repr__(self):
        return '<Link %s %s age=%d holder=%s queue=%s backup=%s>' % (
                self.link, self.state, self.age, self.holder, self.queue,
                self.backup)


class RequestRuntime(object):
    '''
    The state of a single request.

    Attributes:
        id (int):           The id (the creation order).
        source, dest (int): The end nodes.
        plan (PathPlan):    The paths the request may use.
        active (int):       The index of the primary path the request is bound
                            to, None while it may still choose (NL).
        path (Path):        The current path (a primary one, possibly with
                            substituted detours); None while not bound.
        reach (int):        The number of links committed.
        span (int):         The number of links fused into the segment (the
                            frontier).
        state (str):        PENDING, SWAPPING or DELIVERED.
        created (int):      The slot of creation.
        delivered (int):    The slot of delivery (None before).
        reserved (dict):    The links the request is queued on, mapped to
                            True for second priority (detour) reservations.
    '''

    def __init__(self, rid, source, dest, plan, created=0):
        self.id = int(rid)
        self.source = source
        self.dest = dest
        self.plan = plan
        self.active = 0 if len(plan.primary) == 1 else None
        self.path = plan.primary[0] if self.active == 0 else None
        self.reach = 0
        self.span = 0
        self.state = PENDING
        self.created = created
        self.delivered = None
        self.reserved = {}

    @property
    def hops(self):
        return len(self.path) if self.path is not None else None

    def candidate_paths(self):
        '''The paths the trigger is evaluated on (in order).'''
        if self.path is not None:
            return [self.path]
        return list(self.plan.primary)

    def needed_links(self):
        '''
        The links the request still has to be queued on, mapped to whether
        the reservation is of second priority (only needed for a detour).
        '''
        if self.state == DELIVERED:
            return {}
        needed = {}
        for path in self.candidate_paths():
            for link in path.links[self.span:]:
                seg = self.plan.recovery.get(link)
                if seg is not None:
                    for l in seg.links:
                        needed.setdefault(l, True)
        for path in self.candidate_paths():
            for link in path.links[self.span:]:
                needed[link] = False
        return needed

    def __repr__(self):
        return '<Request %d %d->%d %s reach=%d span=%d>' % (
                self.id, self.source, self.dest, self.state, self.reach,
                self.span)


class EpisodeMetrics(object):
    '''
    The measurements of an episode.

    Attributes:
        delivered (dict):       Delivery slot per request id.
        link_waits (list):      Slots a generated link waited before it was
                                consumed or expired (one sample per event).
        generation_durations (dict):
                                Per link the attempts of every successful
                                generation (in order).
        swap_failures (int):    The number of failed swap steps.
        slots (int):            The number of slots run.
        n_requests (int):       The number of requests of the episode.
    '''

    def __init__(self, n_requests=0, links=()):
        self.delivered = {}
        self.link_waits = []
        self.generation_durations = {l: [] for l in links}
        self.swap_failures = 0
        self.slots = 0
        self.n_requests = int(n_requests)

    @property
    def waiting_times(self):
        '''The total waiting times of the delivered requests (by id).'''
        return [self.delivered[rid] for rid in sorted(self.delivered)]

    @property
    def complete(self):
        return len(self.delivered) == self.n_requests

    @property
    def atwt(self):
        '''The average total waiting time (NaN without deliveries).'''
        w = self.waiting_times
        return float(np.mean(w)) if w else float('nan')

    @property
    def alwt(self):
        '''The average link waiting time (NaN without samples).'''
        return float(np.mean(self.link_waits)) if self.link_waits else float('nan')

    def __repr__(self):
        return '<EpisodeMetrics %d/%d delivered in %d slots>' % (
                len(self.delivered), self.n_requests, self.slots)


class EngineState(object):
    '''
    The full state of an episode.

    Args:
        config (SimConfig):     The setup.
        topo (Topology):        The network.
        requests (list):        The (source, dest) pairs, ids by position.
        plans (list):           One `PathPlan` per request.

    Raises:
        ValueError:             If requests and plans do not fit.
    '''

    def __init__(self, config, topo, requests, plans):
        if len(requests) != len(plans):
            raise ValueError('Need exactly one plan per request.')
        self.config = config
        self.topo = topo
        self.links = [LinkRuntime(l) for l in topo.links]
        self.requests = []
        for rid, ((s, d), plan) in enumerate(zip(requests, plans)):
            if (plan.source, plan.dest) != (s, d):
                raise ValueError('Plan %s does not serve request %d: %d->%d.' % (
                                 plan, rid, s, d))
            for l in plan.links():
                if not topo.has_link(l):
                    raise ValueError('Plan of request %d uses %s, which is not '
                                     'a link of %s.' % (rid, l, topo))
            self.requests.append(RequestRuntime(rid, s, d, plan))
        self.slot = 0
        self.metrics = EpisodeMetrics(len(self.requests), topo.links)
        for req in self.requests:
            _sync_reservations(self, req)

    def link(self, link):
        return self.links[self.topo.link_index[link]]

    @property
    def done(self):
        return all(r.state == DELIVERED for r in self.requests)


def _sync_reservations(state, req):
    '''Queue the request exactly on the links it still needs.'''
    needed = req.needed_links()
    for l, backup in req.reserved.items():
        if needed.get(l) != backup:
            state.link(l).release(req.id)
    for l, backup in needed.items():
        if req.reserved.get(l) != backup:
            state.link(l).reserve(req.id, backup=backup)
    req.reserved = needed


def _consume(state, lr, req):
    '''The link is used up by `req`: record its dwell, make it idle.'''
    state.metrics.link_waits.append(state.slot - lr.generated_slot)
    lr.state = IDLE
    lr.age = 0
    lr.holder = None
    lr.attempts = 0
    lr.release(req.id)
    req.reserved.pop(lr.link, None)


def _deliver(state, req):
    req.state = DELIVERED
    req.delivered = state.slot
    state.metrics.delivered[req.id] = state.slot - req.created
    _sync_reservations(state, req)
    if environment.verbose >= environment.VERBOSE_TALKY:
        print('slot %d: request %d delivered' % (state.slot, req.id))


def _fuse(state, req):
    '''Fuse the next committed link into the segment.'''
    lr = state.link(req.path.links[req.span])
    req.span += 1
    _consume(state, lr, req)


def _collapse(state, req):
    '''A failed swap: consume all held links and start from the beginning.'''
    for l in req.path.links[req.span:req.reach]:
        _consume(state, state.link(l), req)
    req.reach = req.span = 0
    req.state = PENDING
    req.path = req.plan.primary[req.active]
    _sync_reservations(state, req)


def _window(path, reach, k):
    return path.links[reach:reach + min(k, len(path) - reach)]


def forwarding_trigger_nonopp(request, links):
    '''
    Whether a request may start forwarding non-opportunistically: all links of
    its path are ready for it at once.

    Args:
        request (RequestRuntime):   The request (with a bound path).
        links (callable):           Maps a link id to its `LinkRuntime`.

    Example:
        >>> from ..topology import Path
        >>> from ..routing import PathPlan
        >>> lr = {l: LinkRuntime(l) for l in [(0, 1), (1, 2)]}
        >>> req = RequestRuntime(0, 0, 2, PathPlan([Path([0, 1, 2])]))
        >>> for l in lr.values():
        ...     l.reserve(0); l.state = GENERATED
        >>> forwarding_trigger_nonopp(req, lr.get)
        True
        >>> lr[(1, 2)].state = IDLE
        >>> forwarding_trigger_nonopp(req, lr.get)
        False
    '''
    if request.reach != 0:
        return False
    return all(links(l).ready_for(request.id) for l in request.path.links)


def forwarding_trigger_opp(request, links, k):
    '''
    Whether a request may advance k-opportunistically: the k links right
    beyond its committed ones (fewer if fewer remain) are ready for it.

    Args:
        request (RequestRuntime):   The request (with a bound path).
        links (callable):           Maps a link id to its `LinkRuntime`.
        k (int):                    The opportunism degree.

    Example:
        >>> from ..topology import Path
        >>> from ..routing import PathPlan
        >>> lr = {l: LinkRuntime(l) for l in [(0, 1), (1, 2), (2, 3)]}
        >>> req = RequestRuntime(0, 0, 3, PathPlan([Path([0, 1, 2, 3])]))
        >>> for l in lr.values():
        ...     l.reserve(0)
        >>> lr[(0, 1)].state = GENERATED
        >>> forwarding_trigger_opp(req, lr.get, 1), forwarding_trigger_opp(req, lr.get, 2)
        (True, False)
        >>> req.reach = 2; lr[(2, 3)].state = GENERATED
        >>> forwarding_trigger_opp(req, lr.get, 3)
        True
    '''
    if request.reach >= len(request.path):
        return False
    return all(links(l).ready_for(request.id)
               for l in _window(request.path, request.reach, k))


def _substitute(state, req):
    '''
    Replace non-ready window links by their recovery detours (all detour links
    ready for the request), as far as this makes the trigger fire. The path is
    only changed if it does. Returns whether the path was changed.
    '''
    cfg = state.config
    recovery = req.plan.recovery
    path = req.path
    taken = []
    while not _trigger(state, req, path):
        window = (_window(path, req.reach, cfg.k) if cfg.opportunistic
                  else path.links)
        for pos, l in enumerate(window, req.reach):
            seg = recovery.get(l)
            if seg is None or state.link(l).ready_for(req.id):
                continue
            if not all(state.link(s).ready_for(req.id) for s in seg.links):
                continue
            try:
                path = path.splice(pos, seg)
            except ValueError:
                continue
            taken.append((l, seg))
            break
        else:
            return False
    req.path = path
    if environment.verbose >= environment.VERBOSE_TALKY:
        for l, seg in taken:
            print('slot %d: request %d takes detour %s around %s' % (
                  state.slot, req.id, seg, l))
    _sync_reservations(state, req)
    return True


def _trigger(state, req, path):
    '''Evaluate the trigger of the configured mode on `path`.'''
    cfg = state.config
    saved = req.path
    req.path = path
    try:
        if cfg.opportunistic:
            return forwarding_trigger_opp(req, state.link, cfg.k)
        return forwarding_trigger_nonopp(req, state.link)
    finally:
        req.path = saved


def _commit(state, req, links):
    for l in links:
        state.link(l).holder = req.id
    req.reach += len(links)
    req.state = SWAPPING
    if req.span == 0:
        _fuse(state, req)


def _bind(state, req, index):
    '''Bind an unbound (NL) request to one of its primary paths.'''
    req.active = index
    req.path = req.plan.primary[index]
    _sync_reservations(state, req)


def _forward(state, req):
    '''The forwarding stage of a single request.'''
    cfg = state.config
    k = cfg.k if cfg.opportunistic else None
    if req.path is None:
        # first path whose trigger fires wins (ties: lowest index)
        for i, path in enumerate(req.plan.primary):
            if _trigger(state, req, path):
                _bind(state, req, i)
                break
        else:
            return
    while req.reach < len(req.path):
        if not cfg.opportunistic and req.reach != 0:
            break
        window = (_window(req.path, req.reach, k) if k is not None
                  else req.path.links)
        if _trigger(state, req, req.path):
            _commit(state, req, window)
        elif not (req.plan.recovery and _substitute(state, req)):
            break
    if req.span == len(req.path):
        _deliver(state, req)


def swap_step(request, u, p_swap):
    '''
    The outcome of the single chain-swap attempt of a request in a slot.

    Args:
        request (RequestRuntime):   The request.
        u (float):                  Its uniform random number of the slot.
        p_swap (float):             The swapping success probability.

    Returns:
        outcome (str):  None if there is nothing to swap, else 'advanced',
                        'completed' (the segment spans the whole path) or
                        'failed'.

    Example:
        >>> from ..topology import Path
        >>> from ..routing import PathPlan
        >>> req = RequestRuntime(0, 0, 3, PathPlan([Path([0, 1, 2, 3])]))
        >>> req.state, req.reach, req.span = SWAPPING, 3, 1
        >>> swap_step(req, 0.3, 0.5), swap_step(req, 0.7, 0.5)
        ('advanced', 'failed')
        >>> req.span = 2
        >>> swap_step(req, 0.1, 0.5)
        'completed'
    '''
    if request.state != SWAPPING or not 1 <= request.span < request.reach:
        return None
    if u >= p_swap:
        return 'failed'
    if request.span + 1 == len(request.path):
        return 'completed'
    return 'advanced'


def _swap(state, req, u):
    '''The swap stage of a single request.'''
    cfg = state.config
    if cfg.swap_time_free:
        n = req.reach - req.span
        if req.state != SWAPPING or n <= 0:
            return
        if u < cfg.p_swap ** n:
            while req.span < req.reach:
                _fuse(state, req)
            if req.span == len(req.path):
                _deliver(state, req)
        else:
            state.metrics.swap_failures += 1
            _collapse(state, req)
        return
    outcome = swap_step(req, u, cfg.p_swap)
    if outcome is None:
        return
    if outcome == 'failed':
        state.metrics.swap_failures += 1
        if environment.verbose >= environment.VERBOSE_TALKY:
            print('slot %d: swap of request %d failed' % (state.slot, req.id))
        _collapse(state, req)
    else:
        _fuse(state, req)


def run_slot(state, rng):
    '''
    Run a single slot (all four stages) on the engine state.

    Args:
        state (EngineState):    The state to advance (in place).
        rng (RngStream):        The random stream of the episode.

    Returns:
        state (EngineState):    The same, advanced state.
    '''
    cfg = state.config
    state.slot += 1
    t = state.slot

    # (a) generation
    u_gen = rng.random(len(state.links))
    for lr, u in zip(state.links, u_gen):
        if lr.state == IDLE and lr.wanted:
            lr.attempts += 1
            if u < cfg.p_gen:
                lr.state = GENERATED
                lr.age = 0
                lr.generated_slot = t
                state.metrics.generation_durations[lr.link].append(lr.attempts)
                lr.attempts = 0

    # (b) forwarding
    for req in state.requests:
        if req.state != DELIVERED:
            _forward(state, req)

    # (c) swapping
    u_swap = rng.random(len(state.requests))
    for req, u in zip(state.requests, u_swap):
        if req.state == SWAPPING:
            _swap(state, req, u)

    # (d) aging
    for lr in state.links:
        if lr.state == GENERATED and lr.holder is None:
            lr.age += 1
            if lr.age >= cfg.L:
                state.metrics.link_waits.append(lr.age)
                lr.state = IDLE
                lr.age = 0
                lr.attempts = 0

    state.metrics.slots = t
    return state


def run_episode(config, requests, topo, plans, rng):
    '''
    Run an episode: all requests are created at slot 0 and the slots are run
    until every request is delivered.

    Args:
        config (SimConfig):     The setup (p_gen, p_swap, L, k, mode, ...).
        requests (list):        The (source, dest) pairs.
        topo (Topology):        The network.
        plans (list):           One `PathPlan` per request.
        rng (RngStream):        The random stream of the episode.

    Returns:
        metrics (EpisodeMetrics):   The measurements.

    Raises:
        SlotCapExceeded:        If the episode does not finish within
                                `config.slot_cap` slots.

    Example:
        >>> from ..topology import build_line
        >>> from ..routing import plan_mg
        >>> from ..utils import RngStream
        >>> from .config import SimConfig
        >>> topo = build_line(3)
        >>> run_episode(SimConfig(0.5, 1, 5, 0, 3, topology='line'),
        ...             [], topo, [], RngStream(0))
        Traceback (most recent call last):
        ...
        ValueError: N has to be a positive integer, got 0.
        >>> cfg = SimConfig(1, 1, 'inf', 1, 3, topology='line')
        >>> run_episode(cfg, [], topo, [], RngStream(0))
        <EpisodeMetrics 0/0 delivered in 0 slots>
        >>> run_episode(cfg, [(0, 3)], topo, [plan_mg(topo, (0, 3))], RngStream(0))
        <EpisodeMetrics 1/1 delivered in 3 slots>
        >>> try:
        ...     run_episode(cfg.copy(p_swap=0, slot_cap=50), [(0, 3)], topo,
        ...                 [plan_mg(topo, (0, 3))], RngStream(0))
        ... except SlotCapExceeded as e:
        ...     print(e.metrics, e.metrics.swap_failures)
        <EpisodeMetrics 0/1 delivered in 50 slots> 50
    '''
    state = EngineState(config, topo, requests, plans)
    while not state.done:
        if state.slot >= config.slot_cap:
            raise SlotCapExceeded('Episode not finished after %d slots '
                                  '(%d of %d requests delivered).' % (
                                      state.slot, len(state.metrics.delivered),
                                      len(state.requests)), state.metrics)
        run_slot(state, rng)
    return state.metrics
