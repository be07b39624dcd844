"""Test the slotted engine: hand traces, invariants and cross-validation."""
import numpy as np
import pytest

from entroute.utils import RngStream, mean_and_sem
from entroute.topology import build_line, build_grid, Path
from entroute.routing import plan_mg, make_plan, PathPlan
from entroute.analysis import GenerationMatrix, running_norm
from entroute.simulation import SimConfig, EngineState, LinkRuntime, \
    RequestRuntime, run_slot, run_episode, forwarding_trigger_nonopp, \
    forwarding_trigger_opp, SlotCapExceeded, IDLE, GENERATED, PENDING, \
    SWAPPING, DELIVERED


class ScriptedRng(object):
    '''Hands out prepared uniform numbers instead of random ones.'''

    def __init__(self, draws):
        self.draws = [np.asarray(d, dtype=float) for d in draws]

    def random(self, n):
        u = self.draws.pop(0)
        assert len(u) == n
        return u


def line_config(**changes):
    fields = dict(p_gen=1, p_swap=1, L='inf', N=1, M=3, topology='line')
    fields.update(changes)
    return SimConfig(**fields)


def single(cfg, request, seed):
    topo = build_line(cfg.M)
    plan = make_plan(cfg.algorithm, topo, request)
    return run_episode(cfg, [request], topo, [plan], RngStream(seed))


@pytest.mark.parametrize('mode', ['opportunistic', 'non-opportunistic'])
def test_hand_traces(mode):
    assert single(line_config(M=2, mode=mode), (0, 2), 0).waiting_times == [2]
    assert single(line_config(M=2, mode=mode), (0, 1), 0).waiting_times == [1]
    assert single(line_config(M=3, mode=mode), (0, 3), 0).waiting_times == [3]
    assert single(line_config(M=5, mode=mode), (0, 5), 0).waiting_times == [5]


def test_zero_requests():
    m = run_episode(line_config(), [], build_line(3), [], RngStream(0))
    assert m.slots == 0
    assert m.waiting_times == []
    assert m.complete


def test_lifetime_expiry():
    topo = build_line(2)
    plan = plan_mg(topo, (0, 2))
    cfg = line_config(M=2, p_gen=0.5, L=1, mode='nopp')
    state = EngineState(cfg, topo, [(0, 2)], [plan])
    run_slot(state, ScriptedRng([[0.1, 0.9], [0.5]]))
    assert state.link((0, 1)).state == IDLE
    assert state.metrics.link_waits == [1]
    assert state.metrics.generation_durations[(0, 1)] == [1]

    state = EngineState(cfg.copy(L=2), topo, [(0, 2)], [plan])
    run_slot(state, ScriptedRng([[0.1, 0.9], [0.5]]))
    assert state.link((0, 1)).state == GENERATED
    assert state.link((0, 1)).age == 1
    run_slot(state, ScriptedRng([[0.9, 0.9], [0.5]]))
    assert state.link((0, 1)).state == IDLE
    assert state.metrics.link_waits == [2]


def test_swap_failure_consumes_committed_links():
    topo = build_line(3)
    cfg = line_config(p_swap=0.5)
    state = EngineState(cfg, topo, [(0, 3)], [plan_mg(topo, (0, 3))])
    run_slot(state, ScriptedRng([[0.0, 0.0, 0.0], [0.9]]))
    req = state.requests[0]
    assert all(lr.state == IDLE for lr in state.links)
    assert all(lr.holder is None for lr in state.links)
    assert (req.reach, req.span, req.state) == (0, 0, PENDING)
    assert state.metrics.swap_failures == 1
    assert state.metrics.link_waits == [0, 0, 0]
    assert all(lr.queue == [0] for lr in state.links)


def test_swap_chain_one_step_per_slot():
    topo = build_line(3)
    state = EngineState(line_config(), topo, [(0, 3)], [plan_mg(topo, (0, 3))])
    req = state.requests[0]
    run_slot(state, ScriptedRng([[0, 0, 0], [0]]))
    assert (req.reach, req.span) == (3, 2)
    run_slot(state, ScriptedRng([[0, 0, 0], [0]]))
    assert (req.reach, req.span) == (3, 3)
    assert req.state != DELIVERED
    run_slot(state, ScriptedRng([[0, 0, 0], [0]]))
    assert req.state == DELIVERED
    assert state.metrics.delivered == {0: 3}


def test_reservation_order():
    links = {l: LinkRuntime(l) for l in [(0, 1), (1, 2)]}
    plan = PathPlan([Path([0, 1, 2])])
    first = RequestRuntime(0, 0, 2, plan)
    second = RequestRuntime(1, 0, 2, plan)
    for lr in links.values():
        lr.reserve(1)
        lr.reserve(0)
        lr.reserve(0)
        lr.state = GENERATED
    assert links[(0, 1)].queue == [0, 1]
    assert forwarding_trigger_nonopp(first, links.get)
    assert not forwarding_trigger_nonopp(second, links.get)
    assert not forwarding_trigger_opp(second, links.get, 1)


def _generation_draws(topo, failing):
    u = np.zeros(len(topo.links))
    for l in failing:
        u[topo.link_index[l]] = 0.9
    return u


def _qp_state(mode, k=1):
    topo = build_grid(3)
    cfg = SimConfig(p_gen=0.5, p_swap=1, L='inf', N=1, M=3, k=k,
                    algorithm='QP', mode=mode)
    return topo, EngineState(cfg, topo, [(0, 2)], [make_plan('QP', topo, (0, 2))])


def test_detour_needs_the_trigger_to_fire():
    topo, state = _qp_state('nopp')
    req = state.requests[0]
    assert req.plan.recovery[(0, 1)] == Path([0, 3, 4, 1])
    assert req.plan.recovery[(1, 2)] == Path([1, 4, 5, 2])
    # the detour around (0, 1) is ready, the one around (1, 2) is not
    draws = _generation_draws(topo, [(0, 1), (1, 2), (4, 5)])
    run_slot(state, ScriptedRng([draws, [0.0]]))
    assert req.path == Path([0, 1, 2])
    assert (req.reach, req.state) == (0, PENDING)
    assert state.link((0, 1)).queue == [0]
    assert state.link((1, 2)).queue == [0]
    assert state.link((0, 3)).backup == [0]


def test_detour_taken_when_trigger_fires():
    topo, state = _qp_state('nopp')
    req = state.requests[0]
    run_slot(state, ScriptedRng([_generation_draws(topo, [(0, 1)]), [0.0]]))
    assert req.path == Path([0, 3, 4, 1, 2])
    assert (req.reach, req.span, req.state) == (4, 2, SWAPPING)
    assert not state.link((0, 1)).wanted
    assert state.link((1, 4)).holder == 0


@pytest.mark.parametrize('k', [1, 2])
def test_opportunistic_detour(k):
    topo, state = _qp_state('opp', k)
    req = state.requests[0]
    # (0, 1) fails, (1, 4) of its detour as well
    run_slot(state, ScriptedRng([_generation_draws(topo, [(0, 1), (1, 4)]),
                                 [0.0]]))
    assert req.path == Path([0, 1, 2])
    assert req.reach == 0
    run_slot(state, ScriptedRng([_generation_draws(topo, [(0, 1)]), [0.0]]))
    assert req.path == Path([0, 3, 4, 1, 2])
    assert req.reach == 4


def test_detour_reservations_come_second():
    topo = build_grid(3)
    requests = [(0, 2), (3, 4)]
    plans = [make_plan('QP', topo, requests[0]), make_plan('MG', topo, requests[1])]
    cfg = SimConfig(p_gen=0.5, p_swap=1, L='inf', N=2, M=3, algorithm='QP')
    state = EngineState(cfg, topo, requests, plans)
    lr = state.link((3, 4))
    assert (lr.queue, lr.backup, lr.head) == ([1], [0], 1)
    assert state.link((0, 3)).head == 0
    for l in topo.links:
        state.link(l).state = GENERATED
    assert not state.link((3, 4)).ready_for(0)
    assert state.link((3, 4)).ready_for(1)


def test_slot_cap():
    cfg = line_config(p_swap=0, slot_cap=40)
    with pytest.raises(SlotCapExceeded) as e:
        single(cfg, (0, 3), 1)
    assert e.value.metrics.slots == 40
    assert e.value.metrics.waiting_times == []
    assert e.value.metrics.swap_failures > 0


def test_determinism():
    topo = build_grid(4)
    requests = [(0, 15), (3, 12), (5, 6), (15, 0)]
    for algorithm in ('MG', 'NL', 'QP'):
        cfg = SimConfig(0.4, 0.9, 8, 4, 4, algorithm=algorithm)
        plans = [make_plan(algorithm, topo, r) for r in requests]
        a = run_episode(cfg, requests, topo, plans, RngStream(17))
        b = run_episode(cfg, requests, topo, plans, RngStream(17))
        assert a.delivered == b.delivered
        assert a.link_waits == b.link_waits
        assert a.slots == b.slots


def _check_state(state):
    cfg = state.config
    for lr in state.links:
        assert lr.queue == sorted(set(lr.queue))
        assert lr.backup == sorted(set(lr.backup))
        if lr.state == GENERATED:
            assert lr.age < cfg.L
        else:
            assert lr.holder is None
    for req in state.requests:
        queued = {lr.link: req.id in lr.backup for lr in state.links
                  if req.id in lr.queue or req.id in lr.backup}
        assert queued == req.reserved
        assert not any(req.id in lr.queue and req.id in lr.backup
                       for lr in state.links)
        if req.state == DELIVERED:
            assert not queued
        else:
            assert 0 <= req.span <= req.reach
            if req.path is not None:
                assert req.reach <= len(req.path)
                for l in req.path.links[req.span:req.reach]:
                    assert state.link(l).holder == req.id


@pytest.mark.parametrize('algorithm', ['MG', 'NL', 'QP'])
@pytest.mark.parametrize('mode', ['opportunistic', 'non-opportunistic'])
def test_invariants_on_grid(algorithm, mode):
    topo = build_grid(4)
    requests = [(0, 15), (3, 12), (12, 3), (5, 10), (4, 7), (1, 13)]
    plans = [make_plan(algorithm, topo, r) for r in requests]
    cfg = SimConfig(0.5, 0.8, 5, len(requests), 4, k=2 if mode == 'opportunistic' else 1,
                    algorithm=algorithm, mode=mode)
    state = EngineState(cfg, topo, requests, plans)
    rng = RngStream(3)
    while not state.done:
        run_slot(state, rng)
        _check_state(state)
        assert state.slot < 10**5
    assert len(state.metrics.delivered) == len(requests)
    assert all(not lr.wanted for lr in state.links)
    for req in state.requests:
        assert (req.path.source, req.path.dest) == (req.source, req.dest)


def _check_recursion_equivalence(M, N, p, seeds):
    topo = build_line(M)
    cfg = SimConfig(p, 1, 'inf', N, M, topology='line', swap_time_free=True)
    requests = [(0, M)] * N
    plans = [plan_mg(topo, (0, M))] * N
    for seed in seeds:
        m = run_episode(cfg, requests, topo, plans, RngStream(seed))
        T = GenerationMatrix.from_observed(
                [m.generation_durations[l] for l in topo.links], N)
        assert m.waiting_times == running_norm(T.D, r=M, k=1).tolist(), seed


@pytest.mark.parametrize('M', [5, 10])
@pytest.mark.parametrize('N', [1, 5, 20])
def test_recursion_equivalence(M, N):
    _check_recursion_equivalence(M, N, 0.5, range(20))


@pytest.mark.slow
@pytest.mark.parametrize('M', [5, 10])
@pytest.mark.parametrize('N', [1, 5, 20])
@pytest.mark.parametrize('p', [0.3, 0.7])
def test_recursion_equivalence_full(M, N, p):
    _check_recursion_equivalence(M, N, p, range(1000))


def _paired_waits(M, p, seeds, **modes):
    waits = {}
    for name, changes in modes.items():
        cfg = line_config(M=M, p_gen=p, **changes)
        waits[name] = np.array([single(cfg, (0, M), s).waiting_times[0]
                                for s in seeds])
    return waits


def _check_opportunism_gain(M, p, seeds):
    w = _paired_waits(M, p, seeds, opp=dict(mode='opp'),
                      nopp=dict(mode='nopp'))
    assert np.all(w['opp'] <= w['nopp'])
    assert w['opp'].mean() < w['nopp'].mean()


@pytest.mark.parametrize('M', [5, 10])
@pytest.mark.parametrize('p', [0.3, 0.7])
def test_opportunism_gain(M, p):
    _check_opportunism_gain(M, p, range(200))


@pytest.mark.slow
@pytest.mark.parametrize('M', [5, 10])
@pytest.mark.parametrize('p', [0.3, 0.7])
def test_opportunism_gain_full(M, p):
    _check_opportunism_gain(M, p, range(1000))


def test_nonopportunistic_is_full_degree():
    w = _paired_waits(6, 0.4, range(100), nopp=dict(mode='nopp'),
                      full=dict(mode='opp', k=10**6), k6=dict(mode='opp', k=6))
    assert np.all(w['nopp'] == w['full'])
    assert np.all(w['nopp'] == w['k6'])


def test_opportunism_degree():
    seeds = range(300)
    w = _paired_waits(6, 0.5, seeds, k1=dict(k=1), k2=dict(k=2), k3=dict(k=3),
                      nopp=dict(mode='nopp'))
    for k in ('k2', 'k3'):
        assert np.all(w['k1'] <= w[k])
        assert np.all(w[k] <= w['nopp'])
    m2, s2 = mean_and_sem(w['k2'])
    m3, s3 = mean_and_sem(w['k3'])
    assert m2 <= m3 + s2 + s3
