'''
The benchmark methodology: random request sets, repeated episodes per set and
the aggregation of the metrics into reports.

For every one of `outer` request sets, `inner` episodes are run for every
(algorithm, mode) pair. Episode j of set i is driven by the seed
derive_seed(seed, i, j) for all pairs alike, hence the compared algorithms and
modes see identical request sets and random numbers. Per set the episode
metrics are averaged; the report holds the average of these averages with the
standard error across the sets.

Example:
    >>> from ..simulation import SimConfig
    >>> cfg = SimConfig(p_gen=1, p_swap=1, L='inf', N=3, M=4, topology='line')
    >>> rep = run_benchmark(cfg, inner=1, outer=1, algorithms=['MG'])
    >>> rep
    <BenchmarkReport MG x opportunistic,non-opportunistic: 1x1 episodes, 0 excluded>
    >>> rep.atwt('MG', 'opportunistic')[1]
    0.0
    >>> rep.invalid
    False
    >>> [r['mode'] for r in rep.rows()]
    ['opportunistic', 'non-opportunistic']
'''
__all__ = ['RequestSet', 'BenchmarkReport', 'build_topology',
           'generate_requests', 'run_episode_set', 'run_benchmark', 'sweep',
           'expand_sweep', 'REPORT_COLUMNS']

from .. import environment
from ..utils import RngStream, derive_seed, mean_and_sem, ProgressBar
from ..topology import build_line, build_grid
from ..routing import make_plan
from ..simulation import SimConfig, MODES, run_episode, SlotCapExceeded
from multiprocessing import Pool
import numpy as np
import warnings

REPORT_COLUMNS = ('p_gen', 'p_swap', 'L', 'N', 'M', 'k', 'topology', 'seed',
                  'algorithm', 'mode', 'atwt', 'atwt_se', 'alwt', 'alwt_se',
                  'improvement', 'excluded', 'episodes')


class RequestSet(object):
    '''
    A set of (source, dest) requests, ids by position.

    Args:
        requests (list):    The (source, dest) pairs.
        seed (int):         The seed the set was drawn with (None if unknown).

    Raises:
        ValueError:         If any request has source = dest.
    '''

    def __init__(self, requests, seed=None):
        requests = [(int(s), int(d)) for s, d in requests]
        for s, d in requests:
            if s == d:
                raise ValueError('Empty request: source and destination are '
                                 'both %s.' % s)
        self._requests = requests
        self.seed = seed

    @property
    def requests(self):
        return list(self._requests)

    def __len__(self):
        return len(self._requests)

    def __iter__(self):
        return iter(self._requests)

    def __getitem__(self, i):
        return self._requests[i]

    def __eq__(self, other):
        return isinstance(other, RequestSet) and self._requests == other._requests

    def __repr__(self):
        return '<RequestSet of %d requests (seed=%s)>' % (len(self), self.seed)


def build_topology(config):
    '''
    The topology a setup runs on.

    Example:
        >>> build_topology(SimConfig(0.5, 1, 30, 20, 5))
        <Topology grid(M=5): 25 nodes, 40 links>
    '''
    if config.topology == 'line':
        return build_line(config.M)
    return build_grid(config.M)


def generate_requests(topo, N, rng):
    '''
    Draw N requests with source and destination uniform on the nodes; pairs
    with source = dest are drawn again.

    Args:
        topo (Topology):    The network.
        N (int):            The number of requests.
        rng (RngStream):    The random stream.

    Returns:
        requests (RequestSet):  The requests.

    Example:
        >>> from ..topology import build_grid
        >>> g = build_grid(5)
        >>> a = generate_requests(g, 20, RngStream(3))
        >>> a == generate_requests(g, 20, RngStream(3)), len(a)
        (True, 20)
        >>> all(s != d for s, d in a)
        True
        >>> generate_requests(g, 0, RngStream(3))
        Traceback (most recent call last):
        ...
        ValueError: N has to be a positive integer, got 0.
    '''
    if int(N) != N or N < 1:
        raise ValueError('N has to be a positive integer, got %s.' % N)
    n = topo.n_nodes
    if n < 2:
        raise ValueError('Need at least two nodes to draw requests.')
    requests = []
    while len(requests) < N:
        s, d = rng.integers(0, n, size=2)
        if s != d:
            requests.append((int(s), int(d)))
    return RequestSet(requests, seed=getattr(rng, 'seed', None))


def run_episode_set(config, outer, inner, algorithms, modes):
    '''
    Run the episodes of a single request set.

    Args:
        config (SimConfig):     The setup; algorithm and mode are taken from
                                `algorithms` and `modes`.
        outer (int):            The index of the request set.
        inner (int):            The number of episodes per (algorithm, mode).
        algorithms (list):      The routing algorithms.
        modes (list):           The forwarding modes.

    Returns:
        results (dict):         Per (algorithm, mode) a dict with the per-set
                                means 'atwt' and 'alwt' (NaN if every episode
                                was excluded) and the number 'excluded' of
                                episodes that hit the slot cap.
    '''
    topo = build_topology(config)
    requests = generate_requests(topo, config.N,
                                 RngStream(derive_seed(config.seed, outer)))
    results = {}
    for algorithm in algorithms:
        plans = [make_plan(algorithm, topo, r) for r in requests]
        for mode in modes:
            cfg = config.copy(algorithm=algorithm, mode=mode)
            atwt, alwt, excluded = [], [], 0
            for j in range(inner):
                rng = RngStream(derive_seed(config.seed, outer, j))
                try:
                    m = run_episode(cfg, requests.requests, topo, plans, rng)
                except SlotCapExceeded as e:
                    excluded += 1
                    if environment.verbose >= environment.VERBOSE_TALKY:
                        print('set %d, episode %d (%s, %s): %s' % (
                              outer, j, algorithm, mode, e))
                    continue
                atwt.append(m.atwt)
                alwt.append(m.alwt)
            results[(algorithm, cfg.mode)] = {
                'atwt': np.mean(atwt) if atwt else float('nan'),
                'alwt': np.nanmean(alwt) if alwt else float('nan'),
                'excluded': excluded,
                }
    return results


class BenchmarkReport(object):
    '''
    The aggregated metrics of a benchmark.

    Args:
        config (SimConfig):     The setup (algorithm and mode fields are not
                                used).
        algorithms (list):      The compared routing algorithms.
        modes (list):           The compared forwarding modes.
        inner (int):            Episodes per request set.
        outer (int):            Request sets.
        set_results (list):     The results of `run_episode_set` per set (in
                                set order).
        exclusion_threshold (float):
                                The fraction of excluded episodes above which
                                the report is invalid.
        axis (str):             The name of the varied field in a sweep.
    '''

    def __init__(self, config, algorithms, modes, inner, outer, set_results,
                 exclusion_threshold=None, axis=None):
        self.config = config
        self.algorithms = list(algorithms)
        self.modes = list(modes)
        self.inner = int(inner)
        self.outer = int(outer)
        self.axis = axis
        if exclusion_threshold is None:
            exclusion_threshold = environment.DEFAULT_exclusion_threshold
        self.exclusion_threshold = float(exclusion_threshold)
        self._sets = {}
        self.excluded = {}
        for key in self.keys():
            self._sets[key] = {
                    'atwt': np.array([r[key]['atwt'] for r in set_results]),
                    'alwt': np.array([r[key]['alwt'] for r in set_results]),
                    }
            self.excluded[key] = sum(r[key]['excluded'] for r in set_results)

    def keys(self):
        '''The (algorithm, mode) pairs in report order.'''
        return [(a, m) for a in self.algorithms for m in self.modes]

    @property
    def episodes(self):
        '''The number of episodes per (algorithm, mode).'''
        return self.inner * self.outer

    def set_means(self, algorithm, mode, metric='atwt'):
        '''The per-set means of 'atwt' or 'alwt' (in set order).'''
        return self._sets[(algorithm, mode)][metric].copy()

    def atwt(self, algorithm, mode):
        '''The mean of the per-set ATWT means and its standard error.'''
        return mean_and_sem(self._sets[(algorithm, mode)]['atwt'])

    def alwt(self, algorithm, mode):
        '''The mean of the per-set ALWT means and its standard error.'''
        return mean_and_sem(self._sets[(algorithm, mode)]['alwt'])

    def improvement(self, algorithm, metric='atwt'):
        '''
        The relative improvement (NOPP - OPP) / NOPP of an algorithm; None if
        not both modes were run.
        '''
        if not set(MODES) <= set(self.modes):
            return None
        opp = getattr(self, metric)(algorithm, 'opportunistic')[0]
        nopp = getattr(self, metric)(algorithm, 'non-opportunistic')[0]
        return (nopp - opp) / nopp

    @property
    def exclusion_rate(self):
        '''The largest fraction of excluded episodes of any pair.'''
        if not self.excluded:
            return 0.0
        return max(self.excluded.values()) / float(self.episodes)

    @property
    def invalid(self):
        return self.exclusion_rate > self.exclusion_threshold

    def rows(self):
        '''
        The report as rows (dicts with the keys `REPORT_COLUMNS`), one per
        (algorithm, mode) in report order.
        '''
        rows = []
        for algorithm, mode in self.keys():
            atwt, atwt_se = self.atwt(algorithm, mode)
            alwt, alwt_se = self.alwt(algorithm, mode)
            imp = self.improvement(algorithm)
            rows.append(dict(
                p_gen=self.config.p_gen, p_swap=self.config.p_swap,
                L=self.config.L, N=self.config.N, M=self.config.M,
                k=self.config.k, topology=self.config.topology,
                seed=self.config.seed, algorithm=algorithm, mode=mode,
                atwt=atwt, atwt_se=atwt_se, alwt=alwt, alwt_se=alwt_se,
                improvement=float('nan') if imp is None else imp,
                excluded=self.excluded[(algorithm, mode)],
                episodes=self.episodes))
        return rows

    def __repr__(self):
        return '<BenchmarkReport %s x %s: %dx%d episodes, %d excluded>' % (
                ','.join(self.algorithms), ','.join(self.modes), self.outer,
                self.inner, sum(self.excluded.values()))


def run_benchmark(config, inner=None, outer=None, algorithms=None, modes=None,
                  jobs=1, exclusion_threshold=None):
    '''
    Run the full benchmark of a setup.

    Args:
        config (SimConfig):     The setup.
        inner (int):            Episodes per request set (default:
                                `environment.DEFAULT_inner`).
        outer (int):            Request sets (default:
                                `environment.DEFAULT_outer`).
        algorithms (list):      The algorithms to compare (default: the one of
                                the config).
        modes (list):           The modes to compare (default: both).
        jobs (int):             The number of worker processes for the sets.
        exclusion_threshold (float):
                                The fraction of excluded episodes tolerated.

    Returns:
        report (BenchmarkReport):   The aggregated metrics. If it is invalid,
                                    a warning is issued.

    Example:
        >>> cfg = SimConfig(p_gen=0.6, p_swap=1, L=10, N=4, M=3)
        >>> a = run_benchmark(cfg, inner=2, outer=3, algorithms=['MG', 'QP'])
        >>> b = run_benchmark(cfg, inner=2, outer=3, algorithms=['MG', 'QP'],
        ...                   jobs=2)
        >>> a.rows() == b.rows()
        True
    '''
    if inner is None:
        inner = environment.DEFAULT_inner
    if outer is None:
        outer = environment.DEFAULT_outer
    for name, x in (('inner', inner), ('outer', outer), ('jobs', jobs)):
        if int(x) != x or x < 1:
            raise ValueError('%s has to be a positive integer, got %s.' % (
                             name, x))
    algorithms = [config.algorithm] if algorithms is None else \
            [config.copy(algorithm=a).algorithm for a in algorithms]
    modes = list(MODES) if modes is None else \
            [config.copy(mode=m).mode for m in modes]
    args = [(config, i, int(inner), algorithms, modes) for i in range(outer)]

    if environment.verbose >= environment.VERBOSE_TACITURN:
        print('benchmark %s: %d sets x %d episodes' % (config, outer, inner))
    if jobs > 1 and outer > 1:
        with Pool(min(jobs, outer)) as pool:
            res = [pool.apply_async(run_episode_set, a) for a in args]
            set_results = [r.get() for r in res]
    elif environment.verbose >= environment.VERBOSE_NORMAL:
        set_results = []
        with ProgressBar(args, label='request sets') as pbar:
            for a in pbar:
                set_results.append(run_episode_set(*a))
    else:
        set_results = [run_episode_set(*a) for a in args]

    report = BenchmarkReport(config, algorithms, modes, inner, outer,
                             set_results, exclusion_threshold)
    if report.invalid:
        warnings.warn('%.2f%% of the episodes of %s hit the slot cap of %d.' % (
                      100.0 * report.exclusion_rate, config, config.slot_cap))
    return report


def expand_sweep(config, axis, values):
    '''
    The setups of a sweep: copies of `config` with the field `axis` set to
    each of the values.

    Raises:
        ValueError:     For an unknown axis or invalid values.

    Example:
        >>> cfg = SimConfig(0.5, 1, 30, 20, 5)
        >>> [c.p_gen for c in expand_sweep(cfg, 'p_gen', [0.1, 0.9])]
        [0.1, 0.9]
        >>> expand_sweep(cfg, 'colour', [1])
        Traceback (most recent call last):
        ...
        ValueError: SimConfig has no field "colour".
    '''
    return [config.copy(**{axis: v}) for v in values]


def sweep(configs, axis=None, master_seed=None, **kwargs):
    '''
    Run a benchmark for every setup of a sweep.

    Setup number i runs with the seed derive_seed(master_seed, i), hence all
    reports are determined by the master seed and the list of setups.

    Args:
        configs (list):     The setups (non-empty).
        axis (str):         The name of the varied field (for the reports).
        master_seed (int):  The master seed (default: the seed of the first
                            setup).
        **kwargs:           Passed on to `run_benchmark`.

    Returns:
        reports (list):     One `BenchmarkReport` per setup, in order.

    Example:
        >>> cfg = SimConfig(p_gen=1, p_swap=1, L='inf', N=2, M=3, topology='line')
        >>> reps = sweep(expand_sweep(cfg, 'M', [2, 3]), 'M', inner=1, outer=2)
        >>> [r.config.M for r in reps], reps[0].axis
        ([2, 3], 'M')
    '''
    configs = list(configs)
    if not configs:
        raise ValueError('A sweep needs at least one setup.')
    if master_seed is None:
        master_seed = configs[0].seed
    reports = []
    for i, cfg in enumerate(configs):
        cfg = cfg.copy(seed=derive_seed(master_seed, i))
        rep = run_benchmark(cfg, **kwargs)
        rep.axis = axis
        reports.append(rep)
    return reports
