'''
Monte-Carlo estimates of the transmission rate of a line network.

An infinite backlog of requests waits at the source of a line of M links and is
served opportunistically without swapping time (and infinite lifetime). With
W_n the delivery time of the n-th request, the number of requests delivered by
slot t is N_t = #{n : W_n <= t} and the rate is estimated as R_t = E{N_t}/t.
The same generation times give the bounds

    R_low_t = E{N^up_t}/t  <=  R_t  <=  R_up_t = E{N^low_t}/t

where N^up / N^low count deliveries under the waiting times W^up (every
request waits for the whole line) and W^low (the busiest link alone). Since
all three come from the same samples, the ordering holds sample by sample.
The renewal-type estimate R~_t = t/E{W_t} is reported as well.

Every trial draws its generation times from its own stream, hence the results
depend neither on the chunking of the trials nor on the number of workers.

Example:
    >>> from ..utils import RngStream
    >>> rc = estimate_rates(3, 1.0, horizon=5, trials=4, rng=RngStream(0))
    >>> rc
    <RateCurves M=3, p=1, horizon=5, trials=4>
    >>> rc.R.tolist()
    [1.0, 1.0, 1.0, 1.0, 1.0]
    >>> rc.R_tilde.tolist()
    [1.0, 1.0, 1.0, 1.0, 1.0]
    >>> sample_delivery_trajectory(3, 1.0, 4, RngStream(1)).tolist()
    [1, 2, 3, 4]
'''
__all__ = ['RateCurves', 'estimate_rates', 'sample_delivery_trajectory',
           'trial_stream', 'estimate_rate_spectrum']

from .. import environment
from ..utils import RngStream, ProgressBar
from .generation import check_probability
from .waiting import running_norm, spectrum_parameters, spectrum_labels
import numpy as np
from multiprocessing import Pool


def trial_stream(rng, trial):
    '''
    The random stream of a single trial of a rate estimate driven by `rng`.

    Example:
        >>> from ..utils import RngStream
        >>> trial_stream(RngStream(5), 2).seed == trial_stream(RngStream(5), 2).seed
        True
    '''
    return RngStream(rng.child_seed(trial))


def _check_counts(horizon, trials):
    if int(horizon) != horizon or horizon < 1:
        raise ValueError('The horizon has to be a positive integer.')
    if int(trials) != trials or trials < 1:
        raise ValueError('The number of trials has to be a positive integer.')
    return int(horizon), int(trials)


def _draw(M, p, horizon, rng, trials):
    '''Stack the (M x horizon) generation times of the given trials.'''
    return np.stack([trial_stream(rng, i).geometric(p, size=(M, horizon))
                     for i in trials])


def _delivery_times(T):
    '''
    The delivery times W_n (opportunistic), W^up_n and W^low_n of the first n
    requests for a batch of generation times T of shape (trials, M, N).
    '''
    D = np.swapaxes(T, -1, -2)
    M = T.shape[-2]
    W = running_norm(D, r=M, k=1)
    W_up = np.cumsum(T.max(axis=-2), axis=-1)
    W_low = np.cumsum(T, axis=-1).max(axis=-2)
    return W, W_up, W_low


def _counts(W, t):
    '''N_t = #{n : W_n <= t} for every row (trial) of the non-decreasing W.'''
    return np.stack([np.searchsorted(w, t, side='right') for w in W])


def _rate_chunk(M, p, horizon, rng_seed, rng_stream, trials):
    '''Integer sums and sums of squares of N_t, N^up_t, N^low_t and W_t.'''
    rng = RngStream(rng_seed, rng_stream)
    T = _draw(M, p, horizon, rng, trials)
    W, W_up, W_low = _delivery_times(T)
    t = np.arange(1, horizon + 1)
    sums = {}
    for name, x in (('N', _counts(W, t)), ('N_up', _counts(W_up, t)),
                    ('N_low', _counts(W_low, t)), ('W', W)):
        x = x.astype(np.int64)
        sums[name] = (x.sum(axis=0), (x * x).sum(axis=0))
    return sums


def _mean_sem(s, s2, n):
    '''Mean and standard error from (exact) sums and sums of squares.'''
    s = s.astype(float)
    mean = s / n
    if n < 2:
        return mean, np.zeros_like(mean)
    var = (s2.astype(float) - s * mean) / (n - 1)
    return mean, np.sqrt(np.maximum(var, 0.0) / n)


class RateCurves(object):
    '''
    Estimated rate curves over the slots t = 1..horizon.

    Attributes:
        M, p (int, float):      The line and its generation probability.
        horizon (int):          The number of slots.
        trials (int):           The number of Monte-Carlo trials.
        t (np.ndarray):         The slots 1..horizon.
        R, R_low, R_up, R_tilde (np.ndarray):
                                The rate estimate, its bounds and t/E{W_t}.
        se_R, se_R_low, se_R_up (np.ndarray):
                                The standard errors of R, R_low and R_up.
        mean_W, se_W (np.ndarray):
                                E{W_t} (delivery time of request t) and its
                                standard error.
    '''

    def __init__(self, M, p, horizon, trials, sums):
        self.M = int(M)
        self.p = float(p)
        self.horizon = int(horizon)
        self.trials = int(trials)
        self.t = np.arange(1, self.horizon + 1)
        n = self.trials
        mN, sN = _mean_sem(*sums['N'], n)
        mUp, sUp = _mean_sem(*sums['N_up'], n)
        mLow, sLow = _mean_sem(*sums['N_low'], n)
        self.mean_W, self.se_W = _mean_sem(*sums['W'], n)
        self.R, self.se_R = mN / self.t, sN / self.t
        self.R_low, self.se_R_low = mUp / self.t, sUp / self.t
        self.R_up, self.se_R_up = mLow / self.t, sLow / self.t
        self.R_tilde = self.t / self.mean_W

    def __len__(self):
        return self.horizon

    def __repr__(self):
        return '<RateCurves M=%d, p=%g, horizon=%d, trials=%d>' % (
                self.M, self.p, self.horizon, self.trials)


def estimate_rates(M, p, horizon, trials, rng, jobs=1, chunk=None):
    '''
    Estimate the rate curves R_t, R_low_t, R_up_t and R~_t of a line.

    Args:
        M (int):            The number of links.
        p (float):          The generation success probability.
        horizon (int):      The number of slots to follow.
        trials (int):       The number of independent trials.
        rng (RngStream):    The stream the trial streams are derived from.
        jobs (int):         The number of worker processes.
        chunk (int):        Trials processed at once (default:
                            `environment.DEFAULT_rate_chunk`).

    Returns:
        curves (RateCurves):    The estimates with their standard errors.

    Example:
        >>> from ..utils import RngStream
        >>> rc = estimate_rates(4, 0.5, horizon=50, trials=20, rng=RngStream(1))
        >>> bool(np.all(rc.R_low <= rc.R) and np.all(rc.R <= rc.R_up))
        True
        >>> rc2 = estimate_rates(4, 0.5, horizon=50, trials=20, rng=RngStream(1),
        ...                      chunk=3)
        >>> bool(np.all(rc.R == rc2.R))
        True
    '''
    if int(M) != M or M < 1:
        raise ValueError('M has to be a positive integer, got %s.' % M)
    p = check_probability(p)
    horizon, trials = _check_counts(horizon, trials)
    if chunk is None:
        chunk = environment.DEFAULT_rate_chunk
    chunks = [range(i, min(i + chunk, trials)) for i in range(0, trials, chunk)]
    args = [(int(M), p, horizon, rng.seed, rng.stream, c) for c in chunks]

    if environment.verbose >= environment.VERBOSE_TACITURN:
        print('estimate rates for M=%d, p=%g (%d trials, horizon %d)' % (
              M, p, trials, horizon))
    if jobs > 1 and len(chunks) > 1:
        with Pool(min(jobs, len(chunks))) as pool:
            res = [pool.apply_async(_rate_chunk, a) for a in args]
            results = [r.get() for r in res]
    elif environment.verbose >= environment.VERBOSE_NORMAL and len(chunks) > 1:
        results = []
        with ProgressBar(args, label='rate chunks') as pbar:
            for a in pbar:
                results.append(_rate_chunk(*a))
    else:
        results = [_rate_chunk(*a) for a in args]

    sums = {}
    for name in results[0]:
        sums[name] = (sum(r[name][0] for r in results),
                      sum(r[name][1] for r in results))
    return RateCurves(M, p, horizon, trials, sums)


def sample_delivery_trajectory(M, p, horizon, rng):
    '''
    One trajectory N_1, ..., N_horizon of delivered requests.

    Drawing with `trial_stream(rng, i)` reproduces trial i of an estimate
    driven by `rng`.

    Args:
        M (int):            The number of links.
        p (float):          The generation success probability.
        horizon (int):      The number of slots.
        rng (RngStream):    The random stream.

    Returns:
        N (np.ndarray):     The non-decreasing counts with N_t <= t.

    Example:
        >>> from ..utils import RngStream
        >>> N = sample_delivery_trajectory(5, 0.3, 200, RngStream(2))
        >>> bool(np.all(np.diff(N) >= 0) and np.all(N <= np.arange(1, 201)))
        True
    '''
    p = check_probability(p)
    horizon, _ = _check_counts(horizon, 1)
    T = rng.geometric(p, size=(1, int(M), horizon))
    W, _, _ = _delivery_times(T)
    return _counts(W, np.arange(1, horizon + 1))[0]


def estimate_rate_spectrum(M, p, horizon, trials, rng, chunk=None):
    '''
    The spectrum of waiting times turned into rates: E{N^x_t}/t at t=horizon
    for every spectrum member x (in the order of `spectrum`).

    Since the waiting times are non-decreasing along the spectrum (per
    sample), the rates are non-increasing.

    Returns:
        table (list):   Tuples (label, rate, standard error).

    Example:
        >>> from ..utils import RngStream
        >>> tab = estimate_rate_spectrum(3, 0.6, 40, 10, RngStream(4))
        >>> [label for label, _, _ in tab]
        ['Wh0', 'Wh1', 'Wh2', 'Wh3', 'W2', 'W3']
        >>> rates = [rate for _, rate, _ in tab]
        >>> all(a >= b for a, b in zip(rates[:-1], rates[1:]))
        True
    '''
    p = check_probability(p)
    horizon, trials = _check_counts(horizon, trials)
    M = int(M)
    if chunk is None:
        chunk = environment.DEFAULT_rate_chunk
    params = spectrum_parameters(M)
    s = np.zeros(len(params), dtype=np.int64)
    s2 = np.zeros(len(params), dtype=np.int64)
    for i0 in range(0, trials, chunk):
        T = _draw(M, p, horizon, rng, range(i0, min(i0 + chunk, trials)))
        D = np.swapaxes(T, -1, -2)
        for n, (r, k) in enumerate(params):
            W = running_norm(D, r=r, k=k)
            N = _counts(W, horizon).astype(np.int64)
            s[n] += N.sum()
            s2[n] += (N * N).sum()
    mean, se = _mean_sem(s, s2, trials)
    return [(label, float(m) / horizon, float(e) / horizon)
            for label, m, e in zip(spectrum_labels(M), mean, se)]
