"""Test the line-network analytics against Monte-Carlo and brute force."""
import itertools

import numpy as np
import pytest
from numpy.testing import assert_array_equal, assert_allclose

from entroute.utils import RngStream, mean_and_sem
from entroute.analysis import expected_generation_time, \
    expected_swap_position, sample_swap_position, sample_generation_matrix, \
    GenerationMatrix, spectrum, spectrum_labels, matrix_norm, running_norm, \
    waiting_time_opportunistic, waiting_time_nonopportunistic, \
    waiting_time_k_opportunistic, waiting_time_search_depth, \
    waiting_time_lower_bound, estimate_rates, estimate_rate_spectrum, \
    sample_delivery_trajectory, trial_stream

# Monte-Carlo assertions allow this many standard errors (reduced runs)
N_SE = 4
# and this many in the full-size runs
N_SE_FULL = 3


def test_generation_time_exact_values():
    for p in (0.1, 0.25, 0.5, 0.9, 1.0):
        assert expected_generation_time(1, p) == pytest.approx(1.0 / p, rel=1e-15)
    assert abs(expected_generation_time(2, 0.5) - 8.0 / 3.0) < 1e-9


def test_generation_time_errors():
    with pytest.raises(ZeroDivisionError):
        expected_generation_time(3, 0)
    with pytest.raises(ValueError):
        expected_generation_time(3, 1.5)
    with pytest.raises(ValueError):
        expected_generation_time(0, 0.5)


def _check_generation_time(M, p, trials, seed, n_se=N_SE):
    rng = RngStream(seed)
    samples = rng.geometric(p, size=(trials, M)).max(axis=1)
    mean, sem = mean_and_sem(samples)
    R = expected_generation_time(M, p)
    assert abs(mean - R) <= n_se * sem + 1e-12, (M, p, mean, R, sem)


@pytest.mark.parametrize('M', [1, 2, 5, 10, 20])
@pytest.mark.parametrize('p', [0.1, 0.3, 0.5, 0.7, 0.9])
def test_generation_time_monte_carlo(M, p):
    _check_generation_time(M, p, 20000, seed=M * 100 + int(p * 10))


@pytest.mark.slow
@pytest.mark.parametrize('M', [1, 2, 5, 10, 20])
@pytest.mark.parametrize('p', [0.1, 0.3, 0.5, 0.7, 0.9])
def test_generation_time_monte_carlo_full(M, p):
    _check_generation_time(M, p, 10**6, seed=7 + M * 100 + int(p * 10),
                           n_se=N_SE_FULL)


def test_swap_position_trivial():
    assert expected_swap_position(1, 0.3) == pytest.approx(1.0, abs=1e-10)
    assert expected_swap_position(6, 1.0) == 1.0
    assert_array_equal(sample_swap_position(1, 0.3, 50, RngStream(1)), 1)


@pytest.mark.parametrize('M', [2, 5, 10])
@pytest.mark.parametrize('p', [0.3, 0.7])
def test_swap_position_monte_carlo(M, p):
    K = sample_swap_position(M, p, 50000, RngStream(M + int(10 * p)))
    mean, sem = mean_and_sem(K)
    assert abs(mean - expected_swap_position(M, p)) <= N_SE * sem


@pytest.mark.slow
@pytest.mark.parametrize('M', [2, 5, 10])
@pytest.mark.parametrize('p', [0.3, 0.7])
def test_swap_position_monte_carlo_full(M, p):
    K = sample_swap_position(M, p, 10**6, RngStream(50 + M + int(10 * p)))
    mean, sem = mean_and_sem(K)
    assert abs(mean - expected_swap_position(M, p)) <= N_SE_FULL * sem


def test_generation_matrix_distribution():
    T = sample_generation_matrix(100, 1000, 0.25, RngStream(13))
    assert T.values.shape == (100, 1000)
    assert T.values.min() >= 1
    assert abs(T.values.mean() - 4.0) <= 0.02 * 4.0


def _random_matrices(n, seed):
    rng = RngStream(seed)
    ps = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    for _ in range(n):
        M = int(rng.integers(1, 9))
        N = int(rng.integers(1, 9))
        p = ps[int(rng.integers(len(ps)))]
        yield sample_generation_matrix(M, N, p, rng)


def _check_spectrum(T):
    M = T.M
    s = spectrum(T, merge=False)
    assert len(s) == 2 * M + 1
    assert all(a <= b for a, b in zip(s[:-1], s[1:])), (T.values, s)
    # the endpoints and the common middle value
    assert s[0] == T.values.sum(axis=1).max()
    assert s[M] == s[M + 1] == waiting_time_opportunistic(T)
    assert s[-1] == T.values.max(axis=0).sum()
    assert s[-1] == waiting_time_nonopportunistic(T)
    assert waiting_time_k_opportunistic(T, M) == s[-1]
    assert waiting_time_search_depth(T, 0) == waiting_time_lower_bound(T)


def test_spectrum_ordering():
    for T in _random_matrices(2000, seed=11):
        _check_spectrum(T)


@pytest.mark.slow
def test_spectrum_ordering_full():
    for T in _random_matrices(10**4, seed=12):
        _check_spectrum(T)


def test_spectrum_labels_and_merge():
    T = GenerationMatrix([[1, 4, 2], [3, 1, 1], [2, 2, 5]])
    assert len(spectrum(T)) == len(spectrum_labels(3)) == 6
    assert spectrum(T) == spectrum(T, merge=False)[:4] + spectrum(T, merge=False)[5:]


def test_running_norm_batches():
    rng = RngStream(5)
    T = rng.geometric(0.4, size=(7, 4, 6))
    D = np.swapaxes(T, -1, -2)
    batch = running_norm(D, r=4, k=1)
    for b in range(7):
        G = GenerationMatrix(T[b])
        assert batch[b, -1] == waiting_time_opportunistic(G)
        assert_array_equal(batch[b], running_norm(G.D, r=4, k=1))


def _check_norm_axioms(A, B, c):
    M = A.shape[1]
    for r, k in itertools.product(range(M + 1), range(1, M + 1)):
        nA = matrix_norm(A, r, k)
        nB = matrix_norm(B, r, k)
        assert nA > 0
        assert matrix_norm(np.zeros_like(A), r, k) == 0
        assert_allclose(matrix_norm(c * A, r, k), abs(c) * nA, rtol=1e-9)
        assert matrix_norm(A + B, r, k) <= (nA + nB) * (1 + 1e-9)


def _norm_pairs(n, seed):
    rng = RngStream(seed)
    for _ in range(n):
        N = int(rng.integers(1, 7))
        M = int(rng.integers(1, 7))
        A = rng.normal(size=(N, M))
        B = rng.normal(size=(N, M))
        c = float(rng.normal() * 3)
        yield A, B, c


def test_norm_axioms():
    for A, B, c in _norm_pairs(300, seed=3):
        _check_norm_axioms(A, B, c)


@pytest.mark.slow
def test_norm_axioms_full():
    for A, B, c in _norm_pairs(10**4, seed=4):
        _check_norm_axioms(A, B, c)


def test_norm_window_errors():
    D = np.ones((2, 3))
    with pytest.raises(ValueError):
        matrix_norm(D, r=4, k=1)
    with pytest.raises(ValueError):
        matrix_norm(D, r=0, k=0)


def test_rates_p_one():
    rc = estimate_rates(6, 1.0, horizon=30, trials=5, rng=RngStream(0))
    assert_array_equal(rc.R, 1.0)
    assert_array_equal(rc.R_low, 1.0)
    assert_array_equal(rc.R_up, 1.0)


def test_rate_bounds_per_sample():
    rc = estimate_rates(5, 0.5, horizon=100, trials=60, rng=RngStream(1))
    assert np.all(rc.R_low <= rc.R)
    assert np.all(rc.R <= rc.R_up)
    assert np.all(rc.R <= rc.t / np.arange(1, 101) + 1e-12)


def test_rates_independent_of_workers_and_chunks():
    kw = dict(M=4, p=0.4, horizon=60, trials=40, rng=RngStream(9))
    a = estimate_rates(chunk=10, **kw)
    b = estimate_rates(chunk=10, jobs=3, **kw)
    c = estimate_rates(chunk=40, **kw)
    for x in (b, c):
        assert_array_equal(a.R, x.R)
        assert_array_equal(a.se_R_up, x.se_R_up)
        assert_array_equal(a.mean_W, x.mean_W)


def test_trajectory_reproduces_trial():
    rng = RngStream(4)
    N = sample_delivery_trajectory(3, 0.5, 40, trial_stream(rng, 0))
    rc = estimate_rates(3, 0.5, horizon=40, trials=1, rng=rng)
    assert_allclose(rc.R, N / np.arange(1, 41))


def test_rate_spectrum_non_increasing():
    tab = estimate_rate_spectrum(4, 0.5, 60, 30, RngStream(8))
    rates = [rate for _, rate, _ in tab]
    assert all(a >= b for a, b in zip(rates[:-1], rates[1:]))
    assert [label for label, _, _ in tab] == spectrum_labels(4)


@pytest.mark.slow
@pytest.mark.parametrize('p', [0.3, 0.7])
def test_rate_bounds_and_convergence(p):
    rng = RngStream(21)
    rc = estimate_rates(20, p, horizon=500, trials=2000, rng=rng)
    sel = rc.t >= 10
    assert np.all(rc.R_low[sel] <= rc.R[sel] + N_SE_FULL * rc.se_R[sel])
    assert np.all(rc.R[sel] <= rc.R_up[sel] + N_SE_FULL * rc.se_R[sel])
    assert rc.R[-1] <= rc.R_tilde[-1] + N_SE_FULL * rc.se_R[-1]
    final = [sample_delivery_trajectory(20, p, 500, trial_stream(rng, i))[-1] / 500.0
             for i in range(20)]
    q25, q75 = np.percentile(final, [25, 75])
    assert q75 - q25 < 0.05


@pytest.mark.slow
def test_rate_insensitive_to_length():
    rates = [estimate_rates(M, 0.8, horizon=500, trials=500,
                            rng=RngStream(M)).R[-1] for M in range(11, 21)]
    assert (max(rates) - min(rates)) / max(rates) < 0.1


def test_delivery_counts_superadditive():
    rc = estimate_rates(5, 0.5, horizon=200, trials=400, rng=RngStream(31))
    EN, se = rc.R * rc.t, rc.se_R * rc.t
    for t1, t2 in itertools.combinations_with_replacement([10, 25, 50, 100], 2):
        a, b, ab = t1 - 1, t2 - 1, t1 + t2 - 1
        assert EN[ab] >= EN[a] + EN[b] - N_SE * (se[a] + se[b] + se[ab])


def test_trajectory_spread_shrinks():
    rng = RngStream(17)
    horizon = 400
    t = np.arange(1, horizon + 1)
    rates = np.array([sample_delivery_trajectory(10, 0.5, horizon,
                                                 trial_stream(rng, i)) / t
                      for i in range(40)])
    iqr = [np.subtract(*np.percentile(rates[:, s - 1], [75, 25]))
           for s in (20, 100, 400)]
    assert iqr[2] < iqr[1] < iqr[0]
