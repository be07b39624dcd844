'''
Link generation times on a line network and the closed-form expectations that
derive from them.

A line of M links serves N requests; T[i,j] is the number of slots link i
needs to generate the pair used by request j. The generation attempts are
Bernoulli(p) per slot, hence every T[i,j] is geometric with support {1,2,...}.

Example:
    >>> T = GenerationMatrix([[1, 2], [3, 1]])
    >>> T
    <GenerationMatrix M=2 links x N=2 requests>
    >>> T.D.tolist()
    [[1, 3], [2, 1]]
    >>> float(expected_generation_time(2, 0.5))
    2.6666666666666665
    >>> expected_generation_time(1, 0.25)
    4.0
    >>> round(expected_swap_position(2, 0.5), 9)
    1.333333333
    >>> expected_swap_position(7, 1.0)
    1.0
'''
__all__ = ['GenerationMatrix', 'sample_generation_matrix',
           'expected_generation_time', 'expected_swap_position',
           'sample_swap_position', 'check_probability']

from .. import environment
from fractions import Fraction
import numpy as np
import scipy.special
import warnings


def check_probability(p, name='p'):
    '''
    Check that `p` is a valid success probability, i.e. in (0,1].

    Raises:
        ZeroDivisionError:  For p == 0 (expected times diverge).
        ValueError:         For any other value outside (0,1].

    Example:
        >>> check_probability(0.3)
        0.3
        >>> check_probability(1.5)
        Traceback (most recent call last):
        ...
        ValueError: p has to be in (0,1], got 1.5.
    '''
    p = float(p)
    if p == 0.0:
        raise ZeroDivisionError('%s = 0: the expected times diverge.' % name)
    if not 0.0 < p <= 1.0:
        raise ValueError('%s has to be in (0,1], got %s.' % (name, p))
    return p


def _check_size(M, name='M'):
    if int(M) != M or M < 1:
        raise ValueError('%s has to be a positive integer, got %s.' % (name, M))
    return int(M)


class GenerationMatrix(object):
    '''
    The generation times T[i,j] of link i for request j.

    The matrix is stored link-major (shape M x N), i.e. column j holds the
    generation times seen by request j. The transposed view `D` (N x M) has one
    row per request, which is the form the waiting-time recursions consume.

    Args:
        T (array-like):     The M x N generation times (positive integers).

    Raises:
        ValueError:         If the matrix is empty, not two-dimensional, not
                            integer or has entries < 1.

    Example:
        >>> T = GenerationMatrix(np.ones((3, 2), dtype=int))
        >>> T.M, T.N, int(T[2, 1])
        (3, 2, 1)
        >>> GenerationMatrix([[1, 0]])
        Traceback (most recent call last):
        ...
        ValueError: Generation times have to be >= 1.
    '''

    def __init__(self, T):
        T = np.array(T)
        if T.ndim != 2 or T.size == 0:
            raise ValueError('A generation matrix has to be a non-empty 2D array.')
        if not np.issubdtype(T.dtype, np.integer):
            if not np.all(np.mod(T, 1) == 0):
                raise ValueError('Generation times have to be integers.')
        T = T.astype(np.int64)
        if np.any(T < 1):
            raise ValueError('Generation times have to be >= 1.')
        T.setflags(write=False)
        self._T = T

    @classmethod
    def from_observed(cls, durations, N):
        '''
        Build the matrix from the first N observed generation durations of
        every link.

        Args:
            durations (list):   One sequence of durations per link (in link
                                order along the line).
            N (int):            The number of requests (columns).

        Raises:
            ValueError:         If a link has fewer than N observations.

        Example:
            >>> GenerationMatrix.from_observed([[2, 1, 5], [1, 3]], 2).values.tolist()
            [[2, 1], [1, 3]]
        '''
        N = _check_size(N, 'N')
        rows = []
        for i, d in enumerate(durations):
            if len(d) < N:
                raise ValueError('Link %d has only %d observed generations, '
                                 'but %d are needed.' % (i, len(d), N))
            rows.append(list(d)[:N])
        return cls(rows)

    @property
    def values(self):
        '''The (read-only) M x N array.'''
        return self._T

    @property
    def D(self):
        '''The N x M matrix with one row per request.'''
        return self._T.T

    @property
    def M(self):
        return self._T.shape[0]

    @property
    def N(self):
        return self._T.shape[1]

    @property
    def shape(self):
        return self._T.shape

    def __getitem__(self, idx):
        return self._T[idx]

    def __eq__(self, other):
        if not isinstance(other, GenerationMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self._T == other._T))

    def __repr__(self):
        return '<GenerationMatrix M=%d links x N=%d requests>' % (self.M, self.N)


def sample_generation_matrix(M, N, p, rng):
    '''
    Sample i.i.d. geometric(p) generation times for M links and N requests.

    Args:
        M (int):            The number of links.
        N (int):            The number of requests.
        p (float):          The generation success probability per slot.
        rng (RngStream):    The random stream to draw from.

    Returns:
        T (GenerationMatrix):   The sampled matrix.

    Example:
        >>> from ..utils import RngStream
        >>> sample_generation_matrix(3, 4, 1.0, RngStream(0)).values.tolist()
        [[1, 1, 1, 1], [1, 1, 1, 1], [1, 1, 1, 1]]
        >>> sample_generation_matrix(3, 4, 0.3, RngStream(9)) == \\
        ...     sample_generation_matrix(3, 4, 0.3, RngStream(9))
        True
    '''
    M = _check_size(M)
    N = _check_size(N, 'N')
    p = check_probability(p)
    return GenerationMatrix(rng.geometric(p, size=(M, N)))


def _tail_sum_generation_time(M, p, eps=1e-12, block=4096):
    '''
    E{max of M geometrics} as sum_{t>=0} P(max > t), stopped once a summand
    drops below `eps`.
    '''
    q = 1.0 - p
    if q == 0.0:
        return 1.0
    total = 1.0     # t = 0
    t0 = 1
    while True:
        t = np.arange(t0, t0 + block, dtype=float)
        terms = -np.expm1(M * np.log1p(-q**t))
        small = np.nonzero(terms < eps)[0]
        if len(small):
            return total + float(np.sum(terms[:small[0]]))
        total += float(np.sum(terms))
        t0 += block


def expected_generation_time(M, p):
    '''
    The expected time until all M links of a line are generated at once (with
    infinite lifetime), i.e. the expected maximum of M geometric(p) variables:

        R(M,p) = sum_{k=1}^{M} binom(M,k) (-1)^{k+1} / (1 - (1-p)^k)

    The alternating sum is evaluated exactly (rational arithmetic) and
    cross-checked against the numerically stable tail sum
    sum_{t>=0} (1 - (1-q^t)^M).

    Args:
        M (int):            The number of links.
        p (float):          The generation success probability per slot.

    Returns:
        R (float):          The expected generation time in slots.

    Raises:
        ZeroDivisionError:  For p == 0.
        ValueError:         For p outside (0,1] or M < 1.
        RuntimeError:       If the two evaluation forms disagree.

    Example:
        >>> expected_generation_time(5, 1)
        1.0
        >>> expected_generation_time(2, 0)
        Traceback (most recent call last):
        ...
        ZeroDivisionError: p = 0: the expected times diverge.
    '''
    M = _check_size(M)
    p = check_probability(p)
    pf = Fraction(repr(p))
    qf = 1 - pf
    exact = Fraction(0)
    for k in range(1, M+1):
        term = Fraction(scipy.special.comb(M, k, exact=True)) / (1 - qf**k)
        exact += term if k % 2 == 1 else -term
    R = float(exact)

    stable = _tail_sum_generation_time(M, p)
    rel = abs(stable - R) / R
    if rel > 1e-6:
        raise RuntimeError('Evaluations of R(%d,%s) disagree: %r vs. %r' % (
                           M, p, R, stable))
    elif rel > 1e-9:
        warnings.warn('Evaluations of R(%d,%s) differ by %.2e (relative).' % (
                      M, p, rel))
    if environment.verbose >= environment.VERBOSE_TALKY:
        print('R(%d,%s) = %.12g (tail sum: %.12g)' % (M, p, R, stable))
    return R


def expected_swap_position(M, p, tol=None):
    '''
    The expected position K of the last generated link of a line, which is the
    number of swaps that are already done when the whole line is ready (the
    swapping gain of opportunistic forwarding):

        E{K} = sum_{k=1}^{M} sum_{i>=k} (1-q^{i-1})^{k-1}
                            [(1-q^i)^{M-k+1} - (1-q^{i-1})^{M-k+1}]

    The bracket summed over i >= I is bounded by (M-k+1) q^{I-1}, so every
    inner series is cut once this tail bound is below tol/M.

    Args:
        M (int):            The number of links.
        p (float):          The generation success probability per slot.
        tol (float):        The maximum truncation error (default:
                            `environment.DEFAULT_swap_tol`).

    Returns:
        EK (float):         The expectation of K.

    Example:
        >>> abs(expected_swap_position(1, 0.3) - 1) < 1e-10
        True
        >>> expected_swap_position(3, 0.5, tol=0)
        Traceback (most recent call last):
        ...
        ValueError: The tolerance has to be positive.
    '''
    M = _check_size(M)
    p = check_probability(p)
    if tol is None:
        tol = environment.DEFAULT_swap_tol
    if not tol > 0:
        raise ValueError('The tolerance has to be positive.')
    q = 1.0 - p
    EK = 0.0
    for k in range(1, M+1):
        n = M - k + 1
        if q == 0.0:
            # only i=1 contributes (and only for k=1)
            EK += 1.0 if k == 1 else 0.0
            continue
        # smallest I with n*q**I < tol/M
        I = max(k, int(np.ceil(np.log(tol / (M * n)) / np.log(q))))
        i = np.arange(k, I + 1, dtype=float)
        prev = 1.0 - q**(i - 1)
        bracket = (1.0 - q**i)**n - prev**n
        EK += float(np.sum(prev**(k - 1) * bracket))
    return EK


def sample_swap_position(M, p, size, rng):
    '''
    Monte-Carlo samples of the swap position K.

    For each sample, M geometric generation times are drawn; K is the index
    (1-based, first on ties) of the link that finishes last, capped by the
    number of slots W elapsed until then (one swap per slot).

    Args:
        M (int):            The number of links.
        p (float):          The generation success probability per slot.
        size (int):         The number of samples.
        rng (RngStream):    The random stream to draw from.

    Returns:
        K (np.ndarray):     The integer samples.

    Example:
        >>> from ..utils import RngStream
        >>> sample_swap_position(4, 1.0, 3, RngStream(0)).tolist()
        [1, 1, 1]
        >>> K = sample_swap_position(6, 0.4, 1000, RngStream(3))
        >>> bool(K.min() >= 1 and K.max() <= 6)
        True
    '''
    M = _check_size(M)
    p = check_probability(p)
    T = rng.geometric(p, size=(int(size), M))
    W = T.max(axis=1)
    last = np.argmax(T, axis=1) + 1
    return np.minimum(last, W)
