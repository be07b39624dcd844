'''
Total waiting times of N requests served one after the other by a line of M
links, for the different forwarding schemes.

All waiting times are members of one family of recursions over the requests.
For a matrix D with one row per request, D_0 = 0 and

    D_j[i] = max{ |D_{j-1}[m]| + |D[j,m]| : max(1,i-r) <= m <= min(i+k-1,M) }

and the value of the family member is max_i D_N[i]. With this windowed
recursion (the norm Lambda_r^k of D):

    opportunistic           W_N     = Lambda_M^1
    k-opportunistic         W^k_N   = Lambda_M^k
    non-opportunistic       W^up_N  = Lambda_M^M = sum_j max_i T_ij
    search depth r          Wh^r_N  = Lambda_r^1
    lower bound             W^low_N = Lambda_0^1 = max_i sum_j T_ij

Example:
    >>> T = GenerationMatrix([[1, 2], [3, 1]])
    >>> waiting_time_opportunistic(T)
    4
    >>> waiting_time_nonopportunistic(T)
    5
    >>> waiting_time_k_opportunistic(T, 2)
    5
    >>> waiting_time_search_depth(T, 0)
    4
    >>> spectrum(T)
    [4, 4, 4, 5]
    >>> spectrum_labels(2)
    ['Wh0', 'Wh1', 'Wh2', 'W2']
    >>> matrix_norm(T.D, r=2, k=1)
    4
    >>> matrix_norm(np.zeros((3, 3)), r=1, k=2)
    0.0
'''
__all__ = ['waiting_time_opportunistic', 'waiting_time_nonopportunistic',
           'waiting_time_k_opportunistic', 'waiting_time_search_depth',
           'waiting_time_lower_bound', 'spectrum', 'spectrum_labels',
           'spectrum_parameters', 'matrix_norm', 'running_norm']

from .generation import GenerationMatrix
import numpy as np
from numpy.lib.stride_tricks import sliding_window_view


def _as_matrix(T):
    if isinstance(T, GenerationMatrix):
        return T
    return GenerationMatrix(T)


def _check_window(M, r, k):
    if int(r) != r or not 0 <= r <= M:
        raise ValueError('The search depth r has to be in 0..%d, got %s.' % (M, r))
    if int(k) != k or not 1 <= k <= M:
        raise ValueError('The opportunism degree k has to be in 1..%d, got %s.' % (M, k))
    return int(r), int(k)


def running_norm(D, r, k):
    '''
    Run the windowed recursion over the rows of D and return the value after
    every row, i.e. max_i |D_j[i]| for j = 1..N.

    Leading axes are treated as independent batches, so D can be of shape
    (..., N, M). Since all recursion values are non-negative, zero padding of
    the window at the borders does not change the maxima.

    Args:
        D (array-like):     The (batch of) N x M matrices.
        r (int):            The window reach backwards (0..M).
        k (int):            The window reach forwards (1..M).

    Returns:
        values (np.ndarray):    The running values of shape (..., N); integer
                                for integer input.

    Example:
        >>> running_norm([[1, 3], [2, 1]], r=2, k=1).tolist()
        [3, 4]
        >>> running_norm([[[1, 3], [2, 1]], [[1, 1], [1, 1]]], r=2, k=2).tolist()
        [[3, 5], [1, 2]]
    '''
    D = np.abs(np.asarray(D))
    if D.ndim < 2:
        raise ValueError('D has to be (a batch of) two-dimensional matrices.')
    N, M = D.shape[-2:]
    if N == 0 or M == 0:
        raise ValueError('D must not be empty.')
    r, k = _check_window(M, r, k)
    pad = [(0, 0)] * (D.ndim - 2) + [(r, k - 1)]
    prev = np.zeros(D.shape[:-2] + (M,), dtype=D.dtype)
    values = np.empty(D.shape[:-2] + (N,), dtype=D.dtype)
    for j in range(N):
        v = np.pad(prev + D[..., j, :], pad)
        prev = sliding_window_view(v, r + k, axis=-1).max(axis=-1)
        values[..., j] = prev.max(axis=-1)
    return values


def _scalar(x):
    if isinstance(x, np.integer):
        return int(x)
    return float(x)


def matrix_norm(D, r, k):
    '''
    The norm Lambda_r^k of a real N x M matrix D (one row per request).

    Args:
        D (array-like):     The N x M matrix.
        r (int):            The search depth (0..M).
        k (int):            The opportunism degree (1..M).

    Returns:
        norm (int/float):   The maximum absolute entry of the last recursion
                            vector; an int for integer matrices.

    Raises:
        ValueError:         If r or k are out of range.

    Example:
        >>> D = np.array([[1.5, -2.0], [0.5, 1.0]])
        >>> matrix_norm(D, r=0, k=1), matrix_norm(-3 * D, r=0, k=1)
        (3.0, 9.0)
        >>> matrix_norm(D, r=0, k=3)
        Traceback (most recent call last):
        ...
        ValueError: The opportunism degree k has to be in 1..2, got 3.
    '''
    D = np.asarray(D)
    if D.ndim != 2:
        raise ValueError('D has to be a two-dimensional matrix.')
    return _scalar(running_norm(D, r, k)[-1])


def waiting_time_opportunistic(T):
    '''
    The total waiting time W_N of N requests under (1-)opportunistic
    forwarding without swapping time, i.e. W_MN of the recursion

        W_i1 = max_{m<=i} T_m1,    W_ij = max_{m<=i} (W_{m,j-1} + T_mj).

    Example:
        >>> waiting_time_opportunistic([[4, 1, 1]])
        6
        >>> waiting_time_opportunistic(np.ones((3, 5), dtype=int))
        5
    '''
    T = _as_matrix(T)
    return matrix_norm(T.D, r=T.M, k=1)


def waiting_time_nonopportunistic(T):
    '''
    The total waiting time when every request waits for all links of the line
    at once: sum_j max_i T_ij.

    Example:
        >>> waiting_time_nonopportunistic([[1, 1], [2, 3], [1, 1]])
        5
    '''
    T = _as_matrix(T)
    return int(T.values.max(axis=0).sum())


def waiting_time_k_opportunistic(T, k):
    '''
    The total waiting time W^k_N under k-opportunistic forwarding (the window
    of link i reaches up to link min(i+k-1, M)).

    Raises:
        ValueError:     If k is not in 1..M.

    Example:
        >>> T = np.array([[1, 2, 1], [3, 1, 2], [1, 1, 4]])
        >>> [waiting_time_k_opportunistic(T, k) for k in (1, 2, 3)]
        [8, 9, 9]
        >>> waiting_time_k_opportunistic(T, 0)
        Traceback (most recent call last):
        ...
        ValueError: The opportunism degree k has to be in 1..3, got 0.
    '''
    T = _as_matrix(T)
    return matrix_norm(T.D, r=T.M, k=k)


def waiting_time_search_depth(T, r):
    '''
    The lower-bounding waiting time Wh^r_N with search depth r (the window of
    link i reaches back to link max(1, i-r)).

    Raises:
        ValueError:     If r is not in 0..M.

    Example:
        >>> T = np.array([[1, 2, 1], [3, 1, 2], [1, 1, 4]])
        >>> [waiting_time_search_depth(T, r) for r in (0, 1, 2, 3)]
        [6, 8, 8, 8]
    '''
    T = _as_matrix(T)
    return matrix_norm(T.D, r=r, k=1)


def waiting_time_lower_bound(T):
    '''
    The lower bound W^low_N = max_i sum_j T_ij (the busiest link alone).

    Example:
        >>> waiting_time_lower_bound([[1, 2, 1], [3, 1, 2], [1, 1, 4]])
        6
    '''
    T = _as_matrix(T)
    return int(T.values.sum(axis=1).max())


def spectrum_parameters(M, merge=True):
    '''
    The (r, k) window parameters of the spectrum members in order:
    Wh^0, ..., Wh^M, (W^1,) W^2, ..., W^M.

    Example:
        >>> spectrum_parameters(2)
        [(0, 1), (1, 1), (2, 1), (2, 2)]
        >>> len(spectrum_parameters(4, merge=False))
        9
    '''
    params = [(r, 1) for r in range(M + 1)]
    if not merge:
        params.append((M, 1))
    params += [(M, k) for k in range(2, M + 1)]
    return params


def spectrum_labels(M, merge=True):
    '''
    Names of the spectrum members ('Wh<r>' for search depths, 'W<k>' for
    opportunism degrees).

    Example:
        >>> spectrum_labels(3, merge=False)
        ['Wh0', 'Wh1', 'Wh2', 'Wh3', 'W1', 'W2', 'W3']
    '''
    labels = ['Wh%d' % r for r in range(M + 1)]
    if not merge:
        labels.append('W1')
    labels += ['W%d' % k for k in range(2, M + 1)]
    return labels


def spectrum(T, merge=True):
    '''
    The spectrum of waiting times that sandwiches the opportunistic one:

        Wh^0 <= Wh^1 <= ... <= Wh^M = W^1 <= W^2 <= ... <= W^M

    Args:
        T (GenerationMatrix):   The generation times.
        merge (bool):           Whether to list the common middle value
                                Wh^M = W^1 only once (2M values) or twice
                                (2M+1 values).

    Returns:
        values (list):          The non-decreasing spectrum.

    Example:
        >>> spectrum(np.ones((3, 2), dtype=int), merge=False)
        [2, 2, 2, 2, 2, 2, 2]
    '''
    T = _as_matrix(T)
    return [matrix_norm(T.D, r=r, k=k)
            for r, k in spectrum_parameters(T.M, merge=merge)]
