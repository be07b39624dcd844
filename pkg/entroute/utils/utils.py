'''
A collection of some general (low-level) functions.

Doctests are in the functions themselves.
'''
__all__ = ['sig_str', 'mean_and_sem', 'ProgressBar', 'sec_to_nice_str']

import numpy as np
import scipy.stats
import sys
import time


def sig_str(x, digits=9):
    '''
    Format a number for machine-readable output with a fixed number of
    significant digits.

    Integers (also numpy integers) are written exactly, NaN as 'nan'.

    Example:
        >>> sig_str(2/3)
        '0.666666667'
        >>> sig_str(8/3, digits=4)
        '2.667'
        >>> sig_str(np.int64(20))
        '20'
        >>> sig_str(float('nan'))
        'nan'
        >>> sig_str(1e-12)
        '1e-12'
    '''
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return '%d' % x
    return '%.*g' % (digits, float(x))


def mean_and_sem(values):
    '''
    The mean and the standard error of the mean of some samples.

    NaN entries are ignored. With fewer than two samples the standard error is
    zero (a single deterministic run has no spread).

    Args:
        values (array-like):    The samples.

    Returns:
        mean (float):           The sample mean (NaN for no samples).
        sem (float):            The standard error of the mean.

    Example:
        >>> mean_and_sem([1, 2, 3, 4])
        (2.5, 0.6454972243679028)
        >>> mean_and_sem([7])
        (7.0, 0.0)
        >>> m, s = mean_and_sem([])
        >>> bool(np.isnan(m)), s
        (True, 0.0)
    '''
    values = np.asarray(values, dtype=float)
    values = values[~np.isnan(values)]
    if len(values) == 0:
        return float('nan'), 0.0
    if len(values) == 1:
        return float(values[0]), 0.0
    return float(values.mean()), float(scipy.stats.sem(values))


def sec_to_nice_str(secs):
    '''
    Convert a duration in seconds into a string like 'h:mm:ss'.

    Example:
        >>> sec_to_nice_str(3725)
        '1:02:05'
        >>> sec_to_nice_str(59.7)
        '0:01:00'
    '''
    if secs < 0:
        raise ValueError("Negative durations are not supported!")
    secs = int(round(secs))
    h, secs = divmod(secs, 3600)
    m, s = divmod(secs, 60)
    return '%d:%02d:%02d' % (h, m, s)


class ProgressBar(object):
    '''
    An iterable context manager showing a progress bar while iterating.

    It either iterates over the `iterable` or counts up to `length` (then
    `update()` has to be called by hand). The bar is printed to `file` and is
    finalised with a newline when the context is left.

    Note:
        No printing must happen while the bar is shown or the bar will be
        unintentionally destroyed!

    Example:
        >>> from io import StringIO
        >>> out = StringIO()
        >>> with ProgressBar(range(3), label='sets', file=out) as pbar:
        ...     for i in pbar:
        ...         pass
        >>> '3/3' in out.getvalue()
        True
        >>> out = StringIO()
        >>> with ProgressBar(length=10, file=out, show_eta=False) as pbar:
        ...     pbar.update(4)
        ...     pbar.update(6)
        >>> out.getvalue().rstrip().endswith('10/10')
        True

    Args:
        iterable (iterable):    The iterable to iterate over. An integer n is
                                understood as `range(n)`.
        length (int):           The number of items; required if `iterable` is
                                None.
        label (str):            The label to show left to the bar.
        show_eta (bool):        Whether to show the estimated remaining time.
        width (int):            The width of the bar in characters.
        file (file):            The file to write to.
    '''
    BEFORE_BAR = '\r'
    AFTER_BAR = '\n'

    def __init__(self, iterable=None, length=None, label=None, show_eta=True,
                 fill_char='#', empty_char='.', width=36, file=sys.stdout):
        if iterable is None:
            if length is None:
                raise ValueError('Either an iterable or the length is needed.')
            self._length = int(length)
            self._iterable = None
        else:
            if isinstance(iterable, int):
                iterable = range(iterable)
            self._length = int(length) if length else len(iterable)
            self._iterable = iter(iterable)
        if len(fill_char) != 1 or len(empty_char) != 1:
            raise ValueError("The fill and the empty char both must have length 1.")
        self.label = '' if label is None else str(label)
        self.show_eta = bool(show_eta)
        self.fill_char = fill_char
        self.empty_char = empty_char
        self.width = int(width)
        self._file = file
        self._it = 0
        self._start = time.time()
        self._entered = False

    def __enter__(self):
        self._entered = True
        self._start = time.time()
        self._it = 0
        self.render()
        return self

    def __exit__(self, exc_type, exc_value, tb):
        self.render()
        self._file.write(self.AFTER_BAR)
        self._file.flush()
        self._entered = False

    def __iter__(self):
        if not self._entered:
            raise RuntimeError('You need to use progress bars in a with block.')
        if self._iterable is None:
            raise RuntimeError('No iterable given; use `update` instead.')
        for item in self._iterable:
            yield item
            self.update(1)

    def update(self, n_steps):
        '''Advance the bar by `n_steps`.'''
        self._it = min(self._it + n_steps, self._length)
        self.render()

    def eta(self):
        '''The estimated remaining time in seconds (None if unknown).'''
        if self._it == 0:
            return None
        elapsed = time.time() - self._start
        return elapsed / self._it * (self._length - self._it)

    def format(self):
        '''Create the progress bar string (for printing use `render`).'''
        frac = self._it / self._length if self._length else 1.0
        n_fill = int(round(frac * self.width))
        bar = self.fill_char * n_fill + self.empty_char * (self.width - n_fill)
        info = ['%3d%%' % int(100 * frac)]
        eta = self.eta()
        if self.show_eta and eta is not None and self._it < self._length:
            info.append('eta ' + sec_to_nice_str(eta))
        info.append('%d/%d' % (self._it, self._length))
        return ('%s  [%s]  %s' % (self.label, bar, '  '.join(info))).strip()

    def render(self):
        '''Print the current state of the bar.'''
        self._file.write(self.BEFORE_BAR + self.format())
        self._file.flush()
