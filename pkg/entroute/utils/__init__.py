'''
Some general (low-level) functions and the reproducible random streams.

Also doctest other parts of this sub-module:
    >>> import doctest
    >>> doctest.testmod(utils).failed
    0
    >>> doctest.testmod(rng).failed
    0
'''
from .utils import *
from .rng import *
