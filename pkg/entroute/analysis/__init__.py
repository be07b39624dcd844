'''
Line-network analytics: generation times, the waiting-time recursions and
their spectrum, the norm family behind them and the rate estimators.

Also doctest other parts of this sub-module:
    >>> import doctest
    >>> doctest.testmod(generation).failed
    0
    >>> doctest.testmod(waiting).failed
    0
    >>> doctest.testmod(rate).failed
    0
'''
from .generation import *
from .waiting import *
from .rate import *
