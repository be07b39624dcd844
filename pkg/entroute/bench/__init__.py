'''
The benchmark harness: request sets, repeated episodes and reports.

Doctest the sub-module:
    >>> import doctest
    >>> doctest.testmod(harness).failed
    0
'''
from .harness import *
