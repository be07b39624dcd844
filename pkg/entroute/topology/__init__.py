'''
Network topologies (lines and square grids), links and paths.

Doctest the sub-module:
    >>> import doctest
    >>> doctest.testmod(graph).failed
    0
'''
from .graph import *
