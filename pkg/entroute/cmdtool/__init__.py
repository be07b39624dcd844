'''
The command line tools.

Doctest the sub-module:
    >>> import doctest
    >>> doctest.testmod(entroute).failed
    0
'''
from . import entroute
