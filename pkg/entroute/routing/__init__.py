'''
The routing algorithms as producers of path plans for the engine.

Doctest the sub-module:
    >>> import doctest
    >>> doctest.testmod(profiles).failed
    0
'''
from .profiles import *
