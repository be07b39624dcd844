'''
The slotted routing simulator: setups, config files and the engine.

Also doctest other parts of this sub-module:
    >>> import doctest
    >>> doctest.testmod(config).failed
    0
    >>> doctest.testmod(engine).failed
    0
'''
from .config import *
from .engine import *
