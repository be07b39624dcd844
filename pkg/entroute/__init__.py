'''
The entroute module simulates and analyses opportunistic entanglement routing
in slotted quantum networks: exact and Monte-Carlo waiting times and rates of
line networks, and a routing simulator that benchmarks non-opportunistic and
k-opportunistic forwarding on grids.

All sub-modules are imported along with a "import entroute" except the
plotting sub-module, that has to be imported explicitly (it needs matplotlib).

doctests:
    >>> import doctest
    >>> import sys
    >>> print('testing module utils...', file=sys.stderr)
    >>> doctest.testmod(utils).failed
    0
    >>> print('testing module environment...', file=sys.stderr)
    >>> doctest.testmod(environment).failed
    0
    >>> print('testing module topology...', file=sys.stderr)
    >>> doctest.testmod(topology).failed
    0
    >>> print('testing module analysis...', file=sys.stderr)
    >>> doctest.testmod(analysis).failed
    0
    >>> print('testing module routing...', file=sys.stderr)
    >>> doctest.testmod(routing).failed
    0
    >>> print('testing module simulation...', file=sys.stderr)
    >>> doctest.testmod(simulation).failed
    0
    >>> print('testing module bench...', file=sys.stderr)
    >>> doctest.testmod(bench).failed
    0
    >>> print('testing module cmdtool...', file=sys.stderr)
    >>> doctest.testmod(cmdtool).failed
    0

For development:
    The sub-modules shall only depend globally on sub-modules that are listed
    previously: topology and analysis on utils, routing on topology,
    simulation on routing, bench on simulation and cmdtool on everything.
'''
__version__ = '1.0.0'

# import all modules
from . import environment
from . import utils
from . import topology
from . import analysis
from . import routing
from . import simulation
from . import bench
from . import cmdtool

from .utils import RngStream, derive_seed
from .topology import *
from .analysis import *
from .routing import *
from .simulation import *
from .bench import *
