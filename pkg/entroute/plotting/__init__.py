'''
Plotting of the CSV results (rate curves, trajectories and benchmarks).

This sub-module is not imported by "import entroute", since it imports
matplotlib; import it explicitly:

    >>> import entroute.plotting
'''
from .curves import *
