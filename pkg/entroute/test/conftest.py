import matplotlib
matplotlib.use('Agg')

import pytest
from entroute import environment


@pytest.fixture(autouse=True)
def quiet():
    '''Keep the package quiet (the command line tool may raise verbosity).'''
    verbose = environment.verbose
    environment.verbose = environment.VERBOSE_QUIET
    yield
    environment.verbose = verbose
