'''
Determine whether we are in interactive mode or not and hold the package wide
defaults.

Example:
    >>> verbose in (VERBOSE_QUIET, VERBOSE_NORMAL)
    True
    >>> DEFAULT_slot_cap
    1000000
    >>> default_config_files()[-1].endswith('config/entroute.cfg')
    True
'''
__all__ = ['interactive', 'module_dir', 'default_config_files']

import os

module_dir = os.path.dirname(__file__)+'/'

import __main__ as main
if hasattr(main, '__file__'):
    interactive = False
else:
    interactive = True

VERBOSE_QUIET       = 0
VERBOSE_TACITURN    = 1
VERBOSE_NORMAL      = 2
VERBOSE_TALKY       = 3
verbose = VERBOSE_NORMAL if interactive else VERBOSE_QUIET

DEFAULT_slot_cap = 10**6                # slots before an episode is given up
DEFAULT_inner = 100                     # episodes per request set
DEFAULT_outer = 50                      # request sets per benchmark
DEFAULT_NL_paths = 2                    # disjoint paths of the NL profile
DEFAULT_exclusion_threshold = 0.01      # fraction of capped episodes allowed
DEFAULT_swap_tol = 1e-12                # series truncation for E{K}
DEFAULT_csv_digits = 9                  # significant digits in CSV output
DEFAULT_rate_chunk = 256                # trials per vectorised rate chunk


def default_config_files():
    '''
    The config files looked for (in that order) when no explicit one is given.

    The first existing one wins; the packaged one always exists.
    '''
    return ['./entroute.cfg',
            os.path.join(os.getenv('HOME', '~'), '.config/entroute/entroute.cfg'),
            module_dir+'config/entroute.cfg']
