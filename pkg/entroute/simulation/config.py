'''
Simulation setups and the reading of config files.

A setup is the tuple (p_gen, p_swap, L, N, M, k) together with the routing
algorithm, the forwarding mode, the topology and the seed. Config files are
INI documents; the packaged `config/entroute.cfg` is always read first and
defines every option, user files only need to list what differs.

Example:
    >>> cfg = SimConfig(p_gen=0.5, p_swap=1, L=30, N=20, M=5, k=1)
    >>> cfg
    SimConfig(p_gen=0.5, p_swap=1, L=30, N=20, M=5, k=1, algorithm='MG', mode='opportunistic', topology='grid', seed=0)
    >>> cfg.copy(mode='NOPP').mode
    'non-opportunistic'
    >>> cfg.copy(k=0)
    Traceback (most recent call last):
    ...
    ValueError: k has to be a positive integer, got 0.
    >>> from ..environment import module_dir
    >>> c = read_config([module_dir+'config/entroute.cfg'])
    >>> c.getint('simulate', 'N'), get_list(c, 'simulate', 'algorithms')
    (20, ['MG', 'NL', 'QP'])
    >>> sim_config_from_section(c).L
    30
'''
__all__ = ['SimConfig', 'ALGORITHMS', 'MODES', 'TOPOLOGIES', 'read_config',
           'apply_overrides', 'get_list', 'parse_lifetime', 'parse_mode',
           'sim_config_from_section']

from .. import environment
from configparser import ConfigParser
from os.path import exists, expanduser, split
import math

ALGORITHMS = ('MG', 'NL', 'QP')
MODES = ('opportunistic', 'non-opportunistic')
TOPOLOGIES = ('grid', 'line')
_MODE_ALIASES = {
    'opportunistic': 'opportunistic',
    'opp': 'opportunistic',
    'non-opportunistic': 'non-opportunistic',
    'nonopportunistic': 'non-opportunistic',
    'nopp': 'non-opportunistic',
    }


def parse_mode(mode):
    '''
    The canonical name of a forwarding mode.

    Example:
        >>> parse_mode('OPP'), parse_mode('non-opportunistic')
        ('opportunistic', 'non-opportunistic')
        >>> parse_mode('greedy')
        Traceback (most recent call last):
        ...
        ValueError: Unknown forwarding mode "greedy"!
    '''
    try:
        return _MODE_ALIASES[str(mode).strip().lower()]
    except KeyError:
        raise ValueError('Unknown forwarding mode "%s"!' % mode)


def parse_lifetime(L):
    '''
    A link lifetime: a positive integer or infinity.

    Example:
        >>> parse_lifetime('inf'), parse_lifetime('6'), parse_lifetime(None)
        (inf, 6, inf)
    '''
    if L is None or (isinstance(L, str) and L.strip().lower() in
                     ('inf', 'infinity', 'none')):
        return math.inf
    if isinstance(L, float) and math.isinf(L):
        return math.inf
    L = float(L)
    if L != int(L) or L < 1:
        raise ValueError('The lifetime L has to be a positive integer or inf, '
                         'got %s.' % L)
    return int(L)


def _probability(p, name, allow_zero=False):
    p = float(p)
    lower_ok = p >= 0.0 if allow_zero else p > 0.0
    if not (lower_ok and p <= 1.0):
        raise ValueError('%s has to be in %s1], got %s.' % (
                         name, '[0,' if allow_zero else '(0,', p))
    return p


def _positive_int(x, name):
    if isinstance(x, str):
        x = x.strip()
        try:
            x = int(x)
        except ValueError:
            raise ValueError('%s has to be a positive integer, got %s.' % (name, x))
    if int(x) != x or x < 1:
        raise ValueError('%s has to be a positive integer, got %s.' % (name, x))
    return int(x)


class SimConfig(object):
    '''
    The setup of a simulation.

    Args:
        p_gen (float):      The generation success probability per slot, (0,1].
        p_swap (float):     The swapping success probability, [0,1] (0 only
                            makes sense to provoke the slot cap).
        L (int):            The lifetime of a generated link in slots (or inf).
        N (int):            The number of requests.
        M (int):            The size parameter: links of a line or side length
                            of a grid.
        k (int):            The opportunism degree.
        algorithm (str):    The routing algorithm, one of `ALGORITHMS`.
        mode (str):         The forwarding mode, one of `MODES` (aliases 'OPP'
                            and 'NOPP' are understood).
        topology (str):     'grid' or 'line'.
        seed (int):         The (master) seed.
        slot_cap (int):     The number of slots after which an episode is given
                            up (default: `environment.DEFAULT_slot_cap`).
        swap_time_free (bool):
                            Whether a committed chain is swapped instantly
                            (no swapping time).

    Raises:
        ValueError:         For any invalid field.
    '''
    _fields = ('p_gen', 'p_swap', 'L', 'N', 'M', 'k', 'algorithm', 'mode',
               'topology', 'seed', 'slot_cap', 'swap_time_free')

    def __init__(self, p_gen, p_swap, L, N, M, k=1, algorithm='MG',
                 mode='opportunistic', topology='grid', seed=0, slot_cap=None,
                 swap_time_free=False):
        self.p_gen = _probability(p_gen, 'p_gen')
        self.p_swap = _probability(p_swap, 'p_swap', allow_zero=True)
        self.L = parse_lifetime(L)
        self.N = _positive_int(N, 'N')
        self.M = _positive_int(M, 'M')
        self.k = _positive_int(k, 'k')
        algorithm = str(algorithm).strip().upper()
        if algorithm not in ALGORITHMS:
            raise ValueError('Unknown routing algorithm "%s"!' % algorithm)
        self.algorithm = algorithm
        self.mode = parse_mode(mode)
        topology = str(topology).strip().lower()
        if topology not in TOPOLOGIES:
            raise ValueError('Unknown topology "%s"!' % topology)
        if topology == 'grid' and self.M < 2:
            raise ValueError('A grid needs M >= 2, got %d.' % self.M)
        self.topology = topology
        if int(seed) != seed or seed < 0:
            raise ValueError('The seed has to be a non-negative integer.')
        self.seed = int(seed)
        self.slot_cap = _positive_int(environment.DEFAULT_slot_cap
                                      if slot_cap is None else slot_cap,
                                      'slot_cap')
        self.swap_time_free = bool(swap_time_free)

    @property
    def opportunistic(self):
        return self.mode == 'opportunistic'

    def as_dict(self):
        '''The fields as a (ordered) dictionary.'''
        return {f: getattr(self, f) for f in self._fields}

    def copy(self, **changes):
        '''
        A validated copy with some fields changed.

        Example:
            >>> SimConfig(0.5, 1, 'inf', 3, 4, topology='line').copy(k=2).k
            2
        '''
        for name in changes:
            if name not in self._fields:
                raise ValueError('SimConfig has no field "%s".' % name)
        fields = self.as_dict()
        fields.update(changes)
        return SimConfig(**fields)

    def __eq__(self, other):
        return isinstance(other, SimConfig) and self.as_dict() == other.as_dict()

    def __repr__(self):
        s = 'SimConfig(p_gen=%g, p_swap=%g, L=%s, N=%d, M=%d, k=%d, ' \
            'algorithm=%r, mode=%r, topology=%r, seed=%d' % (
                self.p_gen, self.p_swap, self.L, self.N, self.M, self.k,
                self.algorithm, self.mode, self.topology, self.seed)
        if self.slot_cap != environment.DEFAULT_slot_cap:
            s += ', slot_cap=%d' % self.slot_cap
        if self.swap_time_free:
            s += ', swap_time_free=True'
        return s + ')'


def _new_parser():
    # new to python3: ignores comments at the end of values
    cfg = ConfigParser(allow_no_value=True,
                       inline_comment_prefixes=('#', ';'))
    cfg.optionxform = str
    return cfg


def test_section(cfg, section, entries):
    '''
    Check a config section for the required entries.

    Raises:
        KeyError:       If the section does not exist.
        ValueError:     If an entry is missing.
    '''
    if not cfg.has_section(section):
        raise KeyError('Section "%s" is required in the entroute ' % section +
                       'config file.')
    missing = set(entries) - set(cfg.options(section))
    if missing:
        raise ValueError('Section "%s" must have the ' % section +
                         'following entries: ' + ', '.join(sorted(missing)))


_REQUIRED = {
    'general': ['seed', 'jobs', 'slot_cap'],
    'analyze': ['M', 'N', 'p', 'trials', 'swap_tol'],
    'rate': ['M', 'p', 'horizon', 'trials', 'trajectories'],
    'simulate': ['topology', 'p_gen', 'p_swap', 'L', 'N', 'M', 'k',
                 'algorithms', 'modes', 'inner', 'outer', 'swap_time_free',
                 'exclusion_threshold'],
    'sweep': ['axis', 'values'],
    }


def read_config(config=None):
    '''
    Read the packaged default config and a user config on top of it.

    Args:
        config (list):  List of possible filenames for the user config file;
                        the first existing one is read. If None, the files of
                        `environment.default_config_files()` are searched.

    Returns:
        cfg (ConfigParser):     The merged configuration.

    Raises:
        IOError:        If none of the given files exists.
        KeyError:       If a required section is missing.
        ValueError:     If a required entry is missing.
    '''
    default = environment.module_dir + 'config/entroute.cfg'
    if config is None:
        config = environment.default_config_files()
    if isinstance(config, str):
        config = [config]

    for filename in config:
        if exists(expanduser(filename)):
            filename = expanduser(filename)
            break
    else:
        raise IOError('Config file "%s" does not exist!' % config)

    if environment.verbose >= environment.VERBOSE_NORMAL:
        print('reading config file "%s"' % split(filename)[1])

    cfg = _new_parser()
    cfg.read(default)
    cfg.read(filename)
    for section, entries in _REQUIRED.items():
        test_section(cfg, section, entries)
    return cfg


def apply_overrides(cfg, overrides):
    '''
    Overwrite single config values by strings of the form
    'section.key=value'.

    Raises:
        ValueError:     For malformed overrides or unknown keys.
        KeyError:       For unknown sections.

    Example:
        >>> cfg = _new_parser()
        >>> cfg.read_string('[rate]\\nM: 20\\n')
        >>> apply_overrides(cfg, ['rate.M=5'])
        >>> cfg.get('rate', 'M')
        '5'
        >>> apply_overrides(cfg, ['rate.X=5'])
        Traceback (most recent call last):
        ...
        ValueError: Unknown config entry "X" in section "rate".
    '''
    for o in overrides or ():
        key, sep, value = o.partition('=')
        section, dot, option = key.strip().partition('.')
        if not sep or not dot or not option:
            raise ValueError('Overrides have to be of the form '
                             'section.key=value, got "%s".' % o)
        if not cfg.has_section(section):
            raise KeyError('Unknown config section "%s".' % section)
        if not cfg.has_option(section, option):
            raise ValueError('Unknown config entry "%s" in section "%s".' % (
                             option, section))
        cfg.set(section, option, value.strip())


def get_list(cfg, section, option, kind=str):
    '''
    A comma separated config entry as a list of `kind`.

    Example:
        >>> cfg = _new_parser()
        >>> cfg.read_string('[a]\\nx: 1, 2 ,3\\n')
        >>> get_list(cfg, 'a', 'x', int)
        [1, 2, 3]
    '''
    raw = cfg.get(section, option)
    items = [s.strip() for s in raw.split(',') if s.strip()]
    try:
        return [kind(s) for s in items]
    except ValueError:
        raise ValueError('Invalid entry "%s" in section "%s": %s' % (
                         option, section, raw))


def sim_config_from_section(cfg, section='simulate', **changes):
    '''
    The `SimConfig` defined by a config section (with the seed and slot cap
    from [general]); the first algorithm and mode of the lists are used.
    '''
    sec = cfg[section]
    fields = dict(
        topology=sec.get('topology'),
        p_gen=sec.getfloat('p_gen'),
        p_swap=sec.getfloat('p_swap'),
        L=sec.get('L'),
        N=sec.get('N'),
        M=sec.get('M'),
        k=sec.get('k'),
        algorithm=get_list(cfg, section, 'algorithms')[0],
        mode=get_list(cfg, section, 'modes')[0],
        seed=cfg.getint('general', 'seed'),
        slot_cap=cfg.getint('general', 'slot_cap'),
        swap_time_free=sec.getboolean('swap_time_free'),
        )
    fields.update(changes)
    return SimConfig(**fields)
