'''
The command line front end `entroute`.

    entroute analyze|rate|simulate|sweep --out <file.csv> [--config <file>]
             [--seed <int>] [--jobs <n>] [--set section.key=value ...] [-v]

All commands read the packaged default config and the given one on top of it,
apply the --set overrides and write a CSV file (UTF-8, header row, values with
9 significant digits). Files are written atomically, a failing command leaves
no (partial) output.

Exit codes: 0 on success, 2 for invalid configs, 3 if too many episodes of a
benchmark hit the slot cap (the results are written nevertheless).

Example:
    >>> args = parser.parse_args(['rate', '--out', 'r.csv', '--set', 'rate.M=3',
    ...                           '-vv'])
    >>> args.command, args.set, args.verbose, args.seed
    ('rate', ['rate.M=3'], 2, None)
    >>> trajectories_filename('results/rate.csv')
    'results/rate.trajectories.csv'
'''
__all__ = ['parser', 'main', 'cmd_analyze', 'cmd_rate', 'cmd_simulate',
           'cmd_sweep', 'write_csv', 'trajectories_filename', 'EXIT_OK',
           'EXIT_CONFIG', 'EXIT_EXCLUSIONS']

from .. import environment
from ..utils import RngStream, sig_str, mean_and_sem
from ..analysis import expected_generation_time, expected_swap_position, \
                       running_norm, spectrum_parameters, spectrum_labels, \
                       estimate_rates, sample_delivery_trajectory, trial_stream
from ..simulation import read_config, apply_overrides, get_list, \
                         sim_config_from_section
from ..bench import run_benchmark, sweep, expand_sweep, REPORT_COLUMNS
import argparse
import csv
import numpy as np
import os
import sys
import tempfile

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_EXCLUSIONS = 3

COMMANDS = ('analyze', 'rate', 'simulate', 'sweep')

parser = argparse.ArgumentParser(
            prog='entroute',
            description='Waiting times and rates of opportunistic entanglement '
                        'routing on line networks and routing benchmarks on '
                        'grid networks. The results are written as CSV.')
parser.add_argument('command',
                    choices=COMMANDS,
                    help='analyze: expected generation times, swap positions '
                         'and the waiting time spectrum; rate: transmission '
                         'rate curves and their bounds; simulate: benchmark '
                         'the routing algorithms in both forwarding modes; '
                         'sweep: a benchmark for every value of one field.')
parser.add_argument('--config', '-c',
                    metavar='FILE',
                    default=None,
                    help='The config file to read on top of the packaged '
                         'default one (default: the first existing of ' +
                         ', '.join(environment.default_config_files()) + ').')
parser.add_argument('--seed', '-s',
                    metavar='INT',
                    type=int,
                    default=None,
                    help='The master seed (default: [general] seed of the '
                         'config).')
parser.add_argument('--out', '-o',
                    metavar='FILE',
                    required=True,
                    help='The CSV file to write.')
parser.add_argument('--jobs', '-j',
                    metavar='INT',
                    type=int,
                    default=None,
                    help='The number of worker processes (default: [general] '
                         'jobs of the config). The results do not depend on '
                         'it.')
parser.add_argument('--set',
                    metavar='SECTION.KEY=VALUE',
                    action='append',
                    default=[],
                    help='Override a config entry; can be given several times.')
parser.add_argument('--verbose', '-v',
                    action='count',
                    default=0,
                    help='Print progress; repeat for more output.')


def _format(x):
    if x is None:
        return ''
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x))
    if isinstance(x, (int, float, np.integer, np.floating)):
        return sig_str(x, environment.DEFAULT_csv_digits)
    return str(x)


def write_csv(filename, columns, rows):
    '''
    Write rows (sequences or dicts keyed by the columns) atomically to a CSV
    file: into a temporary file in the same directory that then replaces the
    target.

    Example:
        >>> import os
        >>> d = tempfile.mkdtemp()
        >>> fn = os.path.join(d, 'x.csv')
        >>> write_csv(fn, ['a', 'b'], [(1, 2/3), {'a': 'z', 'b': None}])
        >>> print(open(fn).read().strip())
        a,b
        1,0.666666667
        z,
        >>> os.listdir(d)
        ['x.csv']
    '''
    filename = os.path.abspath(filename)
    dirname = os.path.dirname(filename)
    if not os.path.isdir(dirname):
        os.makedirs(dirname)
    fd, tmp = tempfile.mkstemp(dir=dirname, prefix='.entroute-', suffix='.tmp')
    try:
        with os.fdopen(fd, 'w', newline='', encoding='utf-8') as f:
            writer = csv.writer(f, lineterminator='\n')
            writer.writerow(columns)
            for row in rows:
                if isinstance(row, dict):
                    row = [row[c] for c in columns]
                writer.writerow([_format(x) for x in row])
        os.replace(tmp, filename)
    except BaseException:
        if os.path.exists(tmp):
            os.remove(tmp)
        raise


def trajectories_filename(out):
    '''The name of the trajectory file that belongs to a rate output.'''
    root, ext = os.path.splitext(out)
    return root + '.trajectories' + (ext or '.csv')


ANALYZE_COLUMNS = ('M', 'N', 'p', 'statistic', 'value', 'stderr')


def cmd_analyze(cfg, seed, jobs=1):
    '''
    Expected generation time R(M,p), expected swap position E{K} and the
    Monte-Carlo means of the waiting time spectrum for every (M, N, p) of the
    [analyze] section.

    Returns:
        columns (tuple), rows (list):   The table to write.
    '''
    Ms = get_list(cfg, 'analyze', 'M', int)
    Ns = get_list(cfg, 'analyze', 'N', int)
    ps = get_list(cfg, 'analyze', 'p', float)
    trials = cfg.getint('analyze', 'trials')
    tol = cfg.getfloat('analyze', 'swap_tol')
    if trials < 1:
        raise ValueError('The number of trials has to be positive.')

    rows = []
    stream = 0
    for M in Ms:
        for N in Ns:
            for p in ps:
                if environment.verbose >= environment.VERBOSE_TACITURN:
                    print('analyze M=%d, N=%d, p=%g' % (M, N, p))
                rows.append((M, N, p, 'R', expected_generation_time(M, p), None))
                rows.append((M, N, p, 'E_K', expected_swap_position(M, p, tol),
                             None))
                rng = RngStream(seed, stream)
                stream += 1
                D = np.swapaxes(rng.geometric(p, size=(trials, M, N)), -1, -2)
                for label, (r, k) in zip(spectrum_labels(M),
                                         spectrum_parameters(M)):
                    mean, sem = mean_and_sem(running_norm(D, r=r, k=k)[:, -1])
                    rows.append((M, N, p, label, mean, sem))
    return ANALYZE_COLUMNS, rows


RATE_COLUMNS = ('M', 'p', 't', 'R_t', 'R_low_t', 'R_up_t', 'R_tilde_t',
                'se_R_t', 'se_R_low_t', 'se_R_up_t')
TRAJECTORY_COLUMNS = ('M', 'p', 'trial', 't', 'N_t', 'rate')


def cmd_rate(cfg, seed, jobs=1):
    '''
    The rate curves of every (M, p) of the [rate] section and, if
    `trajectories` > 0, that many single-trial trajectories N_t (the first
    trials of the estimate).

    Returns:
        columns (tuple), rows (list), trajectory rows (list or None)
    '''
    Ms = get_list(cfg, 'rate', 'M', int)
    ps = get_list(cfg, 'rate', 'p', float)
    horizon = cfg.getint('rate', 'horizon')
    trials = cfg.getint('rate', 'trials')
    n_traj = cfg.getint('rate', 'trajectories')
    if n_traj < 0:
        raise ValueError('The number of trajectories must not be negative.')

    rows, traj = [], []
    stream = 0
    for M in Ms:
        for p in ps:
            rng = RngStream(seed, stream)
            stream += 1
            rc = estimate_rates(M, p, horizon, trials, rng, jobs=jobs)
            for i, t in enumerate(rc.t):
                rows.append((M, p, int(t), rc.R[i], rc.R_low[i], rc.R_up[i],
                             rc.R_tilde[i], rc.se_R[i], rc.se_R_low[i],
                             rc.se_R_up[i]))
            for trial in range(n_traj):
                N = sample_delivery_trajectory(M, p, horizon,
                                               trial_stream(rng, trial))
                for t, n in enumerate(N, 1):
                    traj.append((M, p, trial, t, int(n), n / float(t)))
    return RATE_COLUMNS, rows, (traj if n_traj > 0 else None)


def _benchmark_kwargs(cfg, jobs):
    return dict(inner=cfg.getint('simulate', 'inner'),
                outer=cfg.getint('simulate', 'outer'),
                algorithms=get_list(cfg, 'simulate', 'algorithms'),
                modes=get_list(cfg, 'simulate', 'modes'),
                exclusion_threshold=cfg.getfloat('simulate',
                                                 'exclusion_threshold'),
                jobs=jobs)


def cmd_simulate(cfg, seed, jobs=1):
    '''
    Benchmark the algorithms and modes of the [simulate] section.

    Returns:
        columns (tuple), rows (list), invalid (bool)
    '''
    config = sim_config_from_section(cfg, seed=seed)
    report = run_benchmark(config, **_benchmark_kwargs(cfg, jobs))
    return REPORT_COLUMNS, report.rows(), report.invalid


def cmd_sweep(cfg, seed, jobs=1):
    '''
    Benchmark the [simulate] setup for every value of the [sweep] axis; the
    setups run with seeds derived from the master seed and their position.

    Returns:
        columns (tuple), rows (list), invalid (bool)
    '''
    axis = cfg.get('sweep', 'axis').strip()
    values = get_list(cfg, 'sweep', 'values')
    if not values:
        raise ValueError('The sweep needs at least one value.')
    config = sim_config_from_section(cfg, seed=seed)
    configs = expand_sweep(config, axis, values)
    reports = sweep(configs, axis, master_seed=seed,
                    **_benchmark_kwargs(cfg, jobs))
    rows = []
    for value, rep in zip(values, reports):
        for row in rep.rows():
            row = dict(row, axis=axis, value=value)
            rows.append(row)
    return ('axis', 'value') + REPORT_COLUMNS, rows, \
            any(rep.invalid for rep in reports)


def _error(msg):
    print('ERROR: %s' % msg, file=sys.stderr)


def main(argv=None):
    '''
    Run the command line tool.

    Args:
        argv (list):    The arguments (default: `sys.argv[1:]`).

    Returns:
        status (int):   The exit code.
    '''
    args = parser.parse_args(argv)
    if args.verbose:
        environment.verbose = min(args.verbose, environment.VERBOSE_TALKY)

    try:
        cfg = read_config(None if args.config is None else [args.config])
        apply_overrides(cfg, args.set)
        seed = cfg.getint('general', 'seed') if args.seed is None else args.seed
        jobs = cfg.getint('general', 'jobs') if args.jobs is None else args.jobs
        if seed < 0:
            raise ValueError('The seed has to be non-negative, got %d.' % seed)
        if jobs < 1:
            raise ValueError('The number of jobs has to be positive, got %d.' % jobs)

        invalid = False
        if args.command == 'analyze':
            columns, rows = cmd_analyze(cfg, seed, jobs)
        elif args.command == 'rate':
            columns, rows, traj = cmd_rate(cfg, seed, jobs)
        elif args.command == 'simulate':
            columns, rows, invalid = cmd_simulate(cfg, seed, jobs)
        else:
            columns, rows, invalid = cmd_sweep(cfg, seed, jobs)
    except (IOError, KeyError, ValueError, ZeroDivisionError) as e:
        _error(e)
        return EXIT_CONFIG

    write_csv(args.out, columns, rows)
    if environment.verbose >= environment.VERBOSE_TACITURN:
        print('wrote %d rows to "%s"' % (len(rows), args.out))
    if args.command == 'rate' and traj is not None:
        write_csv(trajectories_filename(args.out), TRAJECTORY_COLUMNS, traj)
    if invalid:
        _error('too many episodes hit the slot cap; see the "excluded" column')
        return EXIT_EXCLUSIONS
    return EXIT_OK
