'''
Convenience routines for plotting the CSV output of the command line tool.

Doctests impossible, since they would require visual inspection...
'''
__all__ = ['read_table', 'plot_rate_curves', 'plot_trajectories',
           'plot_benchmark']

import numpy as np
import matplotlib.pyplot as plt
import csv


def read_table(filename):
    '''
    Read a CSV file written by `entroute` into columns.

    Numeric columns become float arrays, all others string arrays.

    Args:
        filename (str):     The CSV file.

    Returns:
        table (dict):       Column name -> np.ndarray.
    '''
    with open(filename, newline='', encoding='utf-8') as f:
        reader = csv.DictReader(f)
        raw = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name in raw:
                raw[name].append(row[name])
    table = {}
    for name, values in raw.items():
        try:
            table[name] = np.array([float(v) if v != '' else np.nan
                                    for v in values])
        except ValueError:
            table[name] = np.array(values)
    return table


def _select(table, **where):
    mask = np.ones(len(next(iter(table.values()))), dtype=bool)
    for name, value in where.items():
        col = table[name]
        if col.dtype.kind == 'f':
            mask &= np.isclose(col, float(value))
        else:
            mask &= col == str(value)
    return {name: col[mask] for name, col in table.items()}


def _axis(ax):
    if ax is None:
        return plt.subplots()
    return ax.get_figure(), ax


def _fontsizes(ax, labelsize):
    for tl in ax.get_xticklabels() + ax.get_yticklabels():
        tl.set_fontsize(0.8*labelsize)


def plot_rate_curves(table, M, p, bounds=True, tilde=True, errorbars=False,
                     labelsize=14, ax=None, **kwargs):
    '''
    Plot the rate estimate R_t of a line and (optionally) its bounds and the
    renewal estimate over the slots.

    Args:
        table (dict, str):  The table of `entroute rate` (or its file name).
        M (int):            The number of links to plot for.
        p (float):          The generation probability to plot for.
        bounds (bool):      Whether to plot R_low_t and R_up_t.
        tilde (bool):       Whether to plot t/E{W_t}.
        errorbars (bool):   Whether to shade one standard error around R_t.
        labelsize (int):    The font size of the labels.
        ax (AxesSubplot):   The axis object to plot on. If None, a new one is
                            created by plt.subplots().
        **kwargs:           Further keyword arguments are passed to the R_t
                            ax.plot.

    Returns:
        fig (Figure):       The figure of the axis plotted on.
        ax (AxesSubplot):   The axis plotted on.
    '''
    if isinstance(table, str):
        table = read_table(table)
    sel = _select(table, M=M, p=p)
    if len(sel['t']) == 0:
        raise ValueError('No rate curve for M=%s, p=%s in the table.' % (M, p))
    fig, ax = _axis(ax)
    t = sel['t']
    kwargs.setdefault('label', r'$R_t$')
    line, = ax.plot(t, sel['R_t'], **kwargs)
    if errorbars:
        ax.fill_between(t, sel['R_t'] - sel['se_R_t'],
                        sel['R_t'] + sel['se_R_t'],
                        color=line.get_color(), alpha=0.3)
    if bounds:
        ax.plot(t, sel['R_low_t'], linestyle='--', label=r'$R^{low}_t$')
        ax.plot(t, sel['R_up_t'], linestyle=':', label=r'$R^{up}_t$')
    if tilde:
        ax.plot(t, sel['R_tilde_t'], linestyle='-.', label=r'$\tilde{R}_t$')
    ax.set_xlabel(r'$t$ [slots]', fontsize=labelsize)
    ax.set_ylabel('rate [requests / slot]', fontsize=labelsize)
    ax.set_title('M=%d, p=%g' % (M, p), fontsize=labelsize)
    ax.legend()
    _fontsizes(ax, labelsize)
    return fig, ax


def plot_trajectories(table, M, p, alpha=0.5, labelsize=14, ax=None,
                      **kwargs):
    '''
    Plot the single-trial rates N_t/t of `<out>.trajectories.csv`.

    Returns:
        fig (Figure):       The figure of the axis plotted on.
        ax (AxesSubplot):   The axis plotted on.
    '''
    if isinstance(table, str):
        table = read_table(table)
    sel = _select(table, M=M, p=p)
    fig, ax = _axis(ax)
    for trial in np.unique(sel['trial']):
        mask = sel['trial'] == trial
        ax.plot(sel['t'][mask], sel['rate'][mask], alpha=alpha, **kwargs)
    ax.set_xlabel(r'$t$ [slots]', fontsize=labelsize)
    ax.set_ylabel(r'$N_t / t$', fontsize=labelsize)
    _fontsizes(ax, labelsize)
    return fig, ax


def plot_benchmark(table, metric='atwt', x=None, errorbars=True,
                   labelsize=14, ax=None):
    '''
    Plot a benchmark metric for every (algorithm, mode) over the swept values
    (or as points at the single setup of `entroute simulate`).

    Args:
        table (dict, str):  The table of `entroute simulate` / `sweep`.
        metric (str):       'atwt', 'alwt' or 'improvement'.
        x (str):            The column to plot over (default: the sweep axis,
                            or 'p_gen' without one).
        errorbars (bool):   Whether to plot the standard errors.
        labelsize (int):    The font size of the labels.
        ax (AxesSubplot):   The axis object to plot on.

    Returns:
        fig (Figure):       The figure of the axis plotted on.
        ax (AxesSubplot):   The axis plotted on.
    '''
    if isinstance(table, str):
        table = read_table(table)
    if metric not in ('atwt', 'alwt', 'improvement'):
        raise ValueError('Unknown metric "%s"!' % metric)
    if x is None:
        x = str(table['axis'][0]) if 'axis' in table else 'p_gen'
    fig, ax = _axis(ax)
    algorithms = list(dict.fromkeys(table['algorithm']))
    modes = list(dict.fromkeys(table['mode']))
    for algorithm in algorithms:
        for mode in (modes if metric != 'improvement' else modes[:1]):
            sel = _select(table, algorithm=algorithm, mode=mode)
            order = np.argsort(sel[x], kind='stable')
            xs = sel[x][order]
            ys = sel[metric][order]
            label = algorithm if metric == 'improvement' else \
                    '%s (%s)' % (algorithm, mode)
            style = '-' if mode == 'opportunistic' else '--'
            if errorbars and metric != 'improvement':
                ax.errorbar(xs, ys, yerr=sel[metric + '_se'][order],
                            linestyle=style, marker='o', capsize=3, label=label)
            else:
                ax.plot(xs, ys, linestyle=style, marker='o', label=label)
    ax.set_xlabel(x, fontsize=labelsize)
    ax.set_ylabel({'atwt': 'average total waiting time [slots]',
                   'alwt': 'average link waiting time [slots]',
                   'improvement': 'improvement by opportunism'}[metric],
                  fontsize=labelsize)
    ax.legend()
    _fontsizes(ax, labelsize)
    return fig, ax
