#!/usr/bin/env python
# -*- coding: utf-8 -*-
#   aoapy - an angle-of-arrival laboratory for Python
#   Copyright (c) 2024, the aoapy developers
#   All rights reserved.
#
#   Redistribution and use in source and binary forms, with or without
#   modification, are permitted provided that the following conditions are met:
#
#   1. Redistributions of source code must retain the above copyright notice,
#   this list of conditions and the following disclaimer.
#
#   2. Redistributions in binary form must reproduce the above copyright
#   notice, this list of conditions and the following disclaimer in the
#   documentation and/or other materials provided with the distribution.
#
#   THIS SOFTWARE IS PROVIDED BY THE COPYRIGHT HOLDERS AND CONTRIBUTORS
#   "AS IS" AND ANY EXPRESS OR IMPLIED WARRANTIES, INCLUDING, BUT NOT LIMITED
#   TO, THE IMPLIED WARRANTIES OF MERCHANTABILITY AND FITNESS FOR A PARTICULAR
#   PURPOSE ARE DISCLAIMED. IN NO EVENT SHALL THE COPYRIGHT HOLDER OR
#   CONTRIBUTORS BE LIABLE FOR ANY DIRECT, INDIRECT, INCIDENTAL, SPECIAL,
#   EXEMPLARY, OR CONSEQUENTIAL DAMAGES (INCLUDING, BUT NOT LIMITED TO,
#   PROCUREMENT OF SUBSTITUTE GOODS OR SERVICES; LOSS OF USE, DATA, OR PROFITS;
#   OR BUSINESS INTERRUPTION) HOWEVER CAUSED AND ON ANY THEORY OF LIABILITY,
#   WHETHER IN CONTRACT, STRICT LIABILITY, OR TORT (INCLUDING NEGLIGENCE OR
#   OTHERWISE) ARISING IN ANY WAY OUT OF THE USE OF THIS SOFTWARE, EVEN IF
#   ADVISED OF THE POSSIBILITY OF SUCH DAMAGE.


import logging

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import numpy as np

from .evaluation import EvalReport, ecdf, snr_bin


logger = logging.getLogger(__name__)


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    logger.info('wrote %s', path)
    return path


def _runs(flags):
    """(start, stop) index pairs of consecutive True entries."""
    runs = []
    start = None
    for i, f in enumerate(flags):
        if f and start is None:
            start = i
        elif not f and start is not None:
            runs.append((start, i))
            start = None
    if start is not None:
        runs.append((start, len(flags)))
    return runs


def plot_trace(records, path, method='MUSIC', order=None, repetition=0):
    """
    Raw and corrected estimates against the top-view truth along the
    trajectory, NLOS steps shaded grey and detached steps red.
    """
    recs = [r for r in records
            if r.method == method and r.repetition == repetition]
    if order is None and recs:
        order = recs[0].order
    recs = sorted((r for r in recs if r.order == order), key=lambda r: r.step)
    k = np.array([r.step for r in recs])

    fig = plt.figure(figsize=(9, 4))
    ax = fig.add_subplot(111)
    ax.plot(k, [r.theta_xy_true for r in recs], 'k', label='truth (XY)')
    ax.plot(k, [r.theta_hat for r in recs], '.', color='tab:orange',
            ms=3, label='raw estimate')
    ax.plot(k, [r.theta_xy_hat for r in recs], '.', color='tab:green',
            ms=3, label='corrected estimate')
    for flags, colour in (([r.is_nlos and not r.detached for r in recs],
                           '0.8'),
                          ([r.detached for r in recs], 'tab:red')):
        for a, b in _runs(flags):
            ax.axvspan(k[a] - 0.5, k[b - 1] + 0.5, color=colour, alpha=0.4,
                       lw=0)
    ax.set_xlabel('step k')
    ax.set_ylabel('angle [deg]')
    ax.set_title('%s, order %s' % (method, order))
    ax.legend(loc='best')
    return _save(fig, path)


def plot_ecdf(source, path):
    """
    ECDF of |error| for every (method, order) cell.

    :param source: EvalReport or list of EvalRecord.
    """
    curves = []
    if isinstance(source, EvalReport):
        for method in sorted(source.cells):
            for order in sorted(source.cells[method], key=int):
                pts = source.cell(method, order)['ecdf']
                if pts:
                    curves.append(('%s o%s' % (method, order),
                                   np.array(pts)))
    else:
        keys = sorted({(r.method, r.order) for r in source})
        for method, order in keys:
            err = [abs(r.error_deg) for r in source if not r.detached and
                   r.method == method and r.order == order]
            if err:
                curves.append(('%s o%s' % (method, order),
                               np.array(ecdf(err))))

    fig = plt.figure(figsize=(6, 4))
    ax = fig.add_subplot(111)
    for label, pts in curves:
        ax.step(pts[:, 0], pts[:, 1], where='post', label=label)
    ax.set_xscale('log')
    ax.set_xlabel('|error| [deg]')
    ax.set_ylabel('ECDF')
    ax.set_ylim(0, 1.02)
    ax.grid(True, which='both', alpha=0.3)
    ax.legend(loc='lower right')
    return _save(fig, path)


def plot_snr_boxplot(records, path, method=None):
    """Pre- and post-correction |error| per SNR bin."""
    recs = [r for r in records if not r.detached and
            (method is None or r.method == method)]
    bins = sorted({snr_bin(r.snr_db) for r in recs},
                  key=lambda b: float('inf') if b.startswith('>')
                  else float(b.rsplit('-', 1)[0]))
    pre = [[abs(r.pre_error_deg) for r in recs if snr_bin(r.snr_db) == b]
           for b in bins]
    post = [[abs(r.error_deg) for r in recs if snr_bin(r.snr_db) == b]
            for b in bins]

    fig = plt.figure(figsize=(7, 4))
    ax = fig.add_subplot(111)
    pos = np.arange(len(bins))*3.0
    if bins:
        ax.boxplot(pre, positions=pos - 0.5, widths=0.8, showfliers=False,
                   patch_artist=True, boxprops={'facecolor': 'tab:orange'})
        ax.boxplot(post, positions=pos + 0.5, widths=0.8, showfliers=False,
                   patch_artist=True, boxprops={'facecolor': 'tab:green'})
    ax.set_xticks(pos)
    ax.set_xticklabels(bins)
    ax.set_xlabel('SNR bin [dB]')
    ax.set_ylabel('|error| [deg]')
    ax.set_title('pre (orange) vs post (green) correction')
    return _save(fig, path)


def plot_spectrum(spectrum, path, theta_true=None):
    p = np.asarray(spectrum.power)
    fig = plt.figure(figsize=(6, 4))
    ax = fig.add_subplot(111)
    ax.plot(spectrum.theta_deg, 10*np.log10(p/np.max(p)), 'k')
    if theta_true is not None:
        ax.axvline(theta_true, color='tab:red', ls='--')
    ax.set_xlim(-90, 90)
    ax.set_xlabel('theta [deg]')
    ax.set_ylabel('P / max [dB]')
    return _save(fig, path)
