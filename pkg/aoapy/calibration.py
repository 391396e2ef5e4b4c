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


import dataclasses
import json
import logging
from dataclasses import dataclass

import numpy as np

from .array import array_axes
from .channel import Scenario, synthesize_snapshot, trace_paths
from .geometry import UE_HEIGHT_M
from .util import (CalibrationError, ConfigError, ParseError, ShapeError,
                   circular_mean, circular_std, wrap_phase)


logger = logging.getLogger(__name__)

DEFAULT_NUM_FRAMES = 10
DEFAULT_SPREAD_THRESHOLD_RAD = 0.2
# Samples per sub-block when measuring the spread of the phase estimates.
CALIBRATION_BLOCK = 16


@dataclass(frozen=True, eq=False)
class CalibrationTable:
    """
    Mean phase offset of every receive port relative to port 0.

    :param offsets_rad: One offset per port in [-pi, pi), first entry 0.
    :param num_frames_averaged: Number of reference frames averaged.
    :param residual_spread_rad: Worst-port circular standard deviation of
        the block-wise phase estimates.
    :param session_seed: Boot session the table was measured in, if known.
    """
    offsets_rad: np.ndarray
    num_frames_averaged: int
    residual_spread_rad: float = 0.0
    session_seed: int = None

    def __post_init__(self):
        offsets = np.asarray(self.offsets_rad, dtype=float).reshape(-1)
        if offsets.size < 1 or not np.all(np.isfinite(offsets)):
            raise ConfigError('offsets_rad must be a finite vector')
        if offsets[0] != 0:
            raise ConfigError('offsets_rad[0] must be 0, got %r' % offsets[0])
        object.__setattr__(self, 'offsets_rad', wrap_phase(offsets))

    @property
    def num_ports(self):
        return self.offsets_rad.size

    def negated(self):
        return dataclasses.replace(self, offsets_rad=-self.offsets_rad)

    def to_dict(self):
        d = {'offsets_rad': [float(v) for v in self.offsets_rad],
             'frames': int(self.num_frames_averaged),
             'residual_spread_rad': float(self.residual_spread_rad)}
        if self.session_seed is not None:
            d['session_seed'] = int(self.session_seed)
        return d


def estimate_offsets(frames, srs):
    """
    Per-port phase offsets from boresight reference frames.

    For every frame the offset of port m is arg(sum_n x_m[n] conj(x_0[n]));
    the table holds the circular mean over frames.

    :param frames: List of LOS-only SnapshotMatrix with the UE on boresight.
    :param srs: Pilot sequence the frames were sent with.
    """
    frames = list(frames)
    if not frames:
        raise ConfigError('calibration needs at least one frame')
    N = len(srs)
    M = frames[0].num_elements
    per_frame = []
    blocks = []
    for i, frame in enumerate(frames):
        x = frame.samples
        if x.shape != (M, N):
            raise ShapeError('frame %d has shape %s, expected %s'
                             % (i, x.shape, (M, N)))
        if frame.num_paths > 1:
            raise CalibrationError('frame %d carries %d paths; calibration '
                                   'requires line-of-sight only frames'
                                   % (i, frame.num_paths))
        energy = np.sum(np.abs(x)**2, axis=1)
        dead = np.flatnonzero(energy == 0)
        if dead.size:
            raise CalibrationError('port %d has zero energy in frame %d'
                                   % (dead[0], i), port=int(dead[0]))
        prod = x*np.conj(x[0])[None, :]
        per_frame.append(np.angle(np.sum(prod, axis=1)))
        nb = N//CALIBRATION_BLOCK
        if nb:
            b = prod[:, :nb*CALIBRATION_BLOCK].reshape(M, nb, -1).sum(axis=2)
            blocks.append(np.angle(b))

    offsets = circular_mean(np.array(per_frame), axis=0)
    offsets[0] = 0.0
    spread = 0.0
    if blocks and M > 1:
        spread = float(np.max(circular_std(np.concatenate(blocks, axis=1)[1:],
                                           axis=1)))
    logger.info('calibrated %d ports from %d frames, spread %.4f rad',
                M, len(frames), spread)
    return CalibrationTable(offsets, len(frames), spread)


def apply_correction(snapshot, table):
    """
    Remove the port offsets, x'_m[n] = x_m[n] e^{-j offset_m}.

    :param snapshot: SnapshotMatrix.
    :param table: CalibrationTable with one entry per port.
    """
    if table.num_ports != snapshot.num_elements:
        raise ShapeError('table has %d ports, snapshot has %d'
                         % (table.num_ports, snapshot.num_elements))
    rot = np.exp(-1j*table.offsets_rad)
    return dataclasses.replace(snapshot,
                               samples=snapshot.samples*rot[:, None])


def reference_frames(ula, srs, impairment, num_frames=DEFAULT_NUM_FRAMES,
                     snr_db=np.inf, seed=0, distance_m=20.0):
    """
    Synthesize line-of-sight frames from a reference UE placed on boresight.

    :param ula: UlaConfig of the array to calibrate.
    :param srs: Pilot sequence.
    :param impairment: ImpairmentModel of the current session.
    :param num_frames: Number of frames.
    :param snr_db: SNR of every frame.
    :param seed: Noise seed; frame i uses repetition i.
    :param distance_m: Horizontal distance of the reference UE.
    """
    boresight, _ = array_axes(ula.boresight_azimuth)
    ue = np.array(ula.origin) + distance_m*boresight
    ue[2] = UE_HEIGHT_M
    scene = Scenario('reference', ula.origin, ula.boresight_azimuth,
                     carrier_hz=ula.carrier_hz)
    paths = trace_paths(scene, ue)
    return [synthesize_snapshot(paths, ula, srs, snr_db, impairment, seed,
                                repetition=i) for i in range(num_frames)]


def save_table(table, path):
    with open(path, 'w', encoding='utf-8') as fh:
        json.dump(table.to_dict(), fh, indent=2, sort_keys=True)
        fh.write('\n')


def load_table(path):
    """
    Read a table written by save_table. Missing files raise OSError,
    malformed content raises ParseError.
    """
    with open(path, encoding='utf-8') as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, path, exc.lineno)
    try:
        return CalibrationTable(offsets_rad=data['offsets_rad'],
                                num_frames_averaged=int(data['frames']),
                                residual_spread_rad=float(
                                    data['residual_spread_rad']),
                                session_seed=data.get('session_seed'))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError('invalid calibration table: %s' % exc, path)
