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
import io
import itertools
import logging
import os
import re
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .array import DEFAULT_CARRIER_HZ, array_axes, spatial_frequency
from .geometry import (GroundTruth, GeometryContext, cylindrical_correction,
                       ground_truth_angles)
from .util import (SPEED_OF_LIGHT, ConfigError, GeometryError, LinkFailure,
                   ParseError, rng_for)


logger = logging.getLogger(__name__)

DEFAULT_GAMMA = 0.6*np.exp(1j*np.pi)
_EPS = 1e-9

NOISE_STREAM = 0
IMPAIRMENT_STREAM = 1
RANGING_STREAM = 2

CIR_COLUMNS = ['delay_s', 'gain_real', 'gain_imag', 'azimuth_deg',
               'elevation_offset_m', 'order', 'is_los']


def _vec3(v, name):
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.size != 3 or not np.all(np.isfinite(v)):
        raise ConfigError('%s must be a finite 3-vector, got %r' % (name, v))
    return v


@dataclass(frozen=True, eq=False)
class Wall:
    """
    Vertical planar reflector. ``normal`` points into the scene, ``extent``
    is an optional axis-aligned (lo, hi) box bounding the reflecting face.
    """
    anchor: tuple
    normal: tuple
    gamma: complex = DEFAULT_GAMMA
    extent: tuple = None

    def __post_init__(self):
        n = _vec3(self.normal, 'wall normal')
        if abs(n[2]) > 1e-9:
            raise ConfigError('walls must be vertical (normal z = 0)')
        norm = np.linalg.norm(n)
        if norm == 0:
            raise ConfigError('wall normal must be non-zero')
        object.__setattr__(self, 'normal', n/norm)
        object.__setattr__(self, 'anchor', _vec3(self.anchor, 'wall anchor'))
        object.__setattr__(self, 'gamma', complex(self.gamma))
        if abs(self.gamma) > 1 + 1e-12:
            raise ConfigError('|gamma| must be <= 1, got %g' % abs(self.gamma))
        if self.extent is not None:
            lo, hi = self.extent
            lo = np.asarray(lo, dtype=float).reshape(-1)
            hi = np.asarray(hi, dtype=float).reshape(-1)
            if lo.size != 3 or hi.size != 3 or np.any(np.isnan(lo)) \
                    or np.any(np.isnan(hi)) or np.any(hi < lo):
                raise ConfigError('wall extent must be a (lo, hi) box')
            object.__setattr__(self, 'extent', (lo, hi))

    def signed_distance(self, p):
        return float((np.asarray(p) - self.anchor) @ self.normal)

    def reflect(self, p):
        return np.asarray(p) - 2*self.signed_distance(p)*self.normal

    def contains(self, p):
        if self.extent is None:
            return True
        lo, hi = self.extent
        return bool(np.all(p >= lo - 1e-6) and np.all(p <= hi + 1e-6))


@dataclass(frozen=True, eq=False)
class Blocker:
    """Axis-aligned box occluding every segment that crosses it."""
    lo: tuple
    hi: tuple

    def __post_init__(self):
        lo = _vec3(self.lo, 'blocker lo')
        hi = _vec3(self.hi, 'blocker hi')
        if np.any(hi <= lo):
            raise ConfigError('blocker needs hi > lo on every axis')
        object.__setattr__(self, 'lo', lo)
        object.__setattr__(self, 'hi', hi)

    def blocks(self, p0, p1):
        """Slab test for the segment p0 -> p1."""
        d = p1 - p0
        t0, t1 = 0.0, 1.0
        for i in range(3):
            if abs(d[i]) < 1e-15:
                if p0[i] < self.lo[i] or p0[i] > self.hi[i]:
                    return False
                continue
            ta = (self.lo[i] - p0[i])/d[i]
            tb = (self.hi[i] - p0[i])/d[i]
            if ta > tb:
                ta, tb = tb, ta
            t0 = max(t0, ta)
            t1 = min(t1, tb)
            if t0 > t1:
                return False
        return True


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    gnb_position: tuple
    boresight_azimuth: float = 0.0
    walls: tuple = ()
    blockers: tuple = ()
    max_reflection_order: int = 0
    bounds: tuple = None
    carrier_hz: float = DEFAULT_CARRIER_HZ

    def __post_init__(self):
        object.__setattr__(self, 'gnb_position',
                           _vec3(self.gnb_position, 'gnb_position'))
        object.__setattr__(self, 'walls', tuple(self.walls))
        object.__setattr__(self, 'blockers', tuple(self.blockers))
        order = self.max_reflection_order
        if int(order) != order or order < 0:
            raise ConfigError('max_reflection_order must be an integer >= 0, '
                              'got %r' % (order,))
        object.__setattr__(self, 'max_reflection_order', int(order))
        if not self.carrier_hz > 0:
            raise ConfigError('carrier_hz must be positive')
        if self.bounds is not None:
            lo, hi = self.bounds
            object.__setattr__(self, 'bounds',
                               (_vec3(lo, 'bounds lo'), _vec3(hi, 'bounds hi')))

    @property
    def wavelength_m(self):
        return SPEED_OF_LIGHT/self.carrier_hz

    def contains(self, p):
        if self.bounds is None:
            return True
        lo, hi = self.bounds
        return bool(np.all(p >= lo) and np.all(p <= hi))

    def with_order(self, order):
        """Same scene traced up to ``order`` reflections."""
        return Scenario(self.name, self.gnb_position, self.boresight_azimuth,
                        self.walls, self.blockers, order, self.bounds,
                        self.carrier_hz)


@dataclass(frozen=True)
class PathComponent:
    """
    One propagation path. ``azimuth_deg`` is the arrival angle in the plane
    containing the array axis and the arrival direction, measured from
    broadside. ``points`` holds the reflection points (gNB side first).
    """
    delay_s: float
    gain: complex
    azimuth_deg: float
    elevation_offset_m: float
    order: int
    is_los: bool
    points: np.ndarray = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not self.delay_s > 0:
            raise ConfigError('path delay must be positive, got %r'
                              % (self.delay_s,))
        if (self.order == 0) != bool(self.is_los):
            raise ConfigError('order 0 iff line of sight')

    @property
    def length_m(self):
        return self.delay_s*SPEED_OF_LIGHT


@dataclass(frozen=True, eq=False)
class ImpairmentModel:
    """
    Per-port phase offsets of the receive chain, fixed within a boot
    session. Port 0 is the reference.
    """
    port_phase_offsets: np.ndarray
    seed: int = None

    def __post_init__(self):
        offsets = np.asarray(self.port_phase_offsets, dtype=float)
        if offsets.ndim != 1 or offsets.size < 1:
            raise ConfigError('port_phase_offsets must be a vector')
        object.__setattr__(self, 'port_phase_offsets', offsets)

    @classmethod
    def draw(cls, num_ports, seed):
        """Redraw offsets uniformly in [-pi, pi) for a new session."""
        rng = rng_for(seed, IMPAIRMENT_STREAM)
        offsets = rng.uniform(-np.pi, np.pi, size=num_ports)
        offsets[0] = 0.0
        return cls(offsets, seed)

    @classmethod
    def none(cls, num_ports):
        return cls(np.zeros(num_ports), None)


@dataclass(frozen=True, eq=False)
class SnapshotMatrix:
    samples: np.ndarray
    snr_db: float
    truth: GroundTruth
    num_paths: int = 1

    @property
    def num_elements(self):
        return self.samples.shape[0]

    @property
    def num_samples(self):
        return self.samples.shape[1]


def _wall_sequences(num_walls, max_order):
    for order in range(1, max_order + 1):
        for seq in itertools.product(range(num_walls), repeat=order):
            if all(seq[i] != seq[i + 1] for i in range(order - 1)):
                yield seq


def _occluded(points, blockers):
    for p0, p1 in zip(points[:-1], points[1:]):
        for b in blockers:
            if b.blocks(p0, p1):
                return True
    return False


def _unfold(walls, seq, gnb, ue):
    """
    Reflection points of the wall sequence ``seq`` (UE side first) or None
    when the sequence has no valid specular path.
    """
    images = [ue]
    for w in seq:
        images.append(walls[w].reflect(images[-1]))
    points = [gnb]
    prev = gnb
    for j in range(len(seq) - 1, -1, -1):
        wall = walls[seq[j]]
        target = images[j + 1]
        s0 = wall.signed_distance(prev)
        s1 = wall.signed_distance(target)
        if s0 <= _EPS or s1 >= -_EPS:
            return None
        t = s0/(s0 - s1)
        p = prev + t*(target - prev)
        if not wall.contains(p):
            return None
        points.append(p)
        prev = p
    points.append(ue)
    return points


def trace_paths(scenario, ue_position):
    """
    Line-of-sight and specular paths between UE and gNB by the image
    method, up to ``scenario.max_reflection_order`` wall interactions.

    Gains follow free-space loss times the product of reflection
    coefficients, lambda/(4 pi L) * prod(gamma). An empty list means the UE
    has no link.

    :param scenario: Scenario.
    :param ue_position: UE position (3-vector).
    """
    gnb = scenario.gnb_position
    ue = _vec3(ue_position, 'ue_position')
    if np.linalg.norm(ue - gnb) < 1e-9:
        raise GeometryError('UE coincides with the gNB')
    if not scenario.contains(ue):
        raise ConfigError('UE position %s outside scenario %r bounds'
                          % (ue, scenario.name))

    _, axis = array_axes(scenario.boresight_azimuth)
    lam = scenario.wavelength_m
    dz = float(gnb[2] - ue[2])
    paths = []

    candidates = [()] + list(_wall_sequences(len(scenario.walls),
                                             scenario.max_reflection_order))
    for seq in candidates:
        points = _unfold(scenario.walls, seq, gnb, ue)
        if points is None or _occluded(points, scenario.blockers):
            continue
        length = float(sum(np.linalg.norm(b - a)
                           for a, b in zip(points[:-1], points[1:])))
        k = points[1] - gnb
        sin_theta = np.clip((k @ axis)/np.linalg.norm(k), -1.0, 1.0)
        gain = lam/(4*np.pi*length)
        for w in seq:
            gain = gain*scenario.walls[w].gamma
        paths.append(PathComponent(delay_s=length/SPEED_OF_LIGHT,
                                   gain=complex(gain),
                                   azimuth_deg=float(np.degrees(
                                       np.arcsin(sin_theta))),
                                   elevation_offset_m=dz,
                                   order=len(seq), is_los=len(seq) == 0,
                                   points=np.array(points[1:-1])))

    logger.debug('%s: %d paths to UE at (%.2f, %.2f, %.2f), los=%s',
                 scenario.name, len(paths), ue[0], ue[1], ue[2],
                 any(p.is_los for p in paths))
    return paths


def _truth_from_paths(paths, ula, ue_position):
    los = [p for p in paths if p.is_los]
    if ue_position is not None:
        truth = ground_truth_angles(ula.origin, ula.boresight_azimuth,
                                    ue_position)
        return dataclasses.replace(truth, is_nlos=not los)
    if not los:
        raise ConfigError('no LOS path: pass truth or ue_position to '
                          'locate the UE')
    p = los[0]
    ctx = GeometryContext(p.length_m, p.elevation_offset_m)
    return GroundTruth(theta_raw=p.azimuth_deg,
                       theta_xy=cylindrical_correction(p.azimuth_deg, ctx),
                       distance_m=p.length_m,
                       delta_z_m=p.elevation_offset_m)


def synthesize_snapshot(paths, ula, srs, snr_db, impairment, seed,
                        truth=None, repetition=0, ue_position=None):
    """
    Narrowband received samples at the array,

        x_m[n] = sum_p g_p e^{j m mu_p} e^{-j 2 pi f_c tau_p} s[n] e^{j dphi_m}
                 + w_m[n]

    with circular complex Gaussian noise w whose per-element variance sets
    the mean per-antenna signal power to ``snr_db`` above it. ``snr_db``
    of +inf disables noise.

    :param paths: List of PathComponent, non-empty.
    :param ula: UlaConfig.
    :param srs: Pilot sequence (complex vector of length N).
    :param snr_db: Target SNR in dB.
    :param impairment: ImpairmentModel with one offset per port.
    :param seed: Seed of the noise stream.
    :param truth: GroundTruth to attach. When None it is taken from the UE
        bearing if ``ue_position`` is given, else from the LOS path.
    :param repetition: Repetition index selecting an independent stream.
    :param ue_position: UE position (3-vector), needed for the truth of an
        NLOS path list.
    """
    if len(paths) == 0:
        raise LinkFailure('no propagation path: UE detached')
    M = ula.num_elements
    s = np.asarray(srs, dtype=complex).reshape(-1)
    offsets = np.asarray(impairment.port_phase_offsets, dtype=float)
    if offsets.size != M:
        raise ConfigError('impairment has %d ports, array has %d'
                          % (offsets.size, M))
    snr_db = float(snr_db)
    if np.isnan(snr_db):
        raise ConfigError('snr_db must be a number')

    m = np.arange(M)
    h = np.zeros(M, dtype=complex)
    for p in paths:
        mu = spatial_frequency(ula, p.azimuth_deg)
        # fractional number of carrier cycles keeps the phase accurate
        cycles = np.mod(p.delay_s*ula.carrier_hz, 1.0)
        h += p.gain*np.exp(1j*m*mu)*np.exp(-2j*np.pi*cycles)
    h = h*np.exp(1j*offsets)
    x = np.outer(h, s)

    if np.isfinite(snr_db):
        power = np.mean(np.sum(np.abs(x)**2, axis=1)/x.shape[1])
        sigma2 = power/10**(snr_db/10)
        rng = rng_for(seed, repetition, NOISE_STREAM)
        noise = (rng.standard_normal(x.shape) +
                 1j*rng.standard_normal(x.shape))
        x = x + np.sqrt(sigma2/2)*noise
    elif snr_db < 0:
        raise ConfigError('snr_db of -inf leaves no signal')

    if truth is None:
        truth = _truth_from_paths(paths, ula, ue_position)
    return SnapshotMatrix(samples=x, snr_db=snr_db, truth=truth,
                          num_paths=len(paths))


def export_cir(paths, out_dir, step, carrier_hz):
    """
    Write the path list of one trajectory step to ``cir_<step:05d>.csv``.

    The file starts with ``# carrier_hz=`` and ``# step=`` comment lines
    followed by a CSV table with columns CIR_COLUMNS, one row per path.

    :returns: Path of the written file.
    """
    os.makedirs(out_dir, exist_ok=True)
    fname = os.path.join(out_dir, 'cir_%05d.csv' % step)
    df = pd.DataFrame({
        'delay_s': [p.delay_s for p in paths],
        'gain_real': [p.gain.real for p in paths],
        'gain_imag': [p.gain.imag for p in paths],
        'azimuth_deg': [p.azimuth_deg for p in paths],
        'elevation_offset_m': [p.elevation_offset_m for p in paths],
        'order': [int(p.order) for p in paths],
        'is_los': [int(bool(p.is_los)) for p in paths],
    }, columns=CIR_COLUMNS)
    with open(fname, 'w', encoding='utf-8', newline='') as fh:
        fh.write('# carrier_hz=%r\n' % float(carrier_hz))
        fh.write('# step=%d\n' % int(step))
        df.to_csv(fh, index=False, float_format='%.17g', lineterminator='\n')
    return fname


def read_cir(path):
    """
    Read a file written by export_cir.

    :returns: (list of PathComponent, dict of header values)
    """
    with open(path, encoding='utf-8') as fh:
        lines = fh.read().splitlines()
    meta = {}
    skip = 0
    for lineno, line in enumerate(lines, start=1):
        if not line.startswith('#'):
            break
        skip = lineno
        key, sep, value = line[1:].partition('=')
        if not sep:
            raise ParseError('header line must read "# key=value"', path,
                             lineno)
        key = key.strip()
        try:
            meta[key] = int(value) if key == 'step' else float(value)
        except ValueError:
            raise ParseError('bad header value %r' % value.strip(), path,
                             lineno)

    try:
        df = pd.read_csv(io.StringIO('\n'.join(lines[skip:])), dtype=str,
                         keep_default_na=False)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        found = re.search(r'line (\d+)', str(exc))
        line = skip + int(found.group(1)) if found else None
        raise ParseError(str(exc).strip(), path, line)
    missing = [c for c in CIR_COLUMNS if c not in df.columns]
    if missing:
        raise ParseError('missing columns %s' % missing, path, skip + 1)

    paths = []
    for i, row in enumerate(df.itertuples(index=False)):
        lineno = skip + 2 + i
        rec = row._asdict()
        try:
            order = int(rec['order'])
            is_los = int(rec['is_los'])
            paths.append(PathComponent(
                delay_s=float(rec['delay_s']),
                gain=complex(float(rec['gain_real']),
                             float(rec['gain_imag'])),
                azimuth_deg=float(rec['azimuth_deg']),
                elevation_offset_m=float(rec['elevation_offset_m']),
                order=order, is_los=bool(is_los)))
        except (ValueError, ConfigError) as exc:
            raise ParseError(str(exc), path, lineno)
    return paths, meta
