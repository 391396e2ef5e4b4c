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
import logging
import warnings
from dataclasses import dataclass

import numpy as np

from .array import array_axes
from .util import ARCSIN_SLACK, GeometryError, RangeClampWarning


logger = logging.getLogger(__name__)

UE_HEIGHT_M = 1.5


@dataclass(frozen=True)
class GeometryContext:
    """
    Range and height offset used to project a raw angle onto the XY plane.

    :param distance_m: 3-D distance d between array and UE.
    :param delta_z_m: Array height minus UE height.
    """
    distance_m: float
    delta_z_m: float

    def __post_init__(self):
        d = float(self.distance_m)
        dz = float(self.delta_z_m)
        if not np.isfinite(d) or not np.isfinite(dz):
            raise GeometryError('non-finite geometry (d=%r, dz=%r)' % (d, dz))
        if not d > 0 or not d > abs(dz):
            raise GeometryError('need d > 0 and d > |dz|, got d=%g, dz=%g'
                                % (d, dz))


@dataclass(frozen=True)
class GroundTruth:
    theta_raw: float
    theta_xy: float
    distance_m: float
    delta_z_m: float
    is_nlos: bool = False


def _project(theta_deg, ctx):
    """(theta_xy, note) where note describes a clamp, or is None."""
    d = float(ctx.distance_m)
    dz = float(ctx.delta_z_m)
    arg = d*np.sin(np.radians(theta_deg))/np.sqrt(d**2 - dz**2)
    note = None
    if abs(arg) > 1 + ARCSIN_SLACK:
        note = ('cylindrical correction argument %.6f clamped to %+d '
                '(theta=%.4f deg, d=%.3f m, dz=%.3f m)'
                % (arg, np.sign(arg), theta_deg, d, dz))
    return float(np.degrees(np.arcsin(np.clip(arg, -1.0, 1.0)))), note


def cylindrical_correction(theta_deg, ctx):
    """
    Map the angle measured in the plane containing the array and the UE
    onto the top-view azimuth,

        theta_xy = arcsin(d sin(theta) / sqrt(d^2 - dz^2))

    Arguments beyond unity are clamped; a RangeClampWarning is issued when
    the excess is larger than numerical noise.

    :param theta_deg: Raw angle in degrees.
    :param ctx: GeometryContext.
    """
    theta_xy, note = _project(theta_deg, ctx)
    if note is not None:
        warnings.warn(note, RangeClampWarning, stacklevel=2)
    return theta_xy


def correct_estimate(estimate, ctx):
    """
    Return a copy of ``estimate`` with ``theta_xy_deg`` filled in. A clamp
    is noted in ``estimate.warnings`` instead of being warned about.
    Thread-safe.
    """
    theta_xy, note = _project(estimate.theta_deg, ctx)
    notes = tuple(estimate.warnings)
    if note is not None:
        logger.debug(note)
        notes += (note,)
    return dataclasses.replace(estimate, theta_xy_deg=theta_xy,
                               warnings=notes)


def ground_truth_angles(gnb, boresight_azimuth, ue):
    """
    Raw and top-view angles of the UE seen from the array.

    The top-view angle is the signed XY-plane azimuth from boresight, folded
    into [-90, 90] since a linear array cannot tell front from back. The raw
    angle is the angle between the UE direction and the array broadside
    plane, so that cylindrical_correction(theta_raw) == theta_xy.

    :param gnb: Array reference position (3-vector).
    :param boresight_azimuth: Boresight azimuth in degrees.
    :param ue: UE position (3-vector).
    """
    gnb = np.asarray(gnb, dtype=float)
    ue = np.asarray(ue, dtype=float)
    v = ue - gnb
    d = float(np.linalg.norm(v))
    if d == 0:
        raise GeometryError('UE coincides with the array at %s' % (ue,))
    boresight, axis = array_axes(boresight_azimuth)
    va = float(v @ axis)
    vb = float(v @ boresight)
    h = np.hypot(va, vb)
    if h == 0:
        raise GeometryError('UE directly above or below the array, '
                            'azimuth undefined')
    theta_xy = float(np.degrees(np.arcsin(np.clip(va/h, -1.0, 1.0))))
    theta_raw = float(np.degrees(np.arcsin(np.clip(va/d, -1.0, 1.0))))
    return GroundTruth(theta_raw=theta_raw, theta_xy=theta_xy,
                       distance_m=d, delta_z_m=float(gnb[2] - ue[2]))


def perturb_distance(distance_m, delta_z_m, sigma_m, rng):
    """
    Add Gaussian ranging error to a true distance. The result is kept just
    above |dz| so it remains usable for the correction.

    :param distance_m: True distance.
    :param delta_z_m: Height offset.
    :param sigma_m: Ranging error standard deviation, 0 disables.
    :param rng: numpy Generator.
    """
    if not sigma_m:
        return float(distance_m)
    d = distance_m + sigma_m*rng.standard_normal()
    return float(max(d, abs(delta_z_m) + 1e-6))
