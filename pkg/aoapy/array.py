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


from dataclasses import dataclass

import numpy as np

from .util import (SPEED_OF_LIGHT, ARCSIN_SLACK, ConfigError, DomainError,
                   EstimationRangeError)


DEFAULT_CARRIER_HZ = 3.95e9


@dataclass(frozen=True)
class UlaConfig:
    """
    Uniform linear array of isotropic elements in the horizontal plane.

    Element m sits at ``origin + m*spacing_m*axis`` where ``axis`` is the
    boresight direction rotated by +90 degrees. Positive angles point toward
    the positive array axis. ``spacing_m=None`` selects half a wavelength.
    """
    num_elements: int = 4
    spacing_m: float = None
    carrier_hz: float = DEFAULT_CARRIER_HZ
    origin: tuple = (0.0, 0.0, 0.0)
    boresight_azimuth: float = 0.0

    def __post_init__(self):
        if int(self.num_elements) != self.num_elements or self.num_elements < 2:
            raise ConfigError('num_elements must be an integer >= 2, got %r'
                              % (self.num_elements,))
        if not self.carrier_hz > 0:
            raise ConfigError('carrier_hz must be positive, got %r'
                              % (self.carrier_hz,))
        if self.spacing_m is None:
            object.__setattr__(self, 'spacing_m', self.wavelength_m/2)
        if not self.spacing_m > 0:
            raise ConfigError('spacing_m must be positive, got %r'
                              % (self.spacing_m,))
        origin = tuple(float(v) for v in self.origin)
        if len(origin) != 3:
            raise ConfigError('origin must be a 3-vector')
        object.__setattr__(self, 'num_elements', int(self.num_elements))
        object.__setattr__(self, 'origin', origin)

    @property
    def wavelength_m(self):
        return SPEED_OF_LIGHT/self.carrier_hz

    @property
    def height_m(self):
        return self.origin[2]


def array_axes(boresight_azimuth):
    """
    Unit vectors of the boresight and of the array axis in the XY plane.

    :param boresight_azimuth: Boresight azimuth in degrees, counterclockwise
        from +x.
    """
    phi = np.radians(boresight_azimuth)
    boresight = np.array([np.cos(phi), np.sin(phi), 0.0])
    axis = np.array([-np.sin(phi), np.cos(phi), 0.0])
    return boresight, axis


def element_positions(cfg):
    """M x 3 element coordinates in meters."""
    _, axis = array_axes(cfg.boresight_azimuth)
    m = np.arange(cfg.num_elements)[:, None]
    return np.asarray(cfg.origin)[None, :] + m*cfg.spacing_m*axis[None, :]


def _check_angle(theta_deg):
    theta = np.asarray(theta_deg, dtype=float)
    if np.any(~np.isfinite(theta)) or np.any(np.abs(theta) > 90):
        raise DomainError('angle must lie in [-90, 90] degrees, got %r'
                          % (theta_deg,))
    return theta


def spatial_frequency(cfg, theta_deg):
    """
    Per-element phase increment of a plane wave arriving from theta.

    mu = -(2 pi / lambda) * spacing * sin(theta)

    :param cfg: UlaConfig.
    :param theta_deg: Angle of arrival in degrees, scalar or array.
    """
    theta = _check_angle(theta_deg)
    mu = -2*np.pi/cfg.wavelength_m*cfg.spacing_m*np.sin(np.radians(theta))
    if mu.ndim == 0:
        return float(mu)
    return mu


def steering_vector(cfg, theta_deg):
    """
    Steering vector [1, e^{j mu}, ..., e^{j(M-1) mu}].

    :param cfg: UlaConfig.
    :param theta_deg: Angle of arrival in degrees.
    """
    mu = spatial_frequency(cfg, float(theta_deg))
    return np.exp(1j*np.arange(cfg.num_elements)*mu)


def steering_matrix(cfg, thetas_deg):
    """M x G matrix whose columns are the steering vectors of ``thetas_deg``."""
    mu = np.atleast_1d(spatial_frequency(cfg, thetas_deg))
    return np.exp(1j*np.outer(np.arange(cfg.num_elements), mu))


def angle_from_spatial_frequency(cfg, mu, k=1):
    """
    Invert the spatial frequency measured between subarrays shifted by k
    elements, theta = arcsin(-lambda*mu / (2 pi k spacing)).

    Arguments past unity by more than ARCSIN_SLACK indicate aliasing and
    raise EstimationRangeError; smaller excursions are clamped.

    :param cfg: UlaConfig.
    :param mu: Per-element phase increment in radians.
    :param k: Subarray shift in elements.
    """
    if int(k) != k or k < 1:
        raise ConfigError('shift k must be a positive integer, got %r' % (k,))
    arg = -cfg.wavelength_m*mu/(2*np.pi*k*cfg.spacing_m)
    if not np.isfinite(arg) or abs(arg) > 1 + ARCSIN_SLACK:
        raise EstimationRangeError('arcsine argument %.12g out of range '
                                   '(spatial aliasing?)' % arg)
    return float(np.degrees(np.arcsin(np.clip(arg, -1.0, 1.0))))
