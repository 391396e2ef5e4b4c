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


import os

import numpy as np


SPEED_OF_LIGHT = 299792458.0

# Numerical slack allowed on arcsine arguments before they count as invalid.
ARCSIN_SLACK = 1e-9

SEED_ENV = 'AOA_BENCH_SEED'


class AoaError(Exception):
    """Base class for every error raised by aoapy."""
    exit_code = 1


class ConfigError(AoaError, ValueError):
    exit_code = 2


class DomainError(ConfigError):
    pass


class GeometryError(ConfigError):
    pass


class ShapeError(ConfigError):
    pass


class InsufficientSamplesError(ShapeError):
    pass


class ParseError(AoaError):
    """Malformed input file. ``line`` is 1-based and counts the header."""
    exit_code = 3

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ''
        if path is not None:
            where = '%s' % path
        if line is not None:
            where = '%s:%d' % (where, line) if where else 'line %d' % line
        if where:
            message = '%s: %s' % (where, message)
        super(ParseError, self).__init__(message)


class EstimationRangeError(AoaError):
    pass


class SubspaceError(AoaError):
    pass


class LinkFailure(AoaError):
    pass


class CalibrationError(AoaError):
    def __init__(self, message, port=None):
        self.port = port
        super(CalibrationError, self).__init__(message)


class QualityGateError(AoaError):
    exit_code = 4


class RangeClampWarning(UserWarning):
    pass


def wrap_degrees(x):
    """
    Wrap an angle (or array of angles) into [-180, 180) degrees.

    :param x: Angle in degrees.
    """
    return (np.asarray(x, dtype=float) + 180.0) % 360.0 - 180.0


def wrap_phase(x):
    """
    Wrap a phase (or array of phases) into [-pi, pi) radians.

    :param x: Phase in radians.
    """
    return (np.asarray(x, dtype=float) + np.pi) % (2*np.pi) - np.pi


def circular_mean(phases, axis=None):
    """
    Phase of the mean unit phasor.

    :param phases: Phases in radians.
    :param axis: Axis to average over.
    """
    z = np.mean(np.exp(1j*np.asarray(phases, dtype=float)), axis=axis)
    return wrap_phase(np.angle(z))


def circular_std(phases, axis=None):
    """
    Circular standard deviation sqrt(-2 ln R), R the mean resultant length.

    :param phases: Phases in radians.
    :param axis: Axis to reduce over.
    """
    R = np.abs(np.mean(np.exp(1j*np.asarray(phases, dtype=float)), axis=axis))
    R = np.clip(R, np.finfo(float).tiny, 1.0)
    return np.sqrt(-2*np.log(R))


def derive_seed(base_seed, step_index):
    """Per-step seed, base_seed XOR step_index."""
    return int(base_seed) ^ int(step_index)


def rng_for(seed, *keys):
    """
    Independent generator for the stream named by ``keys`` under ``seed``.

    :param seed: Non-negative integer seed.
    :param keys: Further non-negative integers selecting the stream.
    """
    return np.random.default_rng([int(seed)] + [int(k) for k in keys])


def resolve_seed(seed=None, fallback=None):
    """Explicit seed, then ``fallback``, then $AOA_BENCH_SEED, then 0."""
    if seed is not None:
        return int(seed)
    if fallback is not None:
        return int(fallback)
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise ConfigError('%s must be an integer, got %r'
                              % (SEED_ENV, env))
    return 0
