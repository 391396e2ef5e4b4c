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


import json
import logging
import os

import numpy as np

from .array import UlaConfig
from .channel import DEFAULT_GAMMA, Blocker, Scenario, Wall
from .util import ConfigError, ParseError


logger = logging.getLogger(__name__)

GNB_POSITION = (0.0, 0.0, 10.0)
CANYON_HALF_WIDTH_M = 30.0
CANYON_HEIGHT_M = 40.0
SCENE_BOUNDS = ((-50.0, -CANYON_HALF_WIDTH_M, 0.0),
                (600.0, CANYON_HALF_WIDTH_M, CANYON_HEIGHT_M))

# Drive through the canyon, passing a parked bus at x ~ 145 m.
DEFAULT_ROUTE = ((5.0, -8.0, 1.5), (480.0, 12.0, 1.5))
DEFAULT_NUM_STEPS = 901


def canyon_walls(gamma=DEFAULT_GAMMA):
    """Two parallel building fronts at y = -30 m and y = +30 m."""
    lo, hi = SCENE_BOUNDS
    extent = ((lo[0], -np.inf, 0.0), (hi[0], np.inf, CANYON_HEIGHT_M))
    return (Wall(anchor=(0.0, -CANYON_HALF_WIDTH_M, 0.0), normal=(0, 1, 0),
                 gamma=gamma, extent=extent),
            Wall(anchor=(0.0, CANYON_HALF_WIDTH_M, 0.0), normal=(0, -1, 0),
                 gamma=gamma, extent=extent))


def parked_bus():
    return Blocker(lo=(140.0, -1.9, 0.0), hi=(148.0, -0.9, 6.0))


def freespace():
    return Scenario('freespace', GNB_POSITION, 0.0, (), (), 0, SCENE_BOUNDS)


def canyon(order):
    return Scenario('canyon_o%d' % order, GNB_POSITION, 0.0, canyon_walls(),
                    (parked_bus(),), order, SCENE_BOUNDS)


PRESETS = {
    'freespace': freespace,
    'canyon_o3': lambda: canyon(3),
    'canyon_o5': lambda: canyon(5),
}


def _gamma_from(value):
    if isinstance(value, dict):
        return value['abs']*np.exp(1j*np.radians(value['phase_deg']))
    re, im = value
    return complex(re, im)


def _box(value):
    return (value['lo'], value['hi'])


def _extent(value):
    if value is None:
        return None
    lo, hi = _box(value)
    lo = [-np.inf if v is None else float(v) for v in lo]
    hi = [np.inf if v is None else float(v) for v in hi]
    return (lo, hi)


def _num(v):
    v = float(v)
    return None if not np.isfinite(v) else v


def scenario_from_dict(data):
    """
    Build a Scenario from its JSON representation::

        {"name": "...", "gnb_position": [x, y, z], "boresight_azimuth": 0,
         "max_reflection_order": 3, "carrier_hz": 3.95e9,
         "bounds": {"lo": [...], "hi": [...]},
         "walls": [{"anchor": [...], "normal": [...], "gamma": [re, im],
                    "extent": {"lo": [...], "hi": [...]}}],
         "blockers": [{"lo": [...], "hi": [...]}]}

    ``gamma`` may also be given as {"abs": 0.6, "phase_deg": 180}. Extent
    coordinates of null mean unbounded.
    """
    try:
        walls = []
        for w in data.get('walls', []):
            extent = _extent(w.get('extent'))
            walls.append(Wall(anchor=w['anchor'], normal=w['normal'],
                              gamma=_gamma_from(w.get('gamma',
                                                      [DEFAULT_GAMMA.real,
                                                       DEFAULT_GAMMA.imag])),
                              extent=extent))
        blockers = [Blocker(*_box(b)) for b in data.get('blockers', [])]
        bounds = data.get('bounds')
        return Scenario(name=data.get('name', 'custom'),
                        gnb_position=data['gnb_position'],
                        boresight_azimuth=float(
                            data.get('boresight_azimuth', 0.0)),
                        walls=walls, blockers=blockers,
                        max_reflection_order=data.get('max_reflection_order',
                                                      0),
                        bounds=None if bounds is None else _box(bounds),
                        carrier_hz=float(data.get('carrier_hz', 3.95e9)))
    except ConfigError:
        raise
    except KeyError as exc:
        raise ConfigError('scenario is missing field %s' % exc)
    except (TypeError, ValueError) as exc:
        raise ConfigError('invalid scenario: %s' % exc)


def scenario_to_dict(scenario):
    def box(b):
        lo, hi = b
        return {'lo': [_num(v) for v in lo], 'hi': [_num(v) for v in hi]}

    return {
        'name': scenario.name,
        'gnb_position': [float(v) for v in scenario.gnb_position],
        'boresight_azimuth': float(scenario.boresight_azimuth),
        'max_reflection_order': int(scenario.max_reflection_order),
        'carrier_hz': float(scenario.carrier_hz),
        'bounds': None if scenario.bounds is None else box(scenario.bounds),
        'walls': [{'anchor': [float(v) for v in w.anchor],
                   'normal': [float(v) for v in w.normal],
                   'gamma': [w.gamma.real, w.gamma.imag],
                   'extent': None if w.extent is None else box(w.extent)}
                  for w in scenario.walls],
        'blockers': [box((b.lo, b.hi)) for b in scenario.blockers],
    }


def load_scenario(name_or_path):
    """
    Return a preset by name or parse a scenario JSON file.

    :param name_or_path: One of PRESETS or a path to a JSON file.
    """
    if isinstance(name_or_path, Scenario):
        return name_or_path
    if name_or_path in PRESETS:
        return PRESETS[name_or_path]()
    if not os.path.exists(name_or_path):
        raise ConfigError('unknown scenario %r (presets: %s)'
                          % (name_or_path, ', '.join(sorted(PRESETS))))
    with open(name_or_path, encoding='utf-8') as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, name_or_path, exc.lineno)
    logger.debug('loaded scenario %s from %s', data.get('name'), name_or_path)
    return scenario_from_dict(data)


def ula_for(scenario, **overrides):
    """UlaConfig placed at the scenario's gNB with its boresight and carrier."""
    kwargs = dict(origin=tuple(scenario.gnb_position),
                  boresight_azimuth=scenario.boresight_azimuth,
                  carrier_hz=scenario.carrier_hz)
    kwargs.update(overrides)
    return UlaConfig(**kwargs)
