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
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from tqdm import tqdm

from .calibration import apply_correction
from .channel import (ImpairmentModel, RANGING_STREAM, synthesize_snapshot,
                      trace_paths)
from .estimators import (DEFAULT_GRID_STEP_DEG, METHODS, esprit_estimate,
                         hermitian_eig, music_estimate, music_spectrum,
                         sample_covariance)
from .geometry import (GeometryContext, correct_estimate, ground_truth_angles,
                       perturb_distance)
from .scenarios import (DEFAULT_NUM_STEPS, DEFAULT_ROUTE, load_scenario,
                        scenario_from_dict, scenario_to_dict, ula_for)
from .srs import SrsConfig, srs_sequence
from .util import (ConfigError, ParseError, ShapeError, derive_seed,
                   resolve_seed, rng_for, wrap_degrees)


logger = logging.getLogger(__name__)

REFLECTION_ORDERS = (0, 3, 5)
DEFAULT_DT_S = 0.1
SNR_BIN_WIDTH_DB = 10
HIGH_SNR_DB = 30

RECORD_COLUMNS = ['step', 'repetition', 'method', 'order', 'snr_db',
                  'theta_hat', 'theta_xy_hat', 'theta_true', 'theta_xy_true',
                  'error_deg', 'pre_error_deg', 'is_nlos', 'detached',
                  'num_paths', 'range_clamped']


# Trajectories

@dataclass(frozen=True)
class TrajectoryStep:
    index: int
    position: tuple


@dataclass(frozen=True, eq=False)
class Trajectory:
    steps: tuple
    dt_s: float = DEFAULT_DT_S

    def __post_init__(self):
        steps = tuple(self.steps)
        for prev, cur in zip(steps[:-1], steps[1:]):
            if cur.index <= prev.index:
                raise ConfigError('trajectory indices must increase strictly '
                                  '(k=%d after k=%d)' % (cur.index, prev.index))
        object.__setattr__(self, 'steps', steps)

    def __len__(self):
        return len(self.steps)


def straight_line_trajectory(start, end, num_steps=DEFAULT_NUM_STEPS,
                             dt_s=DEFAULT_DT_S):
    """Constant-speed path from ``start`` to ``end``, k = 0 .. num_steps-1."""
    pts = np.linspace(np.asarray(start, dtype=float),
                      np.asarray(end, dtype=float), int(num_steps))
    return Trajectory(tuple(TrajectoryStep(k, tuple(float(v) for v in p))
                            for k, p in enumerate(pts)), dt_s)


def default_trajectory():
    """The canyon drive of the scenario presets, 901 steps at 0.1 s."""
    return straight_line_trajectory(DEFAULT_ROUTE[0], DEFAULT_ROUTE[1],
                                    DEFAULT_NUM_STEPS)


def load_trajectory(path, dt_s=DEFAULT_DT_S):
    """
    Read a trajectory CSV with header ``k,x,y,z`` (meters).

    Line numbers in ParseError count the header as line 1.

    :param path: CSV file.
    :param dt_s: Time between steps.
    """
    try:
        df = pd.read_csv(path, dtype=str, keep_default_na=False,
                         skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise ParseError('empty trajectory file', path, 1)
    except pd.errors.ParserError as exc:
        raise ParseError(str(exc).strip(), path)
    df.columns = [str(c).strip() for c in df.columns]
    missing = [c for c in ('k', 'x', 'y', 'z') if c not in df.columns]
    if missing:
        raise ParseError('missing columns %s' % ', '.join(missing), path, 1)

    steps = []
    for i, (k, x, y, z) in enumerate(zip(df['k'], df['x'], df['y'], df['z'])):
        line = i + 2
        try:
            kf = float(k)
            pos = (float(x), float(y), float(z))
        except ValueError:
            raise ParseError('non-numeric value in row %r'
                             % ([k, x, y, z],), path, line)
        if not kf.is_integer() or not all(np.isfinite(pos)):
            raise ParseError('bad step index or position', path, line)
        if steps and int(kf) <= steps[-1].index:
            raise ParseError('step index k=%d does not increase (previous '
                             'k=%d)' % (kf, steps[-1].index), path, line)
        steps.append(TrajectoryStep(int(kf), pos))
    if not steps:
        raise ParseError('trajectory has no steps', path, 2)
    logger.debug('loaded %d trajectory steps from %s', len(steps), path)
    return Trajectory(tuple(steps), dt_s)


def save_trajectory(traj, path):
    df = pd.DataFrame([(s.index,) + tuple(s.position) for s in traj.steps],
                      columns=['k', 'x', 'y', 'z'])
    df.to_csv(path, index=False, float_format='%.10g', lineterminator='\n')


# Configuration

@dataclass(frozen=True)
class SnrPolicy:
    """
    SNR assigned to every snapshot of a campaign.

    ``fixed`` uses ``snr_db``; ``distance`` follows
    snr_ref_db - 20 log10(d / d_ref_m); ``noiseless`` disables noise.
    """
    kind: str = 'distance'
    snr_db: float = None
    snr_ref_db: float = 35.0
    d_ref_m: float = 10.0

    def __post_init__(self):
        if self.kind not in ('fixed', 'distance', 'noiseless'):
            raise ConfigError('snr_policy.kind must be fixed, distance or '
                              'noiseless, got %r' % (self.kind,))
        if self.kind == 'fixed' and (self.snr_db is None or
                                     np.isnan(float(self.snr_db))):
            raise ConfigError('snr_policy.snr_db is required for a fixed '
                              'policy')
        if not self.d_ref_m > 0:
            raise ConfigError('snr_policy.d_ref_m must be positive')

    def snr_for(self, distance_m):
        if self.kind == 'noiseless':
            return math.inf
        if self.kind == 'fixed':
            return float(self.snr_db)
        return float(self.snr_ref_db - 20*np.log10(distance_m/self.d_ref_m))

    @classmethod
    def parse(cls, value):
        """Accept a dict, a number (fixed), 'distance' or 'noiseless'/'inf'."""
        if isinstance(value, SnrPolicy):
            return value
        if isinstance(value, dict):
            try:
                return cls(**value)
            except TypeError as exc:
                raise ConfigError('snr_policy: %s' % exc)
        if isinstance(value, str):
            if value in ('noiseless', 'inf', '+inf'):
                return cls('noiseless')
            if value == 'distance':
                return cls('distance')
            try:
                value = float(value)
            except ValueError:
                raise ConfigError('snr_policy: cannot parse %r' % value)
        if math.isinf(value) and value > 0:
            return cls('noiseless')
        return cls('fixed', float(value))

    def to_dict(self):
        return dataclasses.asdict(self)


@dataclass(frozen=True, eq=False)
class CampaignConfig:
    """
    Everything a campaign run depends on besides trajectory and calibration.

    ``session_seed`` selects the boot session that draws the port phase
    offsets; when None the calibration table's session is used, then
    ``base_seed``. A missing ``base_seed`` falls back to $AOA_BENCH_SEED,
    then 0.
    """
    scenario: object = 'canyon_o5'
    reflection_orders: tuple = (0, 3, 5)
    snr_policy: SnrPolicy = field(default_factory=SnrPolicy)
    methods: tuple = METHODS
    base_seed: int = None
    num_repetitions: int = 1
    grid_step_deg: float = DEFAULT_GRID_STEP_DEG
    ranging_sigma_m: float = 0.0
    session_seed: int = None
    impairments: bool = True
    num_elements: int = 4
    threads: int = 1
    srs: SrsConfig = field(default_factory=SrsConfig)

    def __post_init__(self):
        object.__setattr__(self, 'scenario', load_scenario(self.scenario))
        if self.base_seed is None:
            object.__setattr__(self, 'base_seed', resolve_seed())
        orders = tuple(self.reflection_orders)
        if not orders:
            raise ConfigError('reflection_orders must not be empty')
        bad = [o for o in orders if o not in REFLECTION_ORDERS]
        if bad:
            raise ConfigError('reflection_orders: %s not in %s'
                              % (bad, list(REFLECTION_ORDERS)))
        if len(set(orders)) != len(orders):
            raise ConfigError('reflection_orders contains duplicates')
        object.__setattr__(self, 'reflection_orders', orders)
        object.__setattr__(self, 'snr_policy',
                           SnrPolicy.parse(self.snr_policy))
        methods = tuple(str(m).upper() for m in self.methods)
        if not methods or any(m not in METHODS for m in methods):
            raise ConfigError('methods must be a non-empty subset of %s, got '
                              '%r' % (list(METHODS), list(self.methods)))
        object.__setattr__(self, 'methods', methods)
        for name in ('base_seed', 'num_repetitions', 'threads',
                     'num_elements'):
            v = getattr(self, name)
            if isinstance(v, bool) or int(v) != v:
                raise ConfigError('%s must be an integer, got %r' % (name, v))
        if self.base_seed < 0:
            raise ConfigError('base_seed must be >= 0')
        if self.session_seed is not None and self.session_seed < 0:
            raise ConfigError('session_seed must be >= 0')
        if self.num_repetitions < 1:
            raise ConfigError('num_repetitions must be >= 1')
        if self.threads < 1:
            raise ConfigError('threads must be >= 1')
        if self.num_elements < 2:
            raise ConfigError('num_elements must be >= 2')
        if not self.grid_step_deg > 0:
            raise ConfigError('grid_step_deg must be positive')
        if not self.ranging_sigma_m >= 0:
            raise ConfigError('ranging_sigma_m must be >= 0')
        if isinstance(self.srs, dict):
            object.__setattr__(self, 'srs', SrsConfig(**self.srs))

    @classmethod
    def from_dict(cls, data, base_dir=None):
        """
        Build from a JSON object. A relative scenario file path is resolved
        against ``base_dir``.
        """
        if not isinstance(data, dict):
            raise ConfigError('campaign config must be a JSON object')
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - names)
        if unknown:
            raise ConfigError('unknown campaign fields: %s'
                              % ', '.join(unknown))
        data = dict(data)
        scen = data.get('scenario')
        if isinstance(scen, dict):
            data['scenario'] = scenario_from_dict(scen)
        elif isinstance(scen, str) and base_dir is not None \
                and not os.path.isabs(scen):
            candidate = os.path.join(base_dir, scen)
            if os.path.exists(candidate):
                data['scenario'] = candidate
        try:
            return cls(**data)
        except TypeError as exc:
            raise ConfigError('campaign config: %s' % exc)

    @classmethod
    def from_json(cls, path):
        with open(path, encoding='utf-8') as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ParseError(exc.msg, path, exc.lineno)
        return cls.from_dict(data, os.path.dirname(os.path.abspath(path)))

    def to_dict(self):
        return {
            'scenario': scenario_to_dict(self.scenario),
            'reflection_orders': list(self.reflection_orders),
            'snr_policy': self.snr_policy.to_dict(),
            'methods': list(self.methods),
            'base_seed': int(self.base_seed),
            'num_repetitions': int(self.num_repetitions),
            'grid_step_deg': float(self.grid_step_deg),
            'ranging_sigma_m': float(self.ranging_sigma_m),
            'session_seed': self.session_seed,
            'impairments': bool(self.impairments),
            'num_elements': int(self.num_elements),
            'threads': int(self.threads),
            'srs': dataclasses.asdict(self.srs),
        }


# Campaign

@dataclass(frozen=True)
class EvalRecord:
    """
    One scored estimate. ``error_deg`` is theta_xy_hat - theta_xy_true.
    ``pre_error_deg`` is theta_hat - theta_xy_true, i.e. the raw estimate
    scored against the same top-view truth, which is what a system without
    the cylindrical correction would report. Angles are NaN on detached
    records.
    """
    step: int
    repetition: int
    method: str
    order: int
    snr_db: float
    theta_hat: float = math.nan
    theta_xy_hat: float = math.nan
    theta_true: float = math.nan
    theta_xy_true: float = math.nan
    error_deg: float = math.nan
    pre_error_deg: float = math.nan
    is_nlos: bool = False
    detached: bool = False
    num_paths: int = 0
    range_clamped: bool = False


def _session_seed(cfg, calib):
    if cfg.session_seed is not None:
        return cfg.session_seed
    if calib is not None and calib.session_seed is not None:
        return calib.session_seed
    return cfg.base_seed


def _estimate(method, decomp, ula, grid_step_deg):
    if method == 'MUSIC':
        return music_estimate(music_spectrum(decomp, ula, grid_step_deg))
    return esprit_estimate(decomp, ula)


def _run_task(task, cfg, scenes, ula, srs, impairment, calib):
    step, rep = task
    scenario = cfg.scenario
    pos = np.asarray(step.position, dtype=float)
    truth = ground_truth_angles(scenario.gnb_position,
                                scenario.boresight_azimuth, pos)
    seed = derive_seed(cfg.base_seed, step.index)
    d_hat = perturb_distance(truth.distance_m, truth.delta_z_m,
                             cfg.ranging_sigma_m,
                             rng_for(seed, rep, RANGING_STREAM))
    ctx = GeometryContext(d_hat, truth.delta_z_m)
    snr = cfg.snr_policy.snr_for(truth.distance_m)

    records = []
    for order in cfg.reflection_orders:
        paths = trace_paths(scenes[order], pos)
        if not paths:
            logger.debug('step %d order %d: UE detached', step.index, order)
            records.extend(EvalRecord(step.index, rep, m, order, snr,
                                      is_nlos=True, detached=True)
                           for m in cfg.methods)
            continue
        is_nlos = not any(p.is_los for p in paths)
        snap = synthesize_snapshot(paths, ula, srs, snr, impairment, seed,
                                   truth=dataclasses.replace(
                                       truth, is_nlos=is_nlos),
                                   repetition=rep)
        if calib is not None:
            snap = apply_correction(snap, calib)
        decomp = hermitian_eig(sample_covariance(snap))
        for method in cfg.methods:
            est = correct_estimate(
                _estimate(method, decomp, ula, cfg.grid_step_deg), ctx)
            records.append(EvalRecord(
                step=step.index, repetition=rep, method=method, order=order,
                snr_db=snr, theta_hat=est.theta_deg,
                theta_xy_hat=est.theta_xy_deg, theta_true=truth.theta_raw,
                theta_xy_true=truth.theta_xy,
                error_deg=float(wrap_degrees(est.theta_xy_deg -
                                             truth.theta_xy)),
                pre_error_deg=float(wrap_degrees(est.theta_deg -
                                                 truth.theta_xy)),
                is_nlos=is_nlos, detached=False, num_paths=len(paths),
                range_clamped=bool(est.warnings)))
    return records


def run_campaign(cfg, traj, calib=None, progress=False):
    """
    Run the full pipeline for every trajectory step, repetition, reflection
    order and method: trace, synthesize, calibrate, estimate, correct and
    score against the top-view truth.

    Every (step, repetition) pair draws its noise from seed
    base_seed XOR k, so results do not depend on execution order or on the
    number of threads. All orders of a step share that noise.

    :param cfg: CampaignConfig.
    :param traj: Trajectory.
    :param calib: CalibrationTable, or None for an uncalibrated run.
    :param progress: Show a tqdm progress bar.
    :returns: List of EvalRecord ordered by step, repetition, order, method.
    """
    scenario = cfg.scenario
    for s in traj.steps:
        if not scenario.contains(np.asarray(s.position, dtype=float)):
            raise ConfigError('trajectory step k=%d at %s lies outside '
                              'scenario %r' % (s.index, s.position,
                                               scenario.name))
    ula = ula_for(scenario, num_elements=cfg.num_elements)
    srs = srs_sequence(cfg.srs)
    if cfg.impairments:
        impairment = ImpairmentModel.draw(ula.num_elements,
                                          _session_seed(cfg, calib))
    else:
        impairment = ImpairmentModel.none(ula.num_elements)
    if calib is None:
        logger.warning('running without phase calibration')
    elif calib.num_ports != ula.num_elements:
        raise ShapeError('calibration table has %d ports, array has %d'
                         % (calib.num_ports, ula.num_elements))
    scenes = {o: scenario.with_order(o) for o in cfg.reflection_orders}

    tasks = [(s, r) for s in traj.steps for r in range(cfg.num_repetitions)]
    logger.info('campaign on %s: %d steps x %d repetitions, orders %s, '
                'methods %s', scenario.name, len(traj),
                cfg.num_repetitions, list(cfg.reflection_orders),
                list(cfg.methods))

    def work(task):
        return _run_task(task, cfg, scenes, ula, srs, impairment, calib)

    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            results = list(tqdm(pool.map(work, tasks), total=len(tasks),
                                disable=not progress, desc='campaign'))
    else:
        results = [work(t) for t in tqdm(tasks, disable=not progress,
                                         desc='campaign')]
    records = [rec for chunk in results for rec in chunk]
    detached = sum(r.detached for r in records)
    logger.info('campaign done: %d records, %d detached', len(records),
                detached)
    return records


# Statistics

def ecdf(errors):
    """
    Empirical CDF as (value, fraction) pairs, one per distinct value.

    :param errors: Non-empty sequence of reals.
    """
    x = np.sort(np.asarray(errors, dtype=float).reshape(-1))
    if x.size == 0:
        raise ConfigError('ecdf of an empty sample')
    values = np.unique(x)
    frac = np.searchsorted(x, values, side='right')/x.size
    return [(float(v), float(f)) for v, f in zip(values, frac)]


def quantile(errors, q):
    """Smallest value whose ECDF fraction reaches q."""
    x = np.asarray(errors, dtype=float)
    if x.size == 0:
        raise ConfigError('quantile of an empty sample')
    return float(np.quantile(x, q, method='inverted_cdf'))


def snr_bin(snr_db, width=SNR_BIN_WIDTH_DB):
    """Label of the SNR bin, e.g. '0-10', '20-30' or '>30'."""
    if snr_db >= HIGH_SNR_DB:
        return '>%d' % HIGH_SNR_DB
    lo = int(math.floor(snr_db/width))*width
    return '%d-%d' % (lo, lo + width)


def _stats(recs):
    err = np.array([r.error_deg for r in recs if not r.detached])
    pre = np.array([r.pre_error_deg for r in recs if not r.detached])
    out = {'count': int(err.size),
           'detach_count': int(sum(r.detached for r in recs)),
           'nlos_count': int(sum(r.is_nlos for r in recs if not r.detached))}
    if err.size == 0:
        out.update(rmse=None, p50=None, p95=None, ecdf=[], pre_rmse=None,
                   pre_p50=None, pre_p95=None)
        return out
    out.update(rmse=float(np.sqrt(np.mean(err**2))),
               p50=quantile(np.abs(err), 0.5),
               p95=quantile(np.abs(err), 0.95),
               ecdf=[list(p) for p in ecdf(np.abs(err))],
               pre_rmse=float(np.sqrt(np.mean(pre**2))),
               pre_p50=quantile(np.abs(pre), 0.5),
               pre_p95=quantile(np.abs(pre), 0.95))
    return out


@dataclass(frozen=True, eq=False)
class EvalReport:
    """
    ``cells[method][order][bin]`` holds count, rmse, p50, p95 and the ECDF
    of |error| plus the pre-correction counterparts. Bin ``all`` pools
    every SNR.
    """
    cells: dict
    nlos_fraction: float
    detach_count: int
    total_records: int
    order_share: dict
    bin_width: float = SNR_BIN_WIDTH_DB

    def cell(self, method, order, bin_label='all'):
        return self.cells[method][str(order)][bin_label]

    def to_dict(self):
        out = dict(self.cells)
        out.update(nlos_fraction=self.nlos_fraction,
                   detach_count=self.detach_count,
                   total_records=self.total_records,
                   order_share=self.order_share,
                   snr_bin_width_db=self.bin_width)
        return out

    def to_json(self, path):
        with open(path, 'w', encoding='utf-8') as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True)
            fh.write('\n')


def aggregate(records, bin_width=SNR_BIN_WIDTH_DB):
    """
    Reduce records to per (method, order, SNR bin) error statistics.

    :param records: Non-empty list of EvalRecord.
    :param bin_width: SNR bin width in dB.
    """
    if not records:
        raise ConfigError('no records to aggregate')
    if not bin_width > 0:
        raise ConfigError('SNR bin width must be positive, got %r'
                          % (bin_width,))
    recs = sorted(records, key=lambda r: (r.method, r.order, r.step,
                                          r.repetition))
    groups = {}
    for r in recs:
        cell = groups.setdefault(r.method, {}).setdefault(str(r.order), {})
        cell.setdefault('all', []).append(r)
        cell.setdefault(snr_bin(r.snr_db, bin_width), []).append(r)
    cells = {m: {o: {b: _stats(rs) for b, rs in sorted(bins.items())}
                 for o, bins in orders.items()}
             for m, orders in groups.items()}

    scored = [r for r in recs if not r.detached]
    nlos = sum(r.is_nlos for r in scored)
    shares = {}
    for r in scored:
        shares[str(r.order)] = shares.get(str(r.order), 0) + 1
    return EvalReport(
        cells=cells,
        nlos_fraction=float(nlos/len(scored)) if scored else 0.0,
        detach_count=int(len(recs) - len(scored)),
        total_records=len(scored),
        order_share={o: n/len(scored) for o, n in sorted(shares.items())},
        bin_width=bin_width)


# Record files

def write_records(records, path):
    """One CSV row per record in RECORD_COLUMNS order, blanks for NaN."""
    df = pd.DataFrame([dataclasses.astuple(r) for r in records],
                      columns=RECORD_COLUMNS)
    for col in ('is_nlos', 'detached', 'range_clamped'):
        df[col] = df[col].astype(int)
    df.to_csv(path, index=False, float_format='%.10g', na_rep='',
              lineterminator='\n')


def read_records(path):
    try:
        df = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError) as exc:
        raise ParseError(str(exc).strip(), path)
    missing = [c for c in RECORD_COLUMNS if c not in df.columns]
    if missing:
        raise ParseError('missing columns %s' % ', '.join(missing), path, 1)
    records = []
    for i, row in enumerate(df[RECORD_COLUMNS].itertuples(index=False)):
        try:
            records.append(EvalRecord(
                step=int(row.step), repetition=int(row.repetition),
                method=str(row.method), order=int(row.order),
                snr_db=float(row.snr_db), theta_hat=float(row.theta_hat),
                theta_xy_hat=float(row.theta_xy_hat),
                theta_true=float(row.theta_true),
                theta_xy_true=float(row.theta_xy_true),
                error_deg=float(row.error_deg),
                pre_error_deg=float(row.pre_error_deg),
                is_nlos=bool(row.is_nlos), detached=bool(row.detached),
                num_paths=int(row.num_paths),
                range_clamped=bool(row.range_clamped)))
        except (TypeError, ValueError) as exc:
            raise ParseError(str(exc), path, i + 2)
    return records
