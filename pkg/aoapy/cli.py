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
"""
Command line front end: ``aoapy calibrate | estimate | campaign | report``.

Exit codes: 0 success, 1 estimation failure, 2 configuration error,
3 I/O or parse error, 4 calibration quality gate.
"""


import argparse
import dataclasses
import hashlib
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field

from . import __version__
from .calibration import (DEFAULT_NUM_FRAMES, DEFAULT_SPREAD_THRESHOLD_RAD,
                          apply_correction, estimate_offsets, load_table,
                          reference_frames, save_table)
from .channel import ImpairmentModel, export_cir, synthesize_snapshot, \
    trace_paths
from .estimators import (METHODS, esprit_estimate, hermitian_eig,
                         music_estimate, music_spectrum, sample_covariance)
from .evaluation import (CampaignConfig, SnrPolicy, aggregate,
                         default_trajectory, load_trajectory, read_records,
                         run_campaign, write_records)
from .geometry import GeometryContext, correct_estimate, ground_truth_angles
from .scenarios import load_scenario, ula_for
from .srs import SrsConfig, srs_sequence
from .util import (SEED_ENV, AoaError, ConfigError, QualityGateError,
                   resolve_seed)


logger = logging.getLogger(__name__)


def setup_logging(verbosity=0, log_file=None):
    level = (logging.WARNING, logging.INFO)[min(verbosity, 1)]
    if verbosity >= 2:
        level = logging.DEBUG
    handlers = [logging.StreamHandler()]
    if log_file:
        handlers.append(logging.FileHandler(log_file, mode='w'))
    logging.basicConfig(level=level, handlers=handlers, force=True,
                        format='%(asctime)s %(name)s %(levelname)s: '
                               '%(message)s')


def parse_snr(value):
    try:
        return float(value)
    except ValueError:
        raise argparse.ArgumentTypeError('SNR must be a number or inf')


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, 'rb') as fh:
        for block in iter(lambda: fh.read(1 << 16), b''):
            h.update(block)
    return h.hexdigest()


def config_hash(config):
    text = json.dumps(config, sort_keys=True, separators=(',', ':'),
                      default=str)
    return hashlib.sha256(text.encode('utf-8')).hexdigest()


@dataclass
class RunManifest:
    """Everything needed to reproduce the outputs of one command."""
    command: str
    config: dict
    base_seed: int
    tool_version: str = __version__
    inputs: dict = field(default_factory=dict)
    outputs: list = field(default_factory=list)

    @property
    def config_hash(self):
        return config_hash(self.config)

    def add_input(self, path):
        if path is not None:
            self.inputs[path] = sha256_file(path)

    def to_dict(self):
        return {'command': self.command, 'config': self.config,
                'config_hash': self.config_hash,
                'base_seed': self.base_seed,
                'tool_version': self.tool_version,
                'inputs': dict(sorted(self.inputs.items())),
                'outputs': list(self.outputs)}

    def write(self, path):
        with open(path, 'w', encoding='utf-8') as fh:
            json.dump(self.to_dict(), fh, indent=2, sort_keys=True,
                      default=str)
            fh.write('\n')
        return path


def _load_calibration(args):
    if args.no_calib:
        return None
    if args.calib is None:
        raise ConfigError('pass --calib FILE or --no-calib')
    return load_table(args.calib)


def _session(args, calib, seed):
    if args.session is not None:
        return args.session
    if calib is not None and calib.session_seed is not None:
        return calib.session_seed
    return seed


def cmd_calibrate(args):
    seed = resolve_seed(args.seed)
    session = args.session if args.session is not None else seed
    scenario = load_scenario(args.scenario)
    ula = ula_for(scenario, num_elements=args.elements)
    srs = srs_sequence(SrsConfig())
    if args.no_impairments:
        impairment = ImpairmentModel.none(ula.num_elements)
    else:
        impairment = ImpairmentModel.draw(ula.num_elements, session)
    frames = reference_frames(ula, srs, impairment, args.frames, args.snr,
                              seed)
    table = estimate_offsets(frames, srs)
    table = dataclasses.replace(table, session_seed=session)
    print('residual spread %.4f rad over %d frames'
          % (table.residual_spread_rad, table.num_frames_averaged))
    if table.residual_spread_rad > args.threshold:
        raise QualityGateError('residual spread %.4f rad exceeds threshold '
                               '%.4f rad; table not written'
                               % (table.residual_spread_rad, args.threshold))
    save_table(table, args.out)
    manifest = RunManifest('calibrate',
                           {'scenario': scenario.name, 'frames': args.frames,
                            'snr_db': args.snr, 'session': session,
                            'elements': args.elements,
                            'impairments': not args.no_impairments,
                            'threshold': args.threshold},
                           seed, outputs=[args.out])
    manifest.write(os.path.splitext(args.out)[0] + '.manifest.json')
    return table


def cmd_estimate(args):
    seed = resolve_seed(args.seed)
    scenario = load_scenario(args.scenario)
    if args.order is not None:
        scenario = scenario.with_order(args.order)
    calib = _load_calibration(args)
    ula = ula_for(scenario, num_elements=args.elements)
    srs = srs_sequence(SrsConfig())
    if args.no_impairments:
        impairment = ImpairmentModel.none(ula.num_elements)
    else:
        impairment = ImpairmentModel.draw(ula.num_elements,
                                          _session(args, calib, seed))

    paths = trace_paths(scenario, args.ue)
    truth = dataclasses.replace(
        ground_truth_angles(scenario.gnb_position,
                            scenario.boresight_azimuth, args.ue),
        is_nlos=not any(p.is_los for p in paths))
    snap = synthesize_snapshot(paths, ula, srs, args.snr, impairment, seed,
                               truth=truth)
    if calib is not None:
        snap = apply_correction(snap, calib)
    decomp = hermitian_eig(sample_covariance(snap))
    method = args.method.upper()
    if method == 'MUSIC':
        est = music_estimate(music_spectrum(decomp, ula))
    else:
        est = esprit_estimate(decomp, ula)
    est = correct_estimate(est, GeometryContext(truth.distance_m,
                                                truth.delta_z_m))

    print('%s theta=%.2f deg theta_xy=%.2f deg (truth %.2f deg, %d paths)'
          % (method, round(est.theta_deg, 2) + 0.0,
             round(est.theta_xy_deg, 2) + 0.0,
             round(truth.theta_xy, 2) + 0.0, len(paths)))
    for note in est.warnings:
        print('warning: %s' % note)
    if args.spectrum_csv and est.pseudospectrum is not None:
        est.pseudospectrum.to_csv(args.spectrum_csv)
    if args.plot and est.pseudospectrum is not None:
        from .plotting import plot_spectrum
        plot_spectrum(est.pseudospectrum, args.plot, truth.theta_raw)
    return est


def _campaign_config(args):
    if args.config:
        cfg = CampaignConfig.from_json(args.config)
    else:
        cfg = CampaignConfig()
    overrides = {}
    if args.seed is not None:
        overrides['base_seed'] = args.seed
    if args.scenario is not None:
        overrides['scenario'] = load_scenario(args.scenario)
    if args.order:
        overrides['reflection_orders'] = tuple(args.order)
    if args.method:
        overrides['methods'] = tuple(args.method)
    if args.snr is not None:
        overrides['snr_policy'] = SnrPolicy.parse(args.snr)
    if args.threads is not None:
        overrides['threads'] = args.threads
    if args.session is not None:
        overrides['session_seed'] = args.session
    if args.no_impairments:
        overrides['impairments'] = False
    if overrides:
        cfg = dataclasses.replace(cfg, **overrides)
    return cfg


def _write_plots(records, report, out_dir):
    from .plotting import plot_ecdf, plot_snr_boxplot, plot_trace
    methods = sorted({r.method for r in records})
    outputs = [plot_ecdf(report, os.path.join(out_dir, 'ecdf.png')),
               plot_snr_boxplot(records,
                                os.path.join(out_dir, 'snr_boxplot.png'))]
    for method in methods:
        outputs.append(plot_trace(records, os.path.join(
            out_dir, 'trace_%s.png' % method.lower()), method=method))
    return outputs


def cmd_campaign(args):
    cfg = _campaign_config(args)
    calib = _load_calibration(args)
    traj = (load_trajectory(args.trajectory) if args.trajectory
            else default_trajectory())
    os.makedirs(args.out, exist_ok=True)

    records = run_campaign(cfg, traj, calib, progress=args.progress)
    report = aggregate(records)
    rec_path = os.path.join(args.out, 'records.csv')
    rep_path = os.path.join(args.out, 'report.json')
    write_records(records, rec_path)
    report.to_json(rep_path)
    outputs = [rec_path, rep_path]

    if args.export_cir:
        for order in cfg.reflection_orders:
            scene = cfg.scenario.with_order(order)
            cir_dir = os.path.join(args.out, 'cir', 'order_%d' % order)
            for step in traj.steps:
                export_cir(trace_paths(scene, step.position), cir_dir,
                           step.index, scene.carrier_hz)
            outputs.append(cir_dir)
    if args.plots:
        outputs.extend(_write_plots(records, report, args.out))

    config = cfg.to_dict()
    config.pop('threads')
    manifest = RunManifest('campaign', config, cfg.base_seed,
                           outputs=outputs)
    manifest.add_input(args.config)
    manifest.add_input(args.trajectory)
    manifest.add_input(args.calib if calib is not None else None)
    manifest.write(os.path.join(args.out, 'manifest.json'))
    print('%d records (%d detached), NLOS fraction %.3f -> %s'
          % (len(records), report.detach_count, report.nlos_fraction,
             args.out))
    return report


def cmd_report(args):
    records = read_records(args.records)
    report = aggregate(records, args.bin_width)
    os.makedirs(args.out, exist_ok=True)
    rep_path = os.path.join(args.out, 'report.json')
    report.to_json(rep_path)
    outputs = [rep_path]
    if args.plots:
        outputs.extend(_write_plots(records, report, args.out))
    manifest = RunManifest('report', {'bin_width_db': args.bin_width}, 0,
                           outputs=outputs)
    manifest.add_input(args.records)
    manifest.write(os.path.join(args.out, 'manifest.json'))
    print('%d scored records, %d detached -> %s'
          % (report.total_records, report.detach_count, rep_path))
    return report


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, default=None,
                        help='base seed (default: $%s or 0)' % SEED_ENV)
    common.add_argument('-v', '--verbose', action='count', default=0)
    common.add_argument('--log-file', default=None)

    parser = argparse.ArgumentParser(
        prog='aoapy', description='SRS angle-of-arrival laboratory')
    parser.add_argument('--version', action='version', version=__version__)
    sub = parser.add_subparsers(dest='command')
    sub.required = True

    def calib_flags(p):
        p.add_argument('--calib', default=None, help='calibration table JSON')
        p.add_argument('--no-calib', action='store_true',
                       help='skip phase calibration (negative control)')
        p.add_argument('--session', type=int, default=None,
                       help='boot session seed drawing the port offsets')
        p.add_argument('--no-impairments', action='store_true',
                       help='do not inject port phase offsets')

    p = sub.add_parser('calibrate', parents=[common],
                       help='estimate per-port phase offsets')
    p.add_argument('--scenario', default='freespace')
    p.add_argument('--frames', type=int, default=DEFAULT_NUM_FRAMES)
    p.add_argument('--snr', type=parse_snr, default=30.0)
    p.add_argument('--threshold', type=float,
                   default=DEFAULT_SPREAD_THRESHOLD_RAD,
                   help='maximum residual spread in rad')
    p.add_argument('--elements', type=int, default=4)
    p.add_argument('--session', type=int, default=None)
    p.add_argument('--no-impairments', action='store_true')
    p.add_argument('--out', default='calibration.json')
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser('estimate', parents=[common],
                       help='single-shot estimate for one UE position')
    p.add_argument('--scenario', default='freespace')
    p.add_argument('--ue', type=float, nargs=3, required=True,
                   metavar=('X', 'Y', 'Z'))
    p.add_argument('--method', default='MUSIC', type=str.upper,
                   choices=METHODS)
    p.add_argument('--snr', type=parse_snr, default=math.inf)
    p.add_argument('--order', type=int, default=None)
    p.add_argument('--elements', type=int, default=4)
    p.add_argument('--spectrum-csv', default=None)
    p.add_argument('--plot', default=None, help='pseudospectrum PNG')
    calib_flags(p)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser('campaign', parents=[common],
                       help='trajectory-driven evaluation campaign')
    p.add_argument('--config', default=None, help='campaign JSON')
    p.add_argument('--trajectory', default=None, help='k,x,y,z CSV')
    p.add_argument('--scenario', default=None)
    p.add_argument('--order', type=int, action='append', default=None)
    p.add_argument('--method', type=str.upper, choices=METHODS,
                   action='append', default=None)
    p.add_argument('--snr', default=None,
                   help='fixed SNR in dB, inf, or distance')
    p.add_argument('--threads', type=int, default=None)
    p.add_argument('--out', default='campaign_out')
    p.add_argument('--export-cir', action='store_true')
    p.add_argument('--plots', action='store_true')
    p.add_argument('--progress', action='store_true')
    calib_flags(p)
    p.set_defaults(func=cmd_campaign)

    p = sub.add_parser('report', parents=[common],
                       help='re-aggregate an existing records CSV')
    p.add_argument('--records', required=True)
    p.add_argument('--out', default='report_out')
    p.add_argument('--bin-width', type=float, default=10)
    p.add_argument('--plots', action='store_true')
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    setup_logging(args.verbose, args.log_file)
    try:
        args.func(args)
    except AoaError as exc:
        logger.error('%s', exc)
        print('error: %s' % exc, file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        logger.error('%s', exc)
        print('error: %s' % exc, file=sys.stderr)
        return 3
    return 0
