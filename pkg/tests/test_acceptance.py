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

import numpy as np

import aoapy
from aoapy.cli import main
from aoapy.util import SPEED_OF_LIGHT


def snapshot(theta, snr_db=np.inf, seed=0, impairment=None):
    ula = aoapy.array.UlaConfig()
    srs = aoapy.srs.srs_sequence(aoapy.srs.SrsConfig())
    path = aoapy.channel.PathComponent(delay_s=20.0/SPEED_OF_LIGHT,
                                       gain=1e-3, azimuth_deg=theta,
                                       elevation_offset_m=0.0, order=0,
                                       is_los=True)
    if impairment is None:
        impairment = aoapy.channel.ImpairmentModel.none(4)
    return aoapy.channel.synthesize_snapshot([path], ula, srs, snr_db,
                                             impairment, seed)


def session_table(session, num_elements=4):
    ula = aoapy.array.UlaConfig(num_elements=num_elements,
                                origin=aoapy.scenarios.GNB_POSITION)
    srs = aoapy.srs.srs_sequence(aoapy.srs.SrsConfig())
    imp = aoapy.channel.ImpairmentModel.draw(num_elements, session)
    frames = aoapy.calibration.reference_frames(ula, srs, imp, 10, 30.0,
                                                session)
    table = aoapy.calibration.estimate_offsets(frames, srs)
    return aoapy.calibration.CalibrationTable(table.offsets_rad, 10,
                                              table.residual_spread_rad,
                                              session_seed=session)


def abs_errors(records, **match):
    out = []
    for r in records:
        if r.detached:
            continue
        if all(getattr(r, k) == v for k, v in match.items()):
            out.append(abs(r.error_deg))
    return np.array(out)


# Noiseless sweep


def test_noiseless_sweep():
    ula = aoapy.array.UlaConfig()
    for theta in np.arange(-80, 81, 5, dtype=float):
        snap = snapshot(theta)
        decomp = aoapy.estimators.hermitian_eig(
            aoapy.estimators.sample_covariance(snap))
        music = aoapy.estimators.music_estimate(
            aoapy.estimators.music_spectrum(decomp, ula))
        esprit = aoapy.estimators.esprit_estimate(decomp, ula)
        assert np.abs(esprit.theta_deg - theta) < 1e-6
        assert np.abs(music.theta_deg - theta) < 0.01

        a = aoapy.array.steering_vector(ula, theta)
        Vn = decomp.noise_basis
        assert np.real(a.conj() @ Vn @ Vn.conj().T @ a) < 1e-10


# Calibration


def test_calibration_inject_recover():
    ula = aoapy.array.UlaConfig()
    srs = aoapy.srs.srs_sequence(aoapy.srs.SrsConfig())
    worst = []
    uncalibrated = []
    for seed in range(100):
        imp = aoapy.channel.ImpairmentModel.draw(4, 1000 + seed)
        frames = aoapy.calibration.reference_frames(ula, srs, imp, 10, 30.0,
                                                    seed)
        table = aoapy.calibration.estimate_offsets(frames, srs)
        diff = aoapy.util.wrap_phase(table.offsets_rad -
                                     imp.port_phase_offsets)
        worst.append(np.max(np.abs(diff)))

        est = aoapy.estimators.estimate_aoa(
            snapshot(30.0, 30.0, seed, imp), ula, 'MUSIC')
        uncalibrated.append(np.abs(est.theta_deg - 30))

    assert aoapy.evaluation.quantile(worst, 0.95) <= 0.01
    assert np.mean(np.array(uncalibrated) > 5) >= 0.90


# Campaign trends


def test_line_of_sight_campaign():
    cfg = aoapy.evaluation.CampaignConfig(scenario='canyon_o5',
                                          reflection_orders=(0,),
                                          num_repetitions=6, base_seed=4)
    records = aoapy.evaluation.run_campaign(
        cfg, aoapy.evaluation.default_trajectory(), session_table(12))
    assert len(records) >= 5000

    high = [r for r in records if not r.detached and r.snr_db >= 20]
    assert len(high) > 0
    err = np.abs([r.error_deg for r in high])
    assert aoapy.evaluation.quantile(err, 0.95) <= 2


def near_and_far_trajectory():
    steps = []
    for k, phi in enumerate(np.radians(np.linspace(-30, 30, 400))):
        steps.append(aoapy.evaluation.TrajectoryStep(
            k, (10*np.cos(phi), 10*np.sin(phi), 1.5)))
    for i, x in enumerate(np.linspace(200, 500, 200)):
        steps.append(aoapy.evaluation.TrajectoryStep(400 + i, (x, 5.0, 1.5)))
    return aoapy.evaluation.Trajectory(steps)


def test_multipath_high_snr():
    cfg = aoapy.evaluation.CampaignConfig(scenario='canyon_o5',
                                          reflection_orders=(5,),
                                          num_repetitions=5, base_seed=8)
    records = aoapy.evaluation.run_campaign(cfg, near_and_far_trajectory(),
                                            session_table(5))
    report = aoapy.evaluation.aggregate(records)
    for method in cfg.methods:
        high = report.cell(method, 5, '>30')
        low = report.cell(method, 5, '0-10')
        assert high['count'] >= 2000
        assert high['p95'] <= 5
        assert low['p95'] > high['p95']


def test_multipath_widens_errors():
    cfg = aoapy.evaluation.CampaignConfig(scenario='canyon_o5',
                                          reflection_orders=(0, 3, 5),
                                          num_repetitions=2, base_seed=2)
    records = aoapy.evaluation.run_campaign(
        cfg, aoapy.evaluation.default_trajectory(), session_table(9))
    for method in cfg.methods:
        base = abs_errors(records, method=method, order=0)
        for order in (3, 5):
            other = abs_errors(records, method=method, order=order)
            for q in (0.5, 0.9, 0.95):
                assert (aoapy.evaluation.quantile(base, q) <=
                        aoapy.evaluation.quantile(other, q))


def snr_ladder_trajectory():
    # one stretch per 10 dB bin of the distance policy, clear of the bus
    steps = []
    for x0, x1 in ((8, 14), (20, 55), (60, 175), (190, 550)):
        for x in np.linspace(x0, x1, 500):
            steps.append(aoapy.evaluation.TrajectoryStep(len(steps),
                                                         (x, 2.0, 1.5)))
    return aoapy.evaluation.Trajectory(steps)


def test_rmse_falls_with_snr():
    cfg = aoapy.evaluation.CampaignConfig(scenario='canyon_o5',
                                          reflection_orders=(0, 3, 5),
                                          num_repetitions=2,
                                          grid_step_deg=0.05,
                                          impairments=False, base_seed=13)
    records = aoapy.evaluation.run_campaign(cfg, snr_ladder_trajectory())
    report = aoapy.evaluation.aggregate(records)
    bins = ['0-10', '10-20', '20-30', '>30']
    for method in cfg.methods:
        for order in cfg.reflection_orders:
            cells = [report.cell(method, order, b) for b in bins]
            assert all(c['count'] >= 1000 for c in cells)
            rmse = [c['rmse'] for c in cells]
            assert rmse[-1] <= min(rmse)
            if order == 0:
                assert all(np.diff(rmse) <= 0)


def test_music_esprit_agree():
    ula = aoapy.array.UlaConfig()
    rng = np.random.default_rng(30)
    close = 0
    for seed, theta in enumerate(rng.uniform(-60, 60, 500)):
        snap = snapshot(theta, 30.0, seed)
        decomp = aoapy.estimators.hermitian_eig(
            aoapy.estimators.sample_covariance(snap))
        music = aoapy.estimators.music_estimate(
            aoapy.estimators.music_spectrum(decomp, ula))
        esprit = aoapy.estimators.esprit_estimate(decomp, ula)
        close += np.abs(music.theta_deg - esprit.theta_deg) < 0.5
    assert close >= 495


# Eigensolver


def test_eigensolver_oracle():
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        B = rng.standard_normal((4, 4)) + 1j*rng.standard_normal((4, 4))
        H = (B + B.conj().T)/2
        d = aoapy.estimators.hermitian_eig(H)
        V, w = d.eigenvectors, d.eigenvalues
        rec = V @ np.diag(w) @ V.conj().T
        assert np.linalg.norm(rec - H)/np.linalg.norm(H) < 1e-9
        assert np.max(np.abs(w - np.linalg.eigvalsh(H)[::-1])) < 1e-8


# Reproducibility


def test_rerun_from_manifest(tmp_path):
    traj = aoapy.evaluation.straight_line_trajectory((8, -6, 1.5),
                                                     (260, 10, 1.5), 40)
    traj_path = str(tmp_path/'traj.csv')
    aoapy.evaluation.save_trajectory(traj, traj_path)
    out = tmp_path/'run'
    args = ['campaign', '--scenario', 'canyon_o3', '--order', '0',
            '--order', '3', '--trajectory', traj_path, '--seed', '17',
            '--session', '6', '--no-calib', '--out', str(out)]
    assert main(args) == 0
    assert main(args[:-1] + [str(tmp_path/'again')]) == 0
    first = (out/'records.csv').read_bytes()
    assert first == (tmp_path/'again'/'records.csv').read_bytes()

    manifest = json.loads((out/'manifest.json').read_text())
    cfg = aoapy.evaluation.CampaignConfig.from_dict(manifest['config'])
    records = aoapy.evaluation.run_campaign(
        cfg, aoapy.evaluation.load_trajectory(traj_path))
    rerun = str(tmp_path/'rerun.csv')
    aoapy.evaluation.write_records(records, rerun)
    assert open(rerun, 'rb').read() == first
