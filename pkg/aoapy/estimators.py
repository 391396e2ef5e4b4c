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


import functools
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd

from .array import angle_from_spatial_frequency, steering_matrix
from .util import (ConfigError, InsufficientSamplesError, ShapeError,
                   SubspaceError)


logger = logging.getLogger(__name__)

METHODS = ('MUSIC', 'ESPRIT')
DEFAULT_GRID_STEP_DEG = 0.1

JACOBI_TOLERANCE = 1e-12
JACOBI_MAX_SWEEPS = 100
HERMITIAN_TOLERANCE = 1e-12
# Spectrum values this close to the maximum count as tied peaks.
PEAK_TIE_TOLERANCE = 1e-9


@dataclass(frozen=True, eq=False)
class SubspaceDecomposition:
    """
    Eigen-pairs of a covariance matrix, eigenvalues in descending order.
    The first ``num_sources`` eigenvectors span the signal subspace, the
    rest the noise subspace.
    """
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    num_sources: int = 1

    @property
    def num_elements(self):
        return self.eigenvalues.size

    @property
    def signal_basis(self):
        return self.eigenvectors[:, :self.num_sources]

    @property
    def noise_basis(self):
        return self.eigenvectors[:, self.num_sources:]

    @property
    def noise_variance(self):
        """Mean of the noise eigenvalues."""
        if self.num_sources >= self.num_elements:
            return float('nan')
        return float(np.mean(self.eigenvalues[self.num_sources:]))

    @property
    def source_power(self):
        """Per-element power of each source above the noise floor."""
        return ((self.eigenvalues[:self.num_sources] - self.noise_variance) /
                self.num_elements)


@dataclass(frozen=True, eq=False)
class Pseudospectrum:
    theta_deg: np.ndarray
    power: np.ndarray

    def to_csv(self, path):
        """Write columns theta_deg, power (linear)."""
        df = pd.DataFrame({'theta_deg': self.theta_deg, 'power': self.power})
        df.to_csv(path, index=False, float_format='%.10g',
                  lineterminator='\n')


@dataclass(frozen=True)
class AoaEstimate:
    theta_deg: float
    method: str
    pseudospectrum: Pseudospectrum = None
    theta_xy_deg: float = None
    warnings: tuple = ()
    candidates_deg: tuple = ()

    def __post_init__(self):
        if self.method not in METHODS:
            raise ConfigError('unknown method %r' % (self.method,))
        if not -90 <= self.theta_deg <= 90:
            raise ConfigError('estimate %r outside [-90, 90]'
                              % (self.theta_deg,))


def sample_covariance(snapshot):
    """
    R = X X^H / N from the M x N samples of a (calibrated) snapshot.

    :param snapshot: SnapshotMatrix or M x N array.
    """
    X = np.asarray(getattr(snapshot, 'samples', snapshot))
    if X.ndim != 2:
        raise ShapeError('snapshot must be an M x N matrix')
    M, N = X.shape
    if N < M:
        raise InsufficientSamplesError('%d samples for %d elements' % (N, M))
    R = X @ X.conj().T/N
    return (R + R.conj().T)/2


def _off(A):
    return np.linalg.norm(A - np.diag(np.diag(A)))


def _rotate(p, q, A, V):
    """Complex Jacobi rotation annihilating A[p, q]."""
    apq = A[p, q]
    r = abs(apq)
    e = apq/r
    theta = 0.5*np.arctan2(2*r, (A[q, q] - A[p, p]).real)
    c, s = np.cos(theta), np.sin(theta)
    G = np.eye(A.shape[0], dtype=complex)
    G[p, p] = c
    G[p, q] = s
    G[q, p] = -s*np.conj(e)
    G[q, q] = c*np.conj(e)
    A = G.conj().T @ A @ G
    A[p, q] = A[q, p] = 0
    A = (A + A.conj().T)/2
    return A, V @ G


def hermitian_eig(R, num_sources=1):
    """
    Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Sweeps stop when the off-diagonal Frobenius norm falls below
    JACOBI_TOLERANCE relative to the norm of R.

    :param R: Hermitian M x M matrix.
    :param num_sources: Dimension D of the signal subspace.
    """
    A = np.array(R, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ShapeError('covariance must be square, got %s' % (A.shape,))
    M = A.shape[0]
    if int(num_sources) != num_sources or not 1 <= num_sources <= M:
        raise ConfigError('num_sources must be in [1, %d]' % M)
    scale = np.linalg.norm(A)
    if np.linalg.norm(A - A.conj().T) > HERMITIAN_TOLERANCE*max(scale, 1e-300):
        raise ShapeError('matrix is not Hermitian')
    A = (A + A.conj().T)/2

    V = np.eye(M, dtype=complex)
    sweeps = 0
    while _off(A) > JACOBI_TOLERANCE*scale and sweeps < JACOBI_MAX_SWEEPS:
        for p in range(M - 1):
            for q in range(p + 1, M):
                if A[p, q] != 0:
                    A, V = _rotate(p, q, A, V)
        sweeps += 1
    logger.debug('Jacobi converged in %d sweeps', sweeps)

    evals = np.real(np.diag(A))
    order = np.argsort(-evals, kind='stable')
    return SubspaceDecomposition(eigenvalues=evals[order],
                                 eigenvectors=V[:, order],
                                 num_sources=int(num_sources))


def angle_grid(grid_step_deg=DEFAULT_GRID_STEP_DEG):
    """Angles from -90 to 90 degrees in steps of ``grid_step_deg``."""
    if not grid_step_deg > 0:
        raise ConfigError('grid_step_deg must be positive')
    n = int(np.floor(180.0/grid_step_deg + 1e-9)) + 1
    theta = np.round(-90.0 + grid_step_deg*np.arange(n), 10)
    return np.clip(theta, -90.0, 90.0)


@functools.lru_cache(maxsize=16)
def _grid_steering(ula, grid_step_deg):
    theta = angle_grid(grid_step_deg)
    A = steering_matrix(ula, theta)
    theta.flags.writeable = False
    A.flags.writeable = False
    return theta, A


def music_spectrum(decomp, ula, grid_step_deg=DEFAULT_GRID_STEP_DEG):
    """
    MUSIC pseudospectrum P(theta) = 1 / (a^H Vn Vn^H a).

    :param decomp: SubspaceDecomposition.
    :param ula: UlaConfig the covariance was measured with.
    :param grid_step_deg: Grid spacing in degrees.
    """
    if decomp.num_sources >= decomp.num_elements:
        raise SubspaceError('no noise subspace: D=%d, M=%d'
                            % (decomp.num_sources, decomp.num_elements))
    theta, A = _grid_steering(ula, grid_step_deg)
    Vn = decomp.noise_basis
    den = np.sum(np.abs(Vn.conj().T @ A)**2, axis=0)
    den = np.maximum(den, np.finfo(float).tiny)
    return Pseudospectrum(theta_deg=theta, power=1.0/den)


def music_estimate(spectrum):
    """
    Highest peak of a pseudospectrum, refined by a three-point parabola
    through log P. Ties go to the smallest |theta| and are not refined.

    :param spectrum: Pseudospectrum.
    """
    theta = np.asarray(spectrum.theta_deg)
    P = np.asarray(spectrum.power)
    if theta.size == 0:
        raise ConfigError('empty pseudospectrum')
    peak = np.max(P)
    ties = np.flatnonzero(P >= peak*(1 - PEAK_TIE_TOLERANCE))
    i = ties[np.argmin(np.abs(theta[ties]))]
    est = float(theta[i])
    if ties.size == 1 and 0 < i < theta.size - 1:
        y0, y1, y2 = np.log(P[i - 1:i + 2])
        curv = y0 - 2*y1 + y2
        if curv < -1e-12:
            delta = np.clip(0.5*(y0 - y2)/curv, -0.5, 0.5)
            est = est + delta*(theta[i + 1] - theta[i - 1])/2
    est = float(np.clip(est, -90.0, 90.0))
    return AoaEstimate(theta_deg=est, method='MUSIC',
                       pseudospectrum=spectrum)


def esprit_estimate(decomp, ula, shift_k=1):
    """
    Least-squares ESPRIT on subarrays shifted by ``shift_k`` elements.

    Psi solves Vs0 Psi = Vs1; its eigenvalues carry the spatial frequency
    of each source as their phase.

    :param decomp: SubspaceDecomposition.
    :param ula: UlaConfig.
    :param shift_k: Subarray shift in elements.
    """
    M = decomp.num_elements
    D = decomp.num_sources
    if int(shift_k) != shift_k or shift_k < 1:
        raise ConfigError('shift_k must be a positive integer')
    if D > M - shift_k:
        raise SubspaceError('%d sources need more than %d shifted rows'
                            % (D, M - shift_k))
    Vs = decomp.signal_basis
    Vs0 = Vs[:M - shift_k]
    Vs1 = Vs[shift_k:]
    if np.linalg.matrix_rank(Vs0) < D:
        raise SubspaceError('rank-deficient subarray signal basis')
    Psi = np.linalg.lstsq(Vs0, Vs1, rcond=None)[0]
    Phi = np.linalg.eigvals(Psi)
    thetas = sorted(angle_from_spatial_frequency(ula, float(np.angle(phi)),
                                                 shift_k) for phi in Phi)
    return AoaEstimate(theta_deg=thetas[0], method='ESPRIT',
                       candidates_deg=tuple(thetas))


def estimate_aoa(snapshot, ula, method='MUSIC', num_sources=1,
                 grid_step_deg=DEFAULT_GRID_STEP_DEG, shift_k=1):
    """Covariance, eigendecomposition and the chosen estimator in one call."""
    method = str(method).upper()
    if method not in METHODS:
        raise ConfigError('method must be one of %s, got %r'
                          % (METHODS, method))
    decomp = hermitian_eig(sample_covariance(snapshot), num_sources)
    if method == 'MUSIC':
        return music_estimate(music_spectrum(decomp, ula, grid_step_deg))
    return esprit_estimate(decomp, ula, shift_k)
