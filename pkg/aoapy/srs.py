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
from math import gcd

import numpy as np

from .util import ConfigError


def is_prime(n):
    n = int(n)
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f*f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def largest_prime(n):
    """Largest prime not exceeding n."""
    for p in range(int(n), 1, -1):
        if is_prime(p):
            return p
    raise ConfigError('no prime <= %r' % (n,))


def zadoff_chu(root, length):
    """
    Odd-length Zadoff-Chu root sequence,
    s[n] = exp(-j pi root n (n+1) / length).

    :param root: Root index, coprime with length.
    :param length: Sequence length, prime.
    """
    root = int(root)
    length = int(length)
    if not is_prime(length):
        raise ConfigError('Zadoff-Chu length must be prime, got %d' % length)
    if gcd(root, length) != 1:
        raise ConfigError('Zadoff-Chu root %d is not coprime with %d'
                          % (root, length))
    n = np.arange(length, dtype=np.int64)
    # n(n+1) is even, so reducing modulo 2*length keeps the exponent exact.
    k = (root*n*(n + 1)) % (2*length)
    return np.exp(-1j*np.pi*k/length)


@dataclass(frozen=True)
class SrsConfig:
    """
    Flat SRS-like pilot: a Zadoff-Chu root sequence cyclically extended to
    ``length`` samples. ``zc_length=None`` picks the largest prime not
    exceeding ``length``. ``bandwidth_hz`` is informational.
    """
    length: int = 960
    zc_root: int = 1
    zc_length: int = None
    bandwidth_hz: float = 60e6

    def __post_init__(self):
        if int(self.length) != self.length or self.length < 2:
            raise ConfigError('SRS length must be an integer >= 2, got %r'
                              % (self.length,))
        if self.zc_length is None:
            object.__setattr__(self, 'zc_length', largest_prime(self.length))
        if not is_prime(self.zc_length):
            raise ConfigError('zc_length must be prime, got %r'
                              % (self.zc_length,))
        if not 1 <= self.zc_root < self.zc_length:
            raise ConfigError('zc_root must satisfy 1 <= q < %d, got %r'
                              % (self.zc_length, self.zc_root))
        if gcd(int(self.zc_root), int(self.zc_length)) != 1:
            raise ConfigError('zc_root %r is not coprime with zc_length %r'
                              % (self.zc_root, self.zc_length))
        if not self.bandwidth_hz > 0:
            raise ConfigError('bandwidth_hz must be positive')


def srs_sequence(cfg):
    """
    Pilot of ``cfg.length`` samples, s[n] = zc[n mod N_zc].

    :param cfg: SrsConfig.
    """
    zc = zadoff_chu(cfg.zc_root, cfg.zc_length)
    return zc[np.arange(cfg.length) % cfg.zc_length]


def periodic_autocorrelation(seq):
    """
    Periodic autocorrelation r[tau] = sum_n s[n] conj(s[(n+tau) mod N]).

    :param seq: Complex sequence.
    """
    S = np.fft.fft(np.asarray(seq))
    return np.conj(np.fft.ifft(np.abs(S)**2))
