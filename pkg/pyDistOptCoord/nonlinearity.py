#!/usr/bin/env python
# -*- coding: utf-8 -*-

# The MIT License (MIT)
# Copyright (c) 2025-2026 the pyDistOptCoord developers
#
# Permission is hereby granted, free of charge, to any person obtaining a copy
# of this software and associated documentation files (the "Software"), to deal
# in the Software without restriction, including without limitation the rights
# to use, copy, modify, merge, publish, distribute, sublicense, and/or sell
# copies of the Software, and to permit persons to whom the Software is
# furnished to do so, subject to the following conditions:
#
# The above copyright notice and this permission notice shall be included in all
# copies or substantial portions of the Software.
#
# THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND,
# EXPRESS OR IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF
# MERCHANTABILITY, FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT.
# IN NO EVENT SHALL THE AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM,
# DAMAGES OR OTHER LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR
# OTHERWISE, ARISING FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE
# OR OTHER DEALINGS IN THE SOFTWARE.

from . import config
import logging

import numpy as np

from .exceptions import InvalidBounds, DimensionMismatch
from .helpers import check_finite

__all__ = ['SectorBounds', 'InputNonlinearity', 'IdentityNonlinearity',
           'SinusoidalGain', 'SlopeTable', 'CustomNonlinearity', 'tight_gamma',
           'nonlinearity_from_dict', 'nonlinearities_from_config', 'sample_triples',
           'common_bounds', 'stacked_residual']

__docformat__ = 'restructuredtext'


class SectorBounds(object):
    """SectorBounds

    Component-wise incremental sector ``[alpha, beta]`` of an input
    nonlinearity and the bound ``gamma`` of the residual sector ``[0, gamma]``
    of ``phi'(u) = u - phi(u)/beta``. A declared ``gamma`` may be larger
    (more conservative) than the tight value ``(beta - alpha)/beta``.

    Args:
        alpha (float): lower slope, must be positive.
        beta (float): upper slope, ``beta >= alpha``.
        gamma (float, optional): declared residual bound - defaults to the
          tight value.

    Attributes:
        alpha (float): lower slope.
        beta (float): upper slope.
        gamma (float): residual sector bound in ``[0, 1]``.

    """

    def __init__(self, alpha, beta, gamma=None):
        self.alpha = float(alpha)
        self.beta = float(beta)
        if not self.alpha > 0:
            raise InvalidBounds('alpha must be positive, got {:g}!'.format(self.alpha))
        if self.beta < self.alpha:
            raise InvalidBounds('beta = {:g} must not be smaller than alpha = {:g}!'.format(
                self.beta, self.alpha))
        tight = self.tight_gamma()
        self.gamma = tight if gamma is None else float(gamma)
        if self.gamma < tight - 1e-15:
            raise InvalidBounds('Declared gamma = {:g} is below the tight bound {:g}!'.format(
                self.gamma, tight))
        if self.gamma > 1:
            raise InvalidBounds('gamma must not exceed 1, got {:g}!'.format(self.gamma))

    def tight_gamma(self):
        """Smallest admissible residual bound ``(beta - alpha)/beta``."""
        return (self.beta - self.alpha)/self.beta

    def with_gamma(self, gamma):
        """Copy of the bounds with another declared ``gamma``."""
        return SectorBounds(self.alpha, self.beta, gamma)

    def to_dict(self):
        return {'alpha': self.alpha, 'beta': self.beta, 'gamma': self.gamma}

    def __repr__(self):
        return 'SectorBounds(alpha={:g}, beta={:g}, gamma={:g})'.format(
            self.alpha, self.beta, self.gamma)


def tight_gamma(bounds):
    """tight_gamma

    Tight residual sector bound of ``bounds``.

    Args:
        bounds (SectorBounds): sector bounds.

    Returns:
        gamma (float): ``(beta - alpha)/beta``.

    """
    if not bounds.alpha > 0 or bounds.beta < bounds.alpha:
        raise InvalidBounds('Invalid sector [{:g}, {:g}]!'.format(bounds.alpha, bounds.beta))
    return bounds.tight_gamma()


class InputNonlinearity(object):
    """InputNonlinearity

    Base class of the time-varying input nonlinearities ``phi_i(u, t)``.
    Child classes implement :meth:`_evaluate` for arrays of inputs; all
    built-in kinds act component-wise, so ``u`` may be an m-vector or an
    array with one row per agent.

    Args:
        bounds (SectorBounds): declared sector of the nonlinearity.

    Attributes:
        log (logging.logger): logger instance from logging.
        kind (str): name of the nonlinearity kind.
        bounds (SectorBounds): declared sector.

    """

    kind = 'base'

    def __init__(self, bounds):
        self.log = logging.getLogger(__name__)
        self.log.setLevel(config.LOG_LEVEL)
        self.bounds = bounds

    def _evaluate(self, u, t):
        raise NotImplementedError('Needs to be implemented!')

    def apply(self, u, t):
        """apply

        Evaluates ``phi(u, t)``.

        Args:
            u (ndarray[float]): input vector or array.
            t (float): time, ``t >= 0``.

        Returns:
            phi (ndarray[float]): same shape as ``u``.

        """
        if t < 0:
            raise ValueError('Time must not be negative, got {:g}!'.format(t))
        u = check_finite(u, 'u')
        return self._evaluate(u, t)

    def residual(self, u, t):
        """residual

        Residual ``phi'(u, t) = u - phi(u, t)/beta`` which lies in the sector
        ``[0, gamma]``. With ``B = beta B0`` it satisfies
        ``B0 phi(u, t) = B u - B phi'(u, t)``.

        Args:
            u (ndarray[float]): input vector or array.
            t (float): time.

        Returns:
            residual (ndarray[float]): same shape as ``u``.

        """
        u = check_finite(u, 'u')
        return u - self.apply(u, t)/self.bounds.beta

    def verify_sector(self, samples, tol=1e-12):
        """verify_sector

        Evaluates on samples ``(u, u', t)``

        - the incremental residual inequality
          ``dphi'^T (dphi' - gamma du) <= 0``,
        - the plain residual inequality ``phi'(u)^T (phi'(u) - gamma u) <= 0``
          at both ``u`` and ``u'``,
        - the component slopes ``dphi_j/du_j`` against ``[alpha, beta]``.

        Args:
            samples (list[tuple]): triples ``(u, u_prime, t)``.
            tol (float, optional): admissible violation - defaults to 1e-12.

        Returns:
            report (dict): violations, slope range and ``passed`` flags.

        """
        gamma = self.bounds.gamma
        incremental = -np.inf
        sector = -np.inf
        slope_min = np.inf
        slope_max = -np.inf
        for u, u_prime, t in samples:
            u = np.asarray(u, dtype=float)
            u_prime = np.asarray(u_prime, dtype=float)
            r = self.residual(u, t)
            r_prime = self.residual(u_prime, t)
            dr = r_prime - r
            du = u_prime - u
            incremental = max(incremental, float(dr @ (dr - gamma*du)))
            sector = max(sector, float(r @ (r - gamma*u)),
                         float(r_prime @ (r_prime - gamma*u_prime)))
            dphi = self.apply(u_prime, t) - self.apply(u, t)
            mask = np.abs(du) > 1e-12
            if np.any(mask):
                slopes = dphi[mask]/du[mask]
                slope_min = min(slope_min, float(slopes.min()))
                slope_max = max(slope_max, float(slopes.max()))
        slope_passed = bool(slope_min >= self.bounds.alpha - 1e-9
                            and slope_max <= self.bounds.beta + 1e-9)
        return {'incremental_violation': incremental,
                'sector_violation': sector,
                'slope_min': slope_min,
                'slope_max': slope_max,
                'slope_passed': slope_passed,
                'num_samples': len(samples),
                'passed': bool(incremental <= tol and sector <= tol and slope_passed)}


class IdentityNonlinearity(InputNonlinearity):
    """IdentityNonlinearity

    ``phi(u, t) = u``, the nominal input channel with ``gamma = 0`` unless a
    larger sector is declared.

    """

    kind = 'identity'

    def __init__(self, bounds=None):
        super().__init__(SectorBounds(1.0, 1.0) if bounds is None else bounds)

    def _evaluate(self, u, t):
        return u.copy()


class SinusoidalGain(InputNonlinearity):
    """SinusoidalGain

    Time-varying gain ``phi(u, t) = (base + amp sin(freq t)) u`` applied
    component-wise. Its slopes range over ``[base - |amp|, base + |amp|]``.

    Args:
        base (float): mean gain.
        amp (float): amplitude of the gain oscillation.
        freq (float): angular frequency.
        bounds (SectorBounds, optional): declared sector - defaults to the
          exact slope range.

    """

    kind = 'sinusoidal_gain'

    def __init__(self, base=0.8, amp=0.2, freq=2.0, bounds=None):
        self.base = float(base)
        self.amp = float(amp)
        self.freq = float(freq)
        if bounds is None:
            bounds = SectorBounds(self.base - abs(self.amp), self.base + abs(self.amp))
        super().__init__(bounds)

    def gain(self, t):
        return self.base + self.amp*np.sin(self.freq*t)

    def _evaluate(self, u, t):
        return self.gain(t)*u


class SlopeTable(InputNonlinearity):
    """SlopeTable

    Odd, time-invariant, piecewise-linear map applied component-wise. On
    ``[b_k, b_k+1]`` of ``|u|`` the slope is ``slopes[k]``; the last slope
    continues beyond the last breakpoint.

    Args:
        slopes (list[float]): one slope more than breakpoints.
        breakpoints (list[float], optional): increasing positive breakpoints.
        bounds (SectorBounds, optional): declared sector - defaults to the
          range of the slopes.

    """

    kind = 'slope_table'

    def __init__(self, slopes, breakpoints=(), bounds=None):
        self.slopes = np.asarray(slopes, dtype=float).ravel()
        self.breakpoints = np.asarray(breakpoints, dtype=float).ravel()
        if self.slopes.size != self.breakpoints.size + 1:
            raise DimensionMismatch('A slope table needs one slope more than breakpoints!')
        if np.any(self.breakpoints <= 0) or np.any(np.diff(self.breakpoints) <= 0):
            raise ValueError('Breakpoints must be positive and increasing!')
        if bounds is None:
            bounds = SectorBounds(self.slopes.min(), self.slopes.max())
        super().__init__(bounds)
        if self.slopes.min() < bounds.alpha or self.slopes.max() > bounds.beta:
            self.log.warning('Slope table [{:g}, {:g}] exceeds the declared sector '
                             '[{:g}, {:g}]!'.format(self.slopes.min(), self.slopes.max(),
                                                    bounds.alpha, bounds.beta))
        self._knots = np.concatenate([[0.0], self.breakpoints])
        self._values = np.concatenate(
            [[0.0], np.cumsum(self.slopes[:-1]*np.diff(self._knots))])

    def _evaluate(self, u, t):
        magnitude = np.abs(u)
        value = np.interp(magnitude, self._knots, self._values)
        value = value + np.where(magnitude > self._knots[-1],
                                 self.slopes[-1]*(magnitude - self._knots[-1]), 0.0)
        return np.sign(u)*value


class CustomNonlinearity(InputNonlinearity):
    """CustomNonlinearity

    User supplied ``fn(u, t)``. The callable has to declare its own sector;
    :meth:`verify_sector` only samples it.

    Args:
        fn (callable): ``fn(u, t) -> ndarray`` of the same shape as ``u``.
        bounds (SectorBounds): declared sector.

    """

    kind = 'custom'

    def __init__(self, fn, bounds):
        self.fn = fn
        super().__init__(bounds)

    def _evaluate(self, u, t):
        return check_finite(self.fn(u, t), 'phi(u, t)')


def nonlinearity_from_dict(data):
    """nonlinearity_from_dict

    Creates a built-in nonlinearity from its JSON representation, e.g.
    ``{"kind": "sinusoidal_gain", "base": 0.8, "amp": 0.2, "freq": 2.0,
    "alpha": 0.6, "beta": 1.0, "gamma": 0.5}``.

    Args:
        data (dict): JSON dictionary.

    Returns:
        nonlinearity (InputNonlinearity): the nonlinearity.

    """
    kind = data.get('kind', 'identity')
    bounds = None
    if 'alpha' in data or 'beta' in data:
        bounds = SectorBounds(data['alpha'], data['beta'], data.get('gamma', None))
    elif 'gamma' in data:
        raise InvalidBounds('gamma requires alpha and beta to be declared!')
    if kind == 'identity':
        return IdentityNonlinearity(bounds)
    elif kind == 'sinusoidal_gain':
        return SinusoidalGain(data.get('base', 0.8), data.get('amp', 0.2),
                              data.get('freq', 2.0), bounds)
    elif kind == 'slope_table':
        return SlopeTable(data['slopes'], data.get('breakpoints', ()), bounds)
    else:
        raise ValueError('Unknown nonlinearity kind \'{:s}\'!'.format(str(kind)))


def nonlinearities_from_config(data, num_agents):
    """nonlinearities_from_config

    One shared nonlinearity or a list with one entry per agent.

    Args:
        data (dict|list[dict]): JSON representation.
        num_agents (int): number of agents N.

    Returns:
        nonlinearities (InputNonlinearity|list[InputNonlinearity]): parsed
        nonlinearity or per-agent list.

    """
    if isinstance(data, list):
        if len(data) != num_agents:
            raise DimensionMismatch('Expected {:d} nonlinearities, got {:d}!'.format(
                num_agents, len(data)))
        return [nonlinearity_from_dict(entry) for entry in data]
    return nonlinearity_from_dict(data)


def sample_triples(rng, num, dim, low=-10.0, high=10.0, t_max=10.0):
    """sample_triples

    Random samples ``(u, u', t)`` for :meth:`InputNonlinearity.verify_sector`.

    Args:
        rng (numpy.random.Generator): random generator.
        num (int): number of samples.
        dim (int): input dimension m.
        low (float, optional): lower input bound.
        high (float, optional): upper input bound.
        t_max (float, optional): largest sampled time.

    Returns:
        samples (list[tuple]): list of ``(u, u_prime, t)``.

    """
    inputs = rng.uniform(low, high, size=(num, 2, dim))
    times = rng.uniform(0.0, t_max, size=num)
    return [(p[0], p[1], float(t)) for p, t in zip(inputs, times)]


def common_bounds(nonlinearities):
    """common_bounds

    Sector bounds shared by all agents. A per-agent list must agree on
    ``beta`` since ``B = beta B0`` is common to all agents; the widest
    ``alpha`` and ``gamma`` are used.

    Args:
        nonlinearities (InputNonlinearity|list[InputNonlinearity]): shared
          nonlinearity or per-agent list.

    Returns:
        bounds (SectorBounds): common bounds.

    """
    if not isinstance(nonlinearities, (list, tuple)):
        return nonlinearities.bounds
    betas = np.array([nl.bounds.beta for nl in nonlinearities])
    if np.ptp(betas) > 1e-12:
        raise InvalidBounds('Per-agent nonlinearities must share the same beta!')
    return SectorBounds(min(nl.bounds.alpha for nl in nonlinearities), betas[0],
                        max(nl.bounds.gamma for nl in nonlinearities))


def stacked_residual(nonlinearities, rows, t):
    """stacked_residual

    Residual ``phi'_i(u_i, t)`` for all agents at once.

    Args:
        nonlinearities (InputNonlinearity|list[InputNonlinearity]): shared
          nonlinearity or per-agent list.
        rows (ndarray[float]): N x m inputs, one row per agent.
        t (float): time.

    Returns:
        residual (ndarray[float]): N x m residuals.

    """
    if isinstance(nonlinearities, (list, tuple)):
        if len(nonlinearities) != rows.shape[0]:
            raise DimensionMismatch('Expected {:d} nonlinearities, got {:d}!'.format(
                rows.shape[0], len(nonlinearities)))
        return np.array([nl.residual(row, t) for nl, row in zip(nonlinearities, rows)])
    if isinstance(nonlinearities, CustomNonlinearity):
        return np.array([nonlinearities.residual(row, t) for row in rows])
    return nonlinearities.residual(rows, t)
