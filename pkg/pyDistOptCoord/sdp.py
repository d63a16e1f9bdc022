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
from scipy.linalg import cho_factor, cho_solve, LinAlgError

from .exceptions import DimensionMismatch, NumericalFailure

__all__ = ['AffineLmi', 'SdpResult', 'BarrierSolver']

__docformat__ = 'restructuredtext'

# squared Newton decrement below which undamped steps converge quadratically
FULL_STEP_DECREMENT = 0.0625


class AffineLmi(object):
    """AffineLmi

    Strict linear matrix inequality ``G(z) = F0 + sum_j z_j F_j > 0`` in the
    decision vector ``z``.

    Args:
        F0 (ndarray[float]): d x d constant term.
        F (ndarray[float]): k x d x d coefficient matrices.
        name (str, optional): label used in log messages.

    Attributes:
        F0 (ndarray[float]): d x d constant term.
        F (ndarray[float]): k x d x d coefficient matrices.
        name (str): label.
        size (int): matrix dimension d.

    """

    def __init__(self, F0, F, name=''):
        self.F0 = np.atleast_2d(np.asarray(F0, dtype=float))
        self.F = np.asarray(F, dtype=float)
        if self.F.ndim != 3 or self.F.shape[1:] != self.F0.shape:
            raise DimensionMismatch('Coefficients of LMI \'{:s}\' have shape {} but the '
                                    'constant term is {}!'.format(name, self.F.shape,
                                                                  self.F0.shape))
        self.name = name
        self.size = self.F0.shape[0]

    @property
    def num_variables(self):
        return self.F.shape[0]

    def evaluate(self, z):
        """Returns ``G(z)``."""
        return self.F0 + np.einsum('j,jab->ab', z, self.F)


class SdpResult(object):
    """SdpResult

    Attributes:
        z (ndarray[float]): last iterate, strictly feasible.
        objective (float): ``c^T z``.
        converged (bool): barrier gap below tolerance or stop criterion met.
        outer_iterations (int): number of barrier updates.
        newton_iterations (int): total number of Newton steps.

    """

    def __init__(self, z, objective, converged, outer_iterations, newton_iterations):
        self.z = z
        self.objective = objective
        self.converged = converged
        self.outer_iterations = outer_iterations
        self.newton_iterations = newton_iterations


class BarrierSolver(object):
    """BarrierSolver

    Dense log-barrier path-following method for

    ``min c^T z  s.t.  G_k(z) > 0``

    Each centering step minimizes ``s c^T z - sum_k log det G_k(z)`` with
    damped Newton steps and backtracking, switching to full steps close to
    the center; the barrier weight ``s`` grows geometrically until the
    duality gap estimate ``sum_k d_k / s`` is small.

    Args:
        lmis (list[AffineLmi]): strict matrix inequalities.
        c (ndarray[float]): objective vector.

    Keyword Args:
        mu (float): growth factor of the barrier weight.
        tol (float): relative duality gap at which to stop.
        newton_tol (float): Newton decrement at which a centering step ends.
        max_newton (int): Newton steps per centering.
        max_outer (int): number of barrier updates.
        stop (callable): ``stop(z)`` returning ``True`` ends the path early.

    Attributes:
        log (logging.logger): logger instance from logging.
        lmis (list[AffineLmi]): strict matrix inequalities.
        c (ndarray[float]): objective vector.

    """

    def __init__(self, lmis, c, **kwargs):
        self.log = logging.getLogger(__name__)
        self.log.setLevel(config.LOG_LEVEL)
        self.lmis = list(lmis)
        self.c = np.asarray(c, dtype=float)
        for lmi in self.lmis:
            if lmi.num_variables != self.c.size:
                raise DimensionMismatch('LMI \'{:s}\' has {:d} variables, expected '
                                        '{:d}!'.format(lmi.name, lmi.num_variables,
                                                       self.c.size))
        self.mu = kwargs.get('mu', config.BARRIER_MU)
        self.tol = kwargs.get('tol', config.BARRIER_TOL)
        self.newton_tol = kwargs.get('newton_tol', config.NEWTON_TOL)
        self.max_newton = kwargs.get('max_newton', config.MAX_NEWTON)
        self.max_outer = kwargs.get('max_outer', config.MAX_OUTER)
        self.stop = kwargs.get('stop', None)
        self.total_size = sum(lmi.size for lmi in self.lmis)

    def _factors(self, z):
        """Cholesky factors of all ``G_k(z)`` or ``None`` if one is not
        positive definite."""
        factors = []
        for lmi in self.lmis:
            try:
                factors.append(cho_factor(lmi.evaluate(z), lower=True))
            except LinAlgError:
                return None
        return factors

    def is_feasible(self, z):
        return self._factors(z) is not None

    def _barrier(self, factors):
        return -sum(2*np.sum(np.log(np.diag(chol))) for chol, _ in factors)

    def _derivatives(self, factors):
        grad = np.zeros(self.c.size)
        hess = np.zeros((self.c.size, self.c.size))
        for lmi, factor in zip(self.lmis, factors):
            # G^-1 F_j for all j
            products = np.array([cho_solve(factor, F_j) for F_j in lmi.F])
            grad -= np.einsum('jaa->j', products)
            hess += np.einsum('jab,lba->jl', products, products)
        return grad, hess

    def _center(self, z, weight):
        steps = 0
        factors = self._factors(z)
        value = weight*self.c @ z + self._barrier(factors)
        for steps in range(1, self.max_newton + 1):
            grad, hess = self._derivatives(factors)
            grad += weight*self.c
            try:
                dz = -np.linalg.solve(hess, grad)
            except np.linalg.LinAlgError:
                raise NumericalFailure('Singular Newton system at barrier weight '
                                       '{:g}!'.format(weight))
            decrement = -grad @ dz
            if not np.isfinite(decrement):
                raise NumericalFailure('Non-finite Newton decrement!')
            if decrement/2 <= self.newton_tol:
                return z, steps, True
            step = 1.0
            while True:
                candidate = z + step*dz
                candidate_factors = self._factors(candidate)
                if candidate_factors is not None:
                    candidate_value = weight*self.c @ candidate \
                        + self._barrier(candidate_factors)
                    if decrement <= FULL_STEP_DECREMENT or \
                            candidate_value <= value - 0.25*step*decrement:
                        break
                step *= 0.5
                if step < 1e-14:
                    return z, steps, False
            z, factors, value = candidate, candidate_factors, candidate_value
        return z, steps, False

    def solve(self, z0, weight=1.0):
        """solve

        Follows the central path from the strictly feasible point ``z0``.

        Args:
            z0 (ndarray[float]): strictly feasible starting point.
            weight (float, optional): initial barrier weight - defaults to 1.

        Returns:
            result (SdpResult): last iterate and iteration counts.

        """
        z = np.asarray(z0, dtype=float).copy()
        if not self.is_feasible(z):
            raise NumericalFailure('Starting point is not strictly feasible!')
        newton_total = 0
        converged = False
        outer = 0
        for outer in range(1, self.max_outer + 1):
            z, steps, centered = self._center(z, weight)
            newton_total += steps
            objective = float(self.c @ z)
            gap = self.total_size/weight
            self.log.debug('Barrier iteration {:d}: weight {:.3g}, objective {:.6g}, '
                           'gap {:.3g}, {:d} Newton steps'.format(outer, weight, objective,
                                                                  gap, steps))
            if not centered:
                if outer == 1:
                    raise NumericalFailure('Newton centering broke down at the first '
                                           'barrier weight!')
                self.log.warning('Newton centering stalled at weight {:.3g}, returning '
                                 'the last strictly feasible iterate'.format(weight))
                break
            if self.stop is not None and self.stop(z):
                converged = True
                break
            if gap <= self.tol*max(1.0, abs(objective)):
                converged = True
                break
            weight *= self.mu
        return SdpResult(z, float(self.c @ z), converged, outer, newton_total)
