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
from scipy.linalg import eigvalsh, solve

from .exceptions import DimensionMismatch, InvalidBounds, NoConvergence
from .helpers import as_matrix, check_finite, unstack

__all__ = ['Objective', 'QuadraticObjective', 'CallableObjective', 'ObjectiveSet',
           'check_gradient']

__docformat__ = 'restructuredtext'


class Objective(object):
    """Objective

    Interface of a local, strongly convex objective ``f_i`` with Lipschitz
    gradient. Child classes implement :meth:`value` and :meth:`gradient` and
    declare the strong-convexity modulus ``mu`` and the Lipschitz constant
    ``ell``.

    Attributes:
        dim (int): dimension n of the decision variable.
        mu (float): strong-convexity modulus.
        ell (float): gradient Lipschitz constant.

    """

    dim = 0
    mu = 0.0
    ell = 0.0

    def value(self, x):
        raise NotImplementedError('Needs to be implemented!')

    def gradient(self, x):
        raise NotImplementedError('Needs to be implemented!')


class QuadraticObjective(Objective):
    """QuadraticObjective

    ``f(x) = 1/2 (x - c)^T Q (x - c)`` with symmetric positive-definite ``Q``.

    Args:
        curvature (array_like): n x n matrix Q.
        center (array_like): n-vector c.

    Attributes:
        curvature (ndarray[float]): Q.
        center (ndarray[float]): c.
        dim (int): n.
        mu (float): smallest eigenvalue of Q.
        ell (float): largest eigenvalue of Q.

    """

    def __init__(self, curvature, center):
        self.center = check_finite(center, 'center').ravel()
        self.dim = self.center.size
        self.curvature = as_matrix(curvature, (self.dim, self.dim), 'curvature')
        if not np.allclose(self.curvature, self.curvature.T, rtol=0, atol=1e-12):
            raise ValueError('Curvature matrix must be symmetric!')
        eigs = eigvalsh(self.curvature)
        if eigs[0] <= 0:
            raise ValueError('Curvature matrix must be positive definite!')
        self.mu = float(eigs[0])
        self.ell = float(eigs[-1])

    @classmethod
    def from_dict(cls, data):
        """Creates the objective from ``{"type": "quadratic", "Q": .., "c": ..}``."""
        if data.get('type', 'quadratic') != 'quadratic':
            raise ValueError('Unknown objective type \'{:s}\'!'.format(str(data['type'])))
        return cls(data['Q'], data['c'])

    def to_dict(self):
        return {'type': 'quadratic', 'Q': self.curvature.tolist(),
                'c': self.center.tolist()}

    def value(self, x):
        diff = check_finite(x, 'x') - self.center
        return 0.5*float(diff @ self.curvature @ diff)

    def gradient(self, x):
        """gradient

        Gradient ``Q (x - c)``.

        Args:
            x (ndarray[float]): n-vector.

        Returns:
            grad (ndarray[float]): n-vector.

        """
        x = check_finite(x, 'x')
        return self.curvature @ (x - self.center)


class CallableObjective(Objective):
    """CallableObjective

    General objective given by value and gradient callables. ``mu`` and
    ``ell`` are declared by the user; :meth:`ObjectiveSet.verify_gradient_bounds`
    checks them on samples.

    Args:
        value_fn (callable): ``f(x) -> float``.
        gradient_fn (callable): ``grad f(x) -> ndarray``.
        dim (int): dimension n.
        mu (float): declared strong-convexity modulus.
        ell (float): declared gradient Lipschitz constant.

    """

    def __init__(self, value_fn, gradient_fn, dim, mu, ell):
        self.value_fn = value_fn
        self.gradient_fn = gradient_fn
        self.dim = int(dim)
        self.mu = float(mu)
        self.ell = float(ell)

    def value(self, x):
        return float(self.value_fn(check_finite(x, 'x')))

    def gradient(self, x):
        return check_finite(self.gradient_fn(check_finite(x, 'x')), 'gradient')


class ObjectiveSet(object):
    """ObjectiveSet

    The N private local objectives of the agents together with the common
    constants ``mu`` and ``ell``. Agent ``i`` only ever evaluates
    ``locals[i]``.

    Args:
        objectives (list[Objective]): one objective per agent.

    Keyword Args:
        mu (float): strong-convexity modulus - computed for quadratics
          if omitted.
        ell (float): gradient Lipschitz constant - computed for quadratics
          if omitted.
        strict (bool): raise if declared constants contradict the
          eigenvalue bounds of quadratic objectives, otherwise only warn -
          defaults to ``True``.

    Attributes:
        log (logging.logger): logger instance from logging.
        locals (list[Objective]): local objectives.
        num_agents (int): N.
        dim (int): n.
        mu (float): strong-convexity modulus.
        ell (float): gradient Lipschitz constant.

    """

    def __init__(self, objectives, **kwargs):
        self.log = logging.getLogger(__name__)
        self.log.setLevel(config.LOG_LEVEL)
        self.locals = list(objectives)
        if len(self.locals) == 0:
            raise DimensionMismatch('At least one objective is required!')
        self.num_agents = len(self.locals)
        self.dim = self.locals[0].dim
        if any(obj.dim != self.dim for obj in self.locals):
            raise DimensionMismatch('All objectives must share the same dimension!')

        mu = kwargs.get('mu', None)
        ell = kwargs.get('ell', None)
        self.mu = float(min(obj.mu for obj in self.locals) if mu is None else mu)
        self.ell = float(max(obj.ell for obj in self.locals) if ell is None else ell)
        if not (self.mu > 0):
            raise InvalidBounds('mu must be positive, got {:g}!'.format(self.mu))
        if self.mu > self.ell:
            raise InvalidBounds('mu = {:g} must not exceed ell = {:g}!'.format(
                self.mu, self.ell))

        quadratics = [obj for obj in self.locals if isinstance(obj, QuadraticObjective)]
        if any(self.mu > obj.mu + 1e-12 or self.ell < obj.ell - 1e-12 for obj in quadratics):
            message = ('Declared mu = {:g}, ell = {:g} are not valid bounds for the '
                       'curvature eigenvalues!'.format(self.mu, self.ell))
            if kwargs.get('strict', True):
                raise InvalidBounds(message)
            self.log.warning(message)

        # stacked curvature for fast evaluation if all objectives are quadratic
        if len(quadratics) == self.num_agents:
            self._curvatures = np.array([obj.curvature for obj in self.locals])
            self._centers = np.array([obj.center for obj in self.locals])
        else:
            self._curvatures = None
            self._centers = None

    @classmethod
    def from_dict(cls, data):
        """from_dict

        Creates the set from ``{"locals": [...], "mu": .., "ell": ..}`` or
        from a plain list of objective dictionaries.

        """
        if isinstance(data, list):
            data = {'locals': data}
        objectives = [QuadraticObjective.from_dict(entry) for entry in data['locals']]
        return cls(objectives, mu=data.get('mu', None), ell=data.get('ell', None))

    @property
    def mu_prime(self):
        """Sector bound ``(ell - mu)/ell`` of the psi transform."""
        return (self.ell - self.mu)/self.ell

    def gradient(self, x):
        """gradient

        Stacked gradient ``[grad f_1(x_1); ...; grad f_N(x_N)]``.

        Args:
            x (ndarray[float]): stacked nN-vector.

        Returns:
            grad (ndarray[float]): stacked nN-vector.

        """
        rows = unstack(check_finite(x, 'x'), self.num_agents)
        if rows.shape[1] != self.dim:
            raise DimensionMismatch('Expected {:d} entries per agent, got {:d}!'.format(
                self.dim, rows.shape[1]))
        if self._curvatures is not None:
            grad = np.einsum('iab,ib->ia', self._curvatures, rows - self._centers)
        else:
            grad = np.array([obj.gradient(row) for obj, row in zip(self.locals, rows)])
        return grad.ravel()

    def value(self, x):
        """Agent-wise sum ``sum_i f_i(x_i)`` for a stacked nN-vector."""
        rows = unstack(check_finite(x, 'x'), self.num_agents)
        if self._curvatures is not None:
            diff = rows - self._centers
            return 0.5*float(np.einsum('ia,iab,ib->', diff, self._curvatures, diff))
        return float(sum(obj.value(row) for obj, row in zip(self.locals, rows)))

    def total_value(self, z):
        """Global objective ``f(z) = sum_i f_i(z)`` at a common n-vector."""
        return self.value(np.tile(check_finite(z, 'z'), self.num_agents))

    def psi_transform(self, x):
        """psi_transform

        ``psi(x) = x - (1/ell) grad f(x)``, stacked agent-wise.

        Args:
            x (ndarray[float]): stacked nN-vector.

        Returns:
            psi (ndarray[float]): stacked nN-vector.

        """
        x = check_finite(x, 'x')
        return x - self.gradient(x)/self.ell

    def solve_global_optimizer(self, tol=1e-10, max_iter=None):
        """solve_global_optimizer

        Minimizer of ``f(z) = sum_i f_i(z)``. Quadratics are solved in closed
        form ``(sum Q_i)^-1 sum Q_i c_i``, general objectives by gradient
        descent with step ``1/(N ell)`` until the summed gradient is below
        ``tol``.

        Args:
            tol (float, optional): residual tolerance - defaults to 1e-10.
            max_iter (int, optional): iteration budget of the descent.

        Returns:
            x_star (ndarray[float]): optimizer.

        """
        if max_iter is None:
            max_iter = config.OPTIMIZER_MAX_ITER

        if self._curvatures is not None:
            x_star = solve(self._curvatures.sum(axis=0),
                           np.einsum('iab,ib->a', self._curvatures, self._centers),
                           assume_a='pos')
            # one refinement step against rounding
            x_star = x_star - solve(self._curvatures.sum(axis=0),
                                    self.summed_gradient(x_star), assume_a='pos')
        else:
            x_star = np.zeros(self.dim)
            step = 1.0/(self.num_agents*self.ell)
            for k in range(max_iter):
                residual = self.summed_gradient(x_star)
                if np.linalg.norm(residual) <= tol:
                    break
                x_star = x_star - step*residual
            else:
                raise NoConvergence('Gradient descent did not reach residual {:g} within '
                                    '{:d} iterations!'.format(tol, max_iter))

        residual = np.linalg.norm(self.summed_gradient(x_star))
        if residual > tol:
            raise NoConvergence('Optimizer residual {:g} exceeds {:g}!'.format(residual, tol))
        self.log.info('Global optimizer x* = {:s}'.format(np.array2string(x_star)))
        return x_star

    def summed_gradient(self, z):
        """First-order optimality residual ``sum_i grad f_i(z)``."""
        grad = self.gradient(np.tile(check_finite(z, 'z'), self.num_agents))
        return unstack(grad, self.num_agents).sum(axis=0)

    def verify_psi_sector(self, samples):
        """verify_psi_sector

        Evaluates the incremental sector inequality of the psi transform
        ``(psi(x') - psi(x))^T [(psi(x') - psi(x)) - mu' (x' - x)] <= 0``
        on sample pairs.

        Args:
            samples (list[tuple]): pairs ``(x, x_prime)`` of stacked vectors.

        Returns:
            report (dict): ``max_violation``, ``num_samples``, ``passed``.

        """
        max_violation = -np.inf
        for x, x_prime in samples:
            dpsi = self.psi_transform(x_prime) - self.psi_transform(x)
            dx = np.asarray(x_prime, dtype=float) - np.asarray(x, dtype=float)
            lhs = float(dpsi @ (dpsi - self.mu_prime*dx))
            max_violation = max(max_violation, lhs)
        return {'max_violation': max_violation,
                'num_samples': len(samples),
                'mu_prime': self.mu_prime,
                'passed': bool(max_violation <= 1e-12)}

    def verify_gradient_bounds(self, samples, tol=1e-10):
        """verify_gradient_bounds

        Samples the strong-convexity and Lipschitz inequalities
        ``mu |dx|^2 <= dgrad^T dx <= ell |dx|^2`` agent-wise.

        Args:
            samples (list[tuple]): pairs ``(x, x_prime)`` of stacked vectors.
            tol (float, optional): absolute slack - defaults to 1e-10.

        Returns:
            report (dict): largest violations of both inequalities.

        """
        convexity = -np.inf
        lipschitz = -np.inf
        for x, x_prime in samples:
            dgrad = unstack(self.gradient(x_prime) - self.gradient(x), self.num_agents)
            dx = unstack(np.asarray(x_prime, dtype=float) - np.asarray(x, dtype=float),
                         self.num_agents)
            inner = np.einsum('ia,ia->i', dgrad, dx)
            sq = np.einsum('ia,ia->i', dx, dx)
            convexity = max(convexity, float(np.max(self.mu*sq - inner)))
            lipschitz = max(lipschitz, float(np.max(inner - self.ell*sq)))
        return {'convexity_violation': convexity,
                'lipschitz_violation': lipschitz,
                'num_samples': len(samples),
                'passed': bool(convexity <= tol and lipschitz <= tol)}


def check_gradient(objective, x, step=1e-6):
    """check_gradient

    Relative deviation between the analytic gradient and central finite
    differences of :meth:`Objective.value`.

    Args:
        objective (Objective): objective to check.
        x (ndarray[float]): evaluation point.
        step (float, optional): finite-difference step - defaults to 1e-6.

    Returns:
        error (float): ``|g_fd - g| / max(|g|, 1)``.

    """
    x = check_finite(x, 'x')
    fd = np.zeros_like(x)
    for k in range(x.size):
        e = np.zeros_like(x)
        e[k] = step
        fd[k] = (objective.value(x + e) - objective.value(x - e))/(2*step)
    grad = objective.gradient(x)
    return float(np.linalg.norm(fd - grad)/max(np.linalg.norm(grad), 1.0))
