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
from scipy.linalg import block_diag, lstsq

from .exceptions import DimensionMismatch, NotStabilizable, SingularReference
from .helpers import as_matrix, check_finite, unstack
from .nonlinearity import stacked_residual

__all__ = ['AgentModel', 'GainSet', 'ClosedLoopState', 'ReferencePoint',
           'TransformedBlocks', 'control_input', 'controller_derivatives',
           'solve_reference_point', 'assemble_transformed_blocks',
           'closed_loop_matrices', 'to_transformed', 'from_transformed',
           'shifted_transformed_derivative', 'block_diagonal']

__docformat__ = 'restructuredtext'

log = logging.getLogger(__name__)
log.setLevel(config.LOG_LEVEL)

PBH_TOL = 1e-8


class AgentModel(object):
    """AgentModel

    Homogeneous linear agent ``dx_i/dt = A x_i + B0 phi_i(u_i, t)``.

    Args:
        A (ndarray[float]): n x n state matrix.
        B0 (ndarray[float]): n x m input matrix with full row rank.

    Keyword Args:
        check (bool): verify rank and stabilizability - defaults to ``True``.

    Attributes:
        log (logging.logger): logger instance from logging.
        A (ndarray[float]): state matrix.
        B0 (ndarray[float]): input matrix.
        n (int): state dimension.
        m (int): input dimension.

    """

    def __init__(self, A, B0, **kwargs):
        self.log = logging.getLogger(__name__)
        self.log.setLevel(config.LOG_LEVEL)
        self.A = as_matrix(A, name='A')
        self.n = self.A.shape[0]
        if self.A.shape != (self.n, self.n):
            raise DimensionMismatch('A must be square, got shape {}!'.format(self.A.shape))
        self.B0 = as_matrix(B0, name='B0')
        if self.B0.shape[0] != self.n:
            raise DimensionMismatch('B0 must have {:d} rows, got {:d}!'.format(
                self.n, self.B0.shape[0]))
        self.m = self.B0.shape[1]
        if kwargs.get('check', True):
            self.check_assumptions()

    @classmethod
    def from_dict(cls, data):
        return cls(data['A'], data['B0'])

    def to_dict(self):
        return {'A': self.A.tolist(), 'B0': self.B0.tolist()}

    def check_assumptions(self):
        """check_assumptions

        Raises ``NotStabilizable`` unless ``B0`` has full row rank and every
        eigenvalue of ``A`` with non-negative real part passes the PBH test
        ``rank [A - lambda I, B0] = n``.

        """
        rank = np.linalg.matrix_rank(self.B0, tol=PBH_TOL)
        if rank < self.n:
            raise NotStabilizable('B0 must have full row rank {:d}, got rank '
                                  '{:d}!'.format(self.n, rank))
        for eig in np.linalg.eigvals(self.A):
            if eig.real < -PBH_TOL:
                continue
            pencil = np.hstack([self.A - eig*np.eye(self.n), self.B0])
            if np.linalg.matrix_rank(pencil, tol=PBH_TOL) < self.n:
                raise NotStabilizable('Mode {:.4g} of A is not stabilizable!'.format(eig))

    def input_matrix(self, beta):
        """Scaled input matrix ``B = beta B0``."""
        return beta*self.B0


class GainSet(object):
    """GainSet

    The four m x n feedback gains of ``u_i = K1 x_i + K2 v_i + K3 zeta_i +
    K4 eta_i``.

    Args:
        K1 (ndarray[float]): gain on the agent state.
        K2 (ndarray[float]): gain on the gradient-tracking state v.
        K3 (ndarray[float]): gain on the optimizer estimate zeta.
        K4 (ndarray[float]): gain on the integral state eta.

    """

    def __init__(self, K1, K2, K3, K4):
        self.K1 = as_matrix(K1, name='K1')
        shape = self.K1.shape
        self.K2 = as_matrix(K2, shape, name='K2')
        self.K3 = as_matrix(K3, shape, name='K3')
        self.K4 = as_matrix(K4, shape, name='K4')
        self.m, self.n = shape

    @classmethod
    def from_matrix(cls, K, n):
        """from_matrix

        Splits the m x 4n matrix ``K = [K1 K2 K3 K4]`` into column blocks.

        Args:
            K (ndarray[float]): m x 4n gain.
            n (int): state dimension.

        Returns:
            gains (GainSet): the gains.

        """
        K = as_matrix(K, name='K')
        if K.shape[1] != 4*n:
            raise DimensionMismatch('K must have {:d} columns, got {:d}!'.format(
                4*n, K.shape[1]))
        return cls(*[K[:, k*n:(k + 1)*n] for k in range(4)])

    @classmethod
    def from_dict(cls, data, n):
        if 'K' in data:
            return cls.from_matrix(data['K'], n)
        return cls(data['K1'], data['K2'], data['K3'], data['K4'])

    def to_dict(self):
        return {'K': self.K.tolist()}

    @property
    def K(self):
        """Stacked gain ``[K1 K2 K3 K4]``."""
        return np.hstack([self.K1, self.K2, self.K3, self.K4])

    @property
    def K_check(self):
        """Gain ``[K1 K3 K4]`` acting on the consensus block."""
        return np.hstack([self.K1, self.K3, self.K4])

    def check_dimensions(self, model):
        if (self.m, self.n) != (model.m, model.n):
            raise DimensionMismatch('Gains are {:d} x {:d} but the agent model needs '
                                    '{:d} x {:d}!'.format(self.m, self.n, model.m, model.n))


class ClosedLoopState(object):
    """ClosedLoopState

    Stacked agent and controller states, each an nN-vector ordered agent by
    agent.

    Args:
        x (ndarray[float]): agent states.
        v (ndarray[float]): gradient-tracking states.
        zeta (ndarray[float]): optimizer estimates.
        eta (ndarray[float]): integral states.

    """

    def __init__(self, x, v, zeta, eta):
        self.x = check_finite(x, 'x').ravel()
        self.v = check_finite(v, 'v').ravel()
        self.zeta = check_finite(zeta, 'zeta').ravel()
        self.eta = check_finite(eta, 'eta').ravel()
        if not (self.x.size == self.v.size == self.zeta.size == self.eta.size):
            raise DimensionMismatch('x, v, zeta and eta must have equal length!')

    @classmethod
    def from_vector(cls, vector):
        """Splits a 4nN-vector ``[x; v; zeta; eta]``."""
        vector = np.asarray(vector, dtype=float).ravel()
        if vector.size % 4:
            raise DimensionMismatch('State vector length must be a multiple of 4!')
        return cls(*np.split(vector, 4))

    @classmethod
    def zeros_like(cls, x):
        """Agent states ``x`` with all controller states zero."""
        x = check_finite(x, 'x').ravel()
        return cls(x, np.zeros_like(x), np.zeros_like(x), np.zeros_like(x))

    def as_vector(self):
        return np.concatenate([self.x, self.v, self.zeta, self.eta])


class ReferencePoint(object):
    """ReferencePoint

    Constant steady state ``(x_bar, v_bar, zeta_bar, eta_bar, u_bar)`` of the
    closed loop with ``x_bar = 1 (x) x_star``.

    Attributes:
        x_star (ndarray[float]): global optimizer.
        x_bar (ndarray[float]): stacked agent states.
        v_bar (ndarray[float]): stacked gradient-tracking states.
        zeta_bar (ndarray[float]): stacked optimizer estimates.
        eta_bar (ndarray[float]): stacked integral states.
        u_bar (ndarray[float]): stacked inputs.

    """

    def __init__(self, x_star, x_bar, v_bar, zeta_bar, eta_bar, u_bar):
        self.x_star = x_star
        self.x_bar = x_bar
        self.v_bar = v_bar
        self.zeta_bar = zeta_bar
        self.eta_bar = eta_bar
        self.u_bar = u_bar

    def as_state(self):
        return ClosedLoopState(self.x_bar, self.v_bar, self.zeta_bar, self.eta_bar)

    def w_star(self, nonlinearities, t):
        """Fictitious input ``w*(t) = phi'(u_bar, t)`` as N x m rows."""
        rows = unstack(self.u_bar, self.x_bar.size//self.x_star.size)
        return stacked_residual(nonlinearities, rows, t)

    def residuals(self, model, bounds, spectrum, objs, gains):
        """residuals

        Norms of the steady-state equations

        - ``a``: ``A x_bar_i + B u_bar_i``
        - ``b``: ``-(L (x) I) x_bar``
        - ``c``: ``-(L (x) I) x_bar + v_bar - grad f(x_bar)``
        - ``d``: ``x_bar - zeta_bar``
        - ``e``: ``u_bar - K [x_bar; v_bar; zeta_bar; eta_bar]``

        Returns:
            residuals (dict): residual norm per equation.

        """
        num_agents = spectrum.num_agents
        B = model.input_matrix(bounds.beta)
        x_rows = unstack(self.x_bar, num_agents)
        u_rows = unstack(self.u_bar, num_agents)
        laplace_x = (spectrum.laplacian @ x_rows).ravel()
        u_ctrl = control_input(gains, self.as_state())
        return {'a': float(np.linalg.norm(x_rows @ model.A.T + u_rows @ B.T)),
                'b': float(np.linalg.norm(laplace_x)),
                'c': float(np.linalg.norm(-laplace_x + self.v_bar - objs.gradient(self.x_bar))),
                'd': float(np.linalg.norm(self.x_bar - self.zeta_bar)),
                'e': float(np.linalg.norm(self.u_bar - u_ctrl))}


class TransformedBlocks(object):
    """TransformedBlocks

    Coefficient matrices of the shifted closed loop after the coordinate
    change with ``U (x) I``. The consensus block has the state
    ``(x, zeta, eta)`` of size 3n, every other block ``i = 2..N`` the state
    ``(x, v, zeta, eta)`` of size 4n.

    Attributes:
        n (int): state dimension.
        m (int): input dimension.
        ell (float): gradient Lipschitz constant.
        eigenvalues (ndarray[float]): Laplacian eigenvalues.
        basis (ndarray[float]): orthogonal matrix U.
        A1 (ndarray[float]): 3n x 3n consensus block.
        B1 (ndarray[float]): 3n x m input matrix of the consensus block.
        L1 (ndarray[float]): 3n x n gradient-residual matrix of the consensus
          block.
        A_blocks (list[ndarray[float]]): 4n x 4n blocks for ``i = 2..N``.
        B_prime (ndarray[float]): 4n x m input matrix.
        L_prime (ndarray[float]): 4n x n gradient-residual matrix.

    """

    def __init__(self, model, bounds, spectrum, objs):
        n = model.n
        eye = np.eye(n)
        zero = np.zeros((n, n))
        self.n = n
        self.m = model.m
        self.ell = objs.ell
        self.model = model
        self.bounds = bounds
        self.objs = objs
        self.eigenvalues = spectrum.eigenvalues
        self.basis = spectrum.basis
        self.num_agents = spectrum.num_agents
        B = model.input_matrix(bounds.beta)

        self.A1 = np.block([[model.A, zero, zero],
                            [-self.ell*eye, zero, zero],
                            [eye, -eye, zero]])
        self.B1 = np.vstack([B, np.zeros((2*n, self.m))])
        self.L1 = np.vstack([zero, -self.ell*eye, zero])
        self.B_prime = np.vstack([B, np.zeros((3*n, self.m))])
        self.L_prime = np.vstack([zero, zero, -self.ell*eye, zero])
        self.A_blocks = [self.block_matrix(lam) for lam in self.eigenvalues[1:]]

    def block_matrix(self, lam):
        """block_matrix

        4n x 4n matrix of the block with Laplacian eigenvalue ``lam``.

        Args:
            lam (float): Laplacian eigenvalue.

        Returns:
            block (ndarray[float]): coefficient matrix.

        """
        n = self.n
        eye = np.eye(n)
        zero = np.zeros((n, n))
        return np.block([[self.model.A, zero, zero, zero],
                         [-lam*eye, zero, zero, zero],
                         [-(lam + self.ell)*eye, eye, zero, zero],
                         [eye, zero, -eye, zero]])

    @property
    def size(self):
        """Length of the stacked transformed state."""
        return 3*self.n + 4*self.n*(self.num_agents - 1)


def control_input(gains, state):
    """control_input

    Stacked inputs ``u_i = K1 x_i + K2 v_i + K3 zeta_i + K4 eta_i``. Each row
    only combines the states of its own agent.

    Args:
        gains (GainSet): feedback gains.
        state (ClosedLoopState): closed-loop state.

    Returns:
        u (ndarray[float]): stacked mN-vector.

    """
    n = gains.n
    if state.x.size % n:
        raise DimensionMismatch('State length {:d} is not a multiple of n = {:d}!'.format(
            state.x.size, n))
    num_agents = state.x.size//n
    u = (unstack(state.x, num_agents) @ gains.K1.T
         + unstack(state.v, num_agents) @ gains.K2.T
         + unstack(state.zeta, num_agents) @ gains.K3.T
         + unstack(state.eta, num_agents) @ gains.K4.T)
    return u.ravel()


def controller_derivatives(spectrum, objs, state):
    """controller_derivatives

    Time derivatives of the controller states

    - ``dv/dt = -(L (x) I) x``
    - ``dzeta/dt = -(L (x) I) x + v - grad f(x)``
    - ``deta/dt = x - zeta``

    Args:
        spectrum (LaplacianSpectrum): Laplacian of the graph.
        objs (ObjectiveSet): local objectives.
        state (ClosedLoopState): closed-loop state.

    Returns:
        derivatives (tuple[ndarray[float]]): ``(dv, dzeta, deta)``.

    """
    num_agents = spectrum.num_agents
    if state.x.size != num_agents*objs.dim:
        raise DimensionMismatch('Expected a state of length {:d}, got {:d}!'.format(
            num_agents*objs.dim, state.x.size))
    laplace_x = (spectrum.laplacian @ unstack(state.x, num_agents)).ravel()
    dv = -laplace_x
    dzeta = -laplace_x + state.v - objs.gradient(state.x)
    deta = state.x - state.zeta
    return dv, dzeta, deta


def solve_reference_point(model, bounds, spectrum, objs, gains, x_star=None):
    """solve_reference_point

    Constant steady state of the closed loop. ``u_bar_i`` is the
    minimum-norm solution of ``B u_bar_i = -A x_star``, ``v_bar = grad
    f(x_bar)``, ``zeta_bar = x_bar`` and ``eta_bar_i`` solves
    ``K4 eta_bar_i = u_bar_i - (K1 + K3) x_star - K2 v_bar_i`` in the
    least-squares sense.

    Args:
        model (AgentModel): agent model.
        bounds (SectorBounds): sector bounds providing ``beta``.
        spectrum (LaplacianSpectrum): Laplacian of the graph.
        objs (ObjectiveSet): local objectives.
        gains (GainSet): feedback gains.
        x_star (ndarray[float], optional): known optimizer.

    Returns:
        reference (ReferencePoint): the steady state.

    """
    gains.check_dimensions(model)
    num_agents = spectrum.num_agents
    if objs.num_agents != num_agents or objs.dim != model.n:
        raise DimensionMismatch('Objectives do not match the graph or the agent model!')
    if x_star is None:
        x_star = objs.solve_global_optimizer()
    B = model.input_matrix(bounds.beta)

    u_agent = lstsq(B, -model.A @ x_star)[0]
    residual = np.linalg.norm(model.A @ x_star + B @ u_agent)
    if residual > config.RESIDUAL_TOL:
        raise SingularReference('B u = -A x* is inconsistent, residual {:g}!'.format(residual))

    x_bar = np.tile(x_star, num_agents)
    v_bar = objs.gradient(x_bar)
    zeta_bar = x_bar.copy()
    u_rows = np.tile(u_agent, (num_agents, 1))
    rhs = (u_rows - x_star @ (gains.K1 + gains.K3).T
           - unstack(v_bar, num_agents) @ gains.K2.T)
    eta_rows = lstsq(gains.K4, rhs.T)[0].T
    residual = np.linalg.norm(eta_rows @ gains.K4.T - rhs)
    if residual > config.RESIDUAL_TOL:
        raise SingularReference('K4 eta = u - K1 x - K2 v - K3 zeta has no solution, '
                                'residual {:g}!'.format(residual))

    reference = ReferencePoint(x_star, x_bar, v_bar, zeta_bar, eta_rows.ravel(),
                               u_rows.ravel())
    residuals = reference.residuals(model, bounds, spectrum, objs, gains)
    worst = max(residuals.values())
    if worst > config.RESIDUAL_TOL:
        raise SingularReference('Steady-state residuals {} exceed {:g}!'.format(
            residuals, config.RESIDUAL_TOL))
    log.info('Reference point with u_bar = {:s}'.format(np.array2string(u_agent)))
    return reference


def assemble_transformed_blocks(model, bounds, spectrum, objs):
    """assemble_transformed_blocks

    Args:
        model (AgentModel): agent model.
        bounds (SectorBounds): sector bounds providing ``beta``.
        spectrum (LaplacianSpectrum): Laplacian of a connected graph.
        objs (ObjectiveSet): local objectives providing ``ell``.

    Returns:
        blocks (TransformedBlocks): consensus block and one block per nonzero
        Laplacian eigenvalue.

    """
    if objs.dim != model.n or objs.num_agents != spectrum.num_agents:
        raise DimensionMismatch('Objectives do not match the graph or the agent model!')
    if not spectrum.lambda_2 > 0:
        raise DimensionMismatch('The transformed blocks need lambda_2 > 0!')
    return TransformedBlocks(model, bounds, spectrum, objs)


def closed_loop_matrices(blocks, gains):
    """closed_loop_matrices

    Args:
        blocks (TransformedBlocks): transformed coefficient matrices.
        gains (GainSet): feedback gains.

    Returns:
        matrices (tuple): ``A1 + B1 K_check`` and the list of
        ``A_i + B' K`` for ``i = 2..N``.

    """
    first = blocks.A1 + blocks.B1 @ gains.K_check
    others = [A_i + blocks.B_prime @ gains.K for A_i in blocks.A_blocks]
    return first, others


def _split_transformed(blocks, xi):
    n = blocks.n
    num_agents = blocks.num_agents
    xi = check_finite(xi, 'xi').ravel()
    if xi.size != blocks.size:
        raise DimensionMismatch('Transformed state must have length {:d}, got {:d}!'.format(
            blocks.size, xi.size))
    rows = np.zeros((num_agents, 4, n))
    rows[0, [0, 2, 3]] = xi[:3*n].reshape(3, n)
    rows[1:] = xi[3*n:].reshape(num_agents - 1, 4, n)
    return rows


def to_transformed(blocks, reference, state):
    """to_transformed

    Maps an original-coordinates state through the shift by the reference
    point and ``U^T (x) I``. The v-component of the consensus block vanishes
    when ``sum_i v_i = 0`` and is dropped.

    Args:
        blocks (TransformedBlocks): transformed coefficient matrices.
        reference (ReferencePoint): steady state.
        state (ClosedLoopState): closed-loop state.

    Returns:
        xi (ndarray[float]): stacked transformed state.

    """
    num_agents = blocks.num_agents
    shifted = [state.x - reference.x_bar, state.v - reference.v_bar,
               state.zeta - reference.zeta_bar, state.eta - reference.eta_bar]
    rows = np.stack([blocks.basis.T @ unstack(s, num_agents) for s in shifted], axis=1)
    return np.concatenate([rows[0, [0, 2, 3]].ravel(), rows[1:].ravel()])


def from_transformed(blocks, reference, xi):
    """Inverse of :func:`to_transformed`."""
    num_agents = blocks.num_agents
    rows = _split_transformed(blocks, xi)
    parts = [(blocks.basis @ rows[:, k]).ravel() for k in range(4)]
    return ClosedLoopState(parts[0] + reference.x_bar, parts[1] + reference.v_bar,
                           parts[2] + reference.zeta_bar, parts[3] + reference.eta_bar)


def shifted_transformed_derivative(blocks, gains, reference, nonlinearities, t, xi):
    """shifted_transformed_derivative

    Right-hand side of the shifted closed loop in transformed coordinates

    ``dxi_i/dt = (A_i + B' K) xi_i - B' w_i - L' g_i - B' w*_i``

    with ``w = (U^T (x) I)(phi'(u, t) - phi'(u_bar, t))``,
    ``g = (U^T (x) I)(psi(x) - psi(x_bar))`` and the fictitious input
    ``w* = (U^T (x) I) phi'(u_bar, t)``. The consensus block uses
    ``A1``, ``B1``, ``L1`` and ``K_check``.

    Args:
        blocks (TransformedBlocks): transformed coefficient matrices.
        gains (GainSet): feedback gains.
        reference (ReferencePoint): steady state.
        nonlinearities (InputNonlinearity|list): input nonlinearities.
        t (float): time.
        xi (ndarray[float]): stacked transformed state.

    Returns:
        dxi (ndarray[float]): time derivative of ``xi``.

    """
    n = blocks.n
    num_agents = blocks.num_agents
    basis = blocks.basis
    rows = _split_transformed(blocks, xi)

    u_hat = np.einsum('ikn,mkn->im', rows, gains.K.reshape(gains.m, 4, n))
    u = (basis @ u_hat).ravel() + reference.u_bar
    x = (basis @ rows[:, 0]).ravel() + reference.x_bar

    w_star = reference.w_star(nonlinearities, t)
    residual = stacked_residual(nonlinearities, unstack(u, num_agents), t)
    w = basis.T @ (residual - w_star)
    w_star_hat = basis.T @ w_star
    g = basis.T @ unstack(blocks.objs.psi_transform(x)
                          - blocks.objs.psi_transform(reference.x_bar), num_agents)

    first, others = closed_loop_matrices(blocks, gains)
    xi_1 = rows[0, [0, 2, 3]].ravel()
    dxi = [first @ xi_1 - blocks.B1 @ (w[0] + w_star_hat[0]) - blocks.L1 @ g[0]]
    for i, matrix in enumerate(others, start=1):
        dxi.append(matrix @ rows[i].ravel()
                   - blocks.B_prime @ (w[i] + w_star_hat[i]) - blocks.L_prime @ g[i])
    return np.concatenate(dxi)


def block_diagonal(blocks, gains):
    """Full transformed closed-loop matrix ``diag(A1 + B1 K_check, A_i + B' K)``."""
    first, others = closed_loop_matrices(blocks, gains)
    return block_diag(first, *others)
