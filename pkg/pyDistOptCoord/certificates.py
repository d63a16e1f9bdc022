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
from collections import namedtuple

import numpy as np
from scipy.linalg import solve

from .exceptions import (DimensionMismatch, Infeasible, InvalidSector, NumericalFailure,
                         SynthesisInfeasible)
from .helpers import as_matrix, max_eig, min_eig, sym_basis, sym_from_vector
from .protocol import GainSet, assemble_transformed_blocks
from .sdp import AffineLmi, BarrierSolver

__all__ = ['LmiProblem', 'Certificate', 'SuboptimalityBound', 'build_lmi',
           'verify_certificate', 'certified_margin', 'bound_factor', 'solve_feasibility',
           'synthesize_gain', 'suboptimality_bound']

__docformat__ = 'restructuredtext'

log = logging.getLogger(__name__)
log.setLevel(config.LOG_LEVEL)


def _check_sector(gamma, mu_prime):
    if not 0 <= gamma <= 1:
        raise InvalidSector('gamma must lie in [0, 1], got {:g}!'.format(gamma))
    if not 0 <= mu_prime < 1:
        raise InvalidSector('mu\' must lie in [0, 1), got {:g}!'.format(mu_prime))


class LmiProblem(object):
    """LmiProblem

    Matrix inequalities certifying the closed loop for fixed gains. For a
    Laplacian eigenvalue ``lam`` the block

    ``[[A_c^T P + P A_c + rho I, K'^T - P [B' L']], [*, -2 I]]``

    with ``A_c = A_i(lam) + B' K`` and ``K' = [gamma K; mu' J]`` must be
    negative definite; the consensus block uses ``A1 + B1 K_check``,
    ``[B1 L1]`` and ``K_check' = [gamma K_check; mu' J_check]`` with
    ``P_check``. Both are affine in ``lam`` and linear in ``P``.

    Args:
        blocks (TransformedBlocks): transformed coefficient matrices.
        gains (GainSet): feedback gains.
        gamma (float): residual sector bound of the input nonlinearity.
        mu_prime (float): sector bound of the psi transform.

    Attributes:
        blocks (TransformedBlocks): transformed coefficient matrices.
        gains (GainSet): feedback gains.
        gamma (float): residual sector bound.
        mu_prime (float): psi sector bound.
        n (int): state dimension.
        m (int): input dimension.
        lambda_2 (float): algebraic connectivity.
        lambda_max (float): largest Laplacian eigenvalue.

    """

    def __init__(self, blocks, gains, gamma, mu_prime):
        _check_sector(gamma, mu_prime)
        self.blocks = blocks
        self.gains = gains
        self.gamma = float(gamma)
        self.mu_prime = float(mu_prime)
        self.n = blocks.n
        self.m = blocks.m
        self.ell = blocks.ell
        self.eigenvalues = blocks.eigenvalues
        self.lambda_2 = float(blocks.eigenvalues[1])
        self.lambda_max = float(blocks.eigenvalues[-1])

        n = self.n
        J = np.hstack([np.eye(n), np.zeros((n, 3*n))])
        J_check = np.hstack([np.eye(n), np.zeros((n, 2*n))])
        self.K_prime = np.vstack([self.gamma*gains.K, self.mu_prime*J])
        self.K_check_prime = np.vstack([self.gamma*gains.K_check, self.mu_prime*J_check])
        self.BL = np.hstack([blocks.B_prime, blocks.L_prime])
        self.BL_one = np.hstack([blocks.B1, blocks.L1])
        self.closed_one = blocks.A1 + blocks.B1 @ gains.K_check

    @property
    def size_i(self):
        """Size 4n of the certificate P."""
        return 4*self.n

    @property
    def size_one(self):
        """Size 3n of the certificate P_check."""
        return 3*self.n

    @property
    def extreme_eigenvalues(self):
        """Distinct values among ``lambda_2`` and ``lambda_N``."""
        if abs(self.lambda_max - self.lambda_2) <= 1e-14:
            return [self.lambda_2]
        return [self.lambda_2, self.lambda_max]

    def closed_i(self, lam):
        return self.blocks.block_matrix(lam) + self.blocks.B_prime @ self.gains.K

    @staticmethod
    def _assemble(closed, P, K_prime, BL, rho):
        top = closed.T @ P + P @ closed + rho*np.eye(P.shape[0])
        off = K_prime.T - P @ BL
        corner = -2*np.eye(BL.shape[1])
        return np.block([[top, off], [off.T, corner]])

    def block_i(self, P, lam, rho=0.0):
        """block_i

        Assembled symmetric block for eigenvalue ``lam``.

        Args:
            P (ndarray[float]): 4n x 4n candidate.
            lam (float): Laplacian eigenvalue.
            rho (float, optional): margin added to the top-left block.

        Returns:
            block (ndarray[float]): matrix of size 4n + m + n.

        """
        P = as_matrix(P, (self.size_i, self.size_i), name='P')
        return self._assemble(self.closed_i(lam), P, self.K_prime, self.BL, rho)

    def block_one(self, P_check, rho=0.0):
        """block_one

        Assembled symmetric consensus block.

        Args:
            P_check (ndarray[float]): 3n x 3n candidate.
            rho (float, optional): margin added to the top-left block.

        Returns:
            block (ndarray[float]): matrix of size 3n + m + n.

        """
        P_check = as_matrix(P_check, (self.size_one, self.size_one), name='P_check')
        return self._assemble(self.closed_one, P_check, self.K_check_prime, self.BL_one, rho)

    def affinity_error(self, P):
        """Deviation of the block at the midpoint eigenvalue from the mean of
        the blocks at ``lambda_2`` and ``lambda_N``."""
        middle = self.block_i(P, 0.5*(self.lambda_2 + self.lambda_max))
        mean = 0.5*(self.block_i(P, self.lambda_2) + self.block_i(P, self.lambda_max))
        return float(np.max(np.abs(middle - mean)))


def build_lmi(model, bounds, objs, spectrum, gains):
    """build_lmi

    Args:
        model (AgentModel): agent model.
        bounds (SectorBounds): sector bounds, the declared ``gamma`` is used.
        objs (ObjectiveSet): local objectives providing ``mu'`` and ``ell``.
        spectrum (LaplacianSpectrum): Laplacian of a connected graph.
        gains (GainSet): feedback gains.

    Returns:
        problem (LmiProblem): block builders for the fixed gains.

    """
    gains.check_dimensions(model)
    _check_sector(bounds.gamma, objs.mu_prime)
    blocks = assemble_transformed_blocks(model, bounds, spectrum, objs)
    return LmiProblem(blocks, gains, bounds.gamma, objs.mu_prime)


class Certificate(object):
    """Certificate

    Args:
        P (ndarray[float]): symmetric 4n x 4n matrix.
        P_check (ndarray[float]): symmetric 3n x 3n matrix.
        rho (float, optional): certified margin.
        theta (float, optional): splitting parameter of the ISS argument.

    """

    def __init__(self, P, P_check, rho=None, theta=None):
        self.P = as_matrix(P, name='P')
        self.P_check = as_matrix(P_check, name='P_check')
        if self.P.shape[0] != self.P.shape[1] or self.P_check.shape[0] != self.P_check.shape[1]:
            raise DimensionMismatch('Certificate matrices must be square!')
        self.P = 0.5*(self.P + self.P.T)
        self.P_check = 0.5*(self.P_check + self.P_check.T)
        self.rho = rho
        self.theta = theta

    @classmethod
    def from_dict(cls, data):
        return cls(data['P'], data['P_check'], data.get('rho', None), data.get('theta', None))

    def to_dict(self):
        data = {'P': self.P.tolist(), 'P_check': self.P_check.tolist()}
        if self.rho is not None:
            data['rho'] = self.rho
        if self.theta is not None:
            data['theta'] = self.theta
        return data

    def scaled(self, factor):
        """Certificate ``(factor P, factor P_check)``."""
        return Certificate(factor*self.P, factor*self.P_check, self.rho, self.theta)


def _spectral_abscissa(matrix):
    return float(np.max(np.linalg.eigvals(matrix).real))


def verify_certificate(prob, cert, margin=None):
    """verify_certificate

    Evaluates the largest eigenvalue of every assembled block at
    ``lambda_2``, ``lambda_N`` and each actual Laplacian eigenvalue, the
    smallest eigenvalues of ``P`` and ``P_check`` and the spectral abscissae
    of the closed-loop block matrices.

    Args:
        prob (LmiProblem): matrix inequalities.
        cert (Certificate): candidate certificate.
        margin (float, optional): strictness margin - defaults to
          ``config.VERIFY_MARGIN``.

    Returns:
        report (dict): eigenvalues and ``passed``.

    """
    if margin is None:
        margin = config.VERIFY_MARGIN
    if cert.P.shape != (prob.size_i, prob.size_i) or \
            cert.P_check.shape != (prob.size_one, prob.size_one):
        raise DimensionMismatch('Certificate of sizes {} and {} does not fit the problem '
                                'with n = {:d}!'.format(cert.P.shape, cert.P_check.shape,
                                                        prob.n))
    block_one = max_eig(prob.block_one(cert.P_check))
    block_lambda_2 = max_eig(prob.block_i(cert.P, prob.lambda_2))
    block_lambda_n = max_eig(prob.block_i(cert.P, prob.lambda_max))
    blocks_all = [max_eig(prob.block_i(cert.P, lam)) for lam in prob.eigenvalues[1:]]
    min_eig_P = min_eig(cert.P)
    min_eig_P_check = min_eig(cert.P_check)
    worst = max([block_one, block_lambda_2, block_lambda_n] + blocks_all)
    report = {'min_eig_P': min_eig_P,
              'min_eig_P_check': min_eig_P_check,
              'block_one': block_one,
              'block_lambda_2': block_lambda_2,
              'block_lambda_N': block_lambda_n,
              'blocks_all': blocks_all,
              'max_block_eig': worst,
              'hurwitz_abscissa_one': _spectral_abscissa(prob.closed_one),
              'hurwitz_abscissa': max(_spectral_abscissa(prob.closed_i(lam))
                                      for lam in prob.eigenvalues[1:]),
              'affinity_error': prob.affinity_error(cert.P),
              'gamma': prob.gamma,
              'mu_prime': prob.mu_prime,
              'margin': margin}
    report['passed'] = bool(worst < -margin and min_eig_P > margin
                            and min_eig_P_check > margin)
    report['certified_rho'] = certified_margin(prob, cert) if report['passed'] else 0.0
    return report


def certified_margin(prob, cert, tol=1e-10, max_iter=100):
    """certified_margin

    Largest ``rho`` for which all blocks with ``+rho I`` in the top-left
    entry stay negative definite, found by bisection.

    Args:
        prob (LmiProblem): matrix inequalities.
        cert (Certificate): certificate.
        tol (float, optional): bisection tolerance.
        max_iter (int, optional): bisection budget.

    Returns:
        rho (float): certified margin, zero if the blocks fail at ``rho = 0``.

    """
    def worst(rho):
        values = [max_eig(prob.block_i(cert.P, lam, rho)) for lam in prob.extreme_eigenvalues]
        values.append(max_eig(prob.block_one(cert.P_check, rho)))
        return max(values)

    if worst(0.0) >= 0:
        return 0.0
    size_i = prob.size_i
    size_one = prob.size_one
    upper = min(-max_eig(prob.block_i(cert.P, lam)[:size_i, :size_i])
                for lam in prob.extreme_eigenvalues)
    upper = min(upper, -max_eig(prob.block_one(cert.P_check)[:size_one, :size_one]))
    lower = 0.0
    for _ in range(max_iter):
        if upper - lower <= tol*max(1.0, upper):
            break
        middle = 0.5*(lower + upper)
        if worst(middle) < 0:
            lower = middle
        else:
            upper = middle
    return lower


def _affine_terms(builder, basis):
    """Constant term and coefficients of a builder linear in its argument
    up to a constant."""
    F0 = builder(np.zeros_like(basis[0]))
    return F0, np.array([builder(E) - F0 for E in basis])


def _positivity_lmis(basis, name, num_leading):
    """``P >= p_min I`` and ``tr P <= trace_max`` for ``num_leading``
    variables in front of the coordinates of ``P``."""
    size = basis.shape[1]
    lead = np.zeros((num_leading, size, size))
    traces = np.concatenate([np.zeros(num_leading), np.einsum('jaa->j', basis)])
    return [AffineLmi(-config.P_MIN_EIG*np.eye(size), np.concatenate([lead, basis]),
                      name='{:s} positivity'.format(name)),
            AffineLmi([[config.TRACE_MAX]], -traces[:, None, None],
                      name='{:s} trace'.format(name))]


def _minimize_max_eig(builders, basis, name, margin):
    """Solves ``min t  s.t.  builder(P) < t I,  P >= eps I,  tr P <= trace_max``
    and returns the coordinates of ``P`` and ``t`` if ``t <= -margin``."""
    size = basis.shape[1]
    lmis = []
    for k, builder in enumerate(builders):
        F0, F = _affine_terms(builder, basis)
        eye = np.eye(F0.shape[0])
        lmis.append(AffineLmi(-F0, np.concatenate([eye[None], -F]),
                              name='{:s}[{:d}]'.format(name, k)))
    lmis += _positivity_lmis(basis, name, 1)

    identity = np.array([1.0 if i == j else 0.0 for i, j in zip(*np.triu_indices(size))])
    t0 = max(max_eig(builder(np.eye(size))) for builder in builders) + 1.0
    c = np.zeros(len(basis) + 1)
    c[0] = 1.0
    result = BarrierSolver(lmis, c).solve(np.concatenate([[t0], identity]))
    t = result.z[0]
    log.debug('{:s}: t = {:.6g} after {:d} barrier and {:d} Newton iterations'.format(
        name, t, result.outer_iterations, result.newton_iterations))
    if t > -margin:
        raise Infeasible('{:s}: largest eigenvalue could only be driven to {:.3g}!'.format(
            name, t))
    return result.z[1:], t


def _condition_step(builders, basis, coefficients, rho, name):
    """_condition_step

    One re-weighted solve lowering ``lmax^(3/2) / lmin^(1/2)`` of ``P``,
    linearized in ``log lmax`` and ``log lmin`` at the current ``P``:

    ``min 3 s / (2 lmax) - p / (2 lmin)  s.t.  p I < P < s I`` and every
    block with ``rho I`` added to its top-left entry negative definite.

    """
    size = basis.shape[1]
    P = sym_from_vector(coefficients, basis)
    upper = max_eig(P)
    lower = min_eig(P)
    eye = np.eye(size)
    zero = np.zeros((1, size, size))
    lmis = []
    for k, builder in enumerate(builders):
        F0, F = _affine_terms(builder, basis)
        shift = np.zeros_like(F0)
        shift[:size, :size] = rho*eye
        lmis.append(AffineLmi(-F0 - shift,
                              np.concatenate([np.zeros((2,) + F0.shape), -F]),
                              name='{:s}[{:d}]'.format(name, k)))
    lmis.append(AffineLmi(np.zeros((size, size)), np.concatenate([zero, -eye[None], basis]),
                          name='{:s} lower'.format(name)))
    lmis.append(AffineLmi(np.zeros((size, size)), np.concatenate([eye[None], zero, -basis]),
                          name='{:s} upper'.format(name)))
    lmis += _positivity_lmis(basis, name, 2)
    c = np.concatenate([[1.5/upper, -0.5/lower], np.zeros(len(basis))])
    result = BarrierSolver(lmis, c).solve(np.concatenate([[2*upper, 0.5*lower],
                                                          coefficients]))
    log.debug('{:s}: eigenvalues of P in [{:.4g}, {:.4g}] after conditioning'.format(
        name, result.z[1], result.z[0]))
    return result.z[2:]


def _candidates(builders, size, name, margin):
    """Feasible ``P`` of least largest block eigenvalue, followed by the
    iterates of :func:`_condition_step` at half of that margin."""
    basis = sym_basis(size)
    coefficients, t = _minimize_max_eig(builders, basis, name, margin)
    candidates = [sym_from_vector(coefficients, basis)]
    for _ in range(config.CONDITION_ROUNDS):
        try:
            coefficients = _condition_step(builders, basis, coefficients, -0.5*t, name)
        except NumericalFailure as error:
            log.debug('{:s}: conditioning stopped, {:s}'.format(name, str(error)))
            break
        candidates.append(sym_from_vector(coefficients, basis))
    return candidates


def _solve_p(prob, margin):
    builders = [lambda P, lam=lam: prob.block_i(P, lam) for lam in prob.extreme_eigenvalues]
    return _candidates(builders, prob.size_i, 'block_i', margin)


def _solve_p_check(prob, margin):
    return _candidates([prob.block_one], prob.size_one, 'block_1', margin)


def bound_factor(cert):
    """bound_factor

    ``sqrt(lmax/lmin) lmax / rho`` with ``lmax`` and ``lmin`` the extreme
    eigenvalues over ``P`` and ``P_check``, the certificate dependent part
    of the sub-optimality bound.

    Args:
        cert (Certificate): certificate with ``rho``.

    Returns:
        factor (float): ``inf`` without a positive margin.

    """
    eig_max = max(max_eig(cert.P), max_eig(cert.P_check))
    eig_min = min(min_eig(cert.P), min_eig(cert.P_check))
    if cert.rho is None or cert.rho <= 0 or eig_min <= 0:
        return np.inf
    return float(np.sqrt(eig_max/eig_min)*eig_max/cert.rho)


def _select_certificate(prob, candidates, candidates_check):
    """Passing combination of least :func:`bound_factor`."""
    best = None
    for P in candidates:
        for P_check in candidates_check:
            cert = Certificate(P, P_check)
            report = verify_certificate(prob, cert)
            if not report['passed']:
                continue
            cert.rho = report['certified_rho']
            if best is None or bound_factor(cert) < bound_factor(best):
                best = cert
    return best


def solve_feasibility(prob, margin=None):
    """solve_feasibility

    Searches ``P`` and ``P_check`` separately by minimizing the largest
    eigenvalue of the assembled blocks with a barrier method, starting
    from the identity. Each solution is then re-conditioned with
    ``config.CONDITION_ROUNDS`` re-weighted solves and the passing
    combination with the smallest :func:`bound_factor` is returned.

    Args:
        prob (LmiProblem): matrix inequalities.
        margin (float, optional): required strictness - defaults to
          ``config.FEASIBILITY_MARGIN``.

    Returns:
        certificate (Certificate): certificate with the certified margin.

    """
    if margin is None:
        margin = config.FEASIBILITY_MARGIN
    cert = _select_certificate(prob, _solve_p(prob, margin), _solve_p_check(prob, margin))
    if cert is None:
        raise Infeasible('No candidate certificate passes verification!')
    log.info('Found certificate with lambda_min(P) = {:.4g}, lambda_min(P_check) = {:.4g}, '
             'rho = {:.4g}'.format(min_eig(cert.P), min_eig(cert.P_check), cert.rho))
    return cert


def synthesize_gain(model, bounds, objs, spectrum, margin=None):
    """synthesize_gain

    Change-of-variables synthesis. With ``Q = P^-1`` and ``Y = K Q`` the
    block inequality becomes affine in ``(Q, Y)``:

    ``[[Q A_i^T + A_i Q + Y^T B'^T + B' Y, [gamma Y^T, mu' Q J^T] - [B' L']],
    [*, -2 I]] < 0``

    which is solved at ``lambda_2`` and ``lambda_N`` with one shared ``Q``.
    ``Q >= q_min I``, ``tr Q <= trace_max`` and ``[[kappa^2 I, Y], [Y^T, Q]] > 0``
    bound the recovered gain ``K = Y Q^-1``. The consensus block is then
    checked for this gain by solving for ``P_check``.

    Args:
        model (AgentModel): stabilizable agent model.
        bounds (SectorBounds): sector bounds.
        objs (ObjectiveSet): local objectives.
        spectrum (LaplacianSpectrum): Laplacian of a connected graph.
        margin (float, optional): required strictness.

    Returns:
        result (tuple): ``(gains, certificate)``.

    """
    if margin is None:
        margin = config.FEASIBILITY_MARGIN
    model.check_assumptions()
    _check_sector(bounds.gamma, objs.mu_prime)
    blocks = assemble_transformed_blocks(model, bounds, spectrum, objs)
    n, m = model.n, model.m
    size = 4*n
    gamma = bounds.gamma
    mu_prime = objs.mu_prime
    J = np.hstack([np.eye(n), np.zeros((n, 3*n))])
    BL = np.hstack([blocks.B_prime, blocks.L_prime])
    lams = [spectrum.lambda_2] if abs(spectrum.lambda_max - spectrum.lambda_2) <= 1e-14 \
        else [spectrum.lambda_2, spectrum.lambda_max]

    q_basis = sym_basis(size)
    y_basis = np.eye(m*size).reshape(m*size, m, size)
    num_q = len(q_basis)
    num_y = len(y_basis)

    def block(Q, Y, lam):
        A_i = blocks.block_matrix(lam)
        top = Q @ A_i.T + A_i @ Q + Y.T @ blocks.B_prime.T + blocks.B_prime @ Y
        off = np.hstack([gamma*Y.T, mu_prime*Q @ J.T]) - BL
        return np.block([[top, off], [off.T, -2*np.eye(m + n)]])

    zero_q = np.zeros((size, size))
    zero_y = np.zeros((m, size))
    lmis = []
    for lam in lams:
        F0 = block(zero_q, zero_y, lam)
        F_q = [block(E, zero_y, lam) - F0 for E in q_basis]
        F_y = [block(zero_q, E, lam) - F0 for E in y_basis]
        eye = np.eye(F0.shape[0])
        lmis.append(AffineLmi(-F0, np.concatenate([eye[None], -np.array(F_q),
                                                   -np.array(F_y)]),
                              name='synthesis[{:g}]'.format(lam)))
    zeros_t = np.zeros((1, size, size))
    lmis.append(AffineLmi(-config.SYNTH_Q_MIN*np.eye(size),
                          np.concatenate([zeros_t, q_basis, np.zeros((num_y, size, size))]),
                          name='Q positivity'))
    traces = np.concatenate([[0.0], np.einsum('jaa->j', q_basis), np.zeros(num_y)])
    lmis.append(AffineLmi([[config.TRACE_MAX]], -traces[:, None, None], name='Q trace'))
    kappa2 = config.SYNTH_GAIN_BOUND**2

    def gain_bound(Q, Y):
        return np.block([[kappa2*np.eye(m), Y], [Y.T, Q]])

    G0 = gain_bound(zero_q, zero_y)
    lmis.append(AffineLmi(G0, np.concatenate([np.zeros((1,) + G0.shape),
                                              [gain_bound(E, zero_y) - G0 for E in q_basis],
                                              [gain_bound(zero_q, E) - G0 for E in y_basis]]),
                          name='gain bound'))

    identity = np.array([1.0 if i == j else 0.0 for i, j in zip(*np.triu_indices(size))])
    t0 = max(max_eig(block(np.eye(size), zero_y, lam)) for lam in lams) + 1.0
    c = np.zeros(1 + num_q + num_y)
    c[0] = 1.0
    z0 = np.concatenate([[t0], identity, np.zeros(num_y)])
    result = BarrierSolver(lmis, c).solve(z0)
    t = result.z[0]
    if t > -margin:
        raise SynthesisInfeasible('Change-of-variables LMI infeasible, t = {:.3g}!'.format(t),
                                  stage='gain')
    Q = sym_from_vector(result.z[1:1 + num_q], q_basis)
    Y = result.z[1 + num_q:].reshape(m, size)
    K = solve(Q, Y.T, assume_a='pos').T
    gains = GainSet.from_matrix(K, n)
    log.info('Synthesized gain with |K| = {:.4g}'.format(np.linalg.norm(K, 2)))

    prob = build_lmi(model, bounds, objs, spectrum, gains)
    try:
        candidates = _solve_p(prob, margin)
    except Infeasible as error:
        raise SynthesisInfeasible(str(error), stage='block_i')
    try:
        candidates_check = _solve_p_check(prob, margin)
    except Infeasible as error:
        raise SynthesisInfeasible(str(error), stage='block_1')
    cert = _select_certificate(prob, candidates, candidates_check)
    if cert is None:
        report = verify_certificate(prob, Certificate(candidates[0], candidates_check[0]))
        raise SynthesisInfeasible('Recovered gain fails verification with largest block '
                                  'eigenvalue {:.3g}!'.format(report['max_block_eig']),
                                  stage='verify')
    return gains, cert


class SuboptimalityBound(namedtuple('SuboptimalityBound',
                                    ['epsilon', 'epsilon_tight', 'rho', 'norm_B',
                                     'norm_u_bar', 'eig_max', 'eig_min', 'gamma'])):
    """SuboptimalityBound

    Ultimate bound on ``|x - 1 (x) x_star|`` and the quantities it is built
    from.

    """

    __slots__ = ()

    def kappa2(self, theta, sup_w):
        """kappa2

        ISS gain from the fictitious input to the transformed state.

        Args:
            theta (float): splitting parameter in ``(0, 1)``.
            sup_w (float): supremum of ``|w*(t)|``.

        Returns:
            gain (float): bound on the contribution of ``w*``.

        """
        if not 0 < theta < 1:
            raise ValueError('theta must lie in (0, 1), got {:g}!'.format(theta))
        if self.rho <= 0:
            return np.inf
        return (2*np.sqrt(self.eig_max/self.eig_min)*self.norm_B*self.eig_max
                / (theta*self.rho)*sup_w)


def suboptimality_bound(cert, model, reference, bounds, declared_rho=None):
    """suboptimality_bound

    ``eps = 2 sqrt(lmax/lmin) |B| lmax / rho |u_bar|`` with ``lmax`` and
    ``lmin`` the extreme eigenvalues over ``P`` and ``P_check``. The tighter
    variant accounts for ``|w*| <= gamma |u_bar|``.

    Args:
        cert (Certificate): verified certificate with ``rho``.
        model (AgentModel): agent model.
        reference (ReferencePoint): steady state providing ``u_bar``.
        bounds (SectorBounds): sector bounds providing ``beta`` and ``gamma``.
        declared_rho (float, optional): user margin, used only up to the
          certified one.

    Returns:
        bound (SuboptimalityBound): bound and its ingredients.

    """
    rho = cert.rho if cert.rho is not None else 0.0
    if declared_rho is not None:
        if declared_rho > rho:
            log.warning('Declared rho = {:g} is not certified, using {:g}'.format(
                declared_rho, rho))
        rho = min(rho, declared_rho)
    eig_max = max(max_eig(cert.P), max_eig(cert.P_check))
    eig_min = min(min_eig(cert.P), min_eig(cert.P_check))
    norm_B = float(np.linalg.norm(model.input_matrix(bounds.beta), 2))
    norm_u_bar = float(np.linalg.norm(reference.u_bar))
    if norm_u_bar == 0:
        epsilon = 0.0
    elif rho <= 0 or eig_min <= 0:
        log.warning('Certificate has no positive margin, the bound is infinite')
        epsilon = np.inf
    else:
        epsilon = 2*np.sqrt(eig_max/eig_min)*norm_B*eig_max/rho*norm_u_bar
    epsilon_tight = 0.0 if bounds.gamma == 0 else bounds.gamma*epsilon
    return SuboptimalityBound(float(epsilon), float(epsilon_tight), float(rho),
                              norm_B, norm_u_bar, eig_max, eig_min, float(bounds.gamma))
