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
from multiprocessing import Pool

import numpy as np

from .exceptions import DimensionMismatch, Diverged, EmptyWindow, NonFinite
from .helpers import check_finite, unstack
from .nonlinearity import stacked_residual
from .protocol import (ClosedLoopState, assemble_transformed_blocks, control_input,
                       controller_derivatives, shifted_transformed_derivative,
                       to_transformed)

__all__ = ['SimConfig', 'Trajectory', 'TailMetrics', 'simulate', 'tail_metrics',
           'cross_check_transformed', 'run_seeds', 'rk4_step']

__docformat__ = 'restructuredtext'

log = logging.getLogger(__name__)
log.setLevel(config.LOG_LEVEL)

TailMetrics = namedtuple('TailMetrics', ['sup_err', 'mean_err', 'sup_obj_gap'])


class SimConfig(object):
    """SimConfig

    Settings of a fixed-step simulation. Unset values fall back to the
    ``[simulation]`` section of the configuration.

    Keyword Args:
        t_final (float): end time.
        dt (float): step size.
        record_stride (int): record every ``record_stride``-th step.
        initial_x (ndarray[float]): stacked initial agent states - drawn
          uniformly from ``[init_low, init_high]`` under ``seed`` if omitted.
        initial_v (ndarray[float]): initial gradient-tracking states, zero
          if omitted; projected onto ``sum_i v_i = 0``.
        initial_zeta (ndarray[float]): initial optimizer estimates.
        initial_eta (ndarray[float]): initial integral states.
        tail_window (tuple[float]): window ``(t_a, t_b)`` of the tail metrics.
        seed (int): seed of the random initial condition.

    Attributes:
        log (logging.logger): logger instance from logging.

    """

    def __init__(self, **kwargs):
        self.log = logging.getLogger(__name__)
        self.log.setLevel(config.LOG_LEVEL)
        self.t_final = float(kwargs.get('t_final', config.T_FINAL))
        self.dt = float(kwargs.get('dt', config.DT))
        self.record_stride = int(kwargs.get('record_stride', config.RECORD_STRIDE))
        self.tail_window = tuple(kwargs.get('tail_window',
                                            (config.TAIL_START, config.TAIL_STOP)))
        self.seed = int(kwargs.get('seed', 0))
        self.initial_x = kwargs.get('initial_x', None)
        self.initial_v = kwargs.get('initial_v', None)
        self.initial_zeta = kwargs.get('initial_zeta', None)
        self.initial_eta = kwargs.get('initial_eta', None)

        if not self.dt > 0:
            raise ValueError('dt must be positive, got {:g}!'.format(self.dt))
        if not self.t_final > 0:
            raise ValueError('t_final must be positive, got {:g}!'.format(self.t_final))
        if self.record_stride < 1:
            raise ValueError('record_stride must be a positive integer!')
        t_a, t_b = self.tail_window
        if not t_a < t_b <= self.t_final:
            raise ValueError('Tail window [{:g}, {:g}] must satisfy t_a < t_b <= '
                             't_final = {:g}!'.format(t_a, t_b, self.t_final))

    def copy(self, **kwargs):
        """Copy with some settings replaced."""
        settings = {'t_final': self.t_final, 'dt': self.dt,
                    'record_stride': self.record_stride, 'tail_window': self.tail_window,
                    'seed': self.seed, 'initial_x': self.initial_x,
                    'initial_v': self.initial_v, 'initial_zeta': self.initial_zeta,
                    'initial_eta': self.initial_eta}
        settings.update(kwargs)
        if 't_final' in kwargs and 'tail_window' not in kwargs:
            t_a, t_b = self.tail_window
            if t_b > settings['t_final']:
                settings['tail_window'] = (min(t_a, 0.8*settings['t_final']),
                                           settings['t_final'])
        return SimConfig(**settings)

    @property
    def num_steps(self):
        return int(round(self.t_final/self.dt))

    def initial_state(self, num_agents, dim):
        """initial_state

        Stacked initial closed-loop state.

        Args:
            num_agents (int): number of agents N.
            dim (int): state dimension n.

        Returns:
            state (ClosedLoopState): initial state.

        """
        size = num_agents*dim
        if self.initial_x is None:
            rng = np.random.default_rng(self.seed)
            x = rng.uniform(config.INIT_LOW, config.INIT_HIGH, size)
        else:
            x = check_finite(self.initial_x, 'initial_x').ravel()
        parts = []
        for name in ['initial_v', 'initial_zeta', 'initial_eta']:
            value = getattr(self, name)
            parts.append(np.zeros(size) if value is None
                         else check_finite(value, name).ravel())
        if any(part.size != size for part in [x] + parts):
            raise DimensionMismatch('Initial states must have length {:d}!'.format(size))
        v_rows = unstack(parts[0], num_agents)
        v_sum = v_rows.sum(axis=0)
        if np.linalg.norm(v_sum) > config.CONSERVATION_TOL:
            self.log.warning('Initial v sums to {:s}, projecting onto sum_i v_i = '
                             '0'.format(np.array2string(v_sum)))
            parts[0] = (v_rows - v_sum/num_agents).ravel()
        return ClosedLoopState(x, *parts)


class Trajectory(object):
    """Trajectory

    Recorded closed-loop samples.

    Args:
        times (ndarray[float]): strictly increasing sample times.
        states (ndarray[float]): K x 4nN stacked states ``[x; v; zeta; eta]``.
        inputs (ndarray[float]): K x mN stacked inputs.
        err (ndarray[float]): ``|x - 1 (x) x_star|`` per sample.
        obj_gap (ndarray[float]): ``|f(x) - f(x_star)|`` per sample.
        num_agents (int): number of agents N.

    Keyword Args:
        dt (float): integration step.
        stride (int): record stride.
        x_star (ndarray[float]): optimizer.

    """

    def __init__(self, times, states, inputs, err, obj_gap, num_agents, **kwargs):
        self.times = np.asarray(times, dtype=float)
        self.states = np.atleast_2d(np.asarray(states, dtype=float))
        self.inputs = np.atleast_2d(np.asarray(inputs, dtype=float))
        self.err = np.asarray(err, dtype=float)
        self.obj_gap = np.asarray(obj_gap, dtype=float)
        self.num_agents = int(num_agents)
        self.dt = kwargs.get('dt', None)
        self.stride = kwargs.get('stride', 1)
        self.x_star = kwargs.get('x_star', None)
        if np.any(np.diff(self.times) <= 0):
            raise ValueError('Trajectory times must be strictly increasing!')
        if not (len(self.times) == len(self.states) == len(self.inputs)
                == len(self.err) == len(self.obj_gap)):
            raise DimensionMismatch('All trajectory records need the same length!')
        self.dim = self.states.shape[1]//(4*self.num_agents)
        self.input_dim = self.inputs.shape[1]//self.num_agents

    def __len__(self):
        return len(self.times)

    def state(self, k):
        """Recorded state ``k`` as :class:`ClosedLoopState`."""
        return ClosedLoopState.from_vector(self.states[k])

    def _part(self, k):
        size = self.num_agents*self.dim
        return self.states[:, k*size:(k + 1)*size]

    @property
    def x(self):
        return self._part(0)

    @property
    def v(self):
        return self._part(1)

    @property
    def zeta(self):
        return self._part(2)

    @property
    def eta(self):
        return self._part(3)

    def agent_states(self, i):
        """K x n states of agent ``i``."""
        return self.x[:, i*self.dim:(i + 1)*self.dim]

    def v_sum(self):
        """Norm of ``sum_i v_i`` per sample."""
        sums = self.v.reshape(len(self), self.num_agents, self.dim).sum(axis=1)
        return np.linalg.norm(sums, axis=1)


def rk4_step(fun, t, y, dt):
    """Classical fourth-order Runge-Kutta step."""
    k1 = fun(t, y)
    k2 = fun(t + 0.5*dt, y + 0.5*dt*k1)
    k3 = fun(t + 0.5*dt, y + 0.5*dt*k2)
    k4 = fun(t + dt, y + dt*k3)
    return y + dt/6*(k1 + 2*k2 + 2*k3 + k4)


def simulate(model, bounds, nonlinearities, spectrum, objs, gains, cfg, x_star=None):
    """simulate

    Integrates the closed loop

    - ``dx_i/dt = A x_i + B u_i - B phi'_i(u_i, t)``
    - ``dv/dt = -(L (x) I) x``
    - ``dzeta/dt = -(L (x) I) x + v - grad f(x)``
    - ``deta/dt = x - zeta``

    with ``u`` from the local feedback at every stage.

    Args:
        model (AgentModel): agent model.
        bounds (SectorBounds): sector bounds providing ``beta``.
        nonlinearities (InputNonlinearity|list): input nonlinearities.
        spectrum (LaplacianSpectrum): Laplacian of the graph.
        objs (ObjectiveSet): local objectives.
        gains (GainSet): feedback gains.
        cfg (SimConfig): simulation settings.
        x_star (ndarray[float], optional): known optimizer.

    Returns:
        trajectory (Trajectory): recorded samples.

    """
    gains.check_dimensions(model)
    num_agents = spectrum.num_agents
    n = model.n
    if objs.num_agents != num_agents or objs.dim != n:
        raise DimensionMismatch('Objectives do not match the graph or the agent model!')
    if x_star is None:
        x_star = objs.solve_global_optimizer()
    x_bar = np.tile(x_star, num_agents)
    f_star = objs.value(x_bar)
    B = model.input_matrix(bounds.beta)
    size = num_agents*n

    def rhs(t, y):
        state = ClosedLoopState.from_vector(y)
        u_rows = unstack(control_input(gains, state), num_agents)
        w_rows = stacked_residual(nonlinearities, u_rows, t)
        dx = unstack(state.x, num_agents) @ model.A.T + (u_rows - w_rows) @ B.T
        return np.concatenate([dx.ravel(), *controller_derivatives(spectrum, objs, state)])

    def record(t, y):
        x = y[:size]
        times.append(t)
        states.append(y.copy())
        inputs.append(control_input(gains, ClosedLoopState.from_vector(y)))
        err.append(np.linalg.norm(x - x_bar))
        obj_gap.append(abs(objs.value(x) - f_star))

    times, states, inputs, err, obj_gap = [], [], [], [], []
    y = cfg.initial_state(num_agents, n).as_vector()
    num_steps = cfg.num_steps
    record(0.0, y)
    for k in range(num_steps):
        y = rk4_step(rhs, k*cfg.dt, y, cfg.dt)
        t = (k + 1)*cfg.dt
        if not np.all(np.isfinite(y)):
            raise NonFinite('State became non-finite at t = {:g}!'.format(t))
        if np.max(np.abs(y)) > config.DIVERGENCE_THRESHOLD:
            raise Diverged('State norm exceeded {:g} at t = {:g}!'.format(
                config.DIVERGENCE_THRESHOLD, t), time=t)
        if (k + 1) % cfg.record_stride == 0 or k + 1 == num_steps:
            record(t, y)

    trajectory = Trajectory(times, states, inputs, err, obj_gap, num_agents,
                            dt=cfg.dt, stride=cfg.record_stride, x_star=x_star)
    log.info('Simulated {:d} steps up to t = {:g}, final error {:.4g}'.format(
        num_steps, times[-1], err[-1]))
    return trajectory


def tail_metrics(traj, window=None):
    """tail_metrics

    Empirical limsup estimate over the recorded samples in ``window``.

    Args:
        traj (Trajectory): recorded trajectory.
        window (tuple[float], optional): ``(t_a, t_b)`` - defaults to the
          configured tail window.

    Returns:
        metrics (TailMetrics): ``sup_err``, ``mean_err``, ``sup_obj_gap``.

    """
    if window is None:
        window = (config.TAIL_START, config.TAIL_STOP)
    t_a, t_b = window
    select = (traj.times >= t_a - 1e-12) & (traj.times <= t_b + 1e-12)
    if not np.any(select):
        raise EmptyWindow('No recorded sample in [{:g}, {:g}]!'.format(t_a, t_b))
    return TailMetrics(float(np.max(traj.err[select])), float(np.mean(traj.err[select])),
                       float(np.max(traj.obj_gap[select])))


def cross_check_transformed(traj, model, bounds, nonlinearities, spectrum, objs, gains,
                            reference, t_final=10.0):
    """cross_check_transformed

    Integrates the shifted closed loop in transformed coordinates from the
    mapped initial state with the step size of ``traj`` and compares it to
    the mapped recorded samples up to ``t_final``.

    Args:
        traj (Trajectory): trajectory recorded by :func:`simulate`.
        model (AgentModel): agent model.
        bounds (SectorBounds): sector bounds.
        nonlinearities (InputNonlinearity|list): input nonlinearities.
        spectrum (LaplacianSpectrum): Laplacian of the graph.
        objs (ObjectiveSet): local objectives.
        gains (GainSet): feedback gains.
        reference (ReferencePoint): steady state used for the shift.
        t_final (float, optional): end of the compared interval.

    Returns:
        deviation (float): largest absolute deviation.

    """
    blocks = assemble_transformed_blocks(model, bounds, spectrum, objs)
    dt = traj.dt if traj.dt is not None else traj.times[1] - traj.times[0]
    stride = traj.stride

    def rhs(t, xi):
        return shifted_transformed_derivative(blocks, gains, reference, nonlinearities,
                                              t, xi)

    xi = to_transformed(blocks, reference, traj.state(0))
    deviation = 0.0
    step = 0
    for k in range(1, len(traj)):
        target = int(round(traj.times[k]/dt))
        if traj.times[k] > t_final + 1e-12:
            break
        while step < target:
            xi = rk4_step(rhs, step*dt, xi, dt)
            step += 1
        mapped = to_transformed(blocks, reference, traj.state(k))
        deviation = max(deviation, float(np.max(np.abs(mapped - xi))))
    log.info('Transformed cross-check deviation {:.3g} on [0, {:g}] (stride {:d})'.format(
        deviation, t_final, stride))
    return deviation


def _simulate_seed(args):
    model, bounds, nonlinearities, spectrum, objs, gains, cfg, x_star = args
    return simulate(model, bounds, nonlinearities, spectrum, objs, gains, cfg, x_star)


def run_seeds(model, bounds, nonlinearities, spectrum, objs, gains, cfg, seeds,
              processes=None):
    """run_seeds

    Independent simulations with random initial states for several seeds.

    Args:
        model (AgentModel): agent model.
        bounds (SectorBounds): sector bounds.
        nonlinearities (InputNonlinearity|list): input nonlinearities, must
          be picklable for ``processes > 1``.
        spectrum (LaplacianSpectrum): Laplacian of the graph.
        objs (ObjectiveSet): local objectives.
        gains (GainSet): feedback gains.
        cfg (SimConfig): settings, ``initial_x`` is ignored.
        seeds (list[int]): seeds.
        processes (int, optional): worker processes, ``1`` runs sequentially
          - defaults to one process per seed.

    Returns:
        trajectories (list[Trajectory]): one trajectory per seed in order.

    """
    x_star = objs.solve_global_optimizer()
    jobs = [(model, bounds, nonlinearities, spectrum, objs, gains,
             cfg.copy(seed=seed, initial_x=None), x_star) for seed in seeds]
    if processes is None:
        processes = len(jobs)
    if processes <= 1 or len(jobs) <= 1:
        return [_simulate_seed(job) for job in jobs]
    with Pool(processes) as pool:
        return pool.map(_simulate_seed, jobs)
