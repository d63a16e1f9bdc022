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

import matplotlib.pyplot as plt

__all__ = ['plot_states', 'plot_error', 'plot_obj_gap']

__docformat__ = 'restructuredtext'


def plot_states(traj, component=0, x_star=None, ax=None):
    """plot_states

    Plots one component of every agent state over time.

    Args:
        traj (Trajectory): recorded trajectory.
        component (int, optional): state component - defaults to 0.
        x_star (ndarray[float], optional): optimizer drawn as dashed line -
          defaults to ``traj.x_star``.
        ax (Axes, optional): target axes - defaults to the current axes.

    Returns:
        ax (Axes): axes with the plot.

    """
    if ax is None:
        ax = plt.gca()
    if x_star is None:
        x_star = traj.x_star
    for i in range(traj.num_agents):
        ax.plot(traj.times, traj.agent_states(i)[:, component],
                label='agent {:d}'.format(i + 1))
    if x_star is not None:
        ax.axhline(x_star[component], color='k', ls='--', label=r'$x^\star$')
    ax.set_xlabel('time')
    ax.set_ylabel(r'$[x_i]_{:d}$'.format(component + 1))
    ax.legend(frameon=True, loc=0)
    ax.grid(True)
    return ax


def plot_error(traj, epsilon=None, ax=None):
    """plot_error

    Plots ``|x - 1 (x) x_star|`` on a logarithmic axis, optionally with the
    sub-optimality bound.

    Args:
        traj (Trajectory): recorded trajectory.
        epsilon (float, optional): bound drawn as horizontal line.
        ax (Axes, optional): target axes.

    Returns:
        ax (Axes): axes with the plot.

    """
    if ax is None:
        ax = plt.gca()
    ax.semilogy(traj.times, traj.err, label=r'$\|x - 1_N \otimes x^\star\|$')
    if epsilon is not None:
        ax.axhline(epsilon, color='r', ls='--', label=r'$\epsilon$')
    ax.set_xlabel('time')
    ax.legend(frameon=True, loc=0)
    ax.grid(True)
    return ax


def plot_obj_gap(traj, ax=None):
    """plot_obj_gap

    Plots ``|f(x) - f(x_star)|`` on a logarithmic axis.

    """
    if ax is None:
        ax = plt.gca()
    ax.semilogy(traj.times, traj.obj_gap, label=r'$|f(x) - f(x^\star)|$')
    ax.set_xlabel('time')
    ax.legend(frameon=True, loc=0)
    ax.grid(True)
    return ax
