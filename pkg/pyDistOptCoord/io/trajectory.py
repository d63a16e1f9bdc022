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

from .. import config
import logging

import os.path as path
import numpy as np
import nexusformat.nexus as nxs

from ..exceptions import DimensionMismatch
from ..simulator import Trajectory

__all__ = ['trajectory_columns', 'trajectory_to_records', 'save_trajectory_csv',
           'load_trajectory_csv', 'get_nexus_file', 'save_trajectory_to_nexus',
           'load_trajectory_from_nexus']

__docformat__ = 'restructuredtext'

log = logging.getLogger(__name__)
log.setLevel(config.LOG_LEVEL)


def trajectory_columns(num_agents, dim, input_dim):
    """trajectory_columns

    Column names ``t, x_1_1..x_N_n, v_.., zeta_.., eta_.., u_1_1..u_N_m,
    err, obj_gap`` with 1-based agent and component indices.

    Args:
        num_agents (int): number of agents N.
        dim (int): state dimension n.
        input_dim (int): input dimension m.

    Returns:
        columns (list[str]): column names.

    """
    columns = ['t']
    for name in ['x', 'v', 'zeta', 'eta']:
        columns += ['{:s}_{:d}_{:d}'.format(name, i + 1, j + 1)
                    for i in range(num_agents) for j in range(dim)]
    columns += ['u_{:d}_{:d}'.format(i + 1, j + 1)
                for i in range(num_agents) for j in range(input_dim)]
    return columns + ['err', 'obj_gap']


def trajectory_to_records(traj):
    """trajectory_to_records

    Record array with one named column per entry of
    :func:`trajectory_columns`.

    Args:
        traj (Trajectory): trajectory.

    Returns:
        records (numpy.recarray): one record per sample.

    """
    columns = trajectory_columns(traj.num_agents, traj.dim, traj.input_dim)
    table = np.column_stack([traj.times, traj.states, traj.inputs, traj.err, traj.obj_gap])
    return np.rec.fromarrays(table.T, names=columns)


def save_trajectory_csv(traj, file_name):
    """save_trajectory_csv

    Writes one row per recorded sample with 17 significant digits.

    Args:
        traj (Trajectory): trajectory.
        file_name (str): path of the CSV file.

    """
    records = trajectory_to_records(traj)
    table = np.column_stack([records[name] for name in records.dtype.names])
    np.savetxt(file_name, table, fmt='%.17g', delimiter=',',
               header=','.join(records.dtype.names), comments='')
    log.info('Saved {:d} samples to \'{:s}\''.format(len(traj), file_name))


def load_trajectory_csv(file_name):
    """load_trajectory_csv

    Reads a trajectory written by :func:`save_trajectory_csv`. The
    dimensions are recovered from the column names.

    Args:
        file_name (str): path of the CSV file.

    Returns:
        traj (Trajectory): trajectory.

    """
    with open(file_name, 'r') as csv_file:
        columns = csv_file.readline().strip().split(',')
    table = np.atleast_2d(np.loadtxt(file_name, delimiter=',', skiprows=1))
    x_cols = [c.split('_') for c in columns if c.startswith('x_')]
    u_cols = [c.split('_') for c in columns if c.startswith('u_')]
    num_agents = max(int(c[1]) for c in x_cols)
    dim = max(int(c[2]) for c in x_cols)
    input_dim = max(int(c[2]) for c in u_cols)
    if columns != trajectory_columns(num_agents, dim, input_dim):
        raise DimensionMismatch('Unexpected column layout in \'{:s}\'!'.format(file_name))
    size = 4*num_agents*dim
    states = table[:, 1:1 + size]
    inputs = table[:, 1 + size:1 + size + num_agents*input_dim]
    times = table[:, 0]
    dt = times[1] - times[0] if len(times) > 1 else None
    return Trajectory(times, states, inputs, table[:, -2], table[:, -1], num_agents, dt=dt)


def get_nexus_file(file_name, mode='rw'):
    """get_nexus_file

    Return the file handle to the NeXus file in a given ``mode``. A missing
    file is created for ``mode='rw'``.

    Args:
        file_name (str): path of the NeXus file.
        mode (str, optional): file mode - defaults to 'rw'.

    Returns:
        nxs_file (NXroot): file handle to NeXus file.

    """
    try:
        nxs_file = nxs.nxload(file_name, mode=mode)
    except nxs.NeXusError:
        if mode == 'r':
            raise nxs.NeXusError('NeXus file \'{:s}\' does not exist!'.format(file_name))
        nxs.NXroot().save(file_name)
        nxs_file = nxs.nxload(file_name, mode=mode)
    return nxs_file


def save_trajectory_to_nexus(traj, file_name, entry_name='trajectory', metrics=None):
    """save_trajectory_to_nexus

    Saves a trajectory as an entry of a NeXus file. An existing entry of the
    same name is replaced; scalar metrics become attributes of the entry.

    Args:
        traj (Trajectory): trajectory.
        file_name (str): path of the NeXus file.
        entry_name (str, optional): entry name - defaults to 'trajectory'.
        metrics (dict, optional): scalar metrics stored as attributes.

    """
    if not path.exists(file_name):
        log.debug('Creating NeXus file \'{:s}\''.format(file_name))
    nxs_file = get_nexus_file(file_name)
    with nxs_file.nxfile:
        # if the entry already exists, it must be deleted in advance
        try:
            del nxs_file[entry_name]
        except (nxs.NeXusError, KeyError):
            pass
        entry = nxs_file[entry_name] = nxs.NXentry()
        entry.attrs['num_agents'] = traj.num_agents
        entry.attrs['dim'] = traj.dim
        entry.attrs['input_dim'] = traj.input_dim
        entry.attrs['stride'] = traj.stride
        if traj.dt is not None:
            entry.attrs['dt'] = traj.dt
        if traj.x_star is not None:
            entry['x_star'] = nxs.NXfield(np.asarray(traj.x_star))
        if metrics is not None:
            for key, value in metrics.items():
                entry.attrs[key] = value
        entry['data'] = nxs.NXcollection()
        entry.data['t'] = nxs.NXfield(traj.times)
        for name in ['x', 'v', 'zeta', 'eta']:
            entry.data[name] = nxs.NXfield(getattr(traj, name))
        entry.data['u'] = nxs.NXfield(traj.inputs)
        entry.data['err'] = nxs.NXfield(traj.err)
        entry.data['obj_gap'] = nxs.NXfield(traj.obj_gap)
    log.info('Saved trajectory to entry \'{:s}\' of \'{:s}\''.format(entry_name, file_name))


def load_trajectory_from_nexus(file_name, entry_name='trajectory'):
    """load_trajectory_from_nexus

    Args:
        file_name (str): path of the NeXus file.
        entry_name (str, optional): entry name - defaults to 'trajectory'.

    Returns:
        traj (Trajectory): trajectory.

    """
    nxs_file = get_nexus_file(file_name, mode='r')
    with nxs_file.nxfile:
        try:
            entry = nxs_file[entry_name]
        except (nxs.NeXusError, KeyError):
            raise KeyError('Entry \'{:s}\' not present in NeXus file!'.format(entry_name))
        states = np.hstack([entry.data[name].nxdata for name in ['x', 'v', 'zeta', 'eta']])
        x_star = entry['x_star'].nxdata if 'x_star' in entry else None
        dt = float(entry.attrs['dt']) if 'dt' in entry.attrs else None
        return Trajectory(entry.data['t'].nxdata, states, entry.data['u'].nxdata,
                          entry.data['err'].nxdata, entry.data['obj_gap'].nxdata,
                          int(entry.attrs['num_agents']), dt=dt,
                          stride=int(entry.attrs['stride']), x_star=x_star)
