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
from .. import __path__ as package_path
import logging

import json
import os
import os.path as path
import numpy as np

from ..certificates import Certificate
from ..exceptions import ConfigError
from ..graph import NetworkGraph, build_laplacian
from ..nonlinearity import common_bounds, nonlinearities_from_config
from ..objectives import ObjectiveSet
from ..protocol import AgentModel, GainSet
from ..simulator import SimConfig

__all__ = ['ScenarioConfig', 'default_scenario_path', 'load_json', 'save_json']

__docformat__ = 'restructuredtext'

SECTIONS = ['agent', 'nonlinearity', 'graph', 'objectives', 'gains', 'certificate',
            'simulation', 'solver', 'output_dir']
SIMULATION_KEYS = ['t_final', 'dt', 'record_stride', 'seed', 'seeds', 'tail_window',
                   'initial_x']
SOLVER_KEYS = ['rho', 'margin']


def default_scenario_path():
    """Path of the bundled scenario of the five-agent example."""
    return path.join(package_path[0], 'data', 'paper_sec5.json')


def load_json(file_name):
    """load_json

    Reads a JSON file and reports syntax errors with line and column.

    Args:
        file_name (str): path of the JSON file.

    Returns:
        result (tuple): parsed data and raw text.

    """
    try:
        with open(file_name, 'r') as json_file:
            text = json_file.read()
    except OSError as error:
        raise ConfigError('cannot read file ({:s})'.format(str(error)), field=file_name)
    try:
        return json.loads(text), text
    except json.JSONDecodeError as error:
        raise ConfigError('invalid JSON at line {:d}, column {:d}: {:s}'.format(
            error.lineno, error.colno, error.msg), field=file_name)


def _to_builtin(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError('Object of type {:s} is not JSON serializable'.format(
        type(value).__name__))


def save_json(data, file_name):
    """save_json

    Writes ``data`` with sorted keys so that reports are reproducible.

    Args:
        data (dict): report or gains.
        file_name (str): path of the JSON file.

    """
    with open(file_name, 'w') as json_file:
        json.dump(data, json_file, indent=2, sort_keys=True, default=_to_builtin)
        json_file.write('\n')


class ScenarioConfig(object):
    """ScenarioConfig

    Validated scenario of a coordination problem. All sections are parsed
    and cross-checked on construction, before any computation.

    Args:
        data (dict): JSON dictionary.
        text (str, optional): raw JSON text used for line diagnostics.
        source (str, optional): file name for messages.

    Attributes:
        log (logging.logger): logger instance from logging.
        model (AgentModel): agent model.
        nonlinearities (InputNonlinearity|list): input nonlinearities.
        bounds (SectorBounds): common sector bounds.
        graph (NetworkGraph): communication graph.
        objectives (ObjectiveSet): local objectives.
        gains (GainSet): feedback gains or ``None``.
        certificate (Certificate): given certificate or ``None``.
        sim (SimConfig): simulation settings.
        seeds (list[int]): seeds of the multi-seed runs.
        declared_rho (float): user margin or ``None``.
        margin (float): feasibility margin.

    """

    def __init__(self, data, text='', source=''):
        self.log = logging.getLogger(__name__)
        self.log.setLevel(config.LOG_LEVEL)
        self.data = data
        self.text = text
        self.source = source
        if not isinstance(data, dict):
            raise ConfigError('top level must be a JSON object', field='<root>')
        for key in data:
            if key not in SECTIONS:
                self.log.warning('Ignoring unknown section \'{:s}\''.format(key))
        for key in ['agent', 'nonlinearity', 'graph', 'objectives']:
            if key not in data:
                raise ConfigError('required section is missing', field=key)

        self.model = self._parse('agent', AgentModel.from_dict)
        self.graph = self._parse('graph', NetworkGraph.from_dict)
        num_agents = self.graph.num_agents
        self.nonlinearities = self._parse(
            'nonlinearity', lambda d: nonlinearities_from_config(d, num_agents))
        self.bounds = self._parse('nonlinearity', lambda d: common_bounds(self.nonlinearities))
        self.objectives = self._parse('objectives', ObjectiveSet.from_dict)
        if self.objectives.num_agents != num_agents:
            raise ConfigError(self._where('objectives', 'expected {:d} local objectives, '
                                          'got {:d}'.format(num_agents,
                                                            self.objectives.num_agents)),
                              field='objectives.locals')
        if self.objectives.dim != self.model.n:
            raise ConfigError(self._where('objectives', 'objective dimension {:d} does not '
                                          'match n = {:d}'.format(self.objectives.dim,
                                                                  self.model.n)),
                              field='objectives')

        self.gains = None
        if 'gains' in data:
            self.gains = self._parse('gains', lambda d: GainSet.from_dict(d, self.model.n))
            self._parse('gains', lambda d: self.gains.check_dimensions(self.model))
        self.certificate = None
        if 'certificate' in data:
            self.certificate = self._parse('certificate', Certificate.from_dict)
            n = self.model.n
            if self.certificate.P.shape != (4*n, 4*n) or \
                    self.certificate.P_check.shape != (3*n, 3*n):
                raise ConfigError(self._where('certificate', 'P must be {0:d} x {0:d} and '
                                              'P_check {1:d} x {1:d}'.format(4*n, 3*n)),
                                  field='certificate')

        simulation = dict(data.get('simulation', {}))
        for key in simulation:
            if key not in SIMULATION_KEYS:
                raise ConfigError(self._where(key, 'unknown simulation setting'),
                                  field='simulation.' + key)
        self.seeds = [int(seed) for seed in simulation.pop('seeds', [])]
        self.sim = self._parse('simulation', lambda d: SimConfig(**simulation))
        if self.sim.initial_x is not None and \
                np.size(self.sim.initial_x) != num_agents*self.model.n:
            raise ConfigError(self._where('initial_x', 'expected {:d} entries'.format(
                num_agents*self.model.n)), field='simulation.initial_x')
        if not self.seeds:
            self.seeds = [self.sim.seed]

        solver = data.get('solver', {})
        for key in solver:
            if key not in SOLVER_KEYS:
                raise ConfigError(self._where(key, 'unknown solver setting'),
                                  field='solver.' + key)
        self.declared_rho = solver.get('rho', None)
        self.margin = float(solver.get('margin', config.FEASIBILITY_MARGIN))
        self.output_dir = data.get('output_dir', config.OUTPUT_DIR)
        self._spectrum = None

    @classmethod
    def from_file(cls, file_name):
        """Loads and validates a scenario file."""
        data, text = load_json(file_name)
        return cls(data, text, file_name)

    @classmethod
    def default(cls):
        """The bundled scenario of the five-agent example."""
        return cls.from_file(default_scenario_path())

    def _where(self, key, message):
        """Appends the line of the first occurrence of ``key`` in the raw
        text to ``message``."""
        token = '"{:s}"'.format(key)
        for number, line in enumerate(self.text.splitlines(), start=1):
            if token in line:
                return '{:s} (line {:d})'.format(message, number)
        return message

    def _parse(self, key, parser):
        try:
            return parser(self.data[key] if key in self.data else {})
        except ConfigError:
            raise
        except (ValueError, KeyError, TypeError, IndexError) as error:
            message = str(error) if not isinstance(error, KeyError) \
                else 'missing key {:s}'.format(str(error))
            raise ConfigError(self._where(key, message), field=key)

    @property
    def spectrum(self):
        """Laplacian spectrum of the graph, computed once."""
        if self._spectrum is None:
            self._spectrum = build_laplacian(self.graph)
        return self._spectrum

    def apply_overrides(self, dt=None, t_final=None, seed=None, gamma=None, graph=None):
        """apply_overrides

        Replaces scenario values by command-line values.

        Args:
            dt (float, optional): step size.
            t_final (float, optional): end time.
            seed (int, optional): seed, also replaces the seed list.
            gamma (float, optional): declared residual sector bound.
            graph (str, optional): path of a JSON graph file.

        """
        settings = {}
        if dt is not None:
            settings['dt'] = dt
        if t_final is not None:
            settings['t_final'] = t_final
        if seed is not None:
            settings['seed'] = seed
            self.seeds = [int(seed)]
        if settings:
            try:
                self.sim = self.sim.copy(**settings)
            except ValueError as error:
                raise ConfigError(str(error), field='simulation')
        if gamma is not None:
            try:
                self.bounds = self.bounds.with_gamma(gamma)
            except ValueError as error:
                raise ConfigError(str(error), field='--gamma')
        if graph is not None:
            data, _ = load_json(graph)
            try:
                new_graph = NetworkGraph.from_dict(data)
            except (ValueError, KeyError, TypeError) as error:
                raise ConfigError(str(error), field=graph)
            if new_graph.num_agents != self.graph.num_agents:
                raise ConfigError('graph has {:d} agents, the scenario {:d}'.format(
                    new_graph.num_agents, self.graph.num_agents), field=graph)
            self.graph = new_graph
            self._spectrum = None

    def output_path(self):
        """Output directory, ``DOC_COORD_OUT`` overrides the scenario; the
        directory is created if needed."""
        directory = os.environ.get('DOC_COORD_OUT', self.output_dir)
        os.makedirs(directory, exist_ok=True)
        return directory
