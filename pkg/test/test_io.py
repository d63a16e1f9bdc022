#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest
import json
import os.path as path
import numpy as np
import h5py
import pyDistOptCoord as doc
from pyDistOptCoord.io.trajectory import trajectory_to_records
from pyDistOptCoord.exceptions import ConfigError


@pytest.fixture(scope='module')
def scenario_data():
    data, _ = doc.io.load_json(doc.io.default_scenario_path())
    return data


def write_scenario(tmp_path, data, name='scenario.json'):
    file_name = str(tmp_path / name)
    with open(file_name, 'w') as json_file:
        json.dump(data, json_file, indent=2)
    return file_name


def test_columns():
    columns = doc.io.trajectory_columns(2, 2, 1)
    assert columns[:3] == ['t', 'x_1_1', 'x_1_2']
    assert 'zeta_2_2' in columns
    assert columns[-3:] == ['u_2_1', 'err', 'obj_gap']
    assert len(columns) == 1 + 16 + 2 + 2


def test_records(short_traj):
    records = trajectory_to_records(short_traj)
    assert len(records) == len(short_traj)
    assert records['x_3_2'] == pytest.approx(short_traj.x[:, 5])
    assert records['err'] == pytest.approx(short_traj.err)


def test_csv(short_traj, out_dir):
    file_name = str(out_dir / 'trajectory.csv')
    doc.io.save_trajectory_csv(short_traj, file_name)
    with open(file_name, 'r') as csv_file:
        header = csv_file.readline().strip()
    assert header.startswith('t,x_1_1,x_1_2')
    assert header.endswith('err,obj_gap')
    traj = doc.io.load_trajectory_csv(file_name)
    assert traj.num_agents == 5
    assert traj.dim == 2
    assert np.array_equal(traj.times, short_traj.times)
    assert np.array_equal(traj.states, short_traj.states)
    assert np.array_equal(traj.inputs, short_traj.inputs)


def test_nexus(short_traj, out_dir):
    file_name = str(out_dir / 'trajectory.nxs')
    doc.io.save_trajectory_to_nexus(short_traj, file_name, metrics={'sup_err': 0.1})
    # replacing an existing entry
    doc.io.save_trajectory_to_nexus(short_traj, file_name, metrics={'sup_err': 0.2})
    doc.io.save_trajectory_to_nexus(short_traj, file_name, entry_name='other')
    traj = doc.io.load_trajectory_from_nexus(file_name)
    assert traj.num_agents == 5
    assert traj.stride == 10
    assert traj.dt == pytest.approx(1e-3)
    assert traj.x_star == pytest.approx([-0.5, 0.5])
    assert traj.states == pytest.approx(short_traj.states)
    assert traj.err == pytest.approx(short_traj.err)
    with pytest.raises(KeyError):
        doc.io.load_trajectory_from_nexus(file_name, entry_name='missing')
    # the archive is plain HDF5
    with h5py.File(file_name, 'r') as h5:
        assert sorted(h5.keys()) == ['other', 'trajectory']
        assert h5['trajectory'].attrs['sup_err'] == pytest.approx(0.2)
        assert h5['trajectory/data/err'][()] == pytest.approx(short_traj.err)


def test_save_json(out_dir):
    file_name = str(out_dir / 'report.json')
    doc.io.save_json({'b': np.float64(1.5), 'a': np.arange(3), 'c': np.bool_(True)},
                     file_name)
    data, text = doc.io.load_json(file_name)
    assert data == {'a': [0, 1, 2], 'b': 1.5, 'c': True}
    assert text.index('"a"') < text.index('"b"')


def test_default_scenario(scenario):
    assert scenario.model.A == pytest.approx(np.array([[0.2, 0.6], [-0.6, 0.0]]))
    assert scenario.graph.num_agents == 5
    assert scenario.gains.K.shape == (2, 8)
    assert scenario.seeds == [0, 1, 2, 3, 4]
    assert scenario.declared_rho == 0.1
    assert scenario.sim.t_final == 50.0
    assert scenario.sim.tail_window == (40.0, 50.0)
    assert scenario.certificate is None
    assert scenario.spectrum.lambda_2 == pytest.approx(0.276393, abs=1e-6)


def test_missing_section(scenario_data, tmp_path):
    data = dict(scenario_data)
    del data['objectives']
    with pytest.raises(ConfigError) as error:
        doc.io.ScenarioConfig.from_file(write_scenario(tmp_path, data))
    assert error.value.field == 'objectives'


def test_malformed_json(tmp_path):
    file_name = str(tmp_path / 'broken.json')
    with open(file_name, 'w') as json_file:
        json_file.write('{\n  "agent": {\n    "A": [[1, 2],\n}\n')
    with pytest.raises(ConfigError) as error:
        doc.io.load_json(file_name)
    assert 'line' in str(error.value)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        doc.io.ScenarioConfig.from_file(str(tmp_path / 'missing.json'))


@pytest.mark.parametrize('section, value, field', [
    ('agent', {'A': [[0.2, 0.6], [-0.6, 0.0]], 'B0': [[1.0, 5.0]]}, 'agent'),
    ('gains', {'K': [[1.0, 2.0, 3.0]]}, 'gains'),
    ('graph', {'num_agents': 5, 'edges': [[1, 2, 1.0], [3, 4, 1.0]]}, 'graph'),
    ('nonlinearity', {'kind': 'sinusoidal_gain', 'alpha': 0.6, 'beta': 1.0,
                      'gamma': 0.2}, 'nonlinearity'),
    ('simulation', {'dt': 0.001, 'speed': 2.0}, 'simulation.speed'),
    ('solver', {'tolerance': 1.0}, 'solver.tolerance'),
])
def test_invalid_sections(scenario_data, tmp_path, section, value, field):
    data = dict(scenario_data)
    data[section] = value
    with pytest.raises(ConfigError) as error:
        doc.io.ScenarioConfig.from_file(write_scenario(tmp_path, data))
    assert error.value.field == field


def test_objective_count(scenario_data, tmp_path):
    data = dict(scenario_data)
    data['objectives'] = dict(data['objectives'], locals=data['objectives']['locals'][:4])
    with pytest.raises(ConfigError) as error:
        doc.io.ScenarioConfig.from_file(write_scenario(tmp_path, data))
    assert error.value.field == 'objectives.locals'
    assert 'line' in str(error.value)


def test_overrides(scenario_data, tmp_path):
    scenario = doc.io.ScenarioConfig(scenario_data)
    graph_file = write_scenario(tmp_path, doc.NetworkGraph.complete(5).to_dict(),
                                'graph.json')
    scenario.apply_overrides(dt=5e-4, t_final=10.0, seed=9, gamma=0.4, graph=graph_file)
    assert scenario.sim.dt == 5e-4
    assert scenario.sim.t_final == 10.0
    assert scenario.sim.tail_window == (8.0, 10.0)
    assert scenario.seeds == [9]
    assert scenario.bounds.gamma == 0.4
    assert scenario.spectrum.lambda_2 == pytest.approx(5.0)
    with pytest.raises(ConfigError):
        scenario.apply_overrides(gamma=0.1)
    with pytest.raises(ConfigError):
        scenario.apply_overrides(dt=-1.0)
    small_graph = write_scenario(tmp_path, doc.NetworkGraph.path(3).to_dict(), 'small.json')
    with pytest.raises(ConfigError):
        scenario.apply_overrides(graph=small_graph)


def test_output_path(scenario_data, tmp_path, monkeypatch):
    target = str(tmp_path / 'results')
    monkeypatch.setenv('DOC_COORD_OUT', target)
    scenario = doc.io.ScenarioConfig(scenario_data)
    assert scenario.output_path() == target
    assert path.isdir(target)
