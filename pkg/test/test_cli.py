#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest
import json
import os.path as path
import pyDistOptCoord as doc
from pyDistOptCoord import cli
from pyDistOptCoord.cli import EXIT_ERROR, EXIT_FAIL, EXIT_PASS, main
from pyDistOptCoord.exceptions import SynthesisInfeasible


@pytest.fixture
def output(tmp_path, monkeypatch):
    target = tmp_path / 'results'
    monkeypatch.setenv('DOC_COORD_OUT', str(target))
    return target


@pytest.fixture(scope='module')
def scenario_file():
    return doc.io.default_scenario_path()


def write_scenario(tmp_path, **sections):
    data, _ = doc.io.load_json(doc.io.default_scenario_path())
    data.update(sections)
    file_name = str(tmp_path / 'scenario.json')
    with open(file_name, 'w') as json_file:
        json.dump(data, json_file, indent=2)
    return file_name


def read(file_name):
    with open(str(file_name), 'r') as json_file:
        return json.load(json_file)


def test_verify(scenario_file, output):
    assert main(['verify', scenario_file]) == EXIT_PASS
    report = read(output / 'verify_report.json')
    assert report['passed']
    assert report['bound']['epsilon'] > 0
    assert len(report['certificate']['P']) == 8


def test_verify_zero_gain(tmp_path, output):
    file_name = write_scenario(tmp_path, gains={'K': [[0.0]*8, [0.0]*8]})
    assert main(['verify', file_name]) == EXIT_FAIL
    assert not read(output / 'verify_report.json')['passed']


def test_verify_without_gains(tmp_path, output):
    data, _ = doc.io.load_json(doc.io.default_scenario_path())
    del data['gains']
    file_name = str(tmp_path / 'no_gains.json')
    with open(file_name, 'w') as json_file:
        json.dump(data, json_file)
    assert main(['verify', file_name]) == EXIT_ERROR


def test_malformed(tmp_path, output):
    file_name = str(tmp_path / 'broken.json')
    with open(file_name, 'w') as json_file:
        json_file.write('{"agent": [1, 2,]}')
    assert main(['verify', file_name]) == EXIT_ERROR
    assert main(['simulate', file_name]) == EXIT_ERROR


def test_unstabilizable(tmp_path, output):
    file_name = write_scenario(tmp_path, agent={'A': [[1.0, 0.0], [0.0, 1.0]],
                                                'B0': [[1.0, 0.0], [0.0, 0.0]]})
    assert main(['synthesize', file_name]) == EXIT_ERROR


def test_synthesis_failure(scenario_file, output, monkeypatch):
    def infeasible(*args):
        raise SynthesisInfeasible('consensus block not negative definite', stage='block_1')

    monkeypatch.setattr(cli, 'synthesize_gain', infeasible)
    assert main(['synthesize', scenario_file]) == EXIT_FAIL
    report = read(output / 'synthesis_report.json')
    assert not report['passed']
    assert report['stage'] == 'block_1'


def test_simulate(scenario_file, output):
    args = ['simulate', scenario_file, '--t-final', '2', '--seed', '3', '--nexus']
    assert main(args) == EXIT_PASS
    metrics = read(output / 'metrics.json')
    assert metrics['certificate_passed']
    assert metrics['max_v_sum'] <= 1e-6
    assert metrics['bound_holds']
    assert metrics['sup_err'] < metrics['epsilon']
    assert path.isfile(str(output / 'trajectory.nxs'))
    traj = doc.io.load_trajectory_csv(str(output / 'trajectory.csv'))
    assert traj.times[-1] == pytest.approx(2.0)
    first = (output / 'trajectory.csv').read_text()
    assert main(args) == EXIT_PASS
    assert (output / 'trajectory.csv').read_text() == first


def test_simulate_gains_file(scenario_file, tmp_path, output):
    gains_file = str(tmp_path / 'gains.json')
    scenario = doc.io.ScenarioConfig.default()
    doc.io.save_json({'gains': scenario.gains.to_dict()}, gains_file)
    assert main(['simulate', scenario_file, '--t-final', '1', '--gains', gains_file,
                 '--dt', '0.002']) == EXIT_PASS
    traj = doc.io.load_trajectory_csv(str(output / 'trajectory.csv'))
    assert traj.times[1] == pytest.approx(0.02)


def test_invalid_override(scenario_file, output):
    assert main(['simulate', scenario_file, '--gamma', '0.1']) == EXIT_ERROR
    assert main(['simulate', scenario_file, '--dt', '0']) == EXIT_ERROR


@pytest.mark.slow
def test_synthesize(scenario_file, output):
    status = main(['synthesize', scenario_file])
    if status == EXIT_PASS:
        data = read(output / 'gains.json')
        assert len(data['gains']['K'][0]) == 8
        assert main(['simulate', scenario_file, '--t-final', '2',
                     '--gains', str(output / 'gains.json')]) == EXIT_PASS
    else:
        assert status == EXIT_FAIL
        assert read(output / 'synthesis_report.json')['stage'] in ['gain', 'block_i',
                                                                   'block_1', 'verify']


@pytest.mark.slow
def test_reproduce(output):
    assert main(['reproduce-paper']) == EXIT_PASS
    report = read(output / 'reproduce_report.json')
    assert report['passed']
    assert report['stages']['cross_check']['deviation'] <= 1e-6
    for run in report['stages']['simulate']:
        assert run['sup_err'] <= 0.3
        assert run['final_x_mean'] == pytest.approx([-0.5, 0.5], abs=0.3)
    for seed in range(5):
        assert path.isfile(str(output / 'trajectory_seed{:d}.csv'.format(seed)))


@pytest.mark.slow
def test_reproduce_smaller_gamma(output):
    assert main(['reproduce-paper', '--gamma', '0.4', '--jobs', '2']) == EXIT_PASS
