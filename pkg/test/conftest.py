#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest
import matplotlib
matplotlib.use('Agg')
import numpy as np
import pyDistOptCoord as doc
from pyDistOptCoord.protocol import solve_reference_point


@pytest.fixture(scope='session')
def scenario():
    return doc.io.ScenarioConfig.default()


@pytest.fixture(scope='module')
def model(scenario):
    return scenario.model


@pytest.fixture(scope='module')
def bounds(scenario):
    return scenario.bounds


@pytest.fixture(scope='module')
def nl(scenario):
    return scenario.nonlinearities


@pytest.fixture(scope='module')
def spectrum(scenario):
    return scenario.spectrum


@pytest.fixture(scope='module')
def objs(scenario):
    return scenario.objectives


@pytest.fixture(scope='module')
def gains(scenario):
    return scenario.gains


@pytest.fixture(scope='module')
def reference(model, bounds, spectrum, objs, gains):
    return solve_reference_point(model, bounds, spectrum, objs, gains)


@pytest.fixture(scope='module')
def prob(model, bounds, objs, spectrum, gains):
    return doc.build_lmi(model, bounds, objs, spectrum, gains)


@pytest.fixture(scope='session')
def certificate(scenario):
    prob = doc.build_lmi(scenario.model, scenario.bounds, scenario.objectives,
                         scenario.spectrum, scenario.gains)
    return doc.solve_feasibility(prob)


@pytest.fixture(scope='session')
def short_cfg(scenario):
    return scenario.sim.copy(t_final=10.0, tail_window=(8.0, 10.0))


@pytest.fixture(scope='session')
def short_traj(scenario, short_cfg):
    return doc.simulate(scenario.model, scenario.bounds, scenario.nonlinearities,
                        scenario.spectrum, scenario.objectives, scenario.gains, short_cfg)


@pytest.fixture(scope='module')
def scalar_setup():
    model = doc.AgentModel([[0.0]], [[1.0]], check=False)
    bounds = doc.SectorBounds(1.0, 1.0, 0.0)
    graph = doc.NetworkGraph(2, [(0, 1, 0.5)])
    spectrum = doc.build_laplacian(graph)
    objs = doc.ObjectiveSet([doc.QuadraticObjective([[1.0]], [0.0]),
                             doc.QuadraticObjective([[1.0]], [1.0])])
    return model, bounds, spectrum, objs


@pytest.fixture(scope='module')
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope='module')
def out_dir(tmp_path_factory):
    return tmp_path_factory.mktemp('pytest_data')
