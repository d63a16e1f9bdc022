#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest
import numpy as np
import pyDistOptCoord as doc
from pyDistOptCoord.graph import connectivity_check
from pyDistOptCoord.exceptions import DimensionMismatch, DisconnectedGraph, InvalidWeight


def test_path_spectrum():
    spectrum = doc.build_laplacian(doc.NetworkGraph.path(5))
    expected = 2 - 2*np.cos(np.arange(5)*np.pi/5)
    assert spectrum.eigenvalues == pytest.approx(np.sort(expected), abs=1e-10)
    assert spectrum.lambda_2 == pytest.approx(0.381966, abs=1e-6)
    assert spectrum.lambda_max == pytest.approx(3.618034, abs=1e-6)


@pytest.mark.parametrize('weight, eigenvalues', [
    (1.0, [0.0, 2.0]),
    (3.0, [0.0, 6.0]),
])
def test_two_agents(weight, eigenvalues):
    spectrum = doc.build_laplacian(doc.NetworkGraph(2, [(0, 1, weight)]))
    assert spectrum.eigenvalues == pytest.approx(eigenvalues, abs=1e-12)
    assert spectrum.laplacian == pytest.approx(weight*np.array([[1, -1], [-1, 1]]))


@pytest.mark.parametrize('graph', [
    doc.NetworkGraph.path(5),
    doc.NetworkGraph.complete(4),
    doc.NetworkGraph(4, [(0, 1, 0.5), (1, 2, 2.0), (2, 3, 1.0), (3, 0, 0.3)]),
])
def test_basis(graph):
    spectrum = doc.build_laplacian(graph)
    U = spectrum.basis
    N = graph.num_agents
    assert U.T @ U == pytest.approx(np.eye(N), abs=1e-10)
    assert U[:, 0] == pytest.approx(np.ones(N)/np.sqrt(N), abs=1e-12)
    assert U.T @ spectrum.laplacian @ U == pytest.approx(np.diag(spectrum.eigenvalues),
                                                         abs=1e-9)
    assert U @ np.diag(spectrum.eigenvalues) @ U.T == pytest.approx(spectrum.laplacian,
                                                                    abs=1e-8)
    assert spectrum.laplacian.sum(axis=1) == pytest.approx(np.zeros(N), abs=1e-15)
    assert np.linalg.norm(U, 2) == pytest.approx(1.0, abs=1e-10)
    assert spectrum.x1.shape == (N, N - 1)


def test_complete_repeated_eigenvalues():
    spectrum = doc.build_laplacian(doc.NetworkGraph.complete(3))
    assert spectrum.eigenvalues == pytest.approx([0, 3, 3], abs=1e-12)


@pytest.mark.parametrize('num_agents, edges, connected', [
    (3, [(0, 1), (1, 2)], True),
    (4, [(0, 1), (2, 3)], False),
    (1, [], True),
])
def test_connectivity_check(num_agents, edges, connected):
    graph = doc.NetworkGraph(num_agents, edges, check_connected=False)
    assert connectivity_check(graph) == connected


def test_disconnected():
    with pytest.raises(DisconnectedGraph):
        doc.NetworkGraph(4, [(0, 1), (2, 3)])
    graph = doc.NetworkGraph(4, [(0, 1), (2, 3)], check_connected=False)
    with pytest.raises(DisconnectedGraph):
        doc.build_laplacian(graph)


@pytest.mark.parametrize('edges, error', [
    ([(0, 1, -1.0)], InvalidWeight),
    ([(0, 1, 0.0)], InvalidWeight),
    ([(0, 0, 1.0), (0, 1, 1.0)], ValueError),
    ([(0, 1, 1.0), (1, 0, 2.0)], ValueError),
    ([(0, 2, 1.0)], DimensionMismatch),
])
def test_invalid_edges(edges, error):
    with pytest.raises(error):
        doc.NetworkGraph(2, edges)


def test_single_agent_spectrum():
    with pytest.raises(DimensionMismatch):
        doc.build_laplacian(doc.NetworkGraph(1, []))


def test_from_dict():
    data = {'num_agents': 3, 'edges': [[1, 2, 1.0], [2, 3, 2.0]]}
    graph = doc.NetworkGraph.from_dict(data)
    assert graph.edges == ((0, 1, 1.0), (1, 2, 2.0))
    assert graph.neighbors(1) == [0, 2]
    assert graph.to_dict() == data
    assert graph.adjacency() == pytest.approx(np.array([[0, 1, 0], [1, 0, 2], [0, 2, 0]]))


def test_scenario_graph(scenario):
    assert connectivity_check(scenario.graph)
    assert scenario.graph.num_agents == 5
    assert scenario.spectrum.lambda_2 == pytest.approx(0.2*(2 - 2*np.cos(2*np.pi/5)))
    assert scenario.spectrum.lambda_max == pytest.approx(0.2*(2 - 2*np.cos(4*np.pi/5)))


def test_ring_spectrum():
    graph = doc.NetworkGraph.ring(5, weight=0.2)
    assert graph.edges[-1] == (0, 4, 0.2)
    spectrum = doc.build_laplacian(graph)
    expected = 0.2*(2 - 2*np.cos(2*np.pi*np.arange(5)/5))
    assert spectrum.eigenvalues == pytest.approx(np.sort(expected), abs=1e-12)
    assert spectrum.lambda_2 == pytest.approx(0.276393, abs=1e-6)
    assert spectrum.lambda_max == pytest.approx(0.723607, abs=1e-6)


def test_ring_too_small():
    with pytest.raises(DimensionMismatch):
        doc.NetworkGraph.ring(2)
