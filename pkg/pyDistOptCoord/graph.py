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
from scipy.linalg import eigh
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import breadth_first_order

from .exceptions import DisconnectedGraph, InvalidWeight, DimensionMismatch

__all__ = ['NetworkGraph', 'LaplacianSpectrum', 'build_laplacian', 'connectivity_check']

__docformat__ = 'restructuredtext'

log = logging.getLogger(__name__)
log.setLevel(config.LOG_LEVEL)

ZERO_EIG_TOL = 1e-10


class NetworkGraph(object):
    """NetworkGraph

    Weighted undirected communication graph of the agents. Every edge is
    stored once and applied symmetrically. Vertices are numbered ``0..N-1``
    internally, while the JSON representation uses 1-based indices.

    Args:
        num_agents (int): number of agents N.
        edges (list[tuple]): list of ``(i, j, weight)`` with 0-based vertices.

    Keyword Args:
        check_connected (bool): raise ``DisconnectedGraph`` for graphs with
          more than one component - defaults to ``True``.

    Attributes:
        log (logging.logger): logger instance from logging.
        num_agents (int): number of agents N.
        edges (tuple[tuple]): normalized edges ``(i, j, weight)`` with i < j.

    """

    def __init__(self, num_agents, edges, **kwargs):
        self.log = logging.getLogger(__name__)
        self.log.setLevel(config.LOG_LEVEL)
        if int(num_agents) < 1:
            raise DimensionMismatch('num_agents must be positive!')
        self.num_agents = int(num_agents)
        normalized = []
        seen = set()
        for edge in edges:
            if len(edge) == 2:
                i, j = edge
                weight = 1.0
            else:
                i, j, weight = edge
            i, j, weight = int(i), int(j), float(weight)
            if not (0 <= i < self.num_agents and 0 <= j < self.num_agents):
                raise DimensionMismatch('Edge ({:d}, {:d}) references an unknown '
                                        'vertex!'.format(i, j))
            if i == j:
                raise ValueError('Self-loop at vertex {:d} is not allowed!'.format(i))
            if not (weight > 0) or not np.isfinite(weight):
                raise InvalidWeight('Edge ({:d}, {:d}) has non-positive weight '
                                    '{:g}!'.format(i, j, weight))
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError('Duplicate edge ({:d}, {:d})!'.format(*key))
            seen.add(key)
            normalized.append((key[0], key[1], weight))
        self.edges = tuple(normalized)
        if kwargs.get('check_connected', True) and not connectivity_check(self):
            raise DisconnectedGraph('Communication graph is not connected!')
        self.log.debug('Created graph with {:d} agents and {:d} edges'.format(
            self.num_agents, len(self.edges)))

    @classmethod
    def from_dict(cls, data):
        """from_dict

        Creates a graph from its JSON representation
        ``{"num_agents": N, "edges": [[i, j, weight], ...]}`` with 1-based
        vertex indices.

        Args:
            data (dict): JSON dictionary.

        Returns:
            graph (NetworkGraph): the graph.

        """
        edges = []
        for edge in data['edges']:
            edge = list(edge)
            edges.append(tuple([int(edge[0]) - 1, int(edge[1]) - 1] + edge[2:]))
        return cls(data['num_agents'], edges)

    def to_dict(self):
        """Returns the JSON representation with 1-based vertices."""
        return {'num_agents': self.num_agents,
                'edges': [[i + 1, j + 1, w] for i, j, w in self.edges]}

    @classmethod
    def path(cls, num_agents, weight=1.0):
        """Path graph 1-2-...-N with identical edge weights."""
        return cls(num_agents, [(i, i + 1, weight) for i in range(num_agents - 1)])

    @classmethod
    def ring(cls, num_agents, weight=1.0):
        """Cycle 1-2-...-N-1 with identical edge weights, needs ``N >= 3``."""
        if num_agents < 3:
            raise DimensionMismatch('A ring needs at least 3 agents, got {:d}!'.format(
                num_agents))
        return cls(num_agents, [(i, (i + 1) % num_agents, weight)
                                for i in range(num_agents)])

    @classmethod
    def complete(cls, num_agents, weight=1.0):
        """Complete graph on ``num_agents`` vertices."""
        return cls(num_agents, [(i, j, weight) for i in range(num_agents)
                                for j in range(i + 1, num_agents)])

    def adjacency(self):
        """adjacency

        Returns the symmetric weighted adjacency matrix with
        ``a_ij = a_ji = weight``.

        Returns:
            adjacency (ndarray[float]): N x N matrix.

        """
        adjacency = np.zeros((self.num_agents, self.num_agents))
        for i, j, weight in self.edges:
            adjacency[i, j] = weight
            adjacency[j, i] = weight
        return adjacency

    def neighbors(self, i):
        """Sorted list of the neighbors of vertex ``i``."""
        result = [j for a, j, _ in self.edges if a == i]
        result += [a for a, j, _ in self.edges if j == i]
        return sorted(result)


class LaplacianSpectrum(object):
    """LaplacianSpectrum

    Laplacian ``L = D - A`` of a connected graph together with its ascending
    eigenvalues and an orthogonal matrix ``U`` whose first column is
    ``1/sqrt(N)`` and which diagonalizes ``L``.

    Args:
        laplacian (ndarray[float]): N x N Laplacian.
        eigenvalues (ndarray[float]): ascending eigenvalues.
        basis (ndarray[float]): orthogonal N x N matrix U.

    Attributes:
        laplacian (ndarray[float]): N x N Laplacian.
        eigenvalues (ndarray[float]): ascending eigenvalues.
        basis (ndarray[float]): orthogonal N x N matrix U.
        num_agents (int): number of agents N.

    """

    def __init__(self, laplacian, eigenvalues, basis):
        self.laplacian = laplacian
        self.eigenvalues = eigenvalues
        self.basis = basis
        self.num_agents = laplacian.shape[0]

    @property
    def lambda_2(self):
        """Algebraic connectivity, smallest nonzero eigenvalue."""
        return float(self.eigenvalues[1])

    @property
    def lambda_max(self):
        """Largest eigenvalue lambda_N."""
        return float(self.eigenvalues[-1])

    @property
    def x1(self):
        """Columns 2..N of U spanning the complement of the ones vector."""
        return self.basis[:, 1:]


def connectivity_check(graph):
    """connectivity_check

    Undirected breadth-first traversal from the first vertex.

    Args:
        graph (NetworkGraph): the graph.

    Returns:
        connected (bool): ``True`` iff every vertex is reachable.

    """
    if graph.num_agents == 1:
        return True
    rows = [i for i, _, _ in graph.edges]
    cols = [j for _, j, _ in graph.edges]
    adjacency = csr_matrix((np.ones(len(rows)), (rows, cols)),
                           shape=(graph.num_agents, graph.num_agents))
    order = breadth_first_order(adjacency, 0, directed=False,
                                return_predecessors=False)
    return len(order) == graph.num_agents


def build_laplacian(graph):
    """build_laplacian

    Assembles ``L = D - A``, its ascending eigenvalues and the orthogonal
    matrix ``U = [1/sqrt(N), X1]`` with ``U^T L U = diag(lambda)``.
    Within repeated eigenvalues any orthonormal eigenbasis is returned.

    Args:
        graph (NetworkGraph): connected graph with at least two vertices.

    Returns:
        spectrum (LaplacianSpectrum): Laplacian, eigenvalues and basis.

    """
    num_agents = graph.num_agents
    if num_agents < 2:
        raise DimensionMismatch('The Laplacian spectrum needs at least two agents!')
    if not connectivity_check(graph):
        raise DisconnectedGraph('Communication graph is not connected!')
    for i, j, weight in graph.edges:
        if not weight > 0:
            raise InvalidWeight('Edge ({:d}, {:d}) has non-positive weight!'.format(i, j))

    adjacency = graph.adjacency()
    laplacian = np.diag(adjacency.sum(axis=1)) - adjacency
    eigenvalues, vectors = eigh(laplacian)
    if eigenvalues[1] <= ZERO_EIG_TOL:
        raise DisconnectedGraph('lambda_2 = {:g} indicates a disconnected '
                                'graph!'.format(eigenvalues[1]))

    ones = np.ones(num_agents)/np.sqrt(num_agents)
    # remove the residual ones-component and re-orthonormalize
    x1 = vectors[:, 1:] - np.outer(ones, ones @ vectors[:, 1:])
    x1, r = np.linalg.qr(x1)
    x1 = x1*np.sign(np.diag(r))
    basis = np.column_stack([ones, x1])

    log.info('Built Laplacian with lambda_2 = {:.6g}, lambda_N = {:.6g}'.format(
        eigenvalues[1], eigenvalues[-1]))
    return LaplacianSpectrum(laplacian, eigenvalues, basis)
