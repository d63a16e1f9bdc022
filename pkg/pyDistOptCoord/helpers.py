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

import numpy as np
from scipy.linalg import eigvalsh

from .exceptions import DimensionMismatch, NonFinite

__all__ = ['check_finite', 'as_matrix', 'sym_basis', 'sym_from_vector',
           'max_eig', 'min_eig', 'unstack', 'random_pairs']

__docformat__ = 'restructuredtext'


def check_finite(value, name='input'):
    """check_finite

    Converts ``value`` to a float ndarray and makes sure it contains neither
    NaN nor Inf.

    Args:
        value (array_like): input values.
        name (str, optional): name used in the error message.

    Returns:
        array (ndarray[float]): converted input.

    """
    array = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(array)):
        raise NonFinite('{:s} contains non-finite values!'.format(name))
    return array


def as_matrix(value, shape=None, name='matrix'):
    """as_matrix

    Converts ``value`` to a finite 2d float array and optionally checks its
    shape. A ``None`` entry in ``shape`` accepts any size along that axis.

    Args:
        value (array_like): nested lists or ndarray.
        shape (tuple, optional): expected shape.
        name (str, optional): name used in error messages.

    Returns:
        matrix (ndarray[float]): 2d array.

    """
    matrix = check_finite(value, name)
    if matrix.ndim != 2:
        raise DimensionMismatch('{:s} must be 2-dimensional, got shape {:s}!'.format(
            name, str(matrix.shape)))
    if shape is not None:
        for got, expected in zip(matrix.shape, shape):
            if expected is not None and got != expected:
                raise DimensionMismatch('{:s} has shape {:s}, expected {:s}!'.format(
                    name, str(matrix.shape), str(tuple(shape))))
    return matrix


def sym_basis(size):
    """sym_basis

    Returns the standard basis of the space of symmetric ``size`` x ``size``
    matrices. Off-diagonal basis elements carry a one at both mirrored
    positions.

    Args:
        size (int): matrix size.

    Returns:
        basis (ndarray[float]): array of shape (size*(size+1)/2, size, size).

    """
    rows, cols = np.triu_indices(size)
    basis = np.zeros((len(rows), size, size))
    for k, (i, j) in enumerate(zip(rows, cols)):
        basis[k, i, j] = 1.0
        basis[k, j, i] = 1.0
    return basis


def sym_from_vector(coefficients, basis):
    """sym_from_vector

    Symmetric matrix from its coordinates in ``basis``.

    Args:
        coefficients (ndarray[float]): coordinates.
        basis (ndarray[float]): basis as returned by :func:`sym_basis`.

    Returns:
        matrix (ndarray[float]): symmetric matrix.

    """
    return np.einsum('j,jab->ab', coefficients, basis)


def max_eig(matrix):
    """Largest eigenvalue of a symmetric matrix."""
    return float(eigvalsh(0.5*(matrix + matrix.T))[-1])


def min_eig(matrix):
    """Smallest eigenvalue of a symmetric matrix."""
    return float(eigvalsh(0.5*(matrix + matrix.T))[0])


def unstack(vector, num_agents):
    """unstack

    Reshapes a stacked agent vector ``[z_1; ...; z_N]`` into an array with
    one row per agent.

    Args:
        vector (ndarray[float]): stacked vector of length N*k.
        num_agents (int): number of agents N.

    Returns:
        rows (ndarray[float]): array of shape (N, k).

    """
    vector = np.asarray(vector, dtype=float)
    if vector.size % num_agents != 0:
        raise DimensionMismatch('Vector of length {:d} cannot be split into {:d} '
                                'agents!'.format(vector.size, num_agents))
    return vector.reshape(num_agents, -1)


def random_pairs(rng, num, dim, low, high):
    """random_pairs

    Draws ``num`` pairs of points uniformly from the box ``[low, high]^dim``.

    Args:
        rng (numpy.random.Generator): random generator.
        num (int): number of pairs.
        dim (int): dimension of each point.
        low (float): lower box bound.
        high (float): upper box bound.

    Returns:
        pairs (list[tuple]): list of ``(z, z_prime)`` pairs.

    """
    points = rng.uniform(low, high, size=(num, 2, dim))
    return [(p[0], p[1]) for p in points]
