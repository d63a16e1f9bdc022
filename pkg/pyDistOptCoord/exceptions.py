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

__all__ = ['DimensionMismatch', 'NonFinite', 'InvalidWeight', 'DisconnectedGraph',
           'InvalidBounds', 'InvalidSector', 'NotStabilizable', 'SingularReference',
           'EmptyWindow', 'ConfigError', 'NoConvergence', 'Infeasible',
           'NumericalFailure', 'SynthesisInfeasible', 'Diverged']

__docformat__ = 'restructuredtext'


class DimensionMismatch(ValueError):
    """Array shapes of agent model, gains, graph or states do not fit."""


class NonFinite(ValueError):
    """An input or state contains NaN or Inf."""


class InvalidWeight(ValueError):
    """An edge weight is not strictly positive."""


class DisconnectedGraph(ValueError):
    """The communication graph has more than one component."""


class InvalidBounds(ValueError):
    """Sector bounds violate 0 < alpha <= beta or the declared gamma is too small."""


class InvalidSector(ValueError):
    """gamma is outside [0, 1] or mu' is outside [0, 1)."""


class NotStabilizable(ValueError):
    """The pair (A, B0) is not stabilizable or B0 lacks full row rank."""


class SingularReference(ValueError):
    """The steady-state equations of the reference point have no solution."""


class EmptyWindow(ValueError):
    """No recorded sample lies in the requested time window."""


class ConfigError(ValueError):
    """Scenario configuration could not be parsed or validated.

    Args:
        message (str): human readable diagnostic.
        field (str, optional): dotted path of the offending field.

    """

    def __init__(self, message, field=''):
        self.field = field
        if field:
            message = '{:s}: {:s}'.format(field, message)
        super().__init__(message)


class NoConvergence(RuntimeError):
    """An iterative solver did not meet its residual criterion."""


class Infeasible(RuntimeError):
    """The LMI feasibility problem has no solution with the required margin."""


class NumericalFailure(RuntimeError):
    """Newton step or factorization broke down inside the barrier solver."""


class SynthesisInfeasible(RuntimeError):
    """Gain synthesis failed.

    Args:
        message (str): diagnostic.
        stage (str): ``'gain'`` for the change-of-variables SDP, ``'block_i'`` or
          ``'block_1'`` for the certificate checks of the recovered gain.

    """

    def __init__(self, message, stage=''):
        self.stage = stage
        super().__init__(message)


class Diverged(RuntimeError):
    """Simulation state norm exceeded the divergence threshold.

    Args:
        message (str): diagnostic.
        time (float): first time at which the threshold was exceeded.

    """

    def __init__(self, message, time=float('nan')):
        self.time = time
        super().__init__(message)
