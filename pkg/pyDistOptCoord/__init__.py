import logging
import sys
from . import config

logging.basicConfig(stream=sys.stdout,
                    format=config.LOG_FORMAT)

from .graph import NetworkGraph, LaplacianSpectrum, build_laplacian
from .objectives import QuadraticObjective, CallableObjective, ObjectiveSet
from .nonlinearity import (SectorBounds, IdentityNonlinearity, SinusoidalGain, SlopeTable,
                           CustomNonlinearity)
from .protocol import AgentModel, GainSet, ClosedLoopState, ReferencePoint
from .certificates import (Certificate, build_lmi, verify_certificate, solve_feasibility,
                           synthesize_gain, suboptimality_bound)
from .simulator import SimConfig, Trajectory, simulate, tail_metrics
from . import io
from . import helpers
from . import plotting

__all__ = ['NetworkGraph', 'LaplacianSpectrum', 'build_laplacian', 'QuadraticObjective',
           'CallableObjective', 'ObjectiveSet', 'SectorBounds', 'IdentityNonlinearity',
           'SinusoidalGain', 'SlopeTable', 'CustomNonlinearity', 'AgentModel', 'GainSet',
           'ClosedLoopState', 'ReferencePoint', 'Certificate', 'build_lmi',
           'verify_certificate', 'solve_feasibility', 'synthesize_gain',
           'suboptimality_bound', 'SimConfig', 'Trajectory', 'simulate', 'tail_metrics',
           'io', 'helpers', 'plotting']

__version__ = '0.1.0'
