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

import configparser
import os.path as path
from . import __path__

parser = configparser.ConfigParser()


# read global default values for configuration variables
with open(path.join(__path__[0], 'pyDistOptCoord_default.conf')) as conf_file:
    parser.read_file(conf_file)

# read user configuration and local configuration if available
parser.read([
    path.expanduser(path.join('~', '.pyDistOptCoord.conf')),
    'pyDistOptCoord.conf'])

# set global variables according to configuration
sect = 'pyDistOptCoord'
LOG_LEVEL = parser.get(sect, 'log_level')
LOG_FORMAT = parser.get(sect, 'log_format', raw=True)

sect = 'simulation'
DT = parser.getfloat(sect, 'dt')
T_FINAL = parser.getfloat(sect, 't_final')
RECORD_STRIDE = parser.getint(sect, 'record_stride')
TAIL_START = parser.getfloat(sect, 'tail_start')
TAIL_STOP = parser.getfloat(sect, 'tail_stop')
INIT_LOW = parser.getfloat(sect, 'init_low')
INIT_HIGH = parser.getfloat(sect, 'init_high')
DIVERGENCE_THRESHOLD = parser.getfloat(sect, 'divergence_threshold')
CONSERVATION_TOL = parser.getfloat(sect, 'conservation_tol')

sect = 'solver'
FEASIBILITY_MARGIN = parser.getfloat(sect, 'feasibility_margin')
VERIFY_MARGIN = parser.getfloat(sect, 'verify_margin')
P_MIN_EIG = parser.getfloat(sect, 'p_min_eig')
TRACE_MAX = parser.getfloat(sect, 'trace_max')
SYNTH_Q_MIN = parser.getfloat(sect, 'synth_q_min')
SYNTH_GAIN_BOUND = parser.getfloat(sect, 'synth_gain_bound')
CONDITION_ROUNDS = parser.getint(sect, 'condition_rounds')
BARRIER_MU = parser.getfloat(sect, 'barrier_mu')
BARRIER_TOL = parser.getfloat(sect, 'barrier_tol')
NEWTON_TOL = parser.getfloat(sect, 'newton_tol')
MAX_NEWTON = parser.getint(sect, 'max_newton')
MAX_OUTER = parser.getint(sect, 'max_outer')
OPTIMIZER_MAX_ITER = parser.getint(sect, 'optimizer_max_iter')
RESIDUAL_TOL = parser.getfloat(sect, 'residual_tol')

sect = 'cli'
OUTPUT_DIR = parser.get(sect, 'output_dir')
TAIL_ERROR = parser.getfloat(sect, 'tail_error')
CROSS_CHECK_TOL = parser.getfloat(sect, 'cross_check_tol')
CROSS_CHECK_HORIZON = parser.getfloat(sect, 'cross_check_horizon')
