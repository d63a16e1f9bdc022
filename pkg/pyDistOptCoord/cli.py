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

import argparse
import os.path as path
import numpy as np

from .certificates import (build_lmi, solve_feasibility, suboptimality_bound,
                           synthesize_gain, verify_certificate)
from .exceptions import (ConfigError, Diverged, Infeasible, SingularReference,
                         SynthesisInfeasible)
from .io.scenario import ScenarioConfig, default_scenario_path, load_json, save_json
from .io.trajectory import save_trajectory_csv, save_trajectory_to_nexus
from .protocol import GainSet, solve_reference_point
from .simulator import cross_check_transformed, run_seeds, simulate, tail_metrics

__all__ = ['main', 'cmd_verify', 'cmd_synthesize', 'cmd_simulate', 'cmd_reproduce_paper',
           'EXIT_PASS', 'EXIT_ERROR', 'EXIT_FAIL']

__docformat__ = 'restructuredtext'

log = logging.getLogger(__name__)
log.setLevel(config.LOG_LEVEL)

EXIT_PASS = 0
EXIT_ERROR = 1
EXIT_FAIL = 2


def _load_scenario(args, default=False):
    if getattr(args, 'config', None) is None:
        if not default:
            raise ConfigError('a scenario file is required', field='config')
        scenario = ScenarioConfig.from_file(default_scenario_path())
    else:
        scenario = ScenarioConfig.from_file(args.config)
    scenario.apply_overrides(dt=args.dt, t_final=args.t_final, seed=args.seed,
                             gamma=args.gamma, graph=args.graph)
    gains_file = getattr(args, 'gains', None)
    if gains_file is not None:
        data, _ = load_json(gains_file)
        try:
            scenario.gains = GainSet.from_dict(data.get('gains', data), scenario.model.n)
            scenario.gains.check_dimensions(scenario.model)
        except (ValueError, KeyError, TypeError) as error:
            raise ConfigError(str(error), field=gains_file)
    return scenario


def _require_gains(scenario):
    if scenario.gains is None:
        raise ConfigError('gains are required for this command', field='gains')
    return scenario.gains


def _certify(scenario, gains):
    """Assembles the LMIs, takes or solves the certificate and verifies it.

    Returns the problem, the certificate (``None`` if infeasible) and the
    verification report."""
    prob = build_lmi(scenario.model, scenario.bounds, scenario.objectives,
                     scenario.spectrum, gains)
    cert = scenario.certificate
    if cert is None:
        try:
            cert = solve_feasibility(prob, scenario.margin)
        except Infeasible as error:
            log.warning(str(error))
            return prob, None, {'passed': False, 'reason': str(error)}
    report = verify_certificate(prob, cert)
    cert.rho = report['certified_rho']
    return prob, cert, report


def _bound(scenario, gains, cert):
    """Reference point and sub-optimality bound, empty if unavailable."""
    try:
        reference = solve_reference_point(scenario.model, scenario.bounds,
                                          scenario.spectrum, scenario.objectives, gains)
    except SingularReference as error:
        log.warning(str(error))
        return None, {}
    if cert is None:
        return reference, {}
    bound = suboptimality_bound(cert, scenario.model, reference, scenario.bounds,
                                scenario.declared_rho)
    return reference, bound._asdict()


def cmd_verify(args):
    """cmd_verify

    Verifies the certificate of the scenario gains, solving for it if the
    scenario does not provide one, and writes ``verify_report.json``.

    Args:
        args (argparse.Namespace): parsed arguments.

    Returns:
        status (int): exit status.

    """
    scenario = _load_scenario(args)
    gains = _require_gains(scenario)
    _, cert, report = _certify(scenario, gains)
    if report['passed']:
        _, report['bound'] = _bound(scenario, gains, cert)
        report['certificate'] = cert.to_dict()
    file_name = path.join(scenario.output_path(), 'verify_report.json')
    save_json(report, file_name)
    log.info('Verification {:s}, report written to \'{:s}\''.format(
        'PASSED' if report['passed'] else 'FAILED', file_name))
    return EXIT_PASS if report['passed'] else EXIT_FAIL


def cmd_synthesize(args):
    """cmd_synthesize

    Synthesizes gains and writes them with their certificate to
    ``gains.json``.

    Args:
        args (argparse.Namespace): parsed arguments.

    Returns:
        status (int): exit status.

    """
    scenario = _load_scenario(args)
    output = scenario.output_path()
    try:
        gains, cert = synthesize_gain(scenario.model, scenario.bounds, scenario.objectives,
                                      scenario.spectrum, scenario.margin)
    except SynthesisInfeasible as error:
        log.error('Synthesis failed at stage \'{:s}\': {:s}'.format(error.stage, str(error)))
        save_json({'passed': False, 'stage': error.stage, 'reason': str(error)},
                  path.join(output, 'synthesis_report.json'))
        return EXIT_FAIL
    file_name = path.join(output, 'gains.json')
    save_json({'gains': gains.to_dict(), 'certificate': cert.to_dict()}, file_name)
    log.info('Synthesized gains written to \'{:s}\''.format(file_name))
    return EXIT_PASS


def _trajectory_metrics(traj, window, bound):
    metrics = tail_metrics(traj, window)._asdict()
    metrics['max_v_sum'] = float(np.max(traj.v_sum()))
    metrics['final_x_mean'] = traj.x[-1].reshape(traj.num_agents, traj.dim).mean(
        axis=0).tolist()
    if bound:
        metrics['epsilon'] = bound['epsilon']
        metrics['epsilon_tight'] = bound['epsilon_tight']
        metrics['bound_holds'] = bool(bound['epsilon'] > metrics['sup_err'])
    return metrics


def cmd_simulate(args):
    """cmd_simulate

    Simulates the closed loop for the scenario seed and writes
    ``trajectory.csv`` and ``metrics.json``.

    Args:
        args (argparse.Namespace): parsed arguments.

    Returns:
        status (int): exit status.

    """
    scenario = _load_scenario(args)
    gains = _require_gains(scenario)
    output = scenario.output_path()
    _, cert, report = _certify(scenario, gains)
    _, bound = _bound(scenario, gains, cert if report['passed'] else None)
    try:
        traj = simulate(scenario.model, scenario.bounds, scenario.nonlinearities,
                        scenario.spectrum, scenario.objectives, gains, scenario.sim)
    except Diverged as error:
        log.error('Simulation diverged at t = {:g}'.format(error.time))
        save_json({'diverged': True, 'time': error.time}, path.join(output, 'metrics.json'))
        return EXIT_FAIL
    metrics = _trajectory_metrics(traj, scenario.sim.tail_window, bound)
    metrics['certificate_passed'] = report['passed']
    save_trajectory_csv(traj, path.join(output, 'trajectory.csv'))
    save_json(metrics, path.join(output, 'metrics.json'))
    if args.nexus:
        save_trajectory_to_nexus(traj, path.join(output, 'trajectory.nxs'),
                                 metrics={k: v for k, v in metrics.items()
                                          if np.isscalar(v)})
    return EXIT_PASS


def cmd_reproduce_paper(args):
    """cmd_reproduce_paper

    Runs verification, multi-seed simulation and the transformed-coordinates
    cross-check on the bundled five-agent scenario and checks the
    acceptance thresholds. Every stage is reported in
    ``reproduce_report.json``; the underlying data of the figures is written
    as one CSV per seed.

    Args:
        args (argparse.Namespace): parsed arguments.

    Returns:
        status (int): exit status.

    """
    scenario = _load_scenario(args, default=True)
    gains = _require_gains(scenario)
    output = scenario.output_path()
    summary = {'stages': {}}
    report_file = path.join(output, 'reproduce_report.json')

    def finish(stage, passed):
        summary['passed'] = passed
        if not passed:
            summary['failed_stage'] = stage
            log.error('Reproduction failed at stage \'{:s}\''.format(stage))
        save_json(summary, report_file)
        return EXIT_PASS if passed else EXIT_FAIL

    _, cert, report = _certify(scenario, gains)
    summary['stages']['verify'] = report
    if not report['passed']:
        return finish('verify', False)
    reference, bound = _bound(scenario, gains, cert)
    summary['stages']['bound'] = bound
    if reference is None:
        return finish('reference', False)

    try:
        trajectories = run_seeds(scenario.model, scenario.bounds, scenario.nonlinearities,
                                 scenario.spectrum, scenario.objectives, gains,
                                 scenario.sim, scenario.seeds, processes=args.jobs)
    except Diverged as error:
        summary['stages']['simulate'] = {'diverged': True, 'time': error.time}
        return finish('simulate', False)
    runs = []
    passed = True
    for seed, traj in zip(scenario.seeds, trajectories):
        metrics = _trajectory_metrics(traj, scenario.sim.tail_window, bound)
        metrics['seed'] = seed
        metrics['passed'] = bool(metrics['sup_err'] <= config.TAIL_ERROR
                                 and metrics.get('bound_holds', False)
                                 and metrics['max_v_sum'] <= config.CONSERVATION_TOL)
        passed = passed and metrics['passed']
        runs.append(metrics)
        save_trajectory_csv(traj, path.join(output, 'trajectory_seed{:d}.csv'.format(seed)))
        if args.nexus:
            save_trajectory_to_nexus(traj, path.join(output, 'trajectories.nxs'),
                                     entry_name='seed{:d}'.format(seed),
                                     metrics={k: v for k, v in metrics.items()
                                              if np.isscalar(v)})
    summary['stages']['simulate'] = runs
    if not passed:
        return finish('simulate', False)

    horizon = min(config.CROSS_CHECK_HORIZON, scenario.sim.t_final)
    deviation = cross_check_transformed(trajectories[0], scenario.model, scenario.bounds,
                                        scenario.nonlinearities, scenario.spectrum,
                                        scenario.objectives, gains, reference, horizon)
    summary['stages']['cross_check'] = {'deviation': deviation, 'horizon': horizon,
                                        'passed': bool(deviation <= config.CROSS_CHECK_TOL)}
    if deviation > config.CROSS_CHECK_TOL:
        return finish('cross_check', False)
    return finish('', True)


def _parse_args(argv=None):
    parser = argparse.ArgumentParser(
        prog='doc-coord',
        description='Distributed sub-optimal coordination of linear agents with '
                    'sector-bounded input nonlinearities.')
    subparsers = parser.add_subparsers(dest='command', required=True)

    def add_common(sub, config_required=True):
        sub.add_argument('config', nargs=None if config_required else '?',
                         help='scenario JSON file')
        sub.add_argument('--dt', type=float, default=None, help='integration step')
        sub.add_argument('--t-final', dest='t_final', type=float, default=None,
                         help='simulation end time')
        sub.add_argument('--seed', type=int, default=None, help='seed of the initial state')
        sub.add_argument('--gamma', type=float, default=None,
                         help='declared residual sector bound')
        sub.add_argument('--graph', default=None, help='JSON file replacing the graph')

    verify = subparsers.add_parser('verify', help='verify the certificate of given gains')
    add_common(verify)
    verify.set_defaults(handler=cmd_verify)

    synthesize = subparsers.add_parser('synthesize', help='synthesize gains')
    add_common(synthesize)
    synthesize.set_defaults(handler=cmd_synthesize)

    simulate_cmd = subparsers.add_parser('simulate', help='simulate the closed loop')
    add_common(simulate_cmd)
    simulate_cmd.add_argument('--gains', default=None,
                              help='JSON file with gains, e.g. written by synthesize')
    simulate_cmd.add_argument('--nexus', action='store_true',
                              help='also save the trajectory to a NeXus file')
    simulate_cmd.set_defaults(handler=cmd_simulate)

    reproduce = subparsers.add_parser('reproduce-paper',
                                      help='run the bundled five-agent example end to end')
    add_common(reproduce, config_required=False)
    reproduce.add_argument('--nexus', action='store_true',
                           help='also save the trajectories to a NeXus file')
    reproduce.add_argument('--jobs', type=int, default=1,
                           help='worker processes for the seeds')
    reproduce.set_defaults(handler=cmd_reproduce_paper)
    return parser.parse_args(argv)


def main(argv=None):
    """main

    Entry point of the ``doc-coord`` command.

    Args:
        argv (list[str], optional): arguments - defaults to ``sys.argv``.

    Returns:
        status (int): 0 on PASS, 2 on FAIL, 1 on errors.

    """
    args = _parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as error:
        log.error('Invalid configuration: {:s}'.format(str(error)))
        return EXIT_ERROR
    except (ValueError, RuntimeError, OSError) as error:
        log.error('{:s} failed: {:s}'.format(args.command, str(error)))
        return EXIT_ERROR


if __name__ == '__main__':
    raise SystemExit(main())
