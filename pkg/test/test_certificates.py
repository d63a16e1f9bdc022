#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest
import numpy as np
import pyDistOptCoord as doc
from pyDistOptCoord import config
from pyDistOptCoord.certificates import LmiProblem, bound_factor, certified_margin
from pyDistOptCoord.protocol import assemble_transformed_blocks, solve_reference_point
from pyDistOptCoord.helpers import max_eig, min_eig
from pyDistOptCoord.exceptions import (DimensionMismatch, Infeasible, InvalidSector,
                                       NotStabilizable)


def scalar_problem(scalar_setup, K):
    model, bounds, spectrum, objs = scalar_setup
    gains = doc.GainSet.from_matrix([K], 1)
    return doc.build_lmi(model, bounds, objs, spectrum, gains)


def test_scalar_block_entries(scalar_setup):
    prob = scalar_problem(scalar_setup, [-1.0, 0.0, 0.0, 0.0])
    assert prob.gamma == 0.0
    assert prob.mu_prime == 0.0
    assert prob.lambda_2 == pytest.approx(1.0)
    block = prob.block_i(np.eye(4), 1.0)
    assert block.shape == (6, 6)
    assert block[0, 0] == pytest.approx(-2.0)
    assert block[0, 4:] == pytest.approx([-1.0, 0.0])
    assert block[4:, 4:] == pytest.approx(-2*np.eye(2))
    assert block == pytest.approx(block.T)
    # uncontrolled integrator states keep the block from being negative definite
    assert max_eig(block) >= 0
    report = doc.verify_certificate(prob, doc.Certificate(np.eye(4), np.eye(3)))
    assert not report['passed']


def test_scalar_destabilizing_gain(scalar_setup):
    prob = scalar_problem(scalar_setup, [1.0, 0.0, 0.0, 0.0])
    with pytest.raises(Infeasible):
        doc.solve_feasibility(prob)


def test_corner_block(prob):
    n, m = prob.n, prob.m
    block = prob.block_i(np.eye(8), prob.lambda_2)
    assert block.shape == (8 + m + n, 8 + m + n)
    assert block[8:, 8:] == pytest.approx(-2*np.eye(m + n))
    assert prob.block_one(np.eye(6)).shape == (6 + m + n, 6 + m + n)


def test_affinity(prob, certificate):
    assert prob.affinity_error(certificate.P) <= 1e-10
    assert prob.affinity_error(np.eye(8)) <= 1e-10


def test_feasibility(prob, certificate):
    report = doc.verify_certificate(prob, certificate)
    assert report['passed']
    assert report['min_eig_P'] > 1e-9
    assert report['min_eig_P_check'] > 1e-9
    assert report['max_block_eig'] < -1e-9
    assert all(value < -1e-9 for value in report['blocks_all'])
    assert report['hurwitz_abscissa'] < 0
    assert report['hurwitz_abscissa_one'] < 0
    assert report['certified_rho'] > 0
    assert certificate.rho == pytest.approx(report['certified_rho'], rel=1e-6)


def test_independent_eigenvalues(prob, certificate):
    for lam in prob.eigenvalues[1:]:
        block = prob.block_i(certificate.P, lam)
        assert np.linalg.eigvalsh(0.5*(block + block.T)).max() < -1e-9
    block = prob.block_one(certificate.P_check)
    assert np.linalg.eigvalsh(0.5*(block + block.T)).max() < -1e-9


@pytest.mark.parametrize('P, P_check, passed', [
    (np.eye(8), np.eye(6), False),
    ('certificate', 1.0, True),
    ('certificate', 1e6, False),
])
def test_verify(request, prob, P, P_check, passed):
    if isinstance(P, str):
        cert = request.getfixturevalue(P).scaled(P_check)
    else:
        cert = doc.Certificate(P, P_check)
    report = doc.verify_certificate(prob, cert)
    assert report['passed'] == passed
    if not passed:
        assert report['certified_rho'] == 0.0


def test_certified_margin(prob, certificate):
    rho = certified_margin(prob, certificate)
    worst = max([max_eig(prob.block_i(certificate.P, lam, 0.5*rho))
                 for lam in prob.extreme_eigenvalues]
                + [max_eig(prob.block_one(certificate.P_check, 0.5*rho))])
    assert worst < 0
    worst = max([max_eig(prob.block_i(certificate.P, lam, 1.5*rho))
                 for lam in prob.extreme_eigenvalues]
                + [max_eig(prob.block_one(certificate.P_check, 1.5*rho))])
    assert worst >= 0


def test_smaller_gamma(model, bounds, objs, spectrum, gains):
    prob = doc.build_lmi(model, bounds.with_gamma(0.4), objs, spectrum, gains)
    assert prob.gamma == 0.4
    cert = doc.solve_feasibility(prob)
    assert doc.verify_certificate(prob, cert)['passed']


def test_certificate_dimensions(prob):
    with pytest.raises(DimensionMismatch):
        doc.verify_certificate(prob, doc.Certificate(np.eye(6), np.eye(6)))
    with pytest.raises(DimensionMismatch):
        doc.Certificate(np.ones((2, 3)), np.eye(2))


def test_certificate_dict(certificate):
    cert = doc.Certificate.from_dict(certificate.to_dict())
    assert cert.P == pytest.approx(certificate.P)
    assert cert.rho == certificate.rho


@pytest.mark.parametrize('gamma, mu_prime', [
    (-0.1, 0.0),
    (1.5, 0.0),
    (0.5, 1.0),
])
def test_invalid_sector(model, bounds, spectrum, objs, gains, gamma, mu_prime):
    blocks = assemble_transformed_blocks(model, bounds, spectrum, objs)
    with pytest.raises(InvalidSector):
        LmiProblem(blocks, gains, gamma, mu_prime)


def test_bound(certificate, model, reference, bounds):
    bound = doc.suboptimality_bound(certificate, model, reference, bounds)
    assert 0 < bound.epsilon < np.inf
    assert bound.rho == pytest.approx(certificate.rho)
    assert bound.norm_u_bar == pytest.approx(np.sqrt(5)*np.hypot(0.9, 0.1)/7, abs=1e-10)
    assert bound.epsilon_tight == pytest.approx(0.5*bound.epsilon)
    eig_max = max(max_eig(certificate.P), max_eig(certificate.P_check))
    eig_min = min(min_eig(certificate.P), min_eig(certificate.P_check))
    expected = (2*np.sqrt(eig_max/eig_min)*np.linalg.norm(model.B0, 2)*eig_max
                / certificate.rho*bound.norm_u_bar)
    assert bound.epsilon == pytest.approx(expected, rel=1e-12)
    assert bound.kappa2(0.5, bound.norm_u_bar) == pytest.approx(2*bound.epsilon)
    with pytest.raises(ValueError):
        bound.kappa2(1.0, 1.0)


def test_bound_declared_rho(certificate, model, reference, bounds, caplog):
    bound = doc.suboptimality_bound(certificate, model, reference, bounds,
                                    declared_rho=10*certificate.rho)
    assert bound.rho == pytest.approx(certificate.rho)
    assert 'not certified' in caplog.text
    smaller = doc.suboptimality_bound(certificate, model, reference, bounds,
                                      declared_rho=0.5*certificate.rho)
    assert smaller.epsilon == pytest.approx(2*bound.epsilon)


def test_bound_exact_cases(certificate, model, bounds, spectrum, objs, gains):
    drift_free = doc.AgentModel(np.zeros((2, 2)), model.B0)
    reference = solve_reference_point(drift_free, bounds, spectrum, objs, gains)
    assert doc.suboptimality_bound(certificate, drift_free, reference, bounds).epsilon == 0
    reference = solve_reference_point(model, bounds, spectrum, objs, gains)
    linear = doc.SectorBounds(1.0, 1.0)
    assert doc.suboptimality_bound(certificate, model, reference, linear).epsilon_tight == 0


def test_synthesis_scalar():
    model = doc.AgentModel([[-1.0]], [[1.0]])
    bounds = doc.SectorBounds(1.0, 1.0)
    spectrum = doc.build_laplacian(doc.NetworkGraph.path(3))
    objs = doc.ObjectiveSet([doc.QuadraticObjective([[1.0]], [c]) for c in [0, 1, 2]])
    gains, cert = doc.synthesize_gain(model, bounds, objs, spectrum)
    prob = doc.build_lmi(model, bounds, objs, spectrum, gains)
    assert doc.verify_certificate(prob, cert)['passed']


def test_synthesis_not_stabilizable(scalar_setup):
    _, bounds, spectrum, objs = scalar_setup
    model = doc.AgentModel([[1.0]], [[0.0]], check=False)
    with pytest.raises(NotStabilizable):
        doc.synthesize_gain(model, bounds, objs, spectrum)


@pytest.mark.slow
def test_synthesis(scenario, model, bounds, objs, spectrum):
    gains, cert = doc.synthesize_gain(model, bounds, objs, spectrum)
    assert gains.K.shape == (2, 8)
    prob = doc.build_lmi(model, bounds, objs, spectrum, gains)
    report = doc.verify_certificate(prob, cert)
    assert report['passed']
    reference = solve_reference_point(model, bounds, spectrum, objs, gains)
    bound = doc.suboptimality_bound(cert, model, reference, bounds)
    assert 1e2 <= bound.epsilon <= 1e7
    traj = doc.simulate(model, bounds, scenario.nonlinearities, spectrum, objs, gains,
                        scenario.sim.copy(seed=0))
    sup_err = doc.tail_metrics(traj, (40.0, 50.0)).sup_err
    assert sup_err <= 0.3
    assert sup_err < bound.epsilon


def test_bound_range(scenario, certificate, model, reference, bounds):
    bound = doc.suboptimality_bound(certificate, model, reference, bounds,
                                    declared_rho=scenario.declared_rho)
    assert bound.rho == pytest.approx(min(scenario.declared_rho, certificate.rho))
    assert 1e2 <= bound.epsilon <= 1e7
    assert bound.epsilon_tight == pytest.approx(0.5*bound.epsilon)


def test_bound_factor(certificate):
    factor = bound_factor(certificate)
    eig_max = max(max_eig(certificate.P), max_eig(certificate.P_check))
    eig_min = min(min_eig(certificate.P), min_eig(certificate.P_check))
    assert factor == pytest.approx(np.sqrt(eig_max/eig_min)*eig_max/certificate.rho)
    assert factor < np.inf
    assert bound_factor(doc.Certificate(np.eye(8), 4*np.eye(6), rho=0.5)) == pytest.approx(16)
    assert bound_factor(doc.Certificate(np.eye(8), np.eye(6))) == np.inf
    assert bound_factor(doc.Certificate(np.eye(8), np.eye(6), rho=0.0)) == np.inf


@pytest.mark.parametrize('declared, rho, warned', [
    (None, 0.5, False),
    (0.25, 0.25, False),
    (1.0, 0.5, True),
])
def test_bound_fixed_certificate(model, reference, bounds, caplog, declared, rho, warned):
    cert = doc.Certificate(np.eye(8), 4*np.eye(6), rho=0.5)
    bound = doc.suboptimality_bound(cert, model, reference, bounds, declared_rho=declared)
    norm_u_bar = np.sqrt(5)*np.hypot(0.9, 0.1)/7
    assert bound.rho == rho
    assert (bound.eig_max, bound.eig_min) == (4.0, 1.0)
    assert bound.norm_u_bar == pytest.approx(norm_u_bar, abs=1e-10)
    assert bound.epsilon == pytest.approx(2*2*np.linalg.norm(model.B0, 2)*4/rho*norm_u_bar)
    assert ('not certified' in caplog.text) == warned


def test_bound_without_margin(model, reference, bounds, caplog):
    bound = doc.suboptimality_bound(doc.Certificate(np.eye(8), np.eye(6)), model, reference,
                                    bounds)
    assert bound.rho == 0.0
    assert bound.epsilon == np.inf
    assert 'no positive margin' in caplog.text


def test_conditioning_never_worse(prob, certificate, monkeypatch):
    monkeypatch.setattr(config, 'CONDITION_ROUNDS', 0)
    plain = doc.solve_feasibility(prob)
    assert doc.verify_certificate(prob, plain)['passed']
    assert bound_factor(certificate) <= bound_factor(plain)*(1 + 1e-9)
