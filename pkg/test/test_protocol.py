#!/usr/bin/env python
# -*- coding: utf-8 -*-

import pytest
import numpy as np
import pyDistOptCoord as doc
from pyDistOptCoord.protocol import (assemble_transformed_blocks, block_diagonal,
                                     closed_loop_matrices, control_input,
                                     controller_derivatives, from_transformed,
                                     shifted_transformed_derivative, solve_reference_point,
                                     to_transformed)
from pyDistOptCoord.exceptions import DimensionMismatch, NotStabilizable

U_BAR = np.array([-0.9, -0.1])/7


@pytest.fixture(scope='module')
def blocks(model, bounds, spectrum, objs):
    return assemble_transformed_blocks(model, bounds, spectrum, objs)


@pytest.fixture(scope='module')
def two_agents():
    spectrum = doc.build_laplacian(doc.NetworkGraph.path(2))
    objs = doc.ObjectiveSet([doc.QuadraticObjective(np.eye(2), [0.0, 0.0]),
                             doc.QuadraticObjective(np.eye(2), [1.0, 1.0])])
    return spectrum, objs


def test_gain_split(gains):
    assert gains.K.shape == (2, 8)
    assert gains.K1 == pytest.approx(np.array([[1.8386, -4.9411], [-2.1966, 0.9602]]))
    assert gains.K4 == pytest.approx(np.array([[0.0071, -1.2094], [-0.5092, 0.3012]]))
    assert gains.K_check == pytest.approx(np.hstack([gains.K1, gains.K3, gains.K4]))
    assert doc.GainSet.from_dict(gains.to_dict(), 2).K == pytest.approx(gains.K)


def test_gain_dimensions(model):
    with pytest.raises(DimensionMismatch):
        doc.GainSet.from_matrix(np.zeros((2, 6)), 2)
    with pytest.raises(DimensionMismatch):
        doc.GainSet.from_matrix(np.zeros((1, 8)), 2).check_dimensions(model)


def test_agent_model(model):
    assert (model.n, model.m) == (2, 2)
    assert model.input_matrix(2.0) == pytest.approx(2*model.B0)
    assert doc.AgentModel.from_dict(model.to_dict()).A == pytest.approx(model.A)


@pytest.mark.parametrize('A, B0', [
    ([[1.0]], [[0.0]]),
    ([[1.0, 0.0], [0.0, 2.0]], [[1.0], [1.0]]),
])
def test_not_stabilizable(A, B0):
    with pytest.raises(NotStabilizable):
        doc.AgentModel(A, B0)


def test_control_input_zero(gains):
    state = doc.ClosedLoopState.zeros_like(np.zeros(10))
    assert control_input(gains, state) == pytest.approx(np.zeros(10))


def test_control_input_single_agent():
    eye = np.eye(2)
    zero = np.zeros((2, 2))
    gains = doc.GainSet(eye, zero, zero, zero)
    state = doc.ClosedLoopState.zeros_like(np.array([1.0, 2.0]))
    assert control_input(gains, state) == pytest.approx([1.0, 2.0])


def test_control_input_is_local(gains, rng):
    state = doc.ClosedLoopState(*rng.uniform(-1, 1, (4, 10)))
    u = control_input(gains, state)
    parts = [state.x[2:4], state.v[2:4], state.zeta[2:4], state.eta[2:4]]
    assert u[2:4] == pytest.approx(gains.K @ np.concatenate(parts))


def test_controller_derivatives_path(two_agents):
    spectrum, objs = two_agents
    state = doc.ClosedLoopState.zeros_like(np.array([1.0, 0.0, 0.0, 0.0]))
    dv, dzeta, deta = controller_derivatives(spectrum, objs, state)
    assert dv == pytest.approx([-1.0, 0.0, 1.0, 0.0])
    assert deta == pytest.approx([1.0, 0.0, 0.0, 0.0])


def test_controller_derivatives_consensus(two_agents):
    spectrum, objs = two_agents
    x = np.tile([0.3, -0.4], 2)
    dv, dzeta, _ = controller_derivatives(spectrum, objs, doc.ClosedLoopState.zeros_like(x))
    assert dv == pytest.approx(np.zeros(4), abs=1e-15)
    assert dzeta == pytest.approx(-objs.gradient(x))


def test_controller_derivatives_dimension(two_agents):
    spectrum, objs = two_agents
    with pytest.raises(DimensionMismatch):
        controller_derivatives(spectrum, objs, doc.ClosedLoopState.zeros_like(np.zeros(6)))


def test_reference_point(reference, model, bounds, spectrum, objs, gains):
    assert reference.x_star == pytest.approx([-0.5, 0.5], abs=1e-10)
    for i in range(5):
        assert reference.u_bar[2*i:2*i + 2] == pytest.approx(U_BAR, abs=1e-10)
    assert reference.u_bar[:2] == pytest.approx([-0.1286, -0.0143], abs=1e-4)
    assert reference.v_bar[4:6] == pytest.approx([0.0, 0.0], abs=1e-10)
    assert reference.zeta_bar == pytest.approx(reference.x_bar)
    residuals = reference.residuals(model, bounds, spectrum, objs, gains)
    assert max(residuals.values()) <= 1e-8
    state = reference.as_state()
    assert control_input(gains, state) == pytest.approx(reference.u_bar, abs=1e-8)
    for derivative in controller_derivatives(spectrum, objs, state):
        assert np.max(np.abs(derivative)) <= 1e-8


def test_reference_point_without_drift(model, bounds, spectrum, objs, gains):
    drift_free = doc.AgentModel(np.zeros((2, 2)), model.B0)
    reference = solve_reference_point(drift_free, bounds, spectrum, objs, gains)
    assert reference.u_bar == pytest.approx(np.zeros(10), abs=1e-12)
    assert reference.v_bar == pytest.approx(objs.gradient(reference.x_bar))


def test_w_star(reference, nl):
    assert reference.w_star(nl, np.pi/4) == pytest.approx(np.zeros((5, 2)), abs=1e-15)
    assert reference.w_star(nl, 0.0) == pytest.approx(np.tile(0.2*U_BAR, (5, 1)), abs=1e-12)


def test_blocks(blocks):
    block = blocks.block_matrix(1.0)
    assert block[2:4, 0:2] == pytest.approx(-np.eye(2))
    assert block[4:6, 0:2] == pytest.approx(-2.1*np.eye(2))
    assert block[4:6, 2:4] == pytest.approx(np.eye(2))
    assert blocks.A1[2:4] == pytest.approx(np.hstack([-1.1*np.eye(2), np.zeros((2, 4))]))
    assert blocks.L_prime == pytest.approx(np.vstack([np.zeros((4, 2)), -1.1*np.eye(2),
                                                      np.zeros((2, 2))]))
    assert blocks.B_prime[:2] == pytest.approx(blocks.model.B0)
    assert len(blocks.A_blocks) == 4
    assert blocks.size == 6 + 4*8


def test_closed_loop_matrices(blocks, gains):
    first, others = closed_loop_matrices(blocks, gains)
    assert first.shape == (6, 6)
    assert others[0] == pytest.approx(blocks.A_blocks[0] + blocks.B_prime @ gains.K)
    assert block_diagonal(blocks, gains).shape == (38, 38)


def test_transformed_round_trip(blocks, reference, rng):
    v = rng.uniform(-1, 1, (5, 2))
    v = (v - v.mean(axis=0)).ravel() + reference.v_bar
    state = doc.ClosedLoopState(rng.uniform(-2, 2, 10), v, rng.uniform(-2, 2, 10),
                                rng.uniform(-2, 2, 10))
    xi = to_transformed(blocks, reference, state)
    assert xi.size == blocks.size
    recovered = from_transformed(blocks, reference, xi)
    assert recovered.as_vector() == pytest.approx(state.as_vector(), abs=1e-12)


def test_shifted_equilibrium(blocks, gains, reference):
    xi = np.zeros(blocks.size)
    dxi = shifted_transformed_derivative(blocks, gains, reference,
                                         doc.IdentityNonlinearity(), 0.7, xi)
    assert dxi == pytest.approx(np.zeros(blocks.size), abs=1e-12)


def test_shifted_fictitious_input(blocks, gains, reference, nl):
    xi = np.zeros(blocks.size)
    dxi = shifted_transformed_derivative(blocks, gains, reference, nl, np.pi/4, xi)
    assert dxi == pytest.approx(np.zeros(blocks.size), abs=1e-12)
    dxi = shifted_transformed_derivative(blocks, gains, reference, nl, 0.0, xi)
    expected = np.zeros(blocks.size)
    expected[:6] = -blocks.B1 @ (np.sqrt(5)*0.2*U_BAR)
    assert np.linalg.norm(dxi) > 0
    assert dxi == pytest.approx(expected, abs=1e-12)


def test_shifted_linear_map(blocks, gains, reference, rng):
    xi = rng.uniform(-1, 1, blocks.size)
    dxi = shifted_transformed_derivative(blocks, gains, reference,
                                         doc.IdentityNonlinearity(), 1.3, xi)
    assert dxi == pytest.approx(block_diagonal(blocks, gains) @ xi, abs=1e-10)
