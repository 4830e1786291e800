import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qcc.ir import Gate, GateKind
from qcc.quaternion import Quaternion, compose, synthesize, wrap_angle
from qcc.sim import gate_matrix, phase_distance, unitary_of

ONE_Q = [GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.S, GateKind.SDG, GateKind.T,
         GateKind.TDG, GateKind.RX, GateKind.RY, GateKind.RZ]

angles = st.floats(-2 * math.pi, 2 * math.pi, allow_nan=False)
one_q_gate = st.builds(
    lambda k, a: Gate(k, (0,), a if k.has_angle else None), st.sampled_from(ONE_Q), angles)


@pytest.mark.parametrize("kind", ONE_Q)
def test_from_gate_matches_matrix(kind):
    g = Gate(kind, (0,), 0.731 if kind.has_angle else None)
    assert phase_distance(Quaternion.from_gate(g).to_matrix(), gate_matrix(g)) < 1e-12


@given(st.lists(one_q_gate, min_size=1, max_size=6))
def test_product_matches_matrix_product(gates):
    assert phase_distance(compose(gates).to_matrix(), unitary_of(gates, 1)) < 1e-9


@given(st.lists(one_q_gate, min_size=1, max_size=20), st.sampled_from([GateKind.RX, GateKind.RY]))
@settings(max_examples=200)
def test_synthesis_is_equivalent_and_short(gates, pulse):
    out = synthesize(compose(gates), 0, pulse)
    assert len(out) <= 3
    assert sum(1 for g in out if g.kind is not GateKind.RZ) <= 1
    target = unitary_of(gates, 1)
    got = unitary_of(out, 1) if out else np.eye(2)
    assert phase_distance(got, target) < 1e-9


def test_identity_cases_are_empty():
    h = Gate(GateKind.H, (0,))
    assert synthesize(compose([h, h]), 0) == []
    q = Quaternion.from_axis_angle((0.3, -0.5, 0.8), 1.1)
    assert synthesize(q * q.conjugate(), 0) == []


def test_h_is_three_rotations():
    out = synthesize(compose([Gate(GateKind.H, (0,))]), 0)
    assert [g.kind for g in out] == [GateKind.RZ, GateKind.RX, GateKind.RZ]
    assert [g.angle for g in out] == pytest.approx([math.pi / 2] * 3)


def test_z_rotations_add():
    out = synthesize(compose([Gate(GateKind.RZ, (0,), 0.3), Gate(GateKind.RZ, (0,), 0.4)]), 0)
    assert len(out) == 1 and out[0].kind is GateKind.RZ
    assert out[0].angle == pytest.approx(0.7)


def test_wrap_angle():
    assert wrap_angle(3 * math.pi) == pytest.approx(math.pi)
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(0.5) == 0.5


def test_q_and_minus_q_same_rotation():
    q = Quaternion.from_axis_angle((1, 2, 3), 0.9)
    neg = Quaternion(-q.w, -q.x, -q.y, -q.z)
    assert q.rotation_angle() == pytest.approx(neg.rotation_angle())
    assert phase_distance(q.to_matrix(), neg.to_matrix()) < 1e-12
