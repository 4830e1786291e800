import math

import numpy as np
import pytest

from qcc.codegen import (LEGAL_KINDS, CompiledProgram, LoweringError, check_legal, correct_directions,
                         decompose_swaps, emit, estimate_reliability, gate_counts, lower_1q_naive,
                         lower_two_qubit, optimize_1q)
from qcc.ir import Gate, GateKind, gate
from qcc.machine import Edge, GateSet, Machine, builtin_machines
from qcc.mapper import Mapping
from qcc.sim import _permutation_matrix, gate_matrix, phase_distance, unitary_of

CNOT = _permutation_matrix(GateKind.CNOT)
SWAP = _permutation_matrix(GateKind.SWAP)


def test_swap_is_three_cnots():
    out = decompose_swaps([gate("swap", 0, 1)])
    assert out == [gate("cnot", 0, 1), gate("cnot", 1, 0), gate("cnot", 0, 1)]
    assert np.array_equal(unitary_of(out, 2), SWAP)
    assert len(decompose_swaps([gate("swap", 0, 1), gate("swap", 1, 2)])) == 6
    assert decompose_swaps([gate("h", 0)]) == [gate("h", 0)]


def test_swap_orientation_follows_native_edge():
    ibm = builtin_machines()["ibmq5"]      # 1 -> 0 native
    out = decompose_swaps([gate("swap", 0, 1)], ibm)
    assert out[0] == gate("cnot", 1, 0)
    assert sum(not ibm.native_direction(*g.qubits) for g in out) == 1


def test_direction_correction():
    ibm = builtin_machines()["ibmq5"]
    out = correct_directions([gate("cnot", 0, 1)], ibm)
    assert [g.kind for g in out] == [GateKind.H, GateKind.H, GateKind.CNOT, GateKind.H, GateKind.H]
    assert out[2].qubits == (1, 0)
    assert np.allclose(unitary_of(out, 2), CNOT, atol=1e-15)
    assert correct_directions([gate("cnot", 1, 0)], ibm) == [gate("cnot", 1, 0)]
    line = builtin_machines()["line4"]
    assert correct_directions([gate("cnot", 1, 0)], line) == [gate("cnot", 1, 0)]


def test_rigetti_cnot_sequence():
    out = lower_two_qubit([gate("cnot", 0, 1)], GateSet.RIGETTI)
    assert len(out) == 7 and sum(g.kind is GateKind.CZ for g in out) == 1
    assert phase_distance(unitary_of(out, 2), CNOT) < 1e-12


def test_ion_cnot_sequence():
    out = lower_two_qubit([gate("cnot", 0, 1)], GateSet.IONTRAP)
    assert [g.kind for g in out] == [GateKind.RY, GateKind.XX, GateKind.RY, GateKind.RX, GateKind.RZ]
    assert out[3].qubits == (1,)
    assert phase_distance(unitary_of(out, 2), CNOT) < 1e-12


def test_xx_convention():
    g = Gate(GateKind.XX, (0, 1), math.pi / 4)
    xx = np.kron(gate_matrix(gate("x", 0)), gate_matrix(gate("x", 0)))
    expected = math.cos(math.pi / 4) * np.eye(4) - 1j * math.sin(math.pi / 4) * xx
    assert np.allclose(gate_matrix(g), expected)


@pytest.mark.parametrize("target", list(GateSet))
@pytest.mark.parametrize("src", [gate("cnot", 1, 0), gate("cz", 0, 1), Gate(GateKind.XX, (1, 0), 0.37)])
def test_lowering_preserves_unitary(target, src):
    out = lower_two_qubit([src], target)
    assert all(g.kind in LEGAL_KINDS[target] or g.kind.is_1q for g in out)
    assert phase_distance(unitary_of(out, 2), gate_matrix(src) if src.kind is not GateKind.CNOT
                          else unitary_of([src], 2)) < 1e-12


def test_ibm_lowering_passes_cnot():
    assert lower_two_qubit([gate("cnot", 2, 1)], GateSet.IBM) == [gate("cnot", 2, 1)]


def test_lowering_rejects_swaps():
    with pytest.raises(LoweringError):
        lower_two_qubit([gate("swap", 0, 1)], GateSet.IBM)


def test_optimize_merges_runs():
    assert optimize_1q([gate("h", 0), gate("h", 0)], GateSet.IBM) == []
    out = optimize_1q([Gate(GateKind.RZ, (0,), 0.2), Gate(GateKind.RZ, (0,), 0.5)], GateSet.IBM)
    assert len(out) == 1 and out[0].angle == pytest.approx(0.7)
    seq = [gate("h", 0), gate("t", 0), gate("x", 1), gate("cnot", 0, 1), gate("s", 1), gate("h", 1),
           gate("measure", 0)]
    out = optimize_1q(seq, GateSet.IBM)
    assert phase_distance(unitary_of(_strip(out), 2), unitary_of(_strip(seq), 2)) < 1e-12
    # the measurement stays after every gate on qubit 0
    last0 = max(k for k, g in enumerate(out) if 0 in g.qubits and g.kind is not GateKind.MEASURE)
    assert out.index(gate("measure", 0)) > last0


def _strip(gates):
    return [g for g in gates if g.kind is not GateKind.MEASURE]


def test_ion_pulse_is_ry():
    out = optimize_1q([gate("h", 0)], GateSet.IONTRAP)
    assert all(g.kind in (GateKind.RZ, GateKind.RY) for g in out)


def test_naive_lowering_keeps_gate_boundaries():
    out = lower_1q_naive([gate("h", 0), gate("h", 0)], GateSet.RIGETTI)
    assert len(out) == 6
    assert all(g.kind in (GateKind.RZ, GateKind.RX) for g in out)


def test_estimate_reliability():
    m = Machine("m", 2, (Edge(0, 1, 0.1),), (0.01, 0.01), (0.05, 0.05), GateSet.IBM)
    prog = [gate("cnot", 0, 1), gate("measure", 0), gate("measure", 1)]
    assert estimate_reliability(prog, m) == pytest.approx(0.9 * 0.95 ** 2, abs=1e-15)
    assert estimate_reliability([Gate(GateKind.RZ, (0,), 1.0)], m) == 1.0
    assert estimate_reliability([], m) == 1.0


def test_gate_counts():
    prog = [gate("cnot", 0, 1), Gate(GateKind.RZ, (0,), 1.0), Gate(GateKind.RX, (1,), 1.0),
            gate("measure", 0)]
    assert gate_counts(prog) == {"1q": 1, "z": 1, "2q": 1, "measure": 1}


def test_check_legal():
    ibm = builtin_machines()["ibmq5"]
    check_legal([gate("cnot", 1, 0)], ibm)
    with pytest.raises(LoweringError):
        check_legal([gate("cnot", 0, 1)], ibm)
    with pytest.raises(LoweringError):
        check_legal([gate("h", 0)], ibm)
    with pytest.raises(LoweringError):
        check_legal([gate("cnot", 0, 3)], ibm)


def _program(target, instructions, measured=()):
    return CompiledProgram(target, tuple(instructions), 1.0, Mapping((0, 1)), Mapping((0, 1)), 2,
                           tuple(measured))


def test_emit_qasm():
    text = emit(_program(GateSet.IBM, [gate("cnot", 0, 1), Gate(GateKind.RZ, (1,), math.pi),
                                       gate("measure", 1)], [1]))
    assert text.count("cx q[0],q[1];") == 1
    assert "rz(3.14159265359) q[1];" in text
    assert "measure q[1] -> c[1];" in text
    assert text.startswith("OPENQASM 2.0;")


def test_emit_quil():
    body = lower_two_qubit([gate("cnot", 0, 1)], GateSet.RIGETTI)
    lines = emit(_program(GateSet.RIGETTI, body)).strip().split("\n")
    assert sum(line.startswith("CZ 0 1") for line in lines) == 1
    assert sum(line.startswith(("RZ(", "RX(")) for line in lines) == 6


def test_emit_ion():
    text = emit(_program(GateSet.IONTRAP, [Gate(GateKind.XX, (0, 1), math.pi / 4), gate("measure", 0)],
                         [0]))
    assert text == f"XX {math.pi / 4:.12g} 0 1\nMEASURE 0 0\n"


def test_emit_rejects_mismatched_machine():
    with pytest.raises(LoweringError):
        emit(_program(GateSet.IBM, []), builtin_machines()["line4"])
