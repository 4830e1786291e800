import numpy as np
import pytest

from conftest import random_machine
from qcc.ir import Gate, GateKind, gate, parse_circuit
from qcc.machine import Edge, GateSet, Machine, builtin_machines
from qcc.mapper import Mapping, trivial_map
from qcc.reliability import compute_reliability_matrix
from qcc.router import apply_swap_to_mapping, route


def _line3():
    return Machine("line3", 3, (Edge(0, 1, 0.01), Edge(1, 2, 0.01)), (0.0,) * 3, (0.0,) * 3,
                   GateSet.RIGETTI)


def test_line_of_three_moves_control():
    m = _line3()
    rc = route([gate("cnot", 0, 2)], trivial_map(3), compute_reliability_matrix(m), m)
    assert rc.gates == (Gate(GateKind.SWAP, (0, 1)), Gate(GateKind.CNOT, (1, 2)))
    assert rc.final_mapping.assign == (1, 0, 2)
    assert rc.swap_count == 1


def test_adjacent_gate_untouched():
    m = _line3()
    rc = route([gate("cnot", 1, 2)], trivial_map(3), compute_reliability_matrix(m), m)
    assert rc.gates == (Gate(GateKind.CNOT, (1, 2)),)


def test_ion5_needs_no_swaps():
    m = builtin_machines()["ion5"]
    c = parse_circuit("qubits 4\ncnot 0 3\ncz 1 2\nxx 0.3 3 1\nh 2\nmeasure 1")
    m0 = Mapping((4, 2, 0, 1))
    rc = route(list(c.gates), m0, compute_reliability_matrix(m), m)
    assert rc.swap_count == 0
    assert rc.gates == tuple(g.remap(m0.assign) for g in c.gates)
    assert rc.measured == (1,)


def test_swap_on_mapping():
    m = Mapping((3,))
    assert apply_swap_to_mapping(m, 3, 5).assign == (5,)
    m2 = Mapping((3, 5))
    once = apply_swap_to_mapping(m2, 3, 5)
    assert once.assign == (5, 3)
    assert apply_swap_to_mapping(once, 3, 5) == m2
    with pytest.raises(ValueError):
        apply_swap_to_mapping(m2, 3, 3)


def test_rejects_undecomposed_gates():
    m = builtin_machines()["ion5"]
    with pytest.raises(ValueError):
        route([gate("toffoli", 0, 1, 2)], trivial_map(3), compute_reliability_matrix(m), m)


@pytest.mark.parametrize("seed", range(15))
def test_every_2q_gate_lands_on_an_edge(seed):
    rng = np.random.default_rng(seed)
    m = random_machine(rng, int(rng.integers(3, 9)), extra_edge_prob=0.15)
    nq = int(rng.integers(2, m.num_qubits + 1))
    gates = []
    for _ in range(25):
        a, b = rng.choice(nq, 2, replace=False)
        gates.append(gate("cnot", int(a), int(b)))
    m0 = Mapping(tuple(int(x) for x in rng.permutation(m.num_qubits)[:nq]))
    rc = route(gates, m0, compute_reliability_matrix(m), m)
    # replay swaps to check the final mapping and that each gate acts on the right qubits
    loc = list(m0.assign)
    it = iter(gates)
    for g in rc.gates:
        assert m.adjacent(*g.qubits)
        if g.kind is GateKind.SWAP:
            u, v = g.qubits
            loc = [v if h == u else u if h == v else h for h in loc]
        else:
            src = next(it)
            assert g.qubits == (loc[src.qubits[0]], loc[src.qubits[1]])
    assert tuple(loc) == rc.final_mapping.assign
    assert len(rc.decisions) == len(gates)
