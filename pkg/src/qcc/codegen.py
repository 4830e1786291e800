"""Lowering of routed circuits to a vendor gate set, 1Q optimisation and emission.

Pass order used by the pipeline::

    decompose_swaps -> lower_two_qubit -> correct_directions (IBM only)
                    -> optimize_1q | lower_1q_naive -> emit
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .ir import Gate, GateKind, Z_KINDS
from .machine import GateSet, Machine
from .mapper import Mapping
from .quaternion import Quaternion, synthesize

PI = math.pi
H, CX, CZ, XX = GateKind.H, GateKind.CNOT, GateKind.CZ, GateKind.XX
RX, RY, RZ = GateKind.RX, GateKind.RY, GateKind.RZ

LEGAL_KINDS = {
    GateSet.IBM: frozenset({RZ, RX, CX, GateKind.MEASURE}),
    GateSet.RIGETTI: frozenset({RZ, RX, CZ, GateKind.MEASURE}),
    GateSet.IONTRAP: frozenset({RZ, RX, RY, XX, GateKind.MEASURE}),
}
# physical pulse used by the Euler form RZ . pulse . RZ
PULSE = {GateSet.IBM: RX, GateSet.RIGETTI: RX, GateSet.IONTRAP: RY}


class LoweringError(ValueError):
    pass


@dataclass(frozen=True)
class CompiledProgram:
    target: GateSet
    instructions: tuple[Gate, ...]
    estimated_reliability: float
    final_mapping: Mapping
    initial_mapping: Mapping
    num_qubits: int                  # hardware qubits
    measured: tuple[int, ...] = ()   # program qubit read by each MEASURE, in order

    def check_legal(self, machine: Machine) -> None:
        check_legal(self.instructions, machine)


def check_legal(instructions: Iterable[Gate], machine: Machine) -> None:
    legal = LEGAL_KINDS[machine.gate_set]
    for g in instructions:
        if g.kind not in legal:
            raise LoweringError(f"{g.kind.value} is not legal on {machine.gate_set.value}")
        if g.kind.is_2q:
            a, b = g.qubits
            if not machine.adjacent(a, b):
                raise LoweringError(f"{g} is not on a machine edge")
            if g.kind is CX and not machine.native_direction(a, b):
                raise LoweringError(f"{g} runs against the native CNOT direction")


def _cx(a: int, b: int) -> Gate:
    return Gate(CX, (a, b))


def decompose_swaps(gates: Iterable[Gate], machine: Machine | None = None) -> list[Gate]:
    """SWAP(a,b) -> CNOT a,b; CNOT b,a; CNOT a,b.

    With a machine whose edge is directed b -> a, the sequence is written as
    CNOT b,a; CNOT a,b; CNOT b,a so only one CNOT needs reversing.
    """
    out: list[Gate] = []
    for g in gates:
        if g.kind is not GateKind.SWAP:
            out.append(g)
            continue
        a, b = g.qubits
        if machine is not None and machine.adjacent(a, b) and not machine.native_direction(a, b):
            a, b = b, a
        out.extend([_cx(a, b), _cx(b, a), _cx(a, b)])
    return out


def correct_directions(gates: Iterable[Gate], machine: Machine) -> list[Gate]:
    """Reverse CNOTs that run against a directed edge with H conjugation."""
    out: list[Gate] = []
    for g in gates:
        if g.kind is CX:
            a, b = g.qubits
            if not machine.adjacent(a, b):
                raise LoweringError(f"{g} is not on a machine edge")
            if not machine.native_direction(a, b):
                hs = [Gate(H, (a,)), Gate(H, (b,))]
                out.extend([*hs, _cx(b, a), *hs])
                continue
        out.append(g)
    return out


def _rz(q, t):
    return Gate(RZ, (q,), t)


def _rigetti_cnot(a: int, b: int) -> list[Gate]:
    half = [_rz(b, PI / 2), Gate(RX, (b,), PI / 2), _rz(b, PI / 2)]
    return [*half, Gate(CZ, (a, b)), *half]


def _ion_cnot(a: int, b: int) -> list[Gate]:
    # XX(t) = exp(-i t X(x)X); the x-axis correction lands on the target
    return [Gate(RY, (a,), PI / 2), Gate(XX, (a, b), PI / 4), Gate(RY, (a,), -PI / 2),
            Gate(RX, (b,), -PI / 2), _rz(a, -PI / 2)]


def _cnot_form(g: Gate, machine: Machine | None) -> list[Gate]:
    """CZ and XX rewritten over CNOT and 1Q gates."""
    a, b = g.qubits
    if g.kind is CZ:
        if machine is not None and machine.adjacent(a, b) and not machine.native_direction(a, b):
            a, b = b, a
        return [Gate(H, (b,)), _cx(a, b), Gate(H, (b,))]
    if g.kind is XX:
        # exp(-i t XX) = (H(x)H) CNOT (I (x) RZ(2t)) CNOT (H(x)H)
        hs = [Gate(H, (a,)), Gate(H, (b,))]
        return [*hs, _cx(a, b), _rz(b, 2.0 * g.angle), _cx(a, b), *hs]
    return [g]


def lower_two_qubit(gates: Iterable[Gate], target: GateSet, machine: Machine | None = None) -> list[Gate]:
    """Rewrite every 2Q gate into the target's native 2Q gate plus 1Q rotations."""
    target = GateSet(target)
    out: list[Gate] = []
    for g in gates:
        if g.kind is GateKind.SWAP or g.kind.arity > 2:
            raise LoweringError(f"{g.kind.value} must be decomposed before 2Q lowering")
        if not g.kind.is_2q:
            out.append(g)
            continue
        if target is GateSet.IBM:
            out.extend(_cnot_form(g, machine))
        elif target is GateSet.RIGETTI:
            if g.kind is CZ:
                out.append(g)
                continue
            for h in _cnot_form(g, machine):
                out.extend(_rigetti_cnot(*h.qubits) if h.kind is CX else [h])
        else:
            if g.kind is XX:
                out.append(g)
                continue
            for h in _cnot_form(g, machine):
                out.extend(_ion_cnot(*h.qubits) if h.kind is CX else [h])
    return out


def optimize_1q(gates: Sequence[Gate], target: GateSet, tol: float = 1e-10) -> list[Gate]:
    """Merge each maximal run of 1Q gates on a qubit into RZ . pulse . RZ.

    A run is flushed just before the next multi-qubit gate or measurement on
    its qubit, and at the end in qubit order.
    """
    pulse = PULSE[GateSet(target)]
    pending: dict[int, Quaternion] = {}
    out: list[Gate] = []

    def flush(q: int) -> None:
        rot = pending.pop(q, None)
        if rot is not None:
            out.extend(synthesize(rot, q, pulse, tol))

    for g in gates:
        if g.kind.is_1q:
            q = g.qubits[0]
            pending[q] = Quaternion.from_gate(g) * pending.get(q, Quaternion.identity())
            continue
        for q in g.qubits:
            flush(q)
        out.append(g)
    for q in sorted(pending):
        flush(q)
    return out


def lower_1q_naive(gates: Sequence[Gate], target: GateSet, tol: float = 1e-10) -> list[Gate]:
    """Translate 1Q gates one at a time, without merging neighbours."""
    target = GateSet(target)
    legal = LEGAL_KINDS[target]
    out: list[Gate] = []
    for g in gates:
        if not g.kind.is_1q or g.kind in legal:
            out.append(g)
        else:
            out.extend(synthesize(Quaternion.from_gate(g), g.qubits[0], PULSE[target], tol))
    return out


def is_z_rotation(g: Gate) -> bool:
    return g.kind in Z_KINDS


def gate_error(g: Gate, machine: Machine) -> float:
    if g.kind is GateKind.MEASURE:
        return machine.erro[g.qubits[0]]
    if g.kind.is_2q:
        e = machine.edge(*g.qubits)
        if e is None:
            raise LoweringError(f"{g} is not on a machine edge")
        return e.err2q
    if g.kind.is_1q:
        return 0.0 if is_z_rotation(g) else machine.err1q[g.qubits[0]]
    raise LoweringError(f"{g.kind.value} has no hardware error rate")


def estimate_reliability(instructions: Iterable[Gate], machine: Machine) -> float:
    """Product of (1 - error rate) over all instructions; Z rotations are free."""
    rel = 1.0
    for g in instructions:
        rel *= 1.0 - gate_error(g, machine)
    return rel


def gate_counts(instructions: Iterable[Gate]) -> dict[str, int]:
    counts = {"1q": 0, "z": 0, "2q": 0, "measure": 0}
    for g in instructions:
        if g.kind is GateKind.MEASURE:
            counts["measure"] += 1
        elif g.kind.is_2q:
            counts["2q"] += 1
        elif is_z_rotation(g):
            counts["z"] += 1
        else:
            counts["1q"] += 1
    return counts


# -- emission ------------------------------------------------------------------

def _fmt(theta: float) -> str:
    return f"{theta:.12g}"


def _emit_qasm(cp: CompiledProgram) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{cp.num_qubits}];"]
    nclbits = max(cp.measured, default=-1) + 1
    if nclbits:
        lines.append(f"creg c[{nclbits}];")
    meas = iter(cp.measured)
    for g in cp.instructions:
        if g.kind is CX:
            lines.append(f"cx q[{g.qubits[0]}],q[{g.qubits[1]}];")
        elif g.kind is GateKind.MEASURE:
            lines.append(f"measure q[{g.qubits[0]}] -> c[{next(meas)}];")
        else:
            lines.append(f"{g.kind.value}({_fmt(g.angle)}) q[{g.qubits[0]}];")
    return "\n".join(lines) + "\n"


def _emit_quil(cp: CompiledProgram) -> str:
    nclbits = max(cp.measured, default=-1) + 1
    lines = [f"DECLARE ro BIT[{nclbits}]"] if nclbits else []
    meas = iter(cp.measured)
    for g in cp.instructions:
        if g.kind is CZ:
            lines.append(f"CZ {g.qubits[0]} {g.qubits[1]}")
        elif g.kind is GateKind.MEASURE:
            lines.append(f"MEASURE {g.qubits[0]} ro[{next(meas)}]")
        else:
            lines.append(f"{g.kind.value.upper()}({_fmt(g.angle)}) {g.qubits[0]}")
    return "\n".join(lines) + "\n"


def _emit_ion(cp: CompiledProgram) -> str:
    lines = []
    meas = iter(cp.measured)
    for g in cp.instructions:
        if g.kind is GateKind.MEASURE:
            lines.append(f"MEASURE {g.qubits[0]} {next(meas)}")
        else:
            qs = " ".join(map(str, g.qubits))
            lines.append(f"{g.kind.value.upper()} {_fmt(g.angle)} {qs}")
    return "\n".join(lines) + "\n"


def emit(cp: CompiledProgram, machine: Machine | None = None) -> str:
    """OpenQASM 2.0 for IBM, Quil for Rigetti, line assembly for ion traps."""
    if machine is not None and machine.gate_set is not cp.target:
        raise LoweringError("program target and machine gate set differ")
    if cp.target is GateSet.IBM:
        return _emit_qasm(cp)
    if cp.target is GateSet.RIGETTI:
        return _emit_quil(cp)
    return _emit_ion(cp)
