"""Greedy per-gate SWAP routing along the stored most-reliable paths."""
from __future__ import annotations

from dataclasses import dataclass, field

from .ir import Gate, GateKind, HIGH_LEVEL_KINDS
from .machine import Machine
from .mapper import Mapping
from .reliability import ReliabilityMatrix, best_swap_path


@dataclass(frozen=True)
class RouteDecision:
    gate: Gate              # the program-level 2Q gate
    control: int            # hardware location of the control before routing
    target: int
    path: tuple[int, ...]   # swap path; a single node means no swaps
    reliability: float

    def __str__(self) -> str:
        swaps = len(self.path) - 1
        route = "->".join(map(str, self.path))
        return (f"{self.gate}: hw ({self.control},{self.target}) path {route} "
                f"swaps {swaps} r={self.reliability:.6g}")


@dataclass(frozen=True)
class RoutedCircuit:
    gates: tuple[Gate, ...]         # over hardware qubits
    num_qubits: int                 # hardware qubit count
    initial_mapping: Mapping
    final_mapping: Mapping
    measured: tuple[int, ...] = ()  # program qubit read by each MEASURE, in order
    decisions: tuple[RouteDecision, ...] = field(default=(), compare=False)

    @property
    def swap_count(self) -> int:
        return sum(1 for g in self.gates if g.kind is GateKind.SWAP)


def apply_swap_to_mapping(mapping: Mapping, u: int, v: int) -> Mapping:
    """Exchange whatever program qubits sit on u and v (either may be empty)."""
    if u == v:
        raise ValueError("swap needs two distinct hardware qubits")
    assign = list(mapping.assign)
    for q, h in enumerate(assign):
        if h == u:
            assign[q] = v
        elif h == v:
            assign[q] = u
    return Mapping(tuple(assign))


def route(scheduled, m0: Mapping, rm: ReliabilityMatrix, machine: Machine) -> RoutedCircuit:
    """Rewrite ``scheduled`` onto hardware qubits, inserting SWAPs for
    non-adjacent 2Q gates. The control travels to the neighbour t' of the
    target; the mapping change persists for later gates."""
    if rm.num_qubits != machine.num_qubits:
        raise ValueError("reliability matrix and machine sizes differ")
    m0.check(machine.num_qubits)
    loc = list(m0.assign)                                # program -> hardware
    occupant = {h: q for q, h in enumerate(loc)}         # hardware -> program
    out: list[Gate] = []
    measured: list[int] = []
    decisions: list[RouteDecision] = []

    def swap(u: int, v: int) -> None:
        out.append(Gate(GateKind.SWAP, (u, v)))
        qu, qv = occupant.pop(u, None), occupant.pop(v, None)
        if qu is not None:
            loc[qu] = v
            occupant[v] = qu
        if qv is not None:
            loc[qv] = u
            occupant[u] = qv

    for g in scheduled:
        if g.kind in HIGH_LEVEL_KINDS:
            raise ValueError(f"{g.kind.value} must be decomposed before routing")
        if any(q >= len(loc) for q in g.qubits):
            raise ValueError(f"gate {g} uses a qubit outside the mapping")
        if g.kind.is_2q:
            c, t = g.qubits
            hc, ht = loc[c], loc[t]
            if machine.adjacent(hc, ht):
                path = (hc,)
            else:
                path, _ = best_swap_path(rm, hc, ht)
                for u, v in zip(path, path[1:]):
                    swap(u, v)
            decisions.append(RouteDecision(g, hc, ht, path, rm(hc, ht)))
            out.append(Gate(g.kind, (loc[c], loc[t]), g.angle))
        else:
            out.append(g.remap(loc))
            if g.kind is GateKind.MEASURE:
                measured.append(g.qubits[0])
    return RoutedCircuit(tuple(out), machine.num_qubits, m0, Mapping(tuple(loc)),
                         tuple(measured), tuple(decisions))
